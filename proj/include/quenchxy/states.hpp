#pragma once

// Single- and two-site reduced states of the chain, read off the correlation
// matrix G_ij = <B_i A_j> by Wick's theorem. m^x = m^y = 0 and all
// off-diagonal two-site correlators vanish, so a nearest-neighbour state is
// fixed by five numbers.

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "quenchxy/solver.hpp"

namespace quenchxy {

using Matrix4c = Eigen::Matrix4cd;
using Matrix2c = Eigen::Matrix2cd;

struct TwoSiteState {
  double mz_left = 0.0;
  double mz_right = 0.0;
  double txx = 0.0;
  double tyy = 0.0;
  double tzz = 0.0;
};

class StateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace pauli {

inline Matrix2c identity() { return Matrix2c::Identity(); }
inline Matrix2c x() {
  Matrix2c m;
  m << 0, 1, 1, 0;
  return m;
}
inline Matrix2c y() {
  using namespace std::complex_literals;
  Matrix2c m;
  m << 0, -1i, 1i, 0;
  return m;
}
inline Matrix2c z() {
  Matrix2c m;
  m << 1, 0, 0, -1;
  return m;
}

inline Matrix4c kron(const Matrix2c& a, const Matrix2c& b) {
  Matrix4c out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

}  // namespace pauli

namespace detail {

inline std::size_t checked_site(const CorrelationMatrix& g, std::size_t i) {
  if (i >= static_cast<std::size_t>(g.size()))
    throw std::out_of_range("site index " + std::to_string(i) + " out of range for N=" + std::to_string(g.size()));
  return i;
}

}  // namespace detail

/// <sigma^z_i> = <B_i A_i> = G_ii. Sites are zero-based.
inline double magnetization(const CorrelationMatrix& g, std::size_t i) {
  detail::checked_site(g, i);
  const auto k = static_cast<Eigen::Index>(i);
  return g.g(k, k);
}

/// Nearest-neighbour state of sites (i, i+1 mod N). For an open chain the
/// caller must not ask for the wrap bond i = N-1; it is not a bond.
///   T^xx = <B_i A_j>     = G_ij
///   T^yy = -<A_i B_j>    = G_ji
///   T^zz = <A_i B_i A_j B_j> = G_ii G_jj - G_ij G_ji
inline TwoSiteState two_site_state(const CorrelationMatrix& g, std::size_t i) {
  detail::checked_site(g, i);
  const auto a = static_cast<Eigen::Index>(i);
  const auto b = static_cast<Eigen::Index>((i + 1) % static_cast<std::size_t>(g.size()));
  const Matrix& m = g.g;
  return {m(a, a), m(b, b), m(a, b), m(b, a), m(a, a) * m(b, b) - m(a, b) * m(b, a)};
}

/// Eigenvalue floor for the PSD check.
inline constexpr double kPsdTolerance = 1e-9;

inline Matrix4c realize_density_matrix_unchecked(const TwoSiteState& s) {
  using namespace pauli;
  const Matrix2c id = identity();
  Matrix4c rho = kron(id, id) + s.mz_left * kron(z(), id) + s.mz_right * kron(id, z()) +
                 s.txx * kron(x(), x()) + s.tyy * kron(y(), y()) + s.tzz * kron(z(), z());
  return 0.25 * rho;
}

/// rho = 1/4 [I + m_l Z.I + m_r I.Z + sum_a t_aa S_a.S_a]. Throws if the
/// result has an eigenvalue below -kPsdTolerance; the matrix is never clipped.
inline Matrix4c realize_density_matrix(const TwoSiteState& s) {
  Matrix4c rho = realize_density_matrix_unchecked(s);
  const double min_eig = Eigen::SelfAdjointEigenSolver<Matrix4c>(rho, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
  if (min_eig < -kPsdTolerance)
    throw StateError("two-site state is not positive semidefinite (min eigenvalue " + std::to_string(min_eig) + ")");
  return rho;
}

/// Inverse of realize_density_matrix for states of the same form.
inline TwoSiteState extract_fields(const Matrix4c& rho) {
  using namespace pauli;
  const Matrix2c id = identity();
  auto expect = [&](const Matrix4c& op) { return (rho * op).trace().real(); };
  return {expect(kron(z(), id)), expect(kron(id, z())), expect(kron(x(), x())), expect(kron(y(), y())),
          expect(kron(z(), z()))};
}

inline Matrix2c single_site_density_matrix(double mz) {
  return 0.5 * (pauli::identity() + mz * pauli::z());
}

}  // namespace quenchxy
