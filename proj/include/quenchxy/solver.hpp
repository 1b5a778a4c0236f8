#pragma once

// Bogoliubov diagonalization of the quadratic form and the fermionic
// correlation matrix G_ij = <B_i A_j>, with A_i = c_i^+ + c_i and
// B_i = c_i^+ - c_i.

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/SVD>

#include "quenchxy/model.hpp"

namespace quenchxy {

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rows of phi and psi are the mode vectors phi_k, psi_k; energies ascend.
/// (A+B) phi_k^T = L_k psi_k^T and (A-B) psi_k^T = L_k phi_k^T.
struct FermionSpectrum {
  Vector energies;
  Matrix phi;
  Matrix psi;

  Eigen::Index size() const { return energies.size(); }
};

/// Inverse temperature. `ground()` and an infinite beta are the same thing.
class Temperature {
 public:
  static Temperature ground() { return Temperature(std::numeric_limits<double>::infinity()); }
  static Temperature inverse(double beta) {
    if (!(beta >= 0.0)) throw std::invalid_argument("Temperature: beta must be >= 0");
    return Temperature(beta);
  }

  bool is_ground() const { return std::isinf(beta_); }
  double beta() const { return beta_; }

  friend bool operator==(const Temperature&, const Temperature&) = default;

 private:
  explicit Temperature(double beta) : beta_(beta) {}
  double beta_;
};

struct CorrelationMatrix {
  Matrix g;
  Temperature regime = Temperature::ground();

  Eigen::Index size() const { return g.rows(); }
};

namespace detail {

// Energies at or below this are exact zero modes. Matches the ground-level
// degeneracy threshold of the dense oracle.
inline double zero_mode_threshold(const Vector& energies) {
  const double scale = energies.size() ? std::max(1.0, energies.maxCoeff()) : 1.0;
  return 1e-10 * scale;
}

inline void fix_zero_mode_sign(Eigen::Ref<Vector> phi_row, Eigen::Ref<Vector> psi_row) {
  for (Eigen::Index i = 0; i < psi_row.size(); ++i) {
    if (std::abs(psi_row(i)) > 1e-12) {
      if (psi_row(i) < 0) psi_row = -psi_row;
      break;
    }
  }
  for (Eigen::Index i = 0; i < phi_row.size(); ++i) {
    if (std::abs(phi_row(i)) > 1e-12) {
      if (phi_row(i) < 0) phi_row = -phi_row;
      break;
    }
  }
}

}  // namespace detail

/// Diagonalizes via the singular value decomposition A+B = U S V^T, which gives
/// phi_k = V e_k, psi_k = U e_k and L_k = S_kk directly. This is the same
/// eigenproblem as (A-B)(A+B) phi_k = L_k^2 phi_k, solved without squaring, so
/// near-zero modes keep full precision and degenerate clusters come out
/// orthonormal.
inline FermionSpectrum diagonalize(const QuadraticForm& qf) {
  const Matrix sum = qf.a_matrix + qf.b_matrix;
  Eigen::BDCSVD<Matrix> svd(sum, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.info() != Eigen::Success) throw NumericalError("diagonalize: SVD did not converge");

  const Eigen::Index n = sum.rows();
  const Vector& s = svd.singularValues();
  // BDCSVD returns descending singular values; store ascending.
  FermionSpectrum out{Vector(n), Matrix(n, n), Matrix(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = n - 1 - k;
    out.energies(k) = s(src);
    out.phi.row(k) = svd.matrixV().col(src).transpose();
    out.psi.row(k) = svd.matrixU().col(src).transpose();
  }
  if (!out.energies.allFinite()) throw NumericalError("diagonalize: non-finite mode energies");

  const double zero = detail::zero_mode_threshold(out.energies);
  for (Eigen::Index k = 0; k < n && out.energies(k) <= zero; ++k) {
    Vector phi_row = out.phi.row(k).transpose();
    Vector psi_row = out.psi.row(k).transpose();
    detail::fix_zero_mode_sign(phi_row, psi_row);
    out.phi.row(k) = phi_row.transpose();
    out.psi.row(k) = psi_row.transpose();
  }
  return out;
}

/// Thermal occupation factor tanh(beta L / 2), saturated for large arguments.
inline double thermal_weight(double beta, double energy) {
  if (std::isinf(beta)) return energy > 0 ? 1.0 : 0.0;
  const double x = 0.5 * beta * energy;
  if (x > 20.0) return 1.0;
  return std::tanh(x);
}

namespace detail {

inline Matrix weighted_correlation(const FermionSpectrum& spec, const Vector& weights) {
  // G = -psi^T diag(w) phi
  return -(spec.psi.transpose() * weights.asDiagonal() * spec.phi);
}

}  // namespace detail

/// Ground-state correlation matrix. Exact zero modes get weight 0, i.e. the
/// degenerate ground manifold is mixed uniformly; this is the beta -> infinity
/// limit of the thermal matrix and makes G independent of zero-mode signs.
inline CorrelationMatrix correlation_matrix_ground(const FermionSpectrum& spec) {
  const double zero = detail::zero_mode_threshold(spec.energies);
  Vector w(spec.size());
  for (Eigen::Index k = 0; k < spec.size(); ++k) w(k) = spec.energies(k) > zero ? 1.0 : 0.0;
  return {detail::weighted_correlation(spec, w), Temperature::ground()};
}

inline CorrelationMatrix correlation_matrix_thermal(const FermionSpectrum& spec, double beta) {
  if (!(beta >= 0.0)) throw std::invalid_argument("correlation_matrix_thermal: beta must be >= 0");
  if (std::isinf(beta)) return correlation_matrix_ground(spec);
  Vector w(spec.size());
  for (Eigen::Index k = 0; k < spec.size(); ++k) w(k) = thermal_weight(beta, spec.energies(k));
  return {detail::weighted_correlation(spec, w), Temperature::inverse(beta)};
}

inline CorrelationMatrix correlation_matrix(const FermionSpectrum& spec, Temperature t) {
  return t.is_ground() ? correlation_matrix_ground(spec) : correlation_matrix_thermal(spec, t.beta());
}

/// Convenience: spec -> G in one call.
inline CorrelationMatrix correlation_matrix(const ModelSpec& model, Temperature t) {
  return correlation_matrix(diagonalize(build_quadratic_form(model)), t);
}

/// Ground-state energy of the quadratic form, -sum_k L_k / 2.
inline double ground_energy(const FermionSpectrum& spec) { return -0.5 * spec.energies.sum(); }

}  // namespace quenchxy
