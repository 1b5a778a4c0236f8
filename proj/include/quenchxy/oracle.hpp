#pragma once

// Exact reference for small chains: the full 2^N spin Hamiltonian, its ground
// and thermal states, and their reduced nearest-neighbour states. Site 0 is
// the most significant tensor factor; basis bit 0 means spin up (sz = +1).

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "quenchxy/solver.hpp"
#include "quenchxy/states.hpp"

namespace quenchxy::oracle {

inline constexpr std::size_t kMaxSites = 12;
inline constexpr double kDegeneracyGap = 1e-10;

struct DenseSpinSystem {
  std::size_t n_sites = 0;
  Matrix hamiltonian;  // real symmetric, 2^N x 2^N

  Eigen::Index dimension() const { return hamiltonian.rows(); }
};

namespace detail {

inline std::uint64_t site_mask(std::size_t n, std::size_t site) { return std::uint64_t{1} << (n - 1 - site); }
inline int sz_value(std::uint64_t state, std::uint64_t mask) { return (state & mask) ? -1 : 1; }

}  // namespace detail

/// H = sum_i (J_i/4)[(1+g) sx_i sx_{i+1} + (1-g) sy_i sy_{i+1}] - sum_i (h_i/2) sz_i,
/// with the wrap bond present only for periodic boundary.
inline DenseSpinSystem build_dense(const ModelSpec& spec) {
  spec.validate();
  const std::size_t n = spec.n_sites;
  if (n > kMaxSites) throw std::invalid_argument("build_dense: N = " + std::to_string(n) + " exceeds 12");
  const auto dim = static_cast<Eigen::Index>(std::uint64_t{1} << n);
  DenseSpinSystem sys{n, Matrix::Zero(dim, dim)};
  for (Eigen::Index s = 0; s < dim; ++s) {
    const auto state = static_cast<std::uint64_t>(s);
    double diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) diag -= 0.5 * spec.fields[i] * detail::sz_value(state, detail::site_mask(n, i));
    sys.hamiltonian(s, s) = diag;
    for (std::size_t bond = 0; bond < spec.n_bonds(); ++bond) {
      const std::uint64_t mi = detail::site_mask(n, bond);
      const std::uint64_t mj = detail::site_mask(n, spec.right_of(bond));
      const bool aligned = ((state & mi) != 0) == ((state & mj) != 0);
      // <flipped| (1+g) XX + (1-g) YY |s> = (1+g) - (1-g) for aligned, (1+g) + (1-g) otherwise.
      const double amp = 0.25 * spec.couplings[bond] * (aligned ? 2.0 * spec.gamma : 2.0);
      const auto flipped = static_cast<Eigen::Index>(state ^ mi ^ mj);
      sys.hamiltonian(flipped, s) += amp;
    }
  }
  return sys;
}

/// Eigen-decomposition plus Boltzmann (or degenerate-ground) weights.
struct ExactState {
  std::size_t n_sites = 0;
  Vector weights;   // one per retained eigenvector
  Matrix vectors;   // columns
};

inline ExactState exact_state(const DenseSpinSystem& sys, Temperature t) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(sys.hamiltonian);
  if (es.info() != Eigen::Success) throw NumericalError("oracle: dense eigensolver did not converge");
  const Vector& e = es.eigenvalues();
  const Eigen::Index dim = e.size();
  ExactState out{sys.n_sites, {}, {}};
  if (t.is_ground()) {
    Eigen::Index k = 1;
    while (k < dim && e(k) - e(0) < kDegeneracyGap) ++k;
    out.weights = Vector::Constant(k, 1.0 / static_cast<double>(k));
    out.vectors = es.eigenvectors().leftCols(k);
  } else {
    Vector w = (-t.beta() * (e.array() - e(0))).exp().matrix();
    out.weights = w / w.sum();
    out.vectors = es.eigenvectors();
  }
  return out;
}

inline double ground_energy(const DenseSpinSystem& sys) {
  return Eigen::SelfAdjointEigenSolver<Matrix>(sys.hamiltonian, Eigen::EigenvaluesOnly).eigenvalues()(0);
}

/// Reduced density matrix of sites (i, j), first factor i.
inline Matrix4c reduced_density_matrix(const ExactState& st, std::size_t i, std::size_t j) {
  const std::size_t n = st.n_sites;
  const std::uint64_t mi = detail::site_mask(n, i);
  const std::uint64_t mj = detail::site_mask(n, j);
  const auto dim = static_cast<std::uint64_t>(st.vectors.rows());
  Eigen::Matrix4d rho = Eigen::Matrix4d::Zero();
  auto local = [&](std::uint64_t s) { return 2 * ((s & mi) ? 1 : 0) + ((s & mj) ? 1 : 0); };
  for (Eigen::Index k = 0; k < st.vectors.cols(); ++k) {
    const auto v = st.vectors.col(k);
    for (std::uint64_t s = 0; s < dim; ++s) {
      if (s & (mi | mj)) continue;  // enumerate the environment with both sites up
      for (int a = 0; a < 4; ++a) {
        const std::uint64_t sa = s | ((a & 2) ? mi : 0) | ((a & 1) ? mj : 0);
        for (int b = 0; b < 4; ++b) {
          const std::uint64_t sb = s | ((b & 2) ? mi : 0) | ((b & 1) ? mj : 0);
          rho(local(sa), local(sb)) += st.weights(k) * v(static_cast<Eigen::Index>(sa)) * v(static_cast<Eigen::Index>(sb));
        }
      }
    }
  }
  return rho.cast<std::complex<double>>();
}

/// Reduced state of sites (i, i+1 mod N) for the given temperature.
inline TwoSiteState exact_two_site(const ModelSpec& spec, Temperature t, std::size_t i) {
  const auto sys = build_dense(spec);
  const auto st = exact_state(sys, t);
  if (i >= spec.n_sites) throw std::out_of_range("exact_two_site: site index out of range");
  return extract_fields(reduced_density_matrix(st, i, spec.right_of(i)));
}

namespace detail {

// Applies c_i^+ + c_i (kind 'A') or c_i^+ - c_i (kind 'B') with the
// Jordan-Wigner string prod_{j<i} (-sz_j); occupied means spin up.
inline Vector apply_majorana(const Vector& v, std::size_t n, std::size_t site, char kind) {
  Vector out = Vector::Zero(v.size());
  const std::uint64_t m = site_mask(n, site);
  for (Eigen::Index s = 0; s < v.size(); ++s) {
    const auto state = static_cast<std::uint64_t>(s);
    double string = 1.0;
    for (std::size_t j = 0; j < site; ++j) string *= -sz_value(state, site_mask(n, j));
    const bool up = (state & m) == 0;
    // c^+ = |up><down| and c = |down><up| on this site.
    const double coeff = (kind == 'A' || !up) ? 1.0 : -1.0;
    out(static_cast<Eigen::Index>(state ^ m)) += coeff * string * v(s);
  }
  return out;
}

}  // namespace detail

/// Exact G_ij = <B_i A_j> for the given temperature.
inline Matrix exact_correlation_matrix(const ModelSpec& spec, Temperature t) {
  const auto st = exact_state(build_dense(spec), t);
  const std::size_t n = spec.n_sites;
  Matrix g = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Eigen::Index k = 0; k < st.vectors.cols(); ++k) {
    const Vector v = st.vectors.col(k);
    for (std::size_t j = 0; j < n; ++j) {
      const Vector aj = detail::apply_majorana(v, n, j, 'A');
      for (std::size_t i = 0; i < n; ++i) {
        // <v| B_i A_j |v> = -(B_i v) . (A_j v) since B_i^T = -B_i.
        const Vector bi = detail::apply_majorana(v, n, i, 'B');
        g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) -= st.weights(k) * bi.dot(aj);
      }
    }
  }
  return g;
}

}  // namespace quenchxy::oracle
