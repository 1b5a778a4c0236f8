#pragma once

// Ordered and disordered anisotropic XY chains in a transverse field, and the
// quadratic fermionic form they map to under the Jordan-Wigner transformation.
//
//   H = sum_i (J_i/4) [(1+g) sx_i sx_{i+1} + (1-g) sy_i sy_{i+1}] - sum_i (h_i/2) sz_i
//
// maps (up to a constant) onto
//
//   H = sum_ij c_i^+ A_ij c_j + 1/2 sum_ij (c_i^+ B_ij c_j^+ + h.c.)

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace quenchxy {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class Boundary { periodic, open };

inline std::string_view to_string(Boundary b) {
  return b == Boundary::periodic ? "periodic" : "open";
}

inline Boundary boundary_from_string(std::string_view s) {
  if (s == "periodic") return Boundary::periodic;
  if (s == "open") return Boundary::open;
  throw std::invalid_argument("unknown boundary '" + std::string(s) + "'");
}

/// One realization of the chain. couplings[i] is the bond between sites i and
/// i+1; under periodic boundary the last bond wraps to site 0, under open
/// boundary it is ignored.
struct ModelSpec {
  std::size_t n_sites = 0;
  double gamma = 1.0;
  std::vector<double> couplings;
  std::vector<double> fields;
  Boundary boundary = Boundary::periodic;

  void validate() const {
    if (n_sites < 2) throw std::invalid_argument("ModelSpec: n_sites must be >= 2");
    if (couplings.size() != n_sites || fields.size() != n_sites)
      throw std::invalid_argument("ModelSpec: couplings and fields must have n_sites entries");
    if (gamma == 0.0 || !std::isfinite(gamma))
      throw std::invalid_argument("ModelSpec: gamma must be finite and nonzero");
  }

  std::size_t n_bonds() const { return boundary == Boundary::periodic ? n_sites : n_sites - 1; }
  std::size_t right_of(std::size_t i) const { return (i + 1) % n_sites; }

  static ModelSpec uniform(std::size_t n, double gamma, double coupling, double field,
                           Boundary boundary = Boundary::periodic) {
    ModelSpec spec{n, gamma, std::vector<double>(n, coupling), std::vector<double>(n, field), boundary};
    spec.validate();
    return spec;
  }
};

/// The chain parameters that stay fixed across disorder realizations.
struct ChainTemplate {
  std::size_t n_sites = 0;
  double gamma = 1.0;
  Boundary boundary = Boundary::periodic;
};

enum class DisorderTarget { coupling, field };

/// I.i.d. Gaussian disorder on either the couplings or the fields. The other
/// parameter is uniform and equal to `fixed_value`.
struct DisorderSpec {
  DisorderTarget target = DisorderTarget::coupling;
  double mean = 0.0;
  double std_dev = 0.0;
  double fixed_value = 1.0;

  void validate() const {
    if (!(std_dev >= 0.0) || !std::isfinite(std_dev))
      throw std::invalid_argument("DisorderSpec: std_dev must be finite and >= 0");
    if (!std::isfinite(mean) || !std::isfinite(fixed_value))
      throw std::invalid_argument("DisorderSpec: mean and fixed_value must be finite");
  }
};

struct QuadraticForm {
  Matrix a_matrix;  // symmetric
  Matrix b_matrix;  // antisymmetric
};

/// Builds A and B. The periodic wrap bond uses the same J/2 and g*J/2
/// prefactors as the bulk bonds (c-cyclic approximation: no parity-dependent
/// boundary sign).
inline QuadraticForm build_quadratic_form(const ModelSpec& spec) {
  spec.validate();
  const auto n = static_cast<Eigen::Index>(spec.n_sites);
  QuadraticForm qf{Matrix::Zero(n, n), Matrix::Zero(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) qf.a_matrix(i, i) = -spec.fields[i];
  for (std::size_t bond = 0; bond < spec.n_bonds(); ++bond) {
    const auto i = static_cast<Eigen::Index>(bond);
    const auto j = static_cast<Eigen::Index>(spec.right_of(bond));
    const double half_j = 0.5 * spec.couplings[bond];
    qf.a_matrix(i, j) += half_j;
    qf.a_matrix(j, i) += half_j;
    qf.b_matrix(i, j) += spec.gamma * half_j;
    qf.b_matrix(j, i) -= spec.gamma * half_j;
  }
  return qf;
}

/// Independent generator for realization `index` under `master_seed`. The
/// stream depends only on the pair, never on evaluation order.
inline std::mt19937_64 realization_stream(std::uint64_t master_seed, std::uint64_t index,
                                          std::uint64_t salt = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    static_cast<std::uint32_t>(salt), static_cast<std::uint32_t>(salt >> 32)};
  return std::mt19937_64(seq);
}

/// Draws one realization. With std_dev == 0 no random numbers are consumed and
/// every targeted site equals the mean exactly.
template <class Rng>
ModelSpec sample_disorder(const ChainTemplate& base, const DisorderSpec& dis, Rng& rng) {
  dis.validate();
  const std::size_t n = base.n_sites;
  std::vector<double> random_part(n, dis.mean);
  if (dis.std_dev > 0.0) {
    std::normal_distribution<double> gauss(dis.mean, dis.std_dev);
    for (auto& x : random_part) x = gauss(rng);
  }
  std::vector<double> fixed_part(n, dis.fixed_value);
  ModelSpec spec{n, base.gamma, {}, {}, base.boundary};
  if (dis.target == DisorderTarget::coupling) {
    spec.couplings = std::move(random_part);
    spec.fields = std::move(fixed_part);
  } else {
    spec.couplings = std::move(fixed_part);
    spec.fields = std::move(random_part);
  }
  spec.validate();
  return spec;
}

/// The disorder-free chain with the same mean parameters.
inline ModelSpec ordered_counterpart(const ChainTemplate& base, const DisorderSpec& dis) {
  const bool on_coupling = dis.target == DisorderTarget::coupling;
  return ModelSpec::uniform(base.n_sites, base.gamma, on_coupling ? dis.mean : dis.fixed_value,
                            on_coupling ? dis.fixed_value : dis.mean, base.boundary);
}

}  // namespace quenchxy
