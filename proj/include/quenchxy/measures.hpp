#pragma once

// Bipartite correlation measures on two-qubit density matrices. Subsystem A is
// the first tensor factor (site i), B the second (site i+1). Discord and
// work-deficit measure B with rank-one projectors.
//
// Units: entanglement in ebits, information quantities in bits (log base 2).

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "quenchxy/states.hpp"

namespace quenchxy {

using Complex = std::complex<double>;

class MeasureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Projective measurement {|v><v|, |v'><v'|} with
/// v = (cos(theta/2), e^{i phi} sin(theta/2)) and v' orthogonal to it.
struct MeasurementBasis {
  double theta = 0.0;
  double phi_angle = 0.0;

  std::array<Eigen::Vector2cd, 2> vectors() const {
    const double c = std::cos(0.5 * theta);
    const double s = std::sin(0.5 * theta);
    const Complex e = std::polar(1.0, phi_angle);
    Eigen::Vector2cd v0(c, e * s);
    Eigen::Vector2cd v1(-std::conj(e) * s, c);
    return {v0, v1};
  }

  std::array<Matrix2c, 2> projectors() const {
    const auto v = vectors();
    return {v[0] * v[0].adjoint(), v[1] * v[1].adjoint()};
  }

  /// Same measurement with theta in [0, pi] and phi in [0, 2 pi).
  MeasurementBasis canonical() const {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double t = std::fmod(theta, two_pi);
    if (t < 0) t += two_pi;
    double p = phi_angle;
    if (t > std::numbers::pi) {
      t = two_pi - t;
      p += std::numbers::pi;
    }
    p = std::fmod(p, two_pi);
    if (p < 0) p += two_pi;
    return {t, p};
  }
};

struct MeasureResult {
  double value = 0.0;
  std::optional<MeasurementBasis> optimizer;
  int iterations = 0;
};

/// Raised when the local refinement fails to converge; carries the best value.
class OptimizerError : public MeasureError {
 public:
  OptimizerError(const std::string& what, double best) : MeasureError(what), best_value(best) {}
  double best_value;
};

// --------------------------------------------------------------------------
// entropies and partial traces

inline double shannon_term(double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; }

/// Von Neumann entropy in bits of a Hermitian, unit-trace, PSD matrix.
/// Eigenvalues in [-1e-9, 0) are clamped to zero before renormalizing.
template <class Derived>
double von_neumann_entropy(const Eigen::MatrixBase<Derived>& rho) {
  using Mat = Eigen::Matrix<typename Derived::Scalar, Derived::RowsAtCompileTime, Derived::ColsAtCompileTime>;
  Eigen::SelfAdjointEigenSolver<Mat> es(rho.eval(), Eigen::EigenvaluesOnly);
  auto ev = es.eigenvalues().eval();
  if (ev.minCoeff() < -kPsdTolerance)
    throw MeasureError("von_neumann_entropy: eigenvalue " + std::to_string(ev.minCoeff()) + " below tolerance");
  ev = ev.cwiseMax(0.0);
  const double total = ev.sum();
  double s = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) s += shannon_term(ev(i) / total);
  return s;
}

/// Entropy of m / Tr(m) for a 2x2 Hermitian PSD m. Zero-trace input gives 0.
inline double qubit_entropy(const Matrix2c& m) {
  const double a = m(0, 0).real();
  const double d = m(1, 1).real();
  const double t = a + d;
  if (t <= 0.0) return 0.0;
  const double r = std::sqrt(0.25 * (a - d) * (a - d) + std::norm(m(0, 1)));
  const double lo = std::max(0.0, (0.5 * t - r) / t);
  const double hi = std::max(0.0, (0.5 * t + r) / t);
  return shannon_term(lo) + shannon_term(hi);
}

/// rho_A = Tr_B rho.
inline Matrix2c trace_out_second(const Matrix4c& rho) {
  Matrix2c out;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) out(a, b) = rho(2 * a, 2 * b) + rho(2 * a + 1, 2 * b + 1);
  return out;
}

/// rho_B = Tr_A rho.
inline Matrix2c trace_out_first(const Matrix4c& rho) {
  Matrix2c out;
  for (int c = 0; c < 2; ++c)
    for (int d = 0; d < 2; ++d) out(c, d) = rho(c, d) + rho(2 + c, 2 + d);
  return out;
}

inline Matrix4c partial_transpose_first(const Matrix4c& rho) {
  Matrix4c out;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d) out(2 * a + c, 2 * b + d) = rho(2 * b + c, 2 * a + d);
  return out;
}

/// Rejects anything that is not a two-qubit density matrix within tolerance.
inline void validate_two_qubit(const Matrix4c& rho) {
  if (!rho.allFinite()) throw MeasureError("density matrix has non-finite entries");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10) throw MeasureError("density matrix is not Hermitian");
  if (std::abs(rho.trace() - 1.0) > 1e-9) throw MeasureError("density matrix does not have unit trace");
  const double min_eig =
      Eigen::SelfAdjointEigenSolver<Matrix4c>(rho, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
  if (min_eig < -kPsdTolerance) throw MeasureError("density matrix is not positive semidefinite");
}

// --------------------------------------------------------------------------
// entanglement

inline Matrix4c spin_flip(const Matrix4c& rho) {
  const Matrix4c yy = pauli::kron(pauli::y(), pauli::y());
  return yy * rho.conjugate() * yy;
}

/// Wootters concurrence. The eigenvalues of rho * rho~ are obtained as those of
/// the Hermitian sqrt(rho) rho~ sqrt(rho), which are identical.
inline double concurrence(const Matrix4c& rho) {
  validate_two_qubit(rho);
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(rho);
  const Eigen::Vector4d w = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Matrix4c root = es.eigenvectors() * w.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
  const Matrix4c r = root * spin_flip(rho) * root;
  Eigen::Vector4d e = Eigen::SelfAdjointEigenSolver<Matrix4c>(0.5 * (r + r.adjoint()), Eigen::EigenvaluesOnly)
                          .eigenvalues();
  std::array<double, 4> roots{};
  for (int i = 0; i < 4; ++i) {
    if (e(i) < -kPsdTolerance) throw MeasureError("concurrence: negative eigenvalue of rho*rho~");
    roots[static_cast<std::size_t>(i)] = std::sqrt(std::max(0.0, e(i)));
  }
  std::sort(roots.begin(), roots.end(), std::greater<>());
  return std::max(0.0, roots[0] - roots[1] - roots[2] - roots[3]);
}

/// Trace norm of the partial transpose on A.
inline double partial_transpose_trace_norm(const Matrix4c& rho) {
  const Eigen::Vector4d e =
      Eigen::SelfAdjointEigenSolver<Matrix4c>(partial_transpose_first(rho), Eigen::EigenvaluesOnly).eigenvalues();
  return e.cwiseAbs().sum();
}

inline double negativity(const Matrix4c& rho) {
  validate_two_qubit(rho);
  return std::max(0.0, 0.5 * (partial_transpose_trace_norm(rho) - 1.0));
}

inline double log_negativity(const Matrix4c& rho) {
  return std::log2(2.0 * negativity(rho) + 1.0);
}

// --------------------------------------------------------------------------
// information-theoretic quantities

inline double mutual_information(const Matrix4c& rho) {
  validate_two_qubit(rho);
  const double value = von_neumann_entropy(trace_out_second(rho)) + von_neumann_entropy(trace_out_first(rho)) -
                       von_neumann_entropy(rho);
  return std::max(0.0, value);
}

/// Post-measurement ensemble on A after measuring B in `basis`.
struct ConditionalEnsemble {
  std::array<double, 2> probabilities{};
  std::array<Matrix2c, 2> unnormalized;  // p_i rho_{A|i}

  /// sum_i p_i S(rho_{A|i})
  double conditional_entropy() const {
    return probabilities[0] * qubit_entropy(unnormalized[0]) + probabilities[1] * qubit_entropy(unnormalized[1]);
  }

  /// S of the dephased state sum_i (I x B_i) rho (I x B_i) = H(p) + sum_i p_i S(rho_{A|i}).
  double dephased_entropy() const {
    return shannon_term(probabilities[0]) + shannon_term(probabilities[1]) + conditional_entropy();
  }
};

/// <v|_B rho |v>_B for both basis vectors.
inline ConditionalEnsemble measure_second(const Matrix4c& rho, const MeasurementBasis& basis) {
  ConditionalEnsemble out;
  const auto vs = basis.vectors();
  for (std::size_t i = 0; i < 2; ++i) {
    const Eigen::Vector2cd& v = vs[i];
    Matrix2c m;
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        Complex acc = 0.0;
        for (int c = 0; c < 2; ++c)
          for (int d = 0; d < 2; ++d) acc += std::conj(v(c)) * rho(2 * a + c, 2 * b + d) * v(d);
        m(a, b) = acc;
      }
    }
    out.unnormalized[i] = m;
    out.probabilities[i] = std::max(0.0, m.trace().real());
  }
  return out;
}

struct OptimizerSettings {
  int grid_theta = 37;
  int grid_phi = 73;
  double value_tolerance = 1e-7;
  double size_tolerance = 1e-5;
  double initial_step = std::numbers::pi / 36.0;
  int max_iterations = 2000;
};

namespace detail {

struct SimplexResult {
  std::array<double, 2> x{};
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Nelder-Mead in two dimensions with standard coefficients. Stops when the
// spread of vertex values is at most `value_tolerance` and the simplex is
// smaller than `size_tolerance`, or when every vertex value agrees exactly.
template <class F>
SimplexResult nelder_mead_2d(F&& f, std::array<double, 2> start, double step, double value_tolerance,
                             double size_tolerance, int max_iterations) {
  using Point = std::array<double, 2>;
  std::array<Point, 3> p{start, Point{start[0] + step, start[1]}, Point{start[0], start[1] + step}};
  std::array<double, 3> v{f(p[0]), f(p[1]), f(p[2])};
  auto combine = [](const Point& a, const Point& b, double t) {
    return Point{a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])};
  };
  SimplexResult out;
  for (out.iterations = 0; out.iterations < max_iterations; ++out.iterations) {
    std::array<int, 3> idx{0, 1, 2};
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return v[a] < v[b]; });
    const Point best = p[idx[0]], mid = p[idx[1]], worst = p[idx[2]];
    const double fb = v[idx[0]], fm = v[idx[1]], fw = v[idx[2]];
    p = {best, mid, worst};
    v = {fb, fm, fw};

    double size = 0.0;
    for (int k = 1; k < 3; ++k) size = std::max(size, std::hypot(p[k][0] - best[0], p[k][1] - best[1]));
    if (fw - fb <= value_tolerance && (size <= size_tolerance || fw == fb)) {
      out.converged = true;
      break;
    }

    const Point centroid{0.5 * (best[0] + mid[0]), 0.5 * (best[1] + mid[1])};
    const Point reflected = combine(centroid, worst, -1.0);
    const double fr = f(reflected);
    if (fr < fb) {
      const Point expanded = combine(centroid, worst, -2.0);
      const double fe = f(expanded);
      if (fe < fr) {
        p[2] = expanded, v[2] = fe;
      } else {
        p[2] = reflected, v[2] = fr;
      }
    } else if (fr < fm) {
      p[2] = reflected, v[2] = fr;
    } else {
      const bool outside = fr < fw;
      const Point contracted = combine(centroid, outside ? reflected : worst, 0.5);
      const double fc = f(contracted);
      if (fc < (outside ? fr : fw)) {
        p[2] = contracted, v[2] = fc;
      } else {
        for (int k = 1; k < 3; ++k) {
          p[k] = combine(best, p[k], 0.5);
          v[k] = f(p[k]);
        }
      }
    }
  }
  const auto lo = std::min_element(v.begin(), v.end()) - v.begin();
  out.x = p[lo];
  out.value = v[lo];
  return out;
}

}  // namespace detail

/// Minimizes `objective(MeasurementBasis)` over the Bloch sphere: coarse
/// theta x phi grid, then downhill simplex from the best grid point.
template <class Objective>
MeasureResult minimize_over_bases(Objective&& objective, const OptimizerSettings& opt = {}) {
  MeasurementBasis best{0.0, 0.0};
  double best_value = std::numeric_limits<double>::infinity();
  for (int i = 0; i < opt.grid_theta; ++i) {
    const double theta = std::numbers::pi * i / (opt.grid_theta - 1);
    for (int j = 0; j < opt.grid_phi; ++j) {
      const MeasurementBasis b{theta, 2.0 * std::numbers::pi * j / (opt.grid_phi - 1)};
      const double v = objective(b);
      if (v < best_value) {
        best_value = v;
        best = b;
      }
    }
  }

  const auto refined = detail::nelder_mead_2d(
      [&](const std::array<double, 2>& x) { return objective(MeasurementBasis{x[0], x[1]}); },
      {best.theta, best.phi_angle}, opt.initial_step, opt.value_tolerance, opt.size_tolerance, opt.max_iterations);
  if (!refined.converged)
    throw OptimizerError("measurement optimizer did not converge", std::min(best_value, refined.value));

  MeasureResult out;
  out.iterations = refined.iterations;
  if (refined.value <= best_value) {
    out.value = refined.value;
    out.optimizer = MeasurementBasis{refined.x[0], refined.x[1]}.canonical();
  } else {
    out.value = best_value;
    out.optimizer = best.canonical();
  }
  return out;
}

/// J(rho) = S(rho_A) - min_B sum_i p_i S(rho_{A|i}).
inline MeasureResult classical_correlation(const Matrix4c& rho, const OptimizerSettings& opt = {}) {
  validate_two_qubit(rho);
  MeasureResult r = minimize_over_bases(
      [&rho](const MeasurementBasis& b) { return measure_second(rho, b).conditional_entropy(); }, opt);
  r.value = std::max(0.0, von_neumann_entropy(trace_out_second(rho)) - r.value);
  return r;
}

namespace detail {

inline double clamp_small_negative(double v, const char* what) {
  if (v < -1e-6) throw MeasureError(std::string(what) + ": negative value " + std::to_string(v));
  return std::max(0.0, v);
}

}  // namespace detail

/// D(rho) = I(rho) - J(rho).
inline MeasureResult quantum_discord(const Matrix4c& rho, const OptimizerSettings& opt = {}) {
  MeasureResult j = classical_correlation(rho, opt);
  j.value = detail::clamp_small_negative(mutual_information(rho) - j.value, "quantum_discord");
  return j;
}

/// W(rho) = min_B S(sum_i (I x B_i) rho (I x B_i)) - S(rho), i.e. I_G - I_L.
inline MeasureResult work_deficit(const Matrix4c& rho, const OptimizerSettings& opt = {}) {
  validate_two_qubit(rho);
  MeasureResult r = minimize_over_bases(
      [&rho](const MeasurementBasis& b) { return measure_second(rho, b).dephased_entropy(); }, opt);
  r.value = detail::clamp_small_negative(r.value - von_neumann_entropy(rho), "work_deficit");
  return r;
}

}  // namespace quenchxy
