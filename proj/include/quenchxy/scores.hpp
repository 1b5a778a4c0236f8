#pragma once

// Enhancement scores: how much larger an observable is, in magnitude, in the
// quenched-disordered chain than in the ordered chain with the same mean
// parameters.
//
//   delta       = |Q_av(control, beta)| - |Q_ordered(control, beta)|
//   total delta = delta(beta) - max(0, delta(ground))
//
// Spin glass: couplings J_i ~ N(lambda, sigma), field h = 1, control lambda = <J>/h.
// Random field: fields h_i ~ N(mu, sigma), coupling J = 1, control mu = <h>/J.
// In both cases beta_scaled is beta times the fixed energy scale.

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "quenchxy/ensemble.hpp"

namespace quenchxy {

enum class ModelKind { spin_glass, random_field };

inline std::string_view to_string(ModelKind k) { return k == ModelKind::spin_glass ? "spin_glass" : "random_field"; }

inline ModelKind model_kind_from_string(std::string_view s) {
  if (s == "spin_glass") return ModelKind::spin_glass;
  if (s == "random_field") return ModelKind::random_field;
  throw std::invalid_argument("unknown model_kind '" + std::string(s) + "'");
}

struct ScoreSetup {
  ModelKind kind = ModelKind::spin_glass;
  std::size_t n_sites = 20;
  double gamma = 0.4;
  double sigma_d = 0.3;
  Boundary boundary = Boundary::periodic;
  RealizationPlan plan;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  OptimizerSettings optimizer;

  ChainTemplate chain() const { return {n_sites, gamma, boundary}; }
};

inline DisorderSpec disorder_for(ModelKind kind, double control, double sigma_d) {
  return {kind == ModelKind::spin_glass ? DisorderTarget::coupling : DisorderTarget::field, control, sigma_d, 1.0};
}

inline Temperature temperature_for(double beta_scaled) {
  return std::isinf(beta_scaled) ? Temperature::ground() : Temperature::inverse(beta_scaled);
}

/// Seed of the ensemble at one control value. It depends on the control value
/// itself, so every temperature at that control shares its realizations and a
/// point's result does not depend on the rest of the grid.
inline std::uint64_t point_seed(std::uint64_t master_seed, double control) {
  constexpr std::uint64_t kPointSalt = 0x9017c0de;
  auto stream = realization_stream(master_seed, std::bit_cast<std::uint64_t>(control), kPointSalt);
  return stream();
}

struct ScorePoint {
  double control = 0.0;
  double beta_scaled = std::numeric_limits<double>::infinity();
  Observable observable = Observable::concurrence;
  double quenched_mean = 0.0;
  double quenched_std_error = 0.0;
  double ordered_value = 0.0;
  double delta = 0.0;
  double delta_std_error = 0.0;
  std::size_t n_realizations = 0;
};

struct TotalScorePoint {
  ScorePoint thermal;
  double zero_t_delta = 0.0;
  double zero_t_std_error = 0.0;
  double total = 0.0;
  double total_std_error = 0.0;
};

/// One row of a sweep. `total` is set for finite temperatures when totals were
/// requested; `error` is nonempty if the point failed.
struct SweepRecord {
  ScorePoint point;
  std::optional<double> total;
  std::optional<double> total_std_error;
  std::string error;
};

namespace detail {

inline double sign_of(double x) { return x < 0.0 ? -1.0 : 1.0; }

inline ScorePoint make_point(double control, double beta_scaled, Observable obs, const QuenchedEstimate& q,
                             double ordered) {
  return {control,
          beta_scaled,
          obs,
          q.mean,
          q.std_error,
          ordered,
          std::abs(q.mean) - std::abs(ordered),
          q.std_error,
          q.n_realizations};
}

// Standard error of |m_b| - |m_0| from paired per-realization samples.
inline double paired_std_error(const QuenchedEstimate& thermal, const QuenchedEstimate& ground) {
  const double sb = sign_of(thermal.mean);
  const double s0 = sign_of(ground.mean);
  std::vector<double> d(thermal.samples.size());
  for (std::size_t r = 0; r < d.size(); ++r) d[r] = sb * thermal.samples[r] - s0 * ground.samples[r];
  return summarize(std::move(d), thermal.n_sites_averaged).std_error;
}

}  // namespace detail

/// Records for one control value, ordered (beta, observable).
inline std::vector<SweepRecord> score_control(const ScoreSetup& setup, double control,
                                              std::span<const double> betas_scaled,
                                              std::span<const Observable> observables, bool with_totals) {
  std::vector<Temperature> temps;
  for (double b : betas_scaled) temps.push_back(temperature_for(b));
  std::size_t ground_slot = temps.size();
  for (std::size_t t = 0; t < temps.size(); ++t)
    if (temps[t].is_ground()) ground_slot = t;
  const bool need_ground = with_totals && ground_slot == temps.size();
  if (need_ground) temps.push_back(Temperature::ground());

  const DisorderSpec dis = disorder_for(setup.kind, control, setup.sigma_d);
  EnsembleRequest req{setup.chain(), dis, temps,
                      std::vector<Observable>(observables.begin(), observables.end()),
                      setup.plan, point_seed(setup.seed, control), setup.jobs, setup.optimizer};
  const EnsembleResult q = quenched_averages(req);
  const auto ordered =
      realization_site_averages(ordered_counterpart(setup.chain(), dis), temps, observables, setup.optimizer);

  std::vector<SweepRecord> out;
  for (std::size_t t = 0; t < betas_scaled.size(); ++t) {
    for (std::size_t o = 0; o < observables.size(); ++o) {
      SweepRecord rec;
      rec.point = detail::make_point(control, betas_scaled[t], observables[o], q.estimates[t][o], ordered[t][o]);
      if (with_totals && !temps[t].is_ground()) {
        const QuenchedEstimate& g = q.estimates[ground_slot][o];
        const double zero_delta = std::abs(g.mean) - std::abs(ordered[ground_slot][o]);
        if (zero_delta > 0.0) {
          rec.total = rec.point.delta - zero_delta;
          rec.total_std_error = detail::paired_std_error(q.estimates[t][o], g);
        } else {
          rec.total = rec.point.delta;
          rec.total_std_error = rec.point.delta_std_error;
        }
      }
      out.push_back(std::move(rec));
    }
  }
  return out;
}

/// Delta for one (control, beta_scaled, observable); beta_scaled = +inf is the
/// ground state.
inline ScorePoint enhancement_score(const ScoreSetup& setup, double control, double beta_scaled, Observable obs) {
  const std::array<double, 1> b{beta_scaled};
  const std::array<Observable, 1> o{obs};
  return score_control(setup, control, b, o, false).front().point;
}

/// Thermal score and zero-temperature score on shared realizations, and
/// total = thermal - max(0, zero_t).
inline TotalScorePoint total_enhancement_score(const ScoreSetup& setup, double control, double beta_scaled,
                                               Observable obs) {
  if (std::isinf(beta_scaled)) throw std::invalid_argument("total_enhancement_score: beta_scaled must be finite");
  const std::array<double, 2> b{beta_scaled, std::numeric_limits<double>::infinity()};
  const std::array<Observable, 1> o{obs};
  const auto recs = score_control(setup, control, b, o, true);
  TotalScorePoint out;
  out.thermal = recs[0].point;
  out.zero_t_delta = recs[1].point.delta;
  out.zero_t_std_error = recs[1].point.delta_std_error;
  out.total = *recs[0].total;
  out.total_std_error = *recs[0].total_std_error;
  return out;
}

/// Dense table, control outer, beta inner, observable innermost. A failing
/// control value yields records carrying the error; the sweep continues.
inline std::vector<SweepRecord> sweep(const ScoreSetup& setup, std::span<const double> controls,
                                      std::span<const double> betas_scaled, std::span<const Observable> observables,
                                      bool with_totals) {
  if (controls.empty() || betas_scaled.empty() || observables.empty())
    throw std::invalid_argument("sweep: grids and observable list must be nonempty");
  std::vector<SweepRecord> out;
  out.reserve(controls.size() * betas_scaled.size() * observables.size());
  for (double c : controls) {
    try {
      auto recs = score_control(setup, c, betas_scaled, observables, with_totals);
      out.insert(out.end(), std::make_move_iterator(recs.begin()), std::make_move_iterator(recs.end()));
    } catch (const std::exception& e) {
      for (double b : betas_scaled) {
        for (Observable o : observables) {
          SweepRecord rec;
          rec.point.control = c;
          rec.point.beta_scaled = b;
          rec.point.observable = o;
          rec.error = e.what();
          out.push_back(std::move(rec));
        }
      }
    }
  }
  return out;
}

/// Statistically positive: delta beyond two standard errors.
inline bool significantly_positive(double value, double std_error) { return value > 2.0 * std_error; }

}  // namespace quenchxy
