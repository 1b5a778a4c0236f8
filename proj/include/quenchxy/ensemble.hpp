#pragma once

// Quenched disorder averaging: per-realization site averages of nearest-
// neighbour observables, averaged over independent Gaussian realizations.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "quenchxy/measures.hpp"
#include "quenchxy/model.hpp"
#include "quenchxy/parallel.hpp"
#include "quenchxy/solver.hpp"
#include "quenchxy/states.hpp"

namespace quenchxy {

enum class Observable {
  magnetization,
  txx_raw,
  tyy_raw,
  tzz_raw,
  tzz_connected,
  concurrence,
  log_negativity,
  discord,
  work_deficit,
  classical_correlation,
  mutual_information,
};

inline constexpr std::array<std::pair<Observable, std::string_view>, 11> kObservableNames{{
    {Observable::magnetization, "magnetization"},
    {Observable::txx_raw, "txx_raw"},
    {Observable::tyy_raw, "tyy_raw"},
    {Observable::tzz_raw, "tzz_raw"},
    {Observable::tzz_connected, "tzz_connected"},
    {Observable::concurrence, "concurrence"},
    {Observable::log_negativity, "log_negativity"},
    {Observable::discord, "discord"},
    {Observable::work_deficit, "work_deficit"},
    {Observable::classical_correlation, "classical_correlation"},
    {Observable::mutual_information, "mutual_information"},
}};

inline std::string_view to_string(Observable o) {
  for (const auto& [value, name] : kObservableNames)
    if (value == o) return name;
  return "unknown";
}

inline Observable observable_from_string(std::string_view s) {
  for (const auto& [value, name] : kObservableNames)
    if (name == s) return value;
  throw std::invalid_argument("unknown observable '" + std::string(s) + "'");
}

/// Value of `obs` on the bond (i, i+1). Magnetization refers to site i.
inline double evaluate_bond(const TwoSiteState& s, Observable obs, const OptimizerSettings& opt = {}) {
  switch (obs) {
    case Observable::magnetization: return s.mz_left;
    case Observable::txx_raw: return s.txx;
    case Observable::tyy_raw: return s.tyy;
    case Observable::tzz_raw: return s.tzz;
    case Observable::tzz_connected: return s.tzz - s.mz_left * s.mz_right;
    default: break;
  }
  const Matrix4c rho = realize_density_matrix(s);
  switch (obs) {
    case Observable::concurrence: return concurrence(rho);
    case Observable::log_negativity: return log_negativity(rho);
    case Observable::discord: return quantum_discord(rho, opt).value;
    case Observable::work_deficit: return work_deficit(rho, opt).value;
    case Observable::classical_correlation: return classical_correlation(rho, opt).value;
    case Observable::mutual_information: return mutual_information(rho);
    default: break;
  }
  throw std::invalid_argument("evaluate_bond: unhandled observable");
}

inline std::size_t bond_count(std::size_t n_sites, Boundary b) {
  return b == Boundary::periodic ? n_sites : n_sites - 1;
}

/// (1/N_bonds) sum_i obs(rho_{i,i+1}) for each observable; N_bonds is N for a
/// periodic chain and N-1 for an open one.
inline std::vector<double> site_averages(const CorrelationMatrix& g, Boundary boundary,
                                         std::span<const Observable> observables, const OptimizerSettings& opt = {}) {
  const std::size_t bonds = bond_count(static_cast<std::size_t>(g.size()), boundary);
  std::vector<std::vector<double>> per_bond(observables.size(), std::vector<double>(bonds));
  for (std::size_t i = 0; i < bonds; ++i) {
    const TwoSiteState s = two_site_state(g, i);
    for (std::size_t o = 0; o < observables.size(); ++o) per_bond[o][i] = evaluate_bond(s, observables[o], opt);
  }
  std::vector<double> out(observables.size());
  for (std::size_t o = 0; o < observables.size(); ++o)
    out[o] = pairwise_sum(per_bond[o].data(), bonds) / static_cast<double>(bonds);
  return out;
}

inline double site_average(const CorrelationMatrix& g, Boundary boundary, Observable obs,
                           const OptimizerSettings& opt = {}) {
  const std::array<Observable, 1> one{obs};
  return site_averages(g, boundary, one, opt)[0];
}

/// How many realizations to draw. Draws `min_realizations`, then adds
/// `batch` at a time until every standard error is at most
/// `target_std_error` or `max_realizations` is reached.
struct RealizationPlan {
  std::size_t min_realizations = 200;
  std::size_t batch = 100;
  double target_std_error = 0.005;
  std::size_t max_realizations = 2000;

  static RealizationPlan fixed(std::size_t m) { return {m, m, 0.0, m}; }

  void validate() const {
    if (min_realizations < 2) throw std::invalid_argument("RealizationPlan: at least 2 realizations required");
    if (max_realizations < min_realizations) throw std::invalid_argument("RealizationPlan: max < min");
    if (batch == 0 && max_realizations > min_realizations) throw std::invalid_argument("RealizationPlan: batch must be > 0");
  }
};

struct QuenchedEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n_realizations = 0;
  std::size_t n_sites_averaged = 0;
  std::vector<double> samples;  // per-realization site averages, by realization index
};

/// Failure inside one disorder realization.
class RealizationError : public std::runtime_error {
 public:
  RealizationError(const std::string& what, std::uint64_t seed, std::size_t index)
      : std::runtime_error(what + " (master seed " + std::to_string(seed) + ", realization " + std::to_string(index) +
                           ")"),
        master_seed(seed),
        realization(index) {}
  std::uint64_t master_seed;
  std::size_t realization;
};

struct EnsembleRequest {
  ChainTemplate chain;
  DisorderSpec disorder;
  std::vector<Temperature> temperatures{Temperature::ground()};
  std::vector<Observable> observables;
  RealizationPlan plan;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  OptimizerSettings optimizer;
};

/// estimates[t][o] for temperatures[t] and observables[o]. All entries share
/// the same realizations.
struct EnsembleResult {
  std::vector<std::vector<QuenchedEstimate>> estimates;
  std::size_t n_realizations = 0;
};

inline QuenchedEstimate summarize(std::vector<double> samples, std::size_t sites) {
  QuenchedEstimate e;
  e.n_realizations = samples.size();
  e.n_sites_averaged = sites;
  const bool constant = std::all_of(samples.begin(), samples.end(), [&](double x) { return x == samples.front(); });
  if (constant) {
    e.mean = samples.front();
    e.std_error = 0.0;
  } else {
    const auto m = static_cast<double>(samples.size());
    e.mean = pairwise_sum(samples.data(), samples.size()) / m;
    std::vector<double> sq(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) sq[i] = (samples[i] - e.mean) * (samples[i] - e.mean);
    e.std_error = std::sqrt(pairwise_sum(sq.data(), sq.size()) / (m - 1.0) / m);
  }
  e.samples = std::move(samples);
  return e;
}

/// Site averages of one realization, [temperature][observable].
inline std::vector<std::vector<double>> realization_site_averages(const ModelSpec& spec,
                                                                  std::span<const Temperature> temperatures,
                                                                  std::span<const Observable> observables,
                                                                  const OptimizerSettings& opt = {}) {
  const FermionSpectrum fs = diagonalize(build_quadratic_form(spec));
  std::vector<std::vector<double>> out;
  out.reserve(temperatures.size());
  for (const Temperature& t : temperatures)
    out.push_back(site_averages(correlation_matrix(fs, t), spec.boundary, observables, opt));
  return out;
}

inline EnsembleResult quenched_averages(const EnsembleRequest& req) {
  req.plan.validate();
  req.disorder.validate();
  if (req.temperatures.empty() || req.observables.empty())
    throw std::invalid_argument("quenched_averages: temperatures and observables must be nonempty");

  const std::size_t nt = req.temperatures.size();
  const std::size_t no = req.observables.size();
  // values[r][t * no + o]
  std::vector<std::vector<double>> values;
  auto run_range = [&](std::size_t begin, std::size_t end) {
    values.resize(end);
    parallel_for(end - begin, req.jobs, [&](std::size_t k) {
      const std::size_t r = begin + k;
      try {
        auto rng = realization_stream(req.seed, r);
        const ModelSpec spec = sample_disorder(req.chain, req.disorder, rng);
        const auto avg = realization_site_averages(spec, req.temperatures, req.observables, req.optimizer);
        std::vector<double> flat(nt * no);
        for (std::size_t t = 0; t < nt; ++t)
          for (std::size_t o = 0; o < no; ++o) flat[t * no + o] = avg[t][o];
        values[r] = std::move(flat);
      } catch (const std::exception& e) {
        throw RealizationError(e.what(), req.seed, r);
      }
    });
  };

  const std::size_t sites = bond_count(req.chain.n_sites, req.chain.boundary);
  auto collect = [&] {
    EnsembleResult res;
    res.n_realizations = values.size();
    res.estimates.assign(nt, {});
    for (std::size_t t = 0; t < nt; ++t) {
      for (std::size_t o = 0; o < no; ++o) {
        std::vector<double> s(values.size());
        for (std::size_t r = 0; r < values.size(); ++r) s[r] = values[r][t * no + o];
        res.estimates[t].push_back(summarize(std::move(s), sites));
      }
    }
    return res;
  };

  run_range(0, req.plan.min_realizations);
  EnsembleResult res = collect();
  while (values.size() < req.plan.max_realizations) {
    bool done = true;
    for (const auto& row : res.estimates)
      for (const auto& e : row) done = done && e.std_error <= req.plan.target_std_error;
    if (done) break;
    run_range(values.size(), std::min(req.plan.max_realizations, values.size() + req.plan.batch));
    res = collect();
  }
  return res;
}

inline QuenchedEstimate quenched_average(const ChainTemplate& chain, const DisorderSpec& dis, Observable obs,
                                         Temperature t, const RealizationPlan& plan, std::uint64_t seed,
                                         unsigned jobs = 1, const OptimizerSettings& opt = {}) {
  EnsembleRequest req{chain, dis, {t}, {obs}, plan, seed, jobs, opt};
  return std::move(quenched_averages(req).estimates[0][0]);
}

struct SelfAveragingGap {
  double gap = 0.0;
  double site_average = 0.0;
  double quenched_average = 0.0;
  double quenched_std_error = 0.0;
  std::size_t n_realizations = 0;
};

/// Stream salt for the single large realization used for the site average.
inline constexpr std::uint64_t kFreshRealizationSalt = 0x5e1fa7e5ULL;

/// Site average of one fresh realization minus the quenched average, per
/// observable, at the first requested temperature.
inline std::vector<SelfAveragingGap> self_averaging_gaps(const EnsembleRequest& req) {
  const EnsembleResult q = quenched_averages(req);
  auto rng = realization_stream(req.seed, 0, kFreshRealizationSalt);
  const ModelSpec fresh = sample_disorder(req.chain, req.disorder, rng);
  const std::array<Temperature, 1> t{req.temperatures.front()};
  const auto site = realization_site_averages(fresh, t, req.observables, req.optimizer)[0];
  std::vector<SelfAveragingGap> out;
  for (std::size_t o = 0; o < req.observables.size(); ++o) {
    const QuenchedEstimate& e = q.estimates[0][o];
    out.push_back({site[o] - e.mean, site[o], e.mean, e.std_error, e.n_realizations});
  }
  return out;
}

inline SelfAveragingGap self_averaging_gap(const ChainTemplate& chain, const DisorderSpec& dis, Observable obs,
                                           Temperature t, const RealizationPlan& plan, std::uint64_t seed,
                                           unsigned jobs = 1) {
  EnsembleRequest req{chain, dis, {t}, {obs}, plan, seed, jobs, {}};
  return self_averaging_gaps(req)[0];
}

}  // namespace quenchxy
