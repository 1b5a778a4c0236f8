#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "cli/config.hpp"
#include "cli/output.hpp"

namespace quenchxy::cli {

#ifndef QUENCHXY_VERSION
#define QUENCHXY_VERSION "0.0.0"
#endif

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitPartialFailure = 2;

/// Fraction of points that must succeed for a zero exit status.
inline constexpr double kRequiredSuccessFraction = 0.9;

struct RunOutcome {
  int status = kExitOk;
  Manifest manifest;
};

inline ScoreSetup score_setup(const RunConfig& cfg, double sigma_d, unsigned jobs) {
  return {cfg.model_kind, cfg.n_sites, cfg.gamma, sigma_d, cfg.boundary, cfg.plan, cfg.master_seed, jobs, {}};
}

inline std::vector<SweepRecord> run_scores(const RunConfig& cfg, unsigned jobs) {
  return sweep(score_setup(cfg, cfg.sigma_grid.front(), jobs), cfg.control_grid, cfg.beta_grid, cfg.observables,
               cfg.totals);
}

/// Gap map ordered sigma_d, control, beta, observable.
inline std::vector<SelfavgRow> run_selfavg(const RunConfig& cfg, unsigned jobs) {
  std::vector<SelfavgRow> rows;
  for (double sigma : cfg.sigma_grid) {
    for (double control : cfg.control_grid) {
      for (double beta : cfg.beta_grid) {
        EnsembleRequest req{{cfg.n_sites, cfg.gamma, cfg.boundary},
                            disorder_for(cfg.model_kind, control, sigma),
                            {temperature_for(beta)},
                            cfg.observables,
                            cfg.plan,
                            point_seed(cfg.master_seed, control),
                            jobs,
                            {}};
        std::vector<SelfAveragingGap> gaps;
        std::string error;
        try {
          gaps = self_averaging_gaps(req);
        } catch (const std::exception& e) {
          error = e.what();
        }
        for (std::size_t o = 0; o < cfg.observables.size(); ++o)
          rows.push_back({sigma, control, beta, cfg.observables[o], error.empty() ? gaps[o] : SelfAveragingGap{},
                          error});
      }
    }
  }
  return rows;
}

inline void write_file(const std::filesystem::path& path, const auto& writer) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  writer(os);
  if (!os) throw std::runtime_error("write to '" + path.string() + "' failed");
}

/// Executes the config and writes the results table and manifest into `out_dir`.
inline RunOutcome execute(const RunConfig& cfg, const std::filesystem::path& out_dir, unsigned jobs) {
  const auto start = std::chrono::steady_clock::now();
  std::filesystem::create_directories(out_dir);

  RunOutcome outcome;
  Manifest& m = outcome.manifest;
  m.tool_version = QUENCHXY_VERSION;
  m.config_hash = config_hash(cfg);
  m.master_seed = cfg.master_seed;
  m.jobs = jobs;
  m.config = to_json(cfg);

  if (cfg.mode == RunMode::scores) {
    const auto rows = run_scores(cfg, jobs);
    write_file(out_dir / cfg.results_file, [&](std::ostream& os) { write_results(os, cfg, rows); });
    m.outputs.push_back(cfg.results_file);
    m.points_total = rows.size();
    for (const auto& r : rows) m.points_failed += r.error.empty() ? 0 : 1;
  } else {
    const auto rows = run_selfavg(cfg, jobs);
    write_file(out_dir / cfg.selfavg_file, [&](std::ostream& os) { write_selfavg(os, cfg, rows); });
    m.outputs.push_back(cfg.selfavg_file);
    m.points_total = rows.size();
    for (const auto& r : rows) m.points_failed += r.error.empty() ? 0 : 1;
  }

  m.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_file(out_dir / cfg.manifest_file, [&](std::ostream& os) { os << nlohmann::json(m).dump(2) << '\n'; });

  const double succeeded = static_cast<double>(m.points_total - m.points_failed);
  if (succeeded < kRequiredSuccessFraction * static_cast<double>(m.points_total)) outcome.status = kExitPartialFailure;
  return outcome;
}

}  // namespace quenchxy::cli
