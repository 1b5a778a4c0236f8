#pragma once

// Results tables and the run manifest.

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "cli/config.hpp"

namespace quenchxy::cli {

inline constexpr int kResultsSchemaVersion = 1;

inline constexpr std::array<std::string_view, 15> kResultsColumns{
    "model_kind", "N",     "gamma", "sigma_d",         "control",                 "beta_scaled",
    "observable", "quenched_mean",  "quenched_std_error", "ordered_value",        "delta",
    "delta_std_error", "total_delta_or_empty", "M_used", "error"};

inline constexpr std::array<std::string_view, 12> kSelfavgColumns{
    "model_kind", "N",       "gamma",        "sigma_d",           "control",           "beta_scaled",
    "observable", "gap",     "site_average", "quenched_mean",     "quenched_std_error", "M_used"};

/// Shortest text that reads back to the same double; "inf" and "nan" otherwise.
inline std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

/// Quotes a field when it contains a delimiter, quote or line break.
inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += (c == '\n' || c == '\r') ? ' ' : c;
  }
  return out + '"';
}

template <std::size_t K>
void write_header(std::ostream& os, const std::array<std::string_view, K>& columns) {
  for (std::size_t i = 0; i < K; ++i) os << (i ? "," : "") << columns[i];
  os << '\n';
}

inline void write_row(std::ostream& os, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) os << (i ? "," : "") << csv_field(fields[i]);
  os << '\n';
}

inline void write_results(std::ostream& os, const RunConfig& cfg, const std::vector<SweepRecord>& rows) {
  write_header(os, kResultsColumns);
  const std::string kind(to_string(cfg.model_kind));
  for (const SweepRecord& r : rows) {
    const ScorePoint& p = r.point;
    const bool ok = r.error.empty();
    auto num = [&](double v) { return ok ? format_number(v) : std::string{}; };
    write_row(os, {kind, std::to_string(cfg.n_sites), format_number(cfg.gamma), format_number(cfg.sigma_grid.front()),
                   format_number(p.control), format_number(p.beta_scaled), std::string(to_string(p.observable)),
                   num(p.quenched_mean), num(p.quenched_std_error), num(p.ordered_value), num(p.delta),
                   num(p.delta_std_error), r.total ? format_number(*r.total) : std::string{},
                   ok ? std::to_string(p.n_realizations) : std::string{}, r.error});
  }
}

struct SelfavgRow {
  double sigma_d = 0.0;
  double control = 0.0;
  double beta_scaled = 0.0;
  Observable observable = Observable::magnetization;
  SelfAveragingGap gap;
  std::string error;
};

inline void write_selfavg(std::ostream& os, const RunConfig& cfg, const std::vector<SelfavgRow>& rows) {
  std::array<std::string_view, kSelfavgColumns.size() + 1> columns{};
  std::copy(kSelfavgColumns.begin(), kSelfavgColumns.end(), columns.begin());
  columns.back() = "error";
  write_header(os, columns);
  const std::string kind(to_string(cfg.model_kind));
  for (const SelfavgRow& r : rows) {
    const bool ok = r.error.empty();
    auto num = [&](double v) { return ok ? format_number(v) : std::string{}; };
    write_row(os, {kind, std::to_string(cfg.n_sites), format_number(cfg.gamma), format_number(r.sigma_d),
                   format_number(r.control), format_number(r.beta_scaled), std::string(to_string(r.observable)),
                   num(r.gap.gap), num(r.gap.site_average), num(r.gap.quenched_average),
                   num(r.gap.quenched_std_error), ok ? std::to_string(r.gap.n_realizations) : std::string{},
                   r.error});
  }
}

inline std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md.data(), &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 digest failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 0xf];
  }
  return out;
}

/// Hash of the canonical config, so formatting and comments do not matter.
inline std::string config_hash(const RunConfig& cfg) { return sha256_hex(to_json(cfg).dump()); }

struct Manifest {
  int schema_version = kResultsSchemaVersion;
  std::string tool_version;
  std::string config_hash;
  std::uint64_t master_seed = 0;
  double wall_time_seconds = 0.0;
  unsigned jobs = 1;
  std::size_t points_total = 0;
  std::size_t points_failed = 0;
  std::vector<std::string> outputs;
  nlohmann::json config;

  friend bool operator==(const Manifest&, const Manifest&) = default;
};

inline void to_json(nlohmann::json& j, const Manifest& m) {
  j = {{"schema_version", m.schema_version}, {"tool_version", m.tool_version},
       {"config_hash", m.config_hash},       {"master_seed", m.master_seed},
       {"wall_time_seconds", m.wall_time_seconds}, {"jobs", m.jobs},
       {"points_total", m.points_total},     {"points_failed", m.points_failed},
       {"outputs", m.outputs},               {"config", m.config}};
}

inline void from_json(const nlohmann::json& j, Manifest& m) {
  j.at("schema_version").get_to(m.schema_version);
  j.at("tool_version").get_to(m.tool_version);
  j.at("config_hash").get_to(m.config_hash);
  j.at("master_seed").get_to(m.master_seed);
  j.at("wall_time_seconds").get_to(m.wall_time_seconds);
  j.at("jobs").get_to(m.jobs);
  j.at("points_total").get_to(m.points_total);
  j.at("points_failed").get_to(m.points_failed);
  j.at("outputs").get_to(m.outputs);
  m.config = j.at("config");
}

}  // namespace quenchxy::cli
