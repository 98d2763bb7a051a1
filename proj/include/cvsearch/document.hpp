#pragma once

// JSON and CSV forms of run configurations, traces and sweep tables.

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "cvsearch/search.hpp"

namespace cvsearch {

inline constexpr const char* kVersion = "0.1.0";

struct RunProvenance {
  std::string version = kVersion;
  std::uint64_t seed = 0;

  friend bool operator==(const RunProvenance&, const RunProvenance&) = default;
};

struct RunDocument {
  SearchConfig config;  // defaults resolved: max_iterations set, diffusion mode concrete
  SearchAnalytics analytics;
  int k_best = 0;
  double p_best = 0.0;
  double gft_defect = 0.0;
  std::vector<TraceRow> trace;
  RunProvenance provenance;
};

bool operator==(const SearchAnalytics& a, const SearchAnalytics& b);
bool operator==(const RunDocument& a, const RunDocument& b);

RunDocument make_run_document(const SearchConfig& config, const IterationTrace& trace);

nlohmann::json to_json(const SearchConfig& config);
nlohmann::json to_json(const RunDocument& doc);
nlohmann::json to_json(const std::vector<SweepRow>& rows, const SweepPlan& plan);

/// Overlays the fields present in `j` onto `base`. Unknown keys and
/// malformed values raise InvalidParameter naming the field.
SearchConfig config_from_json(const nlohmann::json& j, SearchConfig base = {});

RunDocument run_document_from_json(const nlohmann::json& j);

/// 17 significant digits, '.' decimal separator regardless of locale.
std::string format_real(double v);

/// Header `k,p,d,leak`, then one row per step.
void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& rows);

/// Header `value,p0,alpha,k_best,p_best,k_star_rotation,k_star_ratio,gft_defect,error`.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace cvsearch
