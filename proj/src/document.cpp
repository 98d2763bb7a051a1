#include "cvsearch/document.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <set>

#include "cvsearch/error.hpp"

namespace cvsearch {

using nlohmann::json;

namespace {

json quantity_to_json(const Quantity& q) {
  if (q.in_cells) return q.to_string();
  return q.value;
}

Quantity quantity_from_json(const json& j, const std::string& field) {
  if (j.is_number()) return Quantity::absolute(j.get<double>());
  if (j.is_string()) {
    try {
      return Quantity::parse(j.get<std::string>());
    } catch (const Error& e) {
      throw Error(ErrorKind::InvalidParameter, field + ": " + e.what());
    }
  }
  throw Error(ErrorKind::InvalidParameter, field + ": expected a number or '<k>dx' string");
}

std::vector<Quantity> centers_from_json(const json& j, const std::string& field) {
  std::vector<Quantity> out;
  if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) {
      out.push_back(quantity_from_json(j[i], field + "[" + std::to_string(i) + "]"));
    }
  } else {
    out.push_back(quantity_from_json(j, field));
  }
  if (out.empty() || out.size() > 2) {
    throw Error(ErrorKind::InvalidParameter, field + ": expected 1 or 2 coordinates");
  }
  return out;
}

json centers_to_json(const std::vector<Quantity>& c) {
  json arr = json::array();
  for (const auto& q : c) arr.push_back(quantity_to_json(q));
  return arr;
}

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
  if (!j.is_object()) throw Error(ErrorKind::InvalidParameter, where + ": expected an object");
  for (const auto& item : j.items()) {
    if (!known.contains(item.key())) {
      throw Error(ErrorKind::InvalidParameter,
                  "unknown field '" + (where.empty() ? "" : where + ".") + item.key() + "'");
    }
  }
}

template <typename T>
T typed(const json& j, const std::string& field) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorKind::InvalidParameter, field + ": wrong type");
  }
}

InitialKind initial_kind_from(const std::string& s) {
  if (s == "delta") return InitialKind::Delta;
  if (s == "gaussian") return InitialKind::Gaussian;
  throw Error(ErrorKind::InvalidParameter, "initial.kind: expected delta or gaussian");
}

DiffusionMode diffusion_mode_from(const std::string& s) {
  if (s == "auto") return DiffusionMode::Auto;
  if (s == "interval") return DiffusionMode::Interval;
  if (s == "state") return DiffusionMode::State;
  throw Error(ErrorKind::InvalidParameter, "diffusion.mode: expected interval, state or auto");
}

}  // namespace

bool operator==(const SearchAnalytics& a, const SearchAnalytics& b) {
  return a.p0 == b.p0 && a.alpha == b.alpha && a.k_star_rotation == b.k_star_rotation &&
         a.k_star_distance_ratio == b.k_star_distance_ratio &&
         a.effective_database_size == b.effective_database_size;
}

bool operator==(const RunDocument& a, const RunDocument& b) {
  return a.config == b.config && a.analytics == b.analytics && a.k_best == b.k_best &&
         a.p_best == b.p_best && a.gft_defect == b.gft_defect && a.trace == b.trace &&
         a.provenance == b.provenance;
}

RunDocument make_run_document(const SearchConfig& config, const IterationTrace& trace) {
  RunDocument doc;
  doc.config = config;
  doc.config.max_iterations = trace.max_iterations;
  doc.config.diffusion.mode = trace.diffusion;
  doc.analytics = trace.analytics;
  doc.k_best = trace.k_best;
  doc.p_best = trace.p_best;
  doc.gft_defect = trace.gft_defect;
  doc.trace = trace.rows;
  doc.provenance.seed = config.seed;
  return doc;
}

json to_json(const SearchConfig& c) {
  json j;
  j["grid_size"] = c.grid_size;
  j["qunats"] = c.qunats;
  j["theta"] = c.theta;
  j["initial"] = {{"kind", std::string(to_string(c.initial.kind))},
                  {"center", centers_to_json(c.initial.center)},
                  {"epsilon", c.initial.epsilon ? quantity_to_json(*c.initial.epsilon) : json(nullptr)}};
  j["target"] = {{"center", centers_to_json(c.target.center)},
                 {"width", quantity_to_json(c.target.width)}};
  j["diffusion"] = {{"mode", std::string(to_string(c.diffusion.mode))},
                    {"width", quantity_to_json(c.diffusion.width)}};
  j["max_iterations"] = c.max_iterations ? json(*c.max_iterations) : json(nullptr);
  j["seed"] = c.seed;
  return j;
}

SearchConfig config_from_json(const json& j, SearchConfig c) {
  reject_unknown(j, {"grid_size", "qunats", "theta", "initial", "target", "diffusion",
                     "max_iterations", "seed"}, "");
  if (j.contains("grid_size")) c.grid_size = typed<int>(j["grid_size"], "grid_size");
  if (j.contains("qunats")) c.qunats = typed<int>(j["qunats"], "qunats");
  if (j.contains("theta")) c.theta = typed<double>(j["theta"], "theta");
  if (j.contains("initial")) {
    const auto& in = j["initial"];
    reject_unknown(in, {"kind", "center", "epsilon"}, "initial");
    if (in.contains("kind")) c.initial.kind = initial_kind_from(typed<std::string>(in["kind"], "initial.kind"));
    if (in.contains("center")) c.initial.center = centers_from_json(in["center"], "initial.center");
    if (in.contains("epsilon")) {
      if (in["epsilon"].is_null()) {
        c.initial.epsilon.reset();
      } else {
        c.initial.epsilon = quantity_from_json(in["epsilon"], "initial.epsilon");
      }
    }
  }
  if (j.contains("target")) {
    const auto& t = j["target"];
    reject_unknown(t, {"center", "width"}, "target");
    if (t.contains("center")) c.target.center = centers_from_json(t["center"], "target.center");
    if (t.contains("width")) c.target.width = quantity_from_json(t["width"], "target.width");
  }
  if (j.contains("diffusion")) {
    const auto& d = j["diffusion"];
    reject_unknown(d, {"mode", "width"}, "diffusion");
    if (d.contains("mode")) c.diffusion.mode = diffusion_mode_from(typed<std::string>(d["mode"], "diffusion.mode"));
    if (d.contains("width")) c.diffusion.width = quantity_from_json(d["width"], "diffusion.width");
  }
  if (j.contains("max_iterations")) {
    if (j["max_iterations"].is_null()) {
      c.max_iterations.reset();
    } else {
      c.max_iterations = typed<int>(j["max_iterations"], "max_iterations");
    }
  }
  if (j.contains("seed")) c.seed = typed<std::uint64_t>(j["seed"], "seed");
  return c;
}

json to_json(const RunDocument& doc) {
  json trace = json::array();
  for (const auto& r : doc.trace) trace.push_back({{"k", r.k}, {"p", r.p}, {"d", r.d}, {"leak", r.leak}});
  return {
      {"config", to_json(doc.config)},
      {"analytics",
       {{"p0", doc.analytics.p0},
        {"alpha", doc.analytics.alpha},
        {"k_star_rotation", doc.analytics.k_star_rotation},
        {"k_star_distance_ratio", doc.analytics.k_star_distance_ratio},
        {"effective_database_size", doc.analytics.effective_database_size}}},
      {"k_best", doc.k_best},
      {"p_best", doc.p_best},
      {"gft_defect", doc.gft_defect},
      {"trace", trace},
      {"provenance", {{"version", doc.provenance.version}, {"seed", doc.provenance.seed}}},
  };
}

RunDocument run_document_from_json(const json& j) {
  RunDocument doc;
  try {
    doc.config = config_from_json(j.at("config"));
    const auto& a = j.at("analytics");
    doc.analytics.p0 = a.at("p0").get<double>();
    doc.analytics.alpha = a.at("alpha").get<double>();
    doc.analytics.k_star_rotation = a.at("k_star_rotation").get<int>();
    doc.analytics.k_star_distance_ratio = a.at("k_star_distance_ratio").get<double>();
    doc.analytics.effective_database_size = a.at("effective_database_size").get<double>();
    doc.k_best = j.at("k_best").get<int>();
    doc.p_best = j.at("p_best").get<double>();
    doc.gft_defect = j.at("gft_defect").get<double>();
    for (const auto& r : j.at("trace")) {
      doc.trace.push_back(TraceRow{r.at("k").get<int>(), r.at("p").get<double>(),
                                   r.at("d").get<double>(), r.at("leak").get<double>()});
    }
    doc.provenance.version = j.at("provenance").at("version").get<std::string>();
    doc.provenance.seed = j.at("provenance").at("seed").get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidParameter, std::string("malformed run document: ") + e.what());
  }
  return doc;
}

json to_json(const std::vector<SweepRow>& rows, const SweepPlan& plan) {
  json table = json::array();
  for (const auto& r : rows) {
    table.push_back({{"value", r.value},
                     {"p0", r.p0},
                     {"alpha", r.alpha},
                     {"k_best", r.k_best},
                     {"p_best", r.p_best},
                     {"k_star_rotation", r.k_star_rotation},
                     {"k_star_ratio", r.k_star_ratio},
                     {"gft_defect", r.gft_defect},
                     {"error", r.error ? json(*r.error) : json(nullptr)}});
  }
  return {{"vary", std::string(to_string(plan.vary))},
          {"base", to_json(plan.base)},
          {"rows", table},
          {"provenance", {{"version", kVersion}, {"seed", plan.base.seed}}}};
}

std::string format_real(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& rows) {
  out << "k,p,d,leak\n";
  for (const auto& r : rows) {
    out << std::to_string(r.k) << ',' << format_real(r.p) << ',' << format_real(r.d) << ',' << format_real(r.leak)
        << '\n';
  }
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "value,p0,alpha,k_best,p_best,k_star_rotation,k_star_ratio,gft_defect,error\n";
  for (const auto& r : rows) {
    out << r.value << ',';
    if (r.error) {
      std::string msg = *r.error;
      for (auto& ch : msg) {
        if (ch == '"') ch = '\'';
      }
      out << ",,,,,,,\"" << msg << "\"\n";
      continue;
    }
    out << format_real(r.p0) << ',' << format_real(r.alpha) << ',' << std::to_string(r.k_best) << ','
        << format_real(r.p_best) << ',' << std::to_string(r.k_star_rotation) << ',' << format_real(r.k_star_ratio)
        << ',' << format_real(r.gft_defect) << ",\n";
  }
}

}  // namespace cvsearch
