#include "cvsearch/search.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <future>
#include <random>
#include <string>

#include "cvsearch/error.hpp"

namespace cvsearch {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string shortest(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::vector<double> resolve_centers(const std::vector<Quantity>& centers, const GridSpec& grid,
                                    const char* field) {
  const auto n = static_cast<std::size_t>(grid.qunats());
  if (centers.size() != 1 && centers.size() != n) {
    throw Error(ErrorKind::InvalidParameter,
                std::string(field) + " needs 1 or " + std::to_string(n) + " coordinates");
  }
  std::vector<double> out;
  for (std::size_t a = 0; a < n; ++a) {
    out.push_back(centers[centers.size() == 1 ? 0 : a].resolve(grid));
  }
  return out;
}

double leakage_or_collapsed(const Wavefunction& psi, const std::optional<SearchPlane>& plane,
                            const Wavefunction& initial) {
  if (plane) return subspace_leakage(psi, *plane);
  // p0 = 1: the plane collapses onto the initial direction.
  return std::clamp(1.0 - std::norm(inner(initial, psi)), 0.0, 1.0);
}

}  // namespace

Quantity Quantity::parse(std::string_view text) {
  auto s = trim(text);
  bool cells = false;
  if (s.size() >= 2 && s.substr(s.size() - 2) == "dx") {
    cells = true;
    s.remove_suffix(2);
    s = trim(s);
    if (s.empty() || s == "+") return Quantity::cells(1.0);
    if (s == "-") return Quantity::cells(-1.0);
  }
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw Error(ErrorKind::InvalidParameter,
                "cannot parse '" + std::string(text) + "' as a number or '<k>dx'");
  }
  return Quantity{v, cells};
}

std::string Quantity::to_string() const {
  return in_cells ? shortest(value) + "dx" : shortest(value);
}

std::string_view to_string(InitialKind kind) {
  return kind == InitialKind::Delta ? "delta" : "gaussian";
}

std::string_view to_string(DiffusionMode mode) {
  switch (mode) {
    case DiffusionMode::Auto: return "auto";
    case DiffusionMode::Interval: return "interval";
    case DiffusionMode::State: return "state";
  }
  return "unknown";
}

std::string_view to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::GridSize: return "grid_size";
    case SweepAxis::Theta: return "theta";
    case SweepAxis::Epsilon: return "epsilon";
  }
  return "unknown";
}

SweepAxis parse_sweep_axis(std::string_view text) {
  if (text == "grid_size") return SweepAxis::GridSize;
  if (text == "theta") return SweepAxis::Theta;
  if (text == "epsilon") return SweepAxis::Epsilon;
  throw Error(ErrorKind::InvalidParameter,
              "vary must be grid_size, theta or epsilon (got '" + std::string(text) + "')");
}

Region WindowSpec::resolve(const GridSpec& grid) const {
  const auto c = resolve_centers(center, grid, "target center");
  const double w = width.resolve(grid);
  Region r;
  for (double x : c) r.axes.push_back(Interval{x, w});
  return r;
}

// ---------------------------------------------------------------------------

PreparedSearch prepare_search(const SearchConfig& config) {
  const GridSpec grid = make_grid(config.grid_size, config.qunats);
  if (config.max_iterations && *config.max_iterations < 1) {
    throw Error(ErrorKind::InvalidParameter, "max_iterations must be at least 1");
  }
  FourierOperator transform = make_transform(grid, config.theta);

  const auto init_center = resolve_centers(config.initial.center, grid, "initial center");
  std::optional<Wavefunction> initial;
  if (config.initial.kind == InitialKind::Delta) {
    initial = delta_state(grid, init_center);
  } else {
    if (!config.initial.epsilon) {
      throw Error(ErrorKind::InvalidParameter, "epsilon is required for a gaussian initial state");
    }
    initial = gaussian_state(grid, init_center, config.initial.epsilon->resolve(grid));
  }

  Region target = config.target.resolve(grid);
  region_index_set(grid, target);  // surfaces empty windows early

  DiffusionMode mode = config.diffusion.mode;
  if (mode == DiffusionMode::Auto) {
    mode = config.initial.kind == InitialKind::Gaussian ? DiffusionMode::State
                                                         : DiffusionMode::Interval;
  }
  Diffusion diffusion = StateDiffusion{*initial};
  if (mode == DiffusionMode::Interval) {
    const double w = config.diffusion.width.resolve(grid);
    Region window;
    for (double x : init_center) window.axes.push_back(Interval{x, w});
    region_index_set(grid, window);
    diffusion = IntervalDiffusion{std::move(window)};
  }
  return PreparedSearch{grid,        std::move(transform), std::move(*initial),
                        std::move(target), std::move(diffusion), mode};
}

IterationTrace run_search(const SearchConfig& config) {
  const PreparedSearch prep = prepare_search(config);
  IterationTrace trace;
  trace.diffusion = prep.mode;
  trace.gft_defect = prep.transform.unitarity_defect();
  trace.analytics = analyze(prep.initial, prep.target, prep.transform,
                            [&prep](const Wavefunction& psi) { return prep.step(psi); });
  trace.max_iterations =
      config.max_iterations.value_or(std::max(2 * trace.analytics.k_star_rotation, 50));

  std::optional<SearchPlane> plane;
  try {
    plane = search_plane(prep.initial, prep.target, prep.transform);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::DegenerateInstance) throw;
  }

  // The argmax is taken over the first rotation, k <= 2 k*: later revivals of
  // the sinusoid can sample its crest more closely but are not the optimum a
  // search would stop at.
  const int best_window = std::max(2 * trace.analytics.k_star_rotation, 1);
  Wavefunction psi = prep.initial;
  trace.rows.reserve(static_cast<std::size_t>(trace.max_iterations) + 1);
  for (int k = 0; k <= trace.max_iterations; ++k) {
    if (k > 0) psi = prep.step(psi);
    TraceRow row;
    row.k = k;
    row.p = k == 0 ? trace.analytics.p0 : success_probability(psi, prep.target, prep.transform);
    row.d = fubini_study_distance(prep.initial, psi);
    row.leak = leakage_or_collapsed(psi, plane, prep.initial);
    if (k == 0 || (k <= best_window && row.p > trace.p_best)) {
      trace.p_best = row.p;
      trace.k_best = k;
    }
    trace.rows.push_back(row);
  }
  return trace;
}

// ---------------------------------------------------------------------------

namespace {

SweepRow sweep_one(const SweepPlan& plan, const Quantity& value) {
  SweepRow row;
  row.value = value.to_string();
  try {
    SearchConfig cfg = plan.base;
    switch (plan.vary) {
      case SweepAxis::GridSize:
        if (value.in_cells || value.value != std::floor(value.value) || value.value > 1 << 20) {
          throw Error(ErrorKind::InvalidParameter, "grid_size values must be integers");
        }
        cfg.grid_size = static_cast<int>(value.value);
        break;
      case SweepAxis::Theta:
        if (value.in_cells) throw Error(ErrorKind::InvalidParameter, "theta is an angle, not a length");
        cfg.theta = value.value;
        break;
      case SweepAxis::Epsilon:
        cfg.initial.kind = InitialKind::Gaussian;
        cfg.initial.epsilon = value;
        break;
    }
    const auto trace = run_search(cfg);
    row.p0 = trace.analytics.p0;
    row.alpha = trace.analytics.alpha;
    row.k_best = trace.k_best;
    row.p_best = trace.p_best;
    row.k_star_rotation = trace.analytics.k_star_rotation;
    row.k_star_ratio = trace.analytics.k_star_distance_ratio;
    row.gft_defect = trace.gft_defect;
  } catch (const Error& e) {
    row.error = std::string(to_string(e.kind())) + ": " + e.what();
  }
  return row;
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepPlan& plan, bool parallel) {
  if (plan.values.empty()) {
    throw Error(ErrorKind::InvalidParameter, "sweep needs at least one value");
  }
  std::vector<SweepRow> rows;
  rows.reserve(plan.values.size());
  if (!parallel) {
    for (const auto& v : plan.values) rows.push_back(sweep_one(plan, v));
    return rows;
  }
  std::vector<std::future<SweepRow>> pending;
  for (const auto& v : plan.values) {
    pending.push_back(std::async(std::launch::async, [&plan, v] { return sweep_one(plan, v); }));
  }
  for (auto& f : pending) rows.push_back(f.get());
  return rows;
}

std::vector<double> measure_position(const Wavefunction& psi, const FourierOperator& f,
                                     std::uint64_t seed) {
  if (!psi.is_normalized(1e-9)) {
    throw Error(ErrorKind::InvalidParameter, "measurement expects a normalized state");
  }
  const auto transformed = f.apply(psi);
  double total = 0.0;
  for (const auto& a : transformed.amplitudes()) total += std::norm(a);

  // 53 random bits mapped onto [0, 1) by hand: the standard distributions
  // are not bit-reproducible across library implementations.
  std::mt19937_64 rng(seed);
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * total;

  std::size_t pick = transformed.size() - 1;
  double acc = 0.0;
  for (std::size_t i = 0; i < transformed.size(); ++i) {
    acc += std::norm(transformed[i]);
    if (u < acc) {
      pick = i;
      break;
    }
  }
  const auto& grid = psi.grid();
  const auto m = static_cast<std::size_t>(grid.points());
  if (grid.qunats() == 1) return {grid.coordinate(static_cast<int>(pick))};
  return {grid.coordinate(static_cast<int>(pick / m)), grid.coordinate(static_cast<int>(pick % m))};
}

}  // namespace cvsearch
