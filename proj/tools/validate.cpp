#include "validate.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "cvsearch/metrics.hpp"
#include "cvsearch/operators.hpp"
#include "cvsearch/reference.hpp"

namespace cvsearch::tools {

namespace {

using nlohmann::json;

constexpr int kRandomStates = 20;

Wavefunction random_state(const GridSpec& grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<Complex> amps(grid.size());
  for (auto& a : amps) a = {normal(rng), normal(rng)};
  return Wavefunction(grid, std::move(amps)).normalized();
}

class Report {
 public:
  void check(const std::string& name, double value, double tolerance) {
    const bool ok = std::isfinite(value) && value < tolerance;
    passed_ = passed_ && ok;
    checks_.push_back({{"name", name}, {"value", value}, {"tolerance", tolerance}, {"passed", ok}});
  }
  void info(const std::string& name, double value) {
    checks_.push_back({{"name", name}, {"value", value}, {"tolerance", nullptr}, {"passed", true}});
  }
  void skip(const std::string& name, const std::string& why) {
    checks_.push_back({{"name", name}, {"skipped", why}, {"passed", true}});
  }
  json finish(json header) {
    header["checks"] = checks_;
    header["passed"] = passed_;
    return header;
  }

 private:
  json checks_ = json::array();
  bool passed_ = true;
};

Wavefunction parity(const Wavefunction& psi) {
  const auto& g = psi.grid();
  const auto m = static_cast<std::size_t>(g.points());
  Wavefunction out(g);
  if (g.qunats() == 1) {
    for (std::size_t j = 0; j < m; ++j) out[j] = psi[(m - j) % m];
  } else {
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = 0; b < m; ++b) out[a * m + b] = psi[((m - a) % m) * m + (m - b) % m];
    }
  }
  return out;
}

// Delta start one cell right of the origin quarter, single-cell target at 0.
struct Instance {
  Wavefunction initial;
  Region target;
  Diffusion diffusion;
};

Instance delta_instance(const GridSpec& g) {
  const int cell = g.points() / 2 + g.points() / 4;
  std::vector<double> center(static_cast<std::size_t>(g.qunats()), g.coordinate(cell));
  Region init;
  for (double c : center) init.axes.push_back(Interval{c, g.spacing()});
  return {delta_state(g, center), Region::cube(0.0, g.spacing(), g.qunats()),
          IntervalDiffusion{std::move(init)}};
}

void check_search(Report& report, const std::string& prefix, const GridSpec& g,
                  const FourierOperator& f) {
  const auto inst = delta_instance(g);
  const double p0 = success_probability(inst.initial, inst.target, f);
  const double alpha = std::asin(std::sqrt(p0));
  const int horizon = std::max(2 * rotation_optimum(alpha), 20);
  const auto plane = search_plane(inst.initial, inst.target, f);
  double law = 0.0;
  double leak = 0.0;
  Wavefunction psi = inst.initial;
  for (int k = 0; k <= horizon; ++k) {
    if (k > 0) psi = grover_iterate(psi, inst.target, inst.diffusion, f);
    const double s = std::sin((2 * k + 1) * alpha);
    law = std::max(law, std::abs(success_probability(psi, inst.target, f) - s * s));
    leak = std::max(leak, subspace_leakage(psi, plane));
  }
  report.check(prefix + "sinusoid_law_deviation", law, 1e-10);
  report.check(prefix + "subspace_leakage", leak, 1e-10);
  const double d = fubini_study_distance(inst.initial, grover_iterate(inst.initial, inst.target, inst.diffusion, f));
  report.check(prefix + "step_distance_identity", std::abs(d * d - 16 * p0 * (1 - p0)), 1e-10);
}

}  // namespace

json run_validation(int grid_size, int qunats, std::optional<double> theta) {
  const auto g = make_grid(grid_size, qunats);
  Report report;
  const bool dense_axis_ok = g.points() <= reference::kMaxDenseAxis;
  const bool dense_apply_ok = g.qunats() == 1 ? g.points() <= 4096 : g.points() <= 64;
  const bool dense_iterate_ok = g.qunats() == 1 ? g.points() <= 1024 : g.points() <= 64;

  std::optional<reference::DenseOperator> dense;
  if (dense_axis_ok) {
    dense = reference::dense_fourier_matrix(g);
    report.check("fourier_unitarity_defect", reference::unitarity_defect(dense->matrix), 1e-12);
  } else {
    report.skip("fourier_unitarity_defect", "grid exceeds the dense size limit");
  }

  double fast_dense = 0.0, roundtrip = 0.0, norm = 0.0, par = 0.0, idem = 0.0, invol = 0.0;
  const auto window = Region::cube(0.0, 3 * g.spacing(), g.qunats());
  for (int s = 0; s < kRandomStates; ++s) {
    const auto psi = random_state(g, static_cast<std::uint64_t>(s));
    const auto out = fourier_apply(psi);
    if (dense && dense_apply_ok) fast_dense = std::max(fast_dense, max_abs_difference(out, reference::dense_apply(*dense, psi)));
    roundtrip = std::max(roundtrip, max_abs_difference(fourier_adjoint_apply(out), psi));
    norm = std::max(norm, std::abs(out.norm() - 1.0));
    par = std::max(par, max_abs_difference(fourier_apply(out), parity(psi)));
    const auto once = project(psi, window);
    idem = std::max(idem, max_abs_difference(project(once, window), once));
    invol = std::max(invol, max_abs_difference(invert_sign(invert_sign(psi, window), window), psi));
  }
  if (dense && dense_apply_ok) {
    report.check("fast_vs_dense_transform", fast_dense, 1e-12);
  } else {
    report.skip("fast_vs_dense_transform", "grid exceeds the dense size limit");
  }
  report.check("fourier_adjoint_roundtrip", roundtrip, 1e-12);
  report.check("fourier_norm_preservation", norm, 1e-12);
  report.check("fourier_parity", par, 1e-12);
  report.check("projection_idempotence", idem, 1e-15);
  report.check("inversion_involution", invol, 1e-15);

  const auto exact = FourierOperator::exact(g);
  check_search(report, "", g, exact);

  const auto inst = delta_instance(g);
  const double dt = fubini_study_distance(inst.initial, target_state(g, inst.target, exact));
  report.check("target_distance_identity",
               std::abs(dt * dt - 4 * (1 - 1 / static_cast<double>(g.size()))), 1e-12);

  if (dense && dense_iterate_ok) {
    double worst = 0.0;
    for (int s = 0; s < 5; ++s) {
      const auto psi = random_state(g, 100 + static_cast<std::uint64_t>(s));
      worst = std::max(worst, max_abs_difference(grover_iterate(psi, inst.target, inst.diffusion, exact),
                                                 reference::dense_iterate(psi, inst.target, inst.diffusion, *dense)));
    }
    report.check("dense_iterate_agreement", worst, 1e-11);
  } else {
    report.skip("dense_iterate_agreement", "grid exceeds the dense iterate limit");
  }

  json header = {{"grid_size", grid_size}, {"qunats", qunats}};
  header["theta"] = theta ? json(*theta) : json(nullptr);
  if (theta && std::abs(*theta - kHalfPi) > 1e-12) {
    if (!dense_axis_ok) {
      report.skip("gft", "grid exceeds the dense size limit");
    } else {
      const auto gft = build_gft(g, *theta);
      report.info("gft_defect_raw", gft.unitarity_defect());
      report.check("gft_defect_unitarized", reference::unitarity_defect(*gft.axis_matrix()), 1e-12);
      double gnorm = 0.0;
      for (int s = 0; s < kRandomStates; ++s) {
        const auto psi = random_state(g, 200 + static_cast<std::uint64_t>(s));
        gnorm = std::max(gnorm, std::abs(gft.apply(psi).norm() - 1.0));
      }
      report.check("gft_norm_preservation", gnorm, 1e-12);
      check_search(report, "gft_", g, gft);
      if (gft.quality_warning()) header["warning"] = *gft.quality_warning();
    }
  }
  return report.finish(std::move(header));
}

}  // namespace cvsearch::tools
