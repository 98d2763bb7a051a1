#include "cvsearch/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "cvsearch/error.hpp"

namespace cvsearch {

namespace {

// p0 closer than this to 0 or 1 leaves the search plane ill-defined.
constexpr double kDegenerateTol = 1e-14;

}  // namespace

double fubini_study_distance(const Wavefunction& a, const Wavefunction& b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (!(na > 0.0) || !(nb > 0.0)) {
    throw Error(ErrorKind::InvalidParameter, "Fubini-Study distance of a zero-norm state");
  }
  // 1 - |<a|b>|^2 for unit vectors equals |b - <a|b> a|^2; the residual
  // form keeps d accurate near zero where sqrt(1 - overlap) would not.
  const Complex overlap = inner(a, b) / (na * nb);
  double residual = 0.0;
  const auto x = a.amplitudes();
  const auto y = b.amplitudes();
  for (std::size_t i = 0; i < x.size(); ++i) {
    residual += std::norm(y[i] / nb - overlap * (x[i] / na));
  }
  return 2.0 * std::sqrt(std::min(residual, 1.0));
}

double success_probability(const Wavefunction& psi, const Region& target,
                           const FourierOperator& f) {
  const auto transformed = f.apply(psi);
  double p = 0.0;
  for (auto i : region_flat_indices(psi.grid(), target)) p += std::norm(transformed[i]);
  return std::clamp(p, 0.0, 1.0);
}

int rotation_optimum(double alpha) {
  const double k = std::round(std::numbers::pi / (4 * alpha) - 0.5);
  return std::max(0, static_cast<int>(k));
}

SearchAnalytics analyze(const Wavefunction& initial, const Region& target,
                        const FourierOperator& f, const SearchStep& step) {
  if (!initial.is_normalized()) {
    throw Error(ErrorKind::InvalidParameter, "analysis expects a normalized initial state");
  }
  SearchAnalytics out;
  out.p0 = success_probability(initial, target, f);
  if (out.p0 <= kDegenerateTol) {
    throw Error(ErrorKind::DegenerateInstance,
                "initial state has no weight on the target window (p0 = 0)");
  }
  out.alpha = std::asin(std::sqrt(out.p0));
  out.k_star_rotation = rotation_optimum(out.alpha);
  out.effective_database_size = 1.0 / out.p0;

  const double step_distance = fubini_study_distance(initial, step(initial));
  if (out.p0 >= 1.0 - kDegenerateTol || step_distance == 0.0) {
    out.k_star_distance_ratio = 0.0;
  } else {
    const double total = fubini_study_distance(initial, target_state(initial.grid(), target, f));
    out.k_star_distance_ratio = total / step_distance;
  }
  return out;
}

SearchPlane search_plane(const Wavefunction& initial, const Region& target,
                         const FourierOperator& f) {
  if (!initial.is_normalized()) {
    throw Error(ErrorKind::InvalidParameter, "search plane expects a normalized initial state");
  }
  const auto marked_raw = f.adjoint_apply(project(f.apply(initial), target));
  const double p0 = marked_raw.norm_squared();
  if (p0 <= kDegenerateTol || p0 >= 1.0 - kDegenerateTol) {
    throw Error(ErrorKind::DegenerateInstance,
                "search plane is degenerate (p0 = " + std::to_string(p0) + ")");
  }
  auto marked = marked_raw.normalized();
  auto rest = initial - inner(marked, initial) * marked;
  return SearchPlane{std::move(marked), rest.normalized()};
}

double subspace_leakage(const Wavefunction& psi, const SearchPlane& plane) {
  const double inside = std::norm(inner(plane.marked, psi)) + std::norm(inner(plane.unmarked, psi));
  return std::clamp(1.0 - inside, 0.0, 1.0);
}

double subspace_leakage(const Wavefunction& psi, const Wavefunction& initial,
                        const Region& target, const FourierOperator& f) {
  return subspace_leakage(psi, search_plane(initial, target, f));
}

}  // namespace cvsearch
