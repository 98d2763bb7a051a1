#pragma once

#include <functional>

#include "cvsearch/grid.hpp"
#include "cvsearch/operators.hpp"

namespace cvsearch {

struct SearchAnalytics {
  double p0 = 0.0;                     // initial success probability
  double alpha = 0.0;                  // arcsin(sqrt(p0))
  int k_star_rotation = 0;             // round(pi/(4 alpha) - 1/2)
  double k_star_distance_ratio = 0.0;  // d(initial, target) / d(initial, C initial)
  double effective_database_size = 0.0;  // 1/p0
};

/// Fubini-Study distance d, with d^2 = 4 (1 - |<psi1/|psi1| | psi2/|psi2|>|^2).
/// Throws InvalidParameter for a zero-norm argument.
double fubini_study_distance(const Wavefunction& a, const Wavefunction& b);

/// |project(F psi, target)|^2.
double success_probability(const Wavefunction& psi, const Region& target,
                           const FourierOperator& f);

using SearchStep = std::function<Wavefunction(const Wavefunction&)>;

/// round(pi/(4 alpha) - 1/2), never negative.
int rotation_optimum(double alpha);

/// Throws DegenerateInstance when p0 == 0. When p0 == 1 the ratio is
/// reported as 0 (nothing left to travel).
SearchAnalytics analyze(const Wavefunction& initial, const Region& target,
                        const FourierOperator& f, const SearchStep& step);

/// Orthonormal pair spanning the plane the two-reflection iterate preserves:
/// the marked direction F^H P F initial and the rest of `initial`.
struct SearchPlane {
  Wavefunction marked;
  Wavefunction unmarked;
};

/// Throws DegenerateInstance when p0 is 0 or 1.
SearchPlane search_plane(const Wavefunction& initial, const Region& target,
                         const FourierOperator& f);

/// 1 - |<m|psi>|^2 - |<u|psi>|^2 over the search plane.
double subspace_leakage(const Wavefunction& psi, const Wavefunction& initial,
                        const Region& target, const FourierOperator& f);

double subspace_leakage(const Wavefunction& psi, const SearchPlane& plane);

}  // namespace cvsearch
