#pragma once

#include <Eigen/Dense>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "cvsearch/grid.hpp"

namespace cvsearch {

enum class TransformMethod {
  ExactDft,                    // theta = pi/2 only, factored fast transform
  KernelQuadrature,            // sampled chirp kernel, as is
  KernelQuadratureUnitarized,  // nearest unitary to the sampled kernel
};

std::string_view to_string(TransformMethod method);

inline constexpr double kHalfPi = std::numbers::pi / 2;

/// Smallest admissible angle: sin(theta) must exceed 1/pi.
double min_gft_angle();

/// Angles in [pi/4, 3pi/4] keep the kernel's quadratic phase below Nyquist
/// at the grid edge.
bool in_quality_band(double theta);

/// Unitary transform at angle theta applied along every axis. theta = pi/2
/// with ExactDft is the plain transform exp(2i x y)/sqrt(pi) on the grid.
class FourierOperator {
 public:
  /// The plain transform via the factored fast path.
  static FourierOperator exact(const GridSpec& grid);

  const GridSpec& grid() const noexcept { return grid_; }
  double theta() const noexcept { return theta_; }
  TransformMethod method() const noexcept { return method_; }

  /// max |K^H K - I| of the per-axis matrix before any unitarization.
  double unitarity_defect() const noexcept { return defect_; }

  /// Set when theta lies outside the guaranteed-quality band.
  const std::optional<std::string>& quality_warning() const noexcept { return warning_; }

  Wavefunction apply(const Wavefunction& psi) const;
  Wavefunction adjoint_apply(const Wavefunction& psi) const;

  /// Per-axis matrix for the kernel methods; empty for ExactDft.
  std::shared_ptr<const Eigen::MatrixXcd> axis_matrix() const { return matrix_; }

 private:
  friend FourierOperator build_gft(const GridSpec&, double, TransformMethod);

  FourierOperator(const GridSpec& grid, double theta, TransformMethod method)
      : grid_(grid), theta_(theta), method_(method) {}

  GridSpec grid_;
  double theta_;
  TransformMethod method_;
  std::shared_ptr<const Eigen::MatrixXcd> matrix_;
  double defect_ = 0.0;
  std::optional<std::string> warning_;
};

/// Factored O(m log m) transform; no operator object needed.
Wavefunction fourier_apply(const Wavefunction& psi);
Wavefunction fourier_adjoint_apply(const Wavefunction& psi);

/// Generalized transform at angle theta. ExactDft is accepted only for
/// theta = pi/2. Throws ConstraintViolation when sin(theta) <= 1/pi.
FourierOperator build_gft(const GridSpec& grid, double theta,
                          TransformMethod method = TransformMethod::KernelQuadratureUnitarized);

/// ExactDft at pi/2, unitarized quadrature elsewhere.
FourierOperator make_transform(const GridSpec& grid, double theta);

Wavefunction project(const Wavefunction& psi, const Region& region);
Wavefunction invert_sign(const Wavefunction& psi, const Region& region);

/// 2<s|psi> s - psi. `s` must be normalized.
Wavefunction reflect_about_state(const Wavefunction& psi, const Wavefunction& s);

/// Normalized F^H applied to the uniform indicator of the window.
Wavefunction target_state(const GridSpec& grid, const Region& region,
                          const FourierOperator& f);

struct IntervalDiffusion {
  Region window;
};

struct StateDiffusion {
  Wavefunction state;
};

/// Either 1 - 2 P_window or 1 - 2 |s><s|.
using Diffusion = std::variant<IntervalDiffusion, StateDiffusion>;

/// Applies D to psi (not negated).
Wavefunction apply_diffusion(const Wavefunction& psi, const Diffusion& diffusion);

/// C psi = -D F^H I_target F psi.
Wavefunction grover_iterate(const Wavefunction& psi, const Region& target,
                            const Diffusion& diffusion, const FourierOperator& f);

}  // namespace cvsearch
