#include "cvsearch/operators.hpp"

#include <cmath>
#include <string>

#include "cvsearch/error.hpp"
#include "cvsearch/reference.hpp"
#include "fft.hpp"

namespace cvsearch {

namespace {

using RowMajorMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

constexpr double kExactAngleTol = 1e-12;

Wavefunction apply_axis_matrix(const Eigen::MatrixXcd& k, const Wavefunction& psi,
                               bool adjoint) {
  Wavefunction out(psi.grid());
  const auto m = static_cast<Eigen::Index>(psi.grid().points());
  if (psi.grid().qunats() == 1) {
    Eigen::Map<const Eigen::VectorXcd> in(psi.amplitudes().data(), m);
    Eigen::Map<Eigen::VectorXcd> res(out.amplitudes().data(), m);
    if (adjoint) {
      res.noalias() = k.adjoint() * in;
    } else {
      res.noalias() = k * in;
    }
    return out;
  }
  // Row-major m x m block: axis 0 indexes rows. Transforming both axes is
  // K * Psi * K^T (adjoint: K^H * Psi * conj(K)).
  Eigen::Map<const RowMajorMatrix> in(psi.amplitudes().data(), m, m);
  Eigen::Map<RowMajorMatrix> res(out.amplitudes().data(), m, m);
  if (adjoint) {
    RowMajorMatrix tmp = k.adjoint() * in;
    res.noalias() = tmp * k.conjugate();
  } else {
    RowMajorMatrix tmp = k * in;
    res.noalias() = tmp * k.transpose();
  }
  return out;
}

Wavefunction apply_fast(const Wavefunction& psi, bool adjoint) {
  Wavefunction out = psi;
  for (int axis = 0; axis < psi.grid().qunats(); ++axis) {
    detail::for_each_line(out, axis, [adjoint](std::span<Complex> line) {
      detail::centered_dft(line, adjoint);
    });
  }
  return out;
}

void require_same_grid(const GridSpec& a, const GridSpec& b) {
  if (!(a == b)) {
    throw Error(ErrorKind::InvalidParameter, "state and operator live on different grids");
  }
}

}  // namespace

std::string_view to_string(TransformMethod method) {
  switch (method) {
    case TransformMethod::ExactDft: return "exact-dft";
    case TransformMethod::KernelQuadrature: return "kernel-quadrature";
    case TransformMethod::KernelQuadratureUnitarized: return "kernel-quadrature-unitarized";
  }
  return "unknown";
}

double min_gft_angle() { return std::asin(1.0 / std::numbers::pi); }

bool in_quality_band(double theta) {
  return theta >= std::numbers::pi / 4 && theta <= 3 * std::numbers::pi / 4;
}

FourierOperator FourierOperator::exact(const GridSpec& grid) {
  return FourierOperator(grid, kHalfPi, TransformMethod::ExactDft);
}

Wavefunction FourierOperator::apply(const Wavefunction& psi) const {
  require_same_grid(psi.grid(), grid_);
  if (method_ == TransformMethod::ExactDft) return apply_fast(psi, false);
  return apply_axis_matrix(*matrix_, psi, false);
}

Wavefunction FourierOperator::adjoint_apply(const Wavefunction& psi) const {
  require_same_grid(psi.grid(), grid_);
  if (method_ == TransformMethod::ExactDft) return apply_fast(psi, true);
  return apply_axis_matrix(*matrix_, psi, true);
}

Wavefunction fourier_apply(const Wavefunction& psi) { return apply_fast(psi, false); }

Wavefunction fourier_adjoint_apply(const Wavefunction& psi) { return apply_fast(psi, true); }

FourierOperator build_gft(const GridSpec& grid, double theta, TransformMethod method) {
  const double lo = min_gft_angle();
  if (!std::isfinite(theta) || theta <= lo || theta >= std::numbers::pi - lo) {
    throw Error(ErrorKind::ConstraintViolation,
                "theta=" + std::to_string(theta) + " violates sin(theta) > 1/pi (theta must lie in (" +
                    std::to_string(lo) + ", " + std::to_string(std::numbers::pi - lo) + "))");
  }
  if (method == TransformMethod::ExactDft) {
    if (std::abs(theta - kHalfPi) > kExactAngleTol) {
      throw Error(ErrorKind::InvalidParameter, "exact-dft is only defined at theta = pi/2");
    }
    return FourierOperator::exact(grid);
  }

  FourierOperator op(grid, theta, method);
  auto raw = reference::dense_gft_kernel(grid, theta);
  op.defect_ = reference::unitarity_defect(raw.matrix);
  if (method == TransformMethod::KernelQuadratureUnitarized) {
    op.matrix_ = std::make_shared<const Eigen::MatrixXcd>(
        reference::nearest_unitary(raw, reference::RankPolicy::Complete).matrix);
  } else {
    op.matrix_ = std::make_shared<const Eigen::MatrixXcd>(std::move(raw.matrix));
  }
  if (!in_quality_band(theta)) {
    op.warning_ = "theta=" + std::to_string(theta) +
                  " is outside [pi/4, 3pi/4]; the sampled chirp kernel aliases at the grid edge";
  }
  return op;
}

FourierOperator make_transform(const GridSpec& grid, double theta) {
  if (std::abs(theta - kHalfPi) <= kExactAngleTol) return FourierOperator::exact(grid);
  return build_gft(grid, theta, TransformMethod::KernelQuadratureUnitarized);
}

// ---------------------------------------------------------------------------

Wavefunction project(const Wavefunction& psi, const Region& region) {
  const auto window = region_flat_indices(psi.grid(), region);
  Wavefunction out(psi.grid());
  for (auto i : window) out[i] = psi[i];
  return out;
}

Wavefunction invert_sign(const Wavefunction& psi, const Region& region) {
  const auto window = region_flat_indices(psi.grid(), region);
  Wavefunction out = psi;
  for (auto i : window) out[i] = -out[i];
  return out;
}

Wavefunction reflect_about_state(const Wavefunction& psi, const Wavefunction& s) {
  require_same_grid(psi.grid(), s.grid());
  if (!s.is_normalized()) {
    throw Error(ErrorKind::InvalidParameter,
                "reflection state has squared norm " + std::to_string(s.norm_squared()) +
                    ", expected 1");
  }
  const Complex overlap = inner(s, psi);
  Wavefunction out = psi;
  const auto src = s.amplitudes();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = 2.0 * overlap * src[i] - out[i];
  return out;
}

Wavefunction target_state(const GridSpec& grid, const Region& region,
                          const FourierOperator& f) {
  const auto window = region_flat_indices(grid, region);
  Wavefunction indicator(grid);
  const double amp = 1.0 / std::sqrt(static_cast<double>(window.size()));
  for (auto i : window) indicator[i] = amp;
  return f.adjoint_apply(indicator).normalized();
}

Wavefunction apply_diffusion(const Wavefunction& psi, const Diffusion& diffusion) {
  if (const auto* iv = std::get_if<IntervalDiffusion>(&diffusion)) {
    return invert_sign(psi, iv->window);
  }
  const auto& s = std::get<StateDiffusion>(diffusion).state;
  // 1 - 2|s><s| = -(2|s><s| - 1)
  Wavefunction out = reflect_about_state(psi, s);
  out *= -1.0;
  return out;
}

Wavefunction grover_iterate(const Wavefunction& psi, const Region& target,
                            const Diffusion& diffusion, const FourierOperator& f) {
  if (!psi.is_normalized(1e-9)) {
    throw Error(ErrorKind::InvalidParameter, "search iterate expects a normalized state");
  }
  Wavefunction phi = f.apply(psi);
  phi = invert_sign(phi, target);
  phi = f.adjoint_apply(phi);
  phi = apply_diffusion(phi, diffusion);
  phi *= -1.0;
  return phi;
}

}  // namespace cvsearch
