#include "cvsearch/reference.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "cvsearch/error.hpp"

namespace cvsearch::reference {

namespace {

// Phases reach ~pi*m/2 at the grid corners; evaluating them in extended
// precision keeps the entries accurate to double rounding.
using Wide = long double;

constexpr Wide kPiWide = std::numbers::pi_v<long double>;

Wide wide_coordinate(const GridSpec& grid, int j) {
  return static_cast<Wide>(j - grid.points() / 2) *
         std::sqrt(kPiWide / static_cast<Wide>(grid.points()));
}

Complex unit_phase(Wide phase) {
  const Wide reduced = std::fmod(phase, 2 * kPiWide);
  return {static_cast<double>(std::cos(reduced)), static_cast<double>(std::sin(reduced))};
}

void guard_axis(const GridSpec& grid) {
  if (grid.points() > kMaxDenseAxis) {
    throw Error(ErrorKind::InvalidParameter,
                "dense transforms are limited to m <= " + std::to_string(kMaxDenseAxis));
  }
}

void guard_iterate(const GridSpec& grid) {
  const bool ok = grid.qunats() == 1 ? grid.points() <= 1024 : grid.points() <= 64;
  if (!ok) {
    throw Error(ErrorKind::InvalidParameter,
                "dense search operator is limited to m <= 1024 (n=1) or m <= 64 (n=2)");
  }
}

}  // namespace

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::FourierKernel: return "fourier-kernel";
    case Provenance::GftKernelRaw: return "gft-kernel-raw";
    case Provenance::Unitarized: return "unitarized";
  }
  return "unknown";
}

DenseOperator dense_fourier_matrix(const GridSpec& grid) {
  guard_axis(grid);
  const int m = grid.points();
  const double scale = grid.spacing() / std::sqrt(std::numbers::pi);
  DenseOperator op{Eigen::MatrixXcd(m, m), Provenance::FourierKernel};
  for (int k = 0; k < m; ++k) {
    const Wide xk = wide_coordinate(grid, k);
    for (int j = 0; j < m; ++j) {
      op.matrix(k, j) = scale * unit_phase(2 * xk * wide_coordinate(grid, j));
    }
  }
  return op;
}

DenseOperator dense_gft_kernel(const GridSpec& grid, double theta) {
  const double lo = std::asin(1.0 / std::numbers::pi);
  if (!std::isfinite(theta) || theta <= lo || theta >= std::numbers::pi - lo) {
    throw Error(ErrorKind::ConstraintViolation,
                "theta=" + std::to_string(theta) + " violates sin(theta) > 1/pi");
  }
  guard_axis(grid);
  const int m = grid.points();
  const Wide s = std::sin(static_cast<Wide>(theta));
  const Wide c = std::cos(static_cast<Wide>(theta));
  // sqrt(i) on the principal branch is exp(i pi/4).
  const Complex prefactor = std::polar(1.0, std::numbers::pi / 4) *
                            (grid.spacing() / std::sqrt(std::numbers::pi * static_cast<double>(s)));
  DenseOperator op{Eigen::MatrixXcd(m, m), Provenance::GftKernelRaw};
  for (int k = 0; k < m; ++k) {
    const Wide xk = wide_coordinate(grid, k);
    for (int j = 0; j < m; ++j) {
      const Wide xj = wide_coordinate(grid, j);
      const Wide phase = -((xk * xk + xj * xj) * c - 2 * xk * xj) / s;
      op.matrix(k, j) = prefactor * unit_phase(phase);
    }
  }
  return op;
}

DenseOperator nearest_unitary(const DenseOperator& k, RankPolicy policy) {
  if (k.matrix.rows() != k.matrix.cols() || k.matrix.rows() == 0) {
    throw Error(ErrorKind::InvalidParameter, "polar factor needs a non-empty square matrix");
  }
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(k.matrix, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sigma = svd.singularValues();
  const double largest = sigma(0);
  const double smallest = sigma(sigma.size() - 1);
  if (!(largest > 0.0) || (policy == RankPolicy::RequireFull && smallest <= largest * 1e-12)) {
    throw Error(ErrorKind::NumericalRank,
                "matrix is numerically rank deficient (sigma_min/sigma_max = " +
                    std::to_string(largest > 0.0 ? smallest / largest : 0.0) + ")");
  }
  return DenseOperator{svd.matrixU() * svd.matrixV().adjoint(), Provenance::Unitarized};
}

double unitarity_defect(const Eigen::MatrixXcd& k) {
  const Eigen::MatrixXcd gram = k.adjoint() * k;
  return (gram - Eigen::MatrixXcd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

Eigen::MatrixXcd full_matrix(const GridSpec& grid, const Eigen::MatrixXcd& axis) {
  if (grid.qunats() == 1) return axis;
  const auto m = axis.rows();
  Eigen::MatrixXcd full(m * m, m * m);
  for (Eigen::Index a = 0; a < m; ++a) {
    for (Eigen::Index c = 0; c < m; ++c) {
      full.block(a * m, c * m, m, m) = axis(a, c) * axis;
    }
  }
  return full;
}

Wavefunction dense_apply(const DenseOperator& op, const Wavefunction& psi) {
  const auto& k = op.matrix;
  const auto m = static_cast<std::size_t>(psi.grid().points());
  if (static_cast<std::size_t>(k.rows()) != m) {
    throw Error(ErrorKind::InvalidParameter, "operator size does not match the grid");
  }
  Wavefunction out(psi.grid());
  if (psi.grid().qunats() == 1) {
    for (std::size_t r = 0; r < m; ++r) {
      Complex acc{};
      for (std::size_t c = 0; c < m; ++c) acc += k(r, c) * psi[c];
      out[r] = acc;
    }
    return out;
  }
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      Complex acc{};
      for (std::size_t c = 0; c < m; ++c) {
        for (std::size_t d = 0; d < m; ++d) acc += k(a, c) * k(b, d) * psi[c * m + d];
      }
      out[a * m + b] = acc;
    }
  }
  return out;
}

Eigen::MatrixXcd dense_search_matrix(const GridSpec& grid, const Region& target,
                                     const Diffusion& diffusion, const DenseOperator& k) {
  guard_iterate(grid);
  const auto dim = static_cast<Eigen::Index>(grid.size());
  const Eigen::MatrixXcd kf = full_matrix(grid, k.matrix);

  Eigen::VectorXcd oracle = Eigen::VectorXcd::Ones(dim);
  for (auto i : region_flat_indices(grid, target)) oracle(static_cast<Eigen::Index>(i)) = -1.0;

  Eigen::MatrixXcd d = Eigen::MatrixXcd::Identity(dim, dim);
  if (const auto* iv = std::get_if<IntervalDiffusion>(&diffusion)) {
    for (auto i : region_flat_indices(grid, iv->window)) {
      d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = -1.0;
    }
  } else {
    const auto& s = std::get<StateDiffusion>(diffusion).state;
    if (!s.is_normalized()) {
      throw Error(ErrorKind::InvalidParameter, "reflection state must be normalized");
    }
    Eigen::Map<const Eigen::VectorXcd> sv(s.amplitudes().data(), dim);
    d -= 2.0 * sv * sv.adjoint();
  }
  const Eigen::MatrixXcd inner_part = kf.adjoint() * oracle.asDiagonal() * kf;
  return -(d * inner_part);
}

Wavefunction dense_iterate(const Wavefunction& psi, const Region& target,
                           const Diffusion& diffusion, const DenseOperator& k) {
  const auto c = dense_search_matrix(psi.grid(), target, diffusion, k);
  Wavefunction out(psi.grid());
  Eigen::Map<const Eigen::VectorXcd> in(psi.amplitudes().data(), c.cols());
  Eigen::Map<Eigen::VectorXcd>(out.amplitudes().data(), c.rows()) = c * in;
  return out;
}

}  // namespace cvsearch::reference
