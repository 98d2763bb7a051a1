#pragma once

// Dense, slow, direct-transcription transforms. These back GFT construction
// and serve as independent oracles for the factored fast path.

#include <Eigen/Dense>
#include <string_view>

#include "cvsearch/grid.hpp"
#include "cvsearch/operators.hpp"

namespace cvsearch::reference {

enum class Provenance { FourierKernel, GftKernelRaw, Unitarized };

std::string_view to_string(Provenance p);

/// One m x m matrix applied identically along every axis.
struct DenseOperator {
  Eigen::MatrixXcd matrix;
  Provenance provenance = Provenance::FourierKernel;
};

/// Largest dense transform built here (268 MB at m = 4096).
inline constexpr int kMaxDenseAxis = 4096;

/// (1/sqrt(m)) * exp(2i x_k x_j).
DenseOperator dense_fourier_matrix(const GridSpec& grid);

/// sqrt(i/(pi sin t)) * exp(-(i/sin t)((x_k^2 + x_j^2) cos t - 2 x_k x_j)) * dx,
/// principal branch of sqrt(i). Throws ConstraintViolation if sin t <= 1/pi.
DenseOperator dense_gft_kernel(const GridSpec& grid, double theta);

enum class RankPolicy {
  RequireFull,  // throw NumericalRank for a numerically singular input
  Complete,     // keep W V^H; the null space is paired by the SVD's own basis
};

/// Polar factor W V^H of K = W S V^H, the unitary closest to K in the
/// Frobenius norm. Sampled chirp kernels away from theta = pi/2 are
/// numerically singular, so GFT construction uses RankPolicy::Complete.
DenseOperator nearest_unitary(const DenseOperator& k,
                              RankPolicy policy = RankPolicy::RequireFull);

/// max |K^H K - I|.
double unitarity_defect(const Eigen::MatrixXcd& k);

/// Materialized m^n x m^n matrix (Kronecker power of the per-axis matrix).
Eigen::MatrixXcd full_matrix(const GridSpec& grid, const Eigen::MatrixXcd& axis);

/// Applies the full matrix with an explicit double loop over all entries.
Wavefunction dense_apply(const DenseOperator& op, const Wavefunction& psi);

/// -D K^H I_target K psi with every factor an explicit matrix. Limited to
/// m <= 1024 for one qunat and m <= 64 for two.
Wavefunction dense_iterate(const Wavefunction& psi, const Region& target,
                           const Diffusion& diffusion, const DenseOperator& k);

/// The same compound operator as a matrix.
Eigen::MatrixXcd dense_search_matrix(const GridSpec& grid, const Region& target,
                                     const Diffusion& diffusion,
                                     const DenseOperator& k);

}  // namespace cvsearch::reference
