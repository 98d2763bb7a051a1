#pragma once

#include <span>

#include "cvsearch/grid.hpp"

namespace cvsearch::detail {

/// In-place centered transform along one contiguous line of length m:
///   out_k = (-1)^(m/2) (-1)^k / sqrt(m) * sum_j exp(+2 pi i k j / m) (-1)^j in_j
/// or its adjoint.
void centered_dft(std::span<Complex> line, bool adjoint);

/// Calls fn(line) for every line of psi along `axis`. Strided axes are
/// gathered into a scratch buffer and scattered back.
template <typename Fn>
void for_each_line(Wavefunction& psi, int axis, Fn&& fn);

}  // namespace cvsearch::detail

#include <vector>

template <typename Fn>
void cvsearch::detail::for_each_line(Wavefunction& psi, int axis, Fn&& fn) {
  const auto m = static_cast<std::size_t>(psi.grid().points());
  auto data = psi.amplitudes();
  if (psi.grid().qunats() == 1 || axis == 1) {
    for (std::size_t start = 0; start < data.size(); start += m) fn(data.subspan(start, m));
    return;
  }
  std::vector<Complex> scratch(m);
  for (std::size_t col = 0; col < m; ++col) {
    for (std::size_t r = 0; r < m; ++r) scratch[r] = data[r * m + col];
    fn(std::span<Complex>(scratch));
    for (std::size_t r = 0; r < m; ++r) data[r * m + col] = scratch[r];
  }
}
