#include "fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

namespace cvsearch::detail {

namespace {

// The FFTW planner is not thread-safe; fftw_execute_dft is. Plans are made
// once per (length, direction) under a lock and live for the process.
class PlanCache {
 public:
  fftw_plan get(int n, int sign) {
    std::lock_guard lock(mutex_);
    auto key = std::make_pair(n, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    std::vector<Complex> probe(static_cast<std::size_t>(n));
    auto* buf = reinterpret_cast<fftw_complex*>(probe.data());
    // FFTW_ESTIMATE keeps the chosen algorithm, and hence the output bits,
    // independent of timing measurements.
    fftw_plan plan = fftw_plan_dft_1d(n, buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<int, int>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

}  // namespace

void centered_dft(std::span<Complex> line, bool adjoint) {
  const int m = static_cast<int>(line.size());
  // exp(i pi m / 2) is real for even m; the same sign appears in the adjoint.
  const double global = (m / 2) % 2 == 0 ? 1.0 : -1.0;
  const double scale = global / std::sqrt(static_cast<double>(m));

  for (std::size_t j = 1; j < line.size(); j += 2) line[j] = -line[j];
  fftw_plan plan = plan_cache().get(m, adjoint ? FFTW_FORWARD : FFTW_BACKWARD);
  auto* buf = reinterpret_cast<fftw_complex*>(line.data());
  fftw_execute_dft(plan, buf, buf);
  for (std::size_t k = 0; k < line.size(); ++k) {
    line[k] *= (k % 2 == 0) ? scale : -scale;
  }
}

}  // namespace cvsearch::detail
