#include "cvsearch/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "cvsearch/error.hpp"

namespace cvsearch {

namespace {

// Window edges that land on a cell coordinate up to rounding are snapped
// onto it before the half-open test.
constexpr double kEdgeSnap = 1e-9;

void require_axes(const GridSpec& grid, std::size_t count, const char* what) {
  if (count != static_cast<std::size_t>(grid.qunats())) {
    throw Error(ErrorKind::InvalidParameter,
                std::string(what) + " has " + std::to_string(count) +
                    " axes, grid has " + std::to_string(grid.qunats()));
  }
}

}  // namespace

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidParameter: return "invalid-parameter";
    case ErrorKind::EmptyWindow: return "empty-window";
    case ErrorKind::ConstraintViolation: return "constraint-violation";
    case ErrorKind::DegenerateInstance: return "degenerate-instance";
    case ErrorKind::NumericalRank: return "numerical-rank";
  }
  return "unknown";
}

std::size_t GridSpec::size() const noexcept {
  std::size_t total = 1;
  for (int a = 0; a < n_; ++a) total *= static_cast<std::size_t>(m_);
  return total;
}

GridSpec make_grid(int m, int n) {
  if (m < 8) {
    throw Error(ErrorKind::InvalidParameter,
                "grid size m=" + std::to_string(m) + " is below the minimum 8");
  }
  if (m % 2 != 0) {
    throw Error(ErrorKind::InvalidParameter,
                "grid size m=" + std::to_string(m) + " must be even");
  }
  if (n != 1 && n != 2) {
    throw Error(ErrorKind::InvalidParameter,
                "qunat count n=" + std::to_string(n) + " must be 1 or 2");
  }
  return GridSpec(m, n, std::sqrt(std::numbers::pi / m));
}

// ---------------------------------------------------------------------------

Wavefunction::Wavefunction(const GridSpec& grid)
    : grid_(grid), amplitudes_(grid.size(), Complex{}) {}

Wavefunction::Wavefunction(const GridSpec& grid, std::vector<Complex> amplitudes)
    : grid_(grid), amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() != grid_.size()) {
    throw Error(ErrorKind::InvalidParameter,
                "amplitude count " + std::to_string(amplitudes_.size()) +
                    " does not match grid size " + std::to_string(grid_.size()));
  }
}

double Wavefunction::norm_squared() const {
  double s = 0.0;
  for (const auto& a : amplitudes_) s += std::norm(a);
  return s;
}

double Wavefunction::norm() const { return std::sqrt(norm_squared()); }

bool Wavefunction::is_normalized(double tol) const {
  return std::abs(norm_squared() - 1.0) <= tol;
}

bool Wavefunction::is_finite() const {
  return std::all_of(amplitudes_.begin(), amplitudes_.end(), [](Complex a) {
    return std::isfinite(a.real()) && std::isfinite(a.imag());
  });
}

Wavefunction Wavefunction::normalized() const {
  const double n = norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw Error(ErrorKind::InvalidParameter, "cannot normalize a zero state");
  }
  Wavefunction out = *this;
  for (auto& a : out.amplitudes_) a /= n;
  return out;
}

Wavefunction& Wavefunction::operator*=(Complex s) {
  for (auto& a : amplitudes_) a *= s;
  return *this;
}

Wavefunction& Wavefunction::operator+=(const Wavefunction& other) {
  for (std::size_t i = 0; i < amplitudes_.size(); ++i) amplitudes_[i] += other.amplitudes_[i];
  return *this;
}

Wavefunction& Wavefunction::operator-=(const Wavefunction& other) {
  for (std::size_t i = 0; i < amplitudes_.size(); ++i) amplitudes_[i] -= other.amplitudes_[i];
  return *this;
}

Wavefunction operator*(Complex s, Wavefunction psi) { return psi *= s; }
Wavefunction operator+(Wavefunction a, const Wavefunction& b) { return a += b; }
Wavefunction operator-(Wavefunction a, const Wavefunction& b) { return a -= b; }

Complex inner(const Wavefunction& a, const Wavefunction& b) {
  Complex s{};
  const auto x = a.amplitudes();
  const auto y = b.amplitudes();
  for (std::size_t i = 0; i < x.size(); ++i) s += std::conj(x[i]) * y[i];
  return s;
}

double max_abs_difference(const Wavefunction& a, const Wavefunction& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

Region Region::cube(double center, double width, int n) {
  return Region{std::vector<Interval>(static_cast<std::size_t>(n), Interval{center, width})};
}

// ---------------------------------------------------------------------------

std::vector<std::vector<int>> region_index_set(const GridSpec& grid,
                                               const Region& region) {
  require_axes(grid, region.axes.size(), "region");
  const int m = grid.points();
  const double dx = grid.spacing();
  std::vector<std::vector<int>> out;
  out.reserve(region.axes.size());
  for (const auto& iv : region.axes) {
    if (!std::isfinite(iv.center) || !std::isfinite(iv.width) || iv.width <= 0.0) {
      throw Error(ErrorKind::InvalidParameter, "window needs a finite center and positive width");
    }
    if (iv.width < dx * (1.0 - kEdgeSnap)) {
      throw Error(ErrorKind::EmptyWindow,
                  "window width " + std::to_string(iv.width) +
                      " is narrower than one cell (dx=" + std::to_string(dx) + ")");
    }
    const double lo = (iv.center - iv.width / 2) / dx + m / 2;
    const double hi = (iv.center + iv.width / 2) / dx + m / 2;
    const auto first = static_cast<long long>(std::ceil(lo - kEdgeSnap));
    const auto last = static_cast<long long>(std::ceil(hi - kEdgeSnap)) - 1;
    std::vector<int> idx;
    for (long long j = std::max(first, 0LL); j <= std::min(last, static_cast<long long>(m - 1)); ++j) {
      idx.push_back(static_cast<int>(j));
    }
    if (idx.empty()) {
      throw Error(ErrorKind::EmptyWindow,
                  "window centered at " + std::to_string(iv.center) + " contains no grid cell");
    }
    out.push_back(std::move(idx));
  }
  return out;
}

std::vector<std::size_t> region_flat_indices(const GridSpec& grid,
                                             const Region& region) {
  const auto axes = region_index_set(grid, region);
  const auto m = static_cast<std::size_t>(grid.points());
  std::vector<std::size_t> flat;
  if (axes.size() == 1) {
    for (int j : axes[0]) flat.push_back(static_cast<std::size_t>(j));
  } else {
    for (int i : axes[0]) {
      for (int j : axes[1]) flat.push_back(static_cast<std::size_t>(i) * m + static_cast<std::size_t>(j));
    }
  }
  return flat;
}

std::size_t region_cell_count(const GridSpec& grid, const Region& region) {
  std::size_t w = 1;
  for (const auto& axis : region_index_set(grid, region)) w *= axis.size();
  return w;
}

int nearest_cell(const GridSpec& grid, double x) {
  const double half = grid.length() / 2;
  if (!std::isfinite(x) || x < -half || x >= half) {
    throw Error(ErrorKind::InvalidParameter,
                "position " + std::to_string(x) + " lies outside the grid [" +
                    std::to_string(-half) + ", " + std::to_string(half) + ")");
  }
  const double t = x / grid.spacing() + grid.points() / 2;
  const int j = static_cast<int>(std::ceil(t - 0.5));
  return std::clamp(j, 0, grid.points() - 1);
}

Wavefunction delta_state(const GridSpec& grid, std::span<const double> center) {
  require_axes(grid, center.size(), "center");
  std::size_t flat = 0;
  for (double c : center) {
    flat = flat * static_cast<std::size_t>(grid.points()) +
           static_cast<std::size_t>(nearest_cell(grid, c));
  }
  Wavefunction psi(grid);
  psi[flat] = 1.0;
  return psi;
}

Wavefunction gaussian_state(const GridSpec& grid, std::span<const double> center,
                            double epsilon) {
  require_axes(grid, center.size(), "center");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw Error(ErrorKind::InvalidParameter,
                "gaussian width epsilon=" + std::to_string(epsilon) + " must be positive");
  }
  for (double c : center) nearest_cell(grid, c);  // range check

  const int m = grid.points();
  std::vector<std::vector<double>> profile;
  for (double c : center) {
    std::vector<double> p(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) {
      const double u = grid.coordinate(j) - c;
      p[static_cast<std::size_t>(j)] = std::exp(-u * u / (4 * epsilon * epsilon));
    }
    profile.push_back(std::move(p));
  }

  Wavefunction psi(grid);
  if (profile.size() == 1) {
    for (int j = 0; j < m; ++j) psi[static_cast<std::size_t>(j)] = profile[0][static_cast<std::size_t>(j)];
  } else {
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        psi[static_cast<std::size_t>(i * m + j)] =
            profile[0][static_cast<std::size_t>(i)] * profile[1][static_cast<std::size_t>(j)];
      }
    }
  }
  // Very narrow widths centered off-grid can underflow every sample.
  if (psi.norm_squared() == 0.0) {
    throw Error(ErrorKind::InvalidParameter,
                "gaussian width epsilon=" + std::to_string(epsilon) + " underflows on this grid");
  }
  return psi.normalized();
}

}  // namespace cvsearch
