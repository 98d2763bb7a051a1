#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace cvsearch {

using Complex = std::complex<double>;

/// Self-conjugate position lattice: m points per axis, n axes, spacing
/// sqrt(pi/m). With this spacing 2*x_j*x_k = (2*pi/m)*j*k up to separable
/// phases, so the sampled Fourier kernel is an exact unitary.
class GridSpec {
 public:
  int points() const noexcept { return m_; }
  int qunats() const noexcept { return n_; }
  double spacing() const noexcept { return dx_; }
  double length() const noexcept { return m_ * dx_; }

  /// coordinate(j) = (j - m/2) * dx; coordinate(m/2) == 0.
  double coordinate(int j) const noexcept { return (j - m_ / 2) * dx_; }

  /// m^n.
  std::size_t size() const noexcept;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  friend GridSpec make_grid(int m, int n);
  GridSpec(int m, int n, double dx) : m_(m), n_(n), dx_(dx) {}

  int m_;
  int n_;
  double dx_;
};

/// Throws Error(InvalidParameter) for odd m, m < 8 or n outside {1, 2}.
GridSpec make_grid(int m, int n = 1);

/// Complex amplitudes over the grid cells, row-major with axis 0 slowest.
class Wavefunction {
 public:
  explicit Wavefunction(const GridSpec& grid);
  Wavefunction(const GridSpec& grid, std::vector<Complex> amplitudes);

  const GridSpec& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return amplitudes_.size(); }

  std::span<const Complex> amplitudes() const noexcept { return amplitudes_; }
  std::span<Complex> amplitudes() noexcept { return amplitudes_; }

  Complex operator[](std::size_t i) const { return amplitudes_[i]; }
  Complex& operator[](std::size_t i) { return amplitudes_[i]; }

  double norm() const;
  double norm_squared() const;
  bool is_normalized(double tol = 1e-12) const;
  bool is_finite() const;

  /// Returns a copy scaled to unit norm; throws on a zero vector.
  Wavefunction normalized() const;

  Wavefunction& operator*=(Complex s);
  Wavefunction& operator+=(const Wavefunction& other);
  Wavefunction& operator-=(const Wavefunction& other);

 private:
  GridSpec grid_;
  std::vector<Complex> amplitudes_;
};

Wavefunction operator*(Complex s, Wavefunction psi);
Wavefunction operator+(Wavefunction a, const Wavefunction& b);
Wavefunction operator-(Wavefunction a, const Wavefunction& b);

/// <a|b>, conjugate-linear in the first argument.
Complex inner(const Wavefunction& a, const Wavefunction& b);

/// Largest elementwise |a_i - b_i|.
double max_abs_difference(const Wavefunction& a, const Wavefunction& b);

/// One axis of a search window: [center - width/2, center + width/2).
struct Interval {
  double center = 0.0;
  double width = 0.0;
};

/// Product window, one interval per axis.
struct Region {
  std::vector<Interval> axes;

  /// Same interval on each of `n` axes.
  static Region cube(double center, double width, int n = 1);
};

/// Sorted indices per axis with coordinate in the half-open window.
std::vector<std::vector<int>> region_index_set(const GridSpec& grid,
                                               const Region& region);

/// Flat (row-major) indices of the product window, ascending.
std::vector<std::size_t> region_flat_indices(const GridSpec& grid,
                                             const Region& region);

/// Number of cells in the window (w).
std::size_t region_cell_count(const GridSpec& grid, const Region& region);

/// Unit vector at the cell nearest `center` on each axis (ties go to the
/// lower index).
Wavefunction delta_state(const GridSpec& grid, std::span<const double> center);

/// Sampled exp(-(x - center)^2 / (4 eps^2)) per axis, normalized.
Wavefunction gaussian_state(const GridSpec& grid,
                            std::span<const double> center, double epsilon);

/// Index of the cell nearest `x` on one axis; throws outside [-L/2, L/2).
int nearest_cell(const GridSpec& grid, double x);

}  // namespace cvsearch
