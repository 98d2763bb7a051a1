#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cvsearch/grid.hpp"
#include "cvsearch/metrics.hpp"
#include "cvsearch/operators.hpp"

namespace cvsearch {

/// A position-unit length that may be given as a multiple of the grid
/// spacing ("4dx") and resolved once the grid is known.
struct Quantity {
  double value = 0.0;
  bool in_cells = false;

  static Quantity absolute(double v) { return {v, false}; }
  static Quantity cells(double k) { return {k, true}; }

  double resolve(const GridSpec& grid) const { return in_cells ? value * grid.spacing() : value; }

  /// Accepts "0.25", "4dx", "dx", "-2.5dx". Throws InvalidParameter.
  static Quantity parse(std::string_view text);
  std::string to_string() const;

  friend bool operator==(const Quantity&, const Quantity&) = default;
};

enum class InitialKind { Delta, Gaussian };
enum class DiffusionMode { Auto, Interval, State };

std::string_view to_string(InitialKind kind);
std::string_view to_string(DiffusionMode mode);

struct InitialSpec {
  InitialKind kind = InitialKind::Delta;
  std::vector<Quantity> center{Quantity::absolute(0.0)};  // one per axis
  std::optional<Quantity> epsilon;                         // gaussian only

  friend bool operator==(const InitialSpec&, const InitialSpec&) = default;
};

struct WindowSpec {
  std::vector<Quantity> center{Quantity::absolute(0.0)};
  Quantity width = Quantity::cells(1.0);

  Region resolve(const GridSpec& grid) const;

  friend bool operator==(const WindowSpec&, const WindowSpec&) = default;
};

struct DiffusionSpec {
  // Auto: about the prepared state for gaussian inputs, interval otherwise.
  DiffusionMode mode = DiffusionMode::Auto;
  Quantity width = Quantity::cells(1.0);  // interval window, centered on the initial center

  friend bool operator==(const DiffusionSpec&, const DiffusionSpec&) = default;
};

struct SearchConfig {
  int grid_size = 64;
  int qunats = 1;
  double theta = kHalfPi;
  InitialSpec initial;
  WindowSpec target;
  DiffusionSpec diffusion;
  std::optional<int> max_iterations;  // default max(2 k*, 50)
  std::uint64_t seed = 0;

  friend bool operator==(const SearchConfig&, const SearchConfig&) = default;
};

struct TraceRow {
  int k = 0;
  double p = 0.0;     // success probability
  double d = 0.0;     // Fubini-Study distance from the initial state
  double leak = 0.0;  // weight outside the search plane

  friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

struct IterationTrace {
  std::vector<TraceRow> rows;  // k = 0 .. max_iterations
  SearchAnalytics analytics;
  int k_best = 0;  // argmax of p over k <= max(2 k*, 1), smallest k on ties
  double p_best = 0.0;
  int max_iterations = 0;
  DiffusionMode diffusion = DiffusionMode::Interval;  // resolved
  double gft_defect = 0.0;
};

/// Everything a run needs, resolved against the grid.
struct PreparedSearch {
  GridSpec grid;
  FourierOperator transform;
  Wavefunction initial;
  Region target;
  Diffusion diffusion;
  DiffusionMode mode;

  Wavefunction step(const Wavefunction& psi) const {
    return grover_iterate(psi, target, diffusion, transform);
  }
};

PreparedSearch prepare_search(const SearchConfig& config);

IterationTrace run_search(const SearchConfig& config);

enum class SweepAxis { GridSize, Theta, Epsilon };

std::string_view to_string(SweepAxis axis);
SweepAxis parse_sweep_axis(std::string_view text);

struct SweepPlan {
  SweepAxis vary = SweepAxis::GridSize;
  std::vector<Quantity> values;
  SearchConfig base;
};

struct SweepRow {
  std::string value;  // as given
  double p0 = 0.0;
  double alpha = 0.0;
  int k_best = 0;
  double p_best = 0.0;
  int k_star_rotation = 0;
  double k_star_ratio = 0.0;
  double gft_defect = 0.0;
  std::optional<std::string> error;
};

/// Rows in input order. Rows are computed concurrently when `parallel`;
/// the result is identical either way.
std::vector<SweepRow> run_sweep(const SweepPlan& plan, bool parallel = true);

/// Samples a cell from |F psi|^2 and returns its per-axis coordinates.
std::vector<double> measure_position(const Wavefunction& psi, const FourierOperator& f,
                                     std::uint64_t seed);

}  // namespace cvsearch
