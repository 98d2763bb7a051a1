#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "cvsearch/error.hpp"
#include "cvsearch/grid.hpp"

using namespace cvsearch;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected cvsearch::Error");
  return ErrorKind::InvalidParameter;
}

}  // namespace

TEST_CASE("make_grid spacing and extent") {
  const auto g = make_grid(16, 1);
  CHECK(g.spacing() == doctest::Approx(0.4431135).epsilon(1e-7));
  CHECK(g.length() == doctest::Approx(7.0898).epsilon(1e-5));
  CHECK(g.size() == 16);
  CHECK(make_grid(8, 1).coordinate(4) == 0.0);
  CHECK(make_grid(16, 2).size() == 256);
}

TEST_CASE("make_grid rejects bad parameters") {
  CHECK(kind_of([] { make_grid(9, 1); }) == ErrorKind::InvalidParameter);
  CHECK(kind_of([] { make_grid(6, 1); }) == ErrorKind::InvalidParameter);
  CHECK(kind_of([] { make_grid(16, 3); }) == ErrorKind::InvalidParameter);
  CHECK(kind_of([] { make_grid(16, 0); }) == ErrorKind::InvalidParameter);
}

constexpr double kEps = std::numeric_limits<double>::epsilon();

TEST_CASE("self-conjugacy and lattice spacing hold for every valid size") {
  for (int m = 8; m <= 4096; m += 2) {
    const auto g = make_grid(m, 1);
    CHECK(2 * g.spacing() * g.spacing() * m == doctest::Approx(2 * std::numbers::pi).epsilon(1e-15));
    CHECK(g.coordinate(m / 2) == 0.0);
    if (m % 254 == 0) {
      for (int j = 0; j + 1 < m; ++j) {
        const double scale = std::abs(g.coordinate(j + 1)) + g.spacing();
        CHECK(std::abs(g.coordinate(j + 1) - g.coordinate(j) - g.spacing()) <= 4 * kEps * scale);
      }
    }
  }
}

TEST_CASE("delta_state snaps to the nearest cell") {
  const auto g = make_grid(16, 1);
  std::vector<double> c{0.0};
  auto psi = delta_state(g, c);
  CHECK(psi[8] == Complex(1.0));
  CHECK(psi.norm_squared() == 1.0);

  c[0] = 0.4431135;
  CHECK(delta_state(g, c)[9] == Complex(1.0));

  // exact midpoint between cells 8 and 9 goes to the lower index
  c[0] = g.spacing() / 2;
  CHECK(delta_state(g, c)[8] == Complex(1.0));

  c[0] = 10.0;
  CHECK(kind_of([&] { delta_state(g, c); }) == ErrorKind::InvalidParameter);
  c[0] = g.length() / 2;  // upper edge excluded
  CHECK_THROWS_AS(delta_state(g, c), Error);
}

TEST_CASE("delta_state on two qunats is a product of axis deltas") {
  const auto g = make_grid(16, 2);
  std::vector<double> c{0.0, g.coordinate(3)};
  const auto psi = delta_state(g, c);
  CHECK(psi[8 * 16 + 3] == Complex(1.0));
  CHECK(psi.norm_squared() == 1.0);
  std::vector<double> one{0.0};
  CHECK_THROWS_AS(delta_state(g, one), Error);
}

TEST_CASE("gaussian_state examples") {
  const auto g = make_grid(64, 1);
  std::vector<double> c{0.0};

  SUBCASE("narrow width concentrates on the center cell") {
    const auto psi = gaussian_state(g, c, g.spacing() / 10);
    CHECK(std::norm(psi[32]) >= 0.999999);
    CHECK(std::abs(psi[33] / psi[32]) == doctest::Approx(std::exp(-25.0)).epsilon(1e-12));
  }
  SUBCASE("wide width flattens the interior") {
    const auto psi = gaussian_state(g, c, 1e4);
    const double ref = std::abs(psi[32]);
    for (int j = 16; j < 48; ++j) CHECK(std::abs(psi[static_cast<std::size_t>(j)]) == doctest::Approx(ref).epsilon(1e-6));
  }
  SUBCASE("rejects non-positive widths") {
    CHECK(kind_of([&] { gaussian_state(g, c, 0.0); }) == ErrorKind::InvalidParameter);
    CHECK(kind_of([&] { gaussian_state(g, c, -1.0); }) == ErrorKind::InvalidParameter);
  }
}

TEST_CASE("gaussian_state norm and mirror symmetry over a width range") {
  const auto g = make_grid(64, 1);
  const double dx = g.spacing();
  for (double scale = 0.01; scale <= 100.0; scale *= 1.7) {
    for (int center_cell : {32, 30, 40}) {
      std::vector<double> c{g.coordinate(center_cell)};
      const auto psi = gaussian_state(g, c, scale * dx);
      CHECK(std::abs(psi.norm_squared() - 1.0) <= 1e-12);
      for (int off = 1; center_cell - off >= 0 && center_cell + off < 64; ++off) {
        CHECK(std::abs(psi[static_cast<std::size_t>(center_cell - off)] -
                       psi[static_cast<std::size_t>(center_cell + off)]) <= 1e-12);
      }
    }
  }
}

TEST_CASE("delta_state is the narrow limit of gaussian_state") {
  for (int m : {16, 64, 256}) {
    const auto g = make_grid(m, 1);
    for (int cell : {m / 2, m / 2 + 3, 2}) {
      std::vector<double> c{g.coordinate(cell)};
      const auto overlap = std::abs(inner(delta_state(g, c), gaussian_state(g, c, g.spacing() / 10)));
      CHECK(overlap >= 0.999999);
    }
  }
}

TEST_CASE("region_index_set resolves half-open windows") {
  const auto g = make_grid(16, 1);
  const double dx = g.spacing();
  CHECK(region_index_set(g, Region::cube(0.0, dx))[0] == std::vector<int>{8});
  CHECK(region_index_set(g, Region::cube(0.0, 2 * dx))[0] == std::vector<int>{7, 8});
  CHECK(region_index_set(g, Region::cube(0.0, 4 * dx))[0] == std::vector<int>{6, 7, 8, 9});
  CHECK(kind_of([&] { region_index_set(g, Region::cube(0.0, dx / 2)); }) == ErrorKind::EmptyWindow);
  // whole grid and clipping at the edges
  CHECK(region_index_set(g, Region::cube(0.0, g.length()))[0].size() == 16);
  CHECK(region_index_set(g, Region::cube(g.length() / 2, 2 * dx))[0] == std::vector<int>{15});
  CHECK(kind_of([&] { region_index_set(g, Region::cube(100.0, dx)); }) == ErrorKind::EmptyWindow);
}

TEST_CASE("region flat indices form the product window") {
  const auto g = make_grid(16, 2);
  const double dx = g.spacing();
  Region r{{Interval{0.0, 2 * dx}, Interval{g.coordinate(3), dx}}};
  const auto flat = region_flat_indices(g, r);
  CHECK(flat == std::vector<std::size_t>{7 * 16 + 3, 8 * 16 + 3});
  CHECK(region_cell_count(g, r) == 2);
  CHECK_THROWS_AS(region_index_set(g, Region::cube(0.0, dx, 1)), Error);
}
