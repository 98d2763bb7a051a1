#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>

#include "cvsearch/error.hpp"
#include "cvsearch/metrics.hpp"
#include "cvsearch/operators.hpp"
#include "cvsearch/reference.hpp"
#include "test_support.hpp"

using namespace cvsearch;
using namespace cvsearch::reference;
using cvsearch::testing::random_state;

TEST_CASE("dense Fourier matrix entries and unitarity") {
  const auto g8 = make_grid(8, 1);
  const auto k8 = dense_fourier_matrix(g8);
  CHECK(k8.provenance == Provenance::FourierKernel);
  for (Eigen::Index i = 0; i < 8; ++i) {
    for (Eigen::Index j = 0; j < 8; ++j) CHECK(std::abs(k8.matrix(i, j)) == doctest::Approx(0.353553).epsilon(1e-6));
  }
  for (int m : {8, 16, 64, 256, 1024}) {
    CHECK(unitarity_defect(dense_fourier_matrix(make_grid(m, 1)).matrix) < 1e-13);
  }
}

TEST_CASE("dense GFT kernel") {
  SUBCASE("pi/2 is exp(i pi/4) times the Fourier matrix") {
    const auto g = make_grid(256, 1);
    const Eigen::MatrixXcd diff = dense_gft_kernel(g, kHalfPi).matrix -
                                  std::polar(1.0, std::numbers::pi / 4) * dense_fourier_matrix(g).matrix;
    CHECK(diff.cwiseAbs().maxCoeff() < 1e-13);
  }
  SUBCASE("off pi/2 the sampled kernel is not unitary") {
    // Every column has squared norm m * dx^2 / (pi sin t) = 1/sin t, which
    // bounds the defect from below.
    for (int m : {64, 256}) {
      const auto g = make_grid(m, 1);
      for (double theta : {std::numbers::pi / 3, 2 * std::numbers::pi / 3}) {
        const auto k = dense_gft_kernel(g, theta);
        CHECK(k.provenance == Provenance::GftKernelRaw);
        const Eigen::MatrixXcd gram = k.matrix.adjoint() * k.matrix;
        for (Eigen::Index j = 0; j < m; ++j) {
          CHECK(gram(j, j).real() == doctest::Approx(1.0 / std::sin(theta)).epsilon(1e-12));
        }
        const double defect = unitarity_defect(k.matrix);
        CHECK(defect >= 1.0 / std::sin(theta) - 1.0 - 1e-12);
        CHECK(std::isfinite(defect));
      }
    }
  }
  SUBCASE("angle constraint") {
    const auto g = make_grid(64, 1);
    try {
      dense_gft_kernel(g, 0.2);
      FAIL("expected constraint violation");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::ConstraintViolation);
    }
  }
}

TEST_CASE("nearest_unitary") {
  const auto g = make_grid(64, 1);
  SUBCASE("unitary input is returned") {
    const auto k = dense_fourier_matrix(g);
    const auto u = nearest_unitary(k);
    CHECK(u.provenance == Provenance::Unitarized);
    CHECK((u.matrix - k.matrix).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("scaled identity maps to identity") {
    DenseOperator k{2.0 * Eigen::MatrixXcd::Identity(16, 16), Provenance::GftKernelRaw};
    CHECK((nearest_unitary(k).matrix - Eigen::MatrixXcd::Identity(16, 16)).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("rank deficient input") {
    DenseOperator k{Eigen::MatrixXcd::Zero(4, 4), Provenance::GftKernelRaw};
    k.matrix(0, 0) = 1.0;
    try {
      nearest_unitary(k);
      FAIL("expected numerical-rank error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::NumericalRank);
    }
    CHECK(unitarity_defect(nearest_unitary(k, RankPolicy::Complete).matrix) < 1e-12);
  }
  SUBCASE("minimizes the Frobenius distance") {
    const auto k = dense_gft_kernel(g, std::numbers::pi / 3);
    const auto u = nearest_unitary(k, RankPolicy::Complete);
    const double best = (u.matrix - k.matrix).norm();
    // Any other unitary, e.g. u times a diagonal phase, is farther.
    for (int t = 1; t <= 5; ++t) {
      Eigen::VectorXcd phases(64);
      for (Eigen::Index j = 0; j < 64; ++j) phases(j) = std::polar(1.0, 0.05 * t * static_cast<double>(j % 7));
      CHECK((u.matrix * phases.asDiagonal().toDenseMatrix() - k.matrix).norm() >= best - 1e-12);
    }
  }
  SUBCASE("output is unitary for allowed angles") {
    for (int m : {16, 64, 128, 512}) {
      const auto gm = make_grid(m, 1);
      for (double theta : {0.35, 0.6, std::numbers::pi / 4, 1.2, kHalfPi, 2.2, 2.8}) {
        const auto u = nearest_unitary(dense_gft_kernel(gm, theta), RankPolicy::Complete);
        CHECK(unitarity_defect(u.matrix) < 1e-12);
      }
    }
  }
}

TEST_CASE("dense iterate agrees with the fast iterate") {
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int m = 8 + 2 * static_cast<int>(rng() % 125);  // 8 .. 256
    const auto g = make_grid(m, 1);
    const double dx = g.spacing();
    const int target_cell = static_cast<int>(rng() % static_cast<unsigned>(m));
    const int width = 1 + static_cast<int>(rng() % 3);
    const auto target = Region::cube(g.coordinate(target_cell), width * dx);
    const auto psi = random_state(g, rng());
    Diffusion diffusion = IntervalDiffusion{Region::cube(g.coordinate(static_cast<int>(rng() % static_cast<unsigned>(m))), dx)};
    if (trial % 2 == 1) diffusion = StateDiffusion{random_state(g, rng())};

    const bool use_gft = trial % 5 == 4;
    const double theta = use_gft ? 1.1 : kHalfPi;
    const auto f = use_gft ? build_gft(g, theta) : FourierOperator::exact(g);
    const DenseOperator k = use_gft ? DenseOperator{*f.axis_matrix(), Provenance::Unitarized}
                                    : dense_fourier_matrix(g);
    const auto fast = grover_iterate(psi, target, diffusion, f);
    const auto dense = dense_iterate(psi, target, diffusion, k);
    worst = std::max(worst, max_abs_difference(fast, dense));
  }
  CHECK(worst < 1e-11);

  SUBCASE("two qunats") {
    const auto g = make_grid(16, 2);
    const auto target = Region::cube(0.0, g.spacing(), 2);
    const Diffusion diffusion = StateDiffusion{random_state(g, 1)};
    const auto psi = random_state(g, 2);
    const auto fast = grover_iterate(psi, target, diffusion, FourierOperator::exact(g));
    CHECK(max_abs_difference(fast, dense_iterate(psi, target, diffusion, dense_fourier_matrix(g))) < 1e-11);
  }
  SUBCASE("memory guard") {
    const auto g = make_grid(2048, 1);
    CHECK_THROWS_AS(dense_iterate(random_state(g, 0), Region::cube(0.0, g.spacing()),
                                  StateDiffusion{random_state(g, 1)}, dense_fourier_matrix(make_grid(8, 1))),
                    Error);
  }
}

TEST_CASE("restricted to the search plane the iterate rotates by 2 alpha") {
  const auto g = make_grid(64, 1);
  const auto f = FourierOperator::exact(g);
  const auto target = Region::cube(0.0, g.spacing());
  Wavefunction psi0(g);
  psi0[37] = 1.0;
  const Diffusion diffusion = StateDiffusion{psi0};
  const auto c = dense_search_matrix(g, target, diffusion, dense_fourier_matrix(g));

  const auto plane = search_plane(psi0, target, f);
  Eigen::MatrixXcd basis(64, 2);
  for (Eigen::Index i = 0; i < 64; ++i) {
    basis(i, 0) = plane.marked[static_cast<std::size_t>(i)];
    basis(i, 1) = plane.unmarked[static_cast<std::size_t>(i)];
  }
  const Eigen::MatrixXcd restricted = basis.adjoint() * c * basis;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(restricted);
  const double alpha = std::asin(1.0 / 8);
  const Complex up = std::polar(1.0, 2 * alpha);
  const Complex down = std::conj(up);
  const auto ev = es.eigenvalues();
  const bool matched = (std::abs(ev(0) - up) < 1e-10 && std::abs(ev(1) - down) < 1e-10) ||
                       (std::abs(ev(0) - down) < 1e-10 && std::abs(ev(1) - up) < 1e-10);
  CHECK(matched);

  // <psi0|C psi0> = 1 - 2/64
  const auto cpsi = dense_iterate(psi0, target, diffusion, dense_fourier_matrix(g));
  CHECK(inner(psi0, cpsi).real() == doctest::Approx(0.96875).epsilon(1e-13));
}
