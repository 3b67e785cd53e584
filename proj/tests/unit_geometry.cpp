#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "curvflow/geometry.hpp"
#include "oracles.hpp"

using namespace curvflow;
using namespace curvflow::geometry;
using curvflow::symfun::CurvatureSpec;
using curvflow::symfun::Lambda;
using curvflow::symfun::make_gauss_power;
using curvflow::symfun::make_power_mean;

namespace {

GraphState state_from(const std::shared_ptr<const GraphGrid>& grid,
                      const std::function<double(double, double)>& f, double t = 0.0) {
  std::vector<double> w(grid->size(), 0.0);
  for (int j = 0; j < grid->ny; ++j) {
    for (int i = 0; i < grid->nx; ++i) {
      w[static_cast<std::size_t>(grid->idx(i, j))] = f(grid->x(i), grid->y(j));
    }
  }
  return GraphState(grid, std::move(w), t);
}

}  // namespace

TEST_CASE("grid masks and classification") {
  const auto disc = std::make_shared<GraphGrid>(GraphGrid::disc(0.5, 33));
  CHECK(disc->n == 2);
  CHECK(!disc->interior.empty());
  CHECK(!disc->boundary.empty());
  // every interior node has its 2n axis neighbors inside the domain
  for (int id : disc->interior) {
    const int i = id % disc->nx, j = id / disc->nx;
    for (auto [di, dj] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
      CHECK(disc->kind(disc->idx(i + di, j + dj)) != NodeKind::outside);
    }
  }
  const auto line = std::make_shared<GraphGrid>(GraphGrid::line(1.0, 9));
  CHECK(line->interior.size() == 7);
  CHECK(line->boundary.size() == 2);
}

TEST_CASE("central differences are exact on affine and quadratic data") {
  const auto grid = std::make_shared<GraphGrid>(GraphGrid::square(1.0, 17));
  const auto affine = state_from(grid, [](double x, double y) { return 0.3 * x - 0.7 * y + 2.0; });
  auto d = differentiate(affine);
  for (std::size_t k = 0; k < d.nodes.size(); ++k) {
    CHECK(d.dw[2 * k] == doctest::Approx(0.3).epsilon(1e-13));
    CHECK(d.dw[2 * k + 1] == doctest::Approx(-0.7).epsilon(1e-13));
    CHECK(std::abs(d.d2w[3 * k]) < 1e-11);
    CHECK(std::abs(d.d2w[3 * k + 1]) < 1e-11);
    CHECK(std::abs(d.d2w[3 * k + 2]) < 1e-11);
  }
  const auto quad = state_from(grid, [](double x, double y) { return 0.5 * (x * x + y * y); });
  d = differentiate(quad);
  for (std::size_t k = 0; k < d.nodes.size(); ++k) {
    CHECK(d.d2w[3 * k] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(d.d2w[3 * k + 1] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(d.d2w[3 * k + 2]) < 1e-9);
  }
}

TEST_CASE("second derivative converges at second order on sin") {
  double err_coarse = 0.0, err_fine = 0.0;
  for (int pass = 0; pass < 2; ++pass) {
    const int nodes = pass == 0 ? 33 : 65;
    const auto grid = std::make_shared<GraphGrid>(GraphGrid::line(1.0, nodes));
    const auto s = state_from(grid, [](double x, double) { return std::sin(x); });
    const auto d = differentiate(s);
    double err = 0.0;
    for (std::size_t k = 0; k < d.nodes.size(); ++k) {
      const double x = grid->x(d.nodes[k]);
      err = std::max(err, std::abs(d.d2w[k] + std::sin(x)));
    }
    (pass == 0 ? err_coarse : err_fine) = err;
  }
  CHECK(err_coarse / err_fine == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("pointwise fields at the paraboloid vertex") {
  const auto grid = std::make_shared<GraphGrid>(GraphGrid::square(0.5, 17));
  const auto s = state_from(grid, [](double x, double y) { return 0.5 * (x * x + y * y); });
  for (const CurvatureSpec& spec : {make_power_mean(1.0, 2), make_gauss_power(2)}) {
    const auto f = geom_fields(s, spec);
    // locate the center node
    for (std::size_t k = 0; k < f.nodes.size(); ++k) {
      const int id = f.nodes[k];
      if (grid->x(id % grid->nx) == 0.0 && grid->y(id / grid->nx) == 0.0) {
        CHECK(f.v[k] == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(f.lam[2 * k] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(f.lam[2 * k + 1] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(f.F[k] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(f.g[3 * k] == doctest::Approx(1.0));
        CHECK(f.h[3 * k] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(f.nu[3 * k + 2] == doctest::Approx(-1.0));
      }
    }
  }
}

TEST_CASE("degenerate direction raises the convexity error") {
  // w = x^2/2 is flat along y: lambda_min = 0 everywhere
  const auto grid = std::make_shared<GraphGrid>(GraphGrid::square(1.5, 13));
  const auto s = state_from(grid, [](double x, double) { return 0.5 * x * x; });
  CHECK_THROWS_AS(geom_fields(s, make_power_mean(1.0, 2)), NonConvexState);
  // hand values at x = (1, 0): Dw = (1, 0), g = diag(2, 1), h = diag(1/sqrt(2), 0)
  NodeGeom ng;
  const int i = static_cast<int>(std::lround((1.0 - grid->ox) / grid->spacing));
  const int j = static_cast<int>(std::lround((0.0 - grid->oy) / grid->spacing));
  CHECK(grid->x(i) == doctest::Approx(1.0));
  const bool ok = node_geometry(*grid, s.w.data(), i, j, make_power_mean(1.0, 2).root, 1.0, 1e-10, ng);
  CHECK_FALSE(ok);
  CHECK(ng.dw[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ng.dw[1] == doctest::Approx(0.0));
  CHECK(ng.lam[0] == doctest::Approx(0.0));
  // largest eigenvalue of (diag(1/sqrt(2), 0), diag(2, 1)) is 1/(2 sqrt(2))
  CHECK(ng.lam[1] == doctest::Approx(1.0 / (2.0 * std::sqrt(2.0))).epsilon(1e-12));
}

TEST_CASE("sphere cap is discretely umbilic to second order") {
  const double r0 = 1.0;
  double errs[2] = {0, 0};
  for (int pass = 0; pass < 2; ++pass) {
    const int nodes = pass == 0 ? 33 : 65;
    const auto grid = std::make_shared<GraphGrid>(GraphGrid::disc(0.5, nodes));
    const auto s = state_from(grid, [r0](double x, double y) {
      return 1.0 - std::sqrt(r0 * r0 - x * x - y * y);
    });
    const auto f = geom_fields(s, make_power_mean(1.0, 2));
    // measure on a fixed subregion so the staircase rim does not pollute the order
    double err = 0.0;
    for (std::size_t k = 0; k < f.nodes.size(); ++k) {
      if (grid->radius2(f.nodes[k]) > 0.35 * 0.35) continue;
      err = std::max(err, std::abs(f.lam[2 * k] - 1.0 / r0));
      err = std::max(err, std::abs(f.lam[2 * k + 1] - 1.0 / r0));
    }
    errs[pass] = err;
  }
  const double order = std::log2(errs[0] / errs[1]);
  CHECK(order >= 1.9);
}

TEST_CASE("closed-form pencil eigenvalues match the dense solver") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto grid = std::make_shared<GraphGrid>(GraphGrid::square(1.0, 5));
  for (int rep = 0; rep < 500; ++rep) {
    // random smooth-ish quadratic data
    const double a = 0.5 + 0.5 * std::abs(u(rng)), b = 0.5 + 0.5 * std::abs(u(rng));
    const double c = 0.4 * u(rng), d = u(rng), e = u(rng);
    const auto s = state_from(grid, [&](double x, double y) {
      return 0.5 * (a * x * x + b * y * y) + c * x * y + 0.2 * (d * x + e * y);
    });
    double floor = -1e300;
    const auto f = [&] {
      try {
        return geom_fields(s, make_power_mean(1.0, 2), floor);
      } catch (const NonConvexState&) {
        return GeomFields{};
      }
    }();
    for (std::size_t k = 0; k < f.nodes.size(); ++k) {
      Eigen::Matrix2d G, H;
      G << f.g[3 * k], f.g[3 * k + 2], f.g[3 * k + 2], f.g[3 * k + 1];
      H << f.h[3 * k], f.h[3 * k + 2], f.h[3 * k + 2], f.h[3 * k + 1];
      Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::Matrix2d> eig(H, G, Eigen::EigenvaluesOnly);
      CHECK(f.lam[2 * k] == doctest::Approx(eig.eigenvalues()(0)).epsilon(1e-11));
      CHECK(f.lam[2 * k + 1] == doctest::Approx(eig.eigenvalues()(1)).epsilon(1e-11));
    }
  }
}

TEST_CASE("weingarten map assembled two ways agrees") {
  const auto grid = std::make_shared<GraphGrid>(GraphGrid::disc(0.5, 17));
  const auto s = state_from(grid, [](double x, double y) {
    return 1.0 - std::sqrt(1.0 - x * x - y * y) + 0.05 * x * y;
  });
  const auto f = geom_fields(s, make_power_mean(1.0, 2));
  for (std::size_t k = 0; k < f.nodes.size(); ++k) {
    Eigen::Matrix2d G, H, Gi;
    G << f.g[3 * k], f.g[3 * k + 2], f.g[3 * k + 2], f.g[3 * k + 1];
    H << f.h[3 * k], f.h[3 * k + 2], f.h[3 * k + 2], f.h[3 * k + 1];
    Gi << f.g_inv[3 * k], f.g_inv[3 * k + 2], f.g_inv[3 * k + 2], f.g_inv[3 * k + 1];
    // route one: g^{-1} h by direct inversion
    const Eigen::Matrix2d W1 = G.inverse() * H;
    // route two: the explicit formula h_jk (delta^{ik} - w^i w^k / (1 + |Dw|^2))
    const Eigen::Matrix2d W2 = Gi * H;
    CHECK((W1 - W2).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, W1.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("eigenvalues are invariant under axis relabeling") {
  const auto grid = std::make_shared<GraphGrid>(GraphGrid::square(0.8, 13));
  const auto s = state_from(grid, [](double x, double y) {
    return 0.7 * x * x + 0.4 * y * y + 0.15 * x * y + 0.01 * x * x * y;
  });
  const auto swapped = state_from(grid, [](double x, double y) {
    return 0.7 * y * y + 0.4 * x * x + 0.15 * y * x + 0.01 * y * y * x;
  });
  const auto fa = geom_fields(s, make_power_mean(1.0, 2));
  const auto fb = geom_fields(swapped, make_power_mean(1.0, 2));
  for (std::size_t k = 0; k < fa.nodes.size(); ++k) {
    const int id = fa.nodes[k];
    const int i = id % grid->nx, j = id / grid->nx;
    // find the transposed node (grid is square and symmetric)
    const int idt = grid->idx(j, i);
    const auto it = std::lower_bound(fb.nodes.begin(), fb.nodes.end(), idt);
    REQUIRE(it != fb.nodes.end());
    const std::size_t kt = static_cast<std::size_t>(it - fb.nodes.begin());
    CHECK(fa.lam[2 * k] == fb.lam[2 * kt]);      // exact: same arithmetic after relabeling
    CHECK(fa.lam[2 * k + 1] == fb.lam[2 * kt + 1]);
  }
}

TEST_CASE("euler bound margins") {
  // equality cases
  CHECK(euler_bound_check({1, 0, 0, 1}, {1, 0, 0, 2}, 2) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(euler_bound_check({1, 0, 0, 1}, {1, 0, 0, 1}, 2) == doctest::Approx(0.0).epsilon(1e-12));

  // singular h
  CHECK_THROWS_AS(euler_bound_check({1, 0, 0, 1}, {1, 0, 0, 0}, 2), SingularInput);

  // random SPD sweep, the brute-force property itself
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int n : {2, 3}) {
    for (int rep = 0; rep < 1000; ++rep) {
      Eigen::MatrixXd A(n, n), B(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          A(i, j) = u(rng);
          B(i, j) = u(rng);
        }
      const Eigen::MatrixXd G = A * A.transpose() + 0.05 * Eigen::MatrixXd::Identity(n, n);
      const Eigen::MatrixXd H = B * B.transpose() + 0.05 * Eigen::MatrixXd::Identity(n, n);
      std::vector<double> gv(G.data(), G.data() + n * n), hv(H.data(), H.data() + n * n);
      CHECK(euler_bound_check(gv, hv, n) >= -1e-12);
    }
  }
}

TEST_CASE("rotational curvature formulas") {
  // sphere profile: height = c - sqrt(r0^2 - r^2)
  const double r0 = 0.8;
  RotationalProfile sphere{
      [r0](double r) { return r / std::sqrt(r0 * r0 - r * r); },
      [r0](double r) { return r0 * r0 / std::pow(r0 * r0 - r * r, 1.5); },
      2};
  for (double r : {0.1, 0.3, 0.5, 0.7}) {
    const auto c = rotational_curvatures(sphere, r);
    CHECK(c.K == doctest::Approx(1.0 / (r0 * r0)).epsilon(1e-12));
    CHECK(c.H == doctest::Approx(2.0 / r0).epsilon(1e-12));
    CHECK(c.lam[0] == doctest::Approx(1.0 / r0).epsilon(1e-12));
    CHECK(c.lam[1] == doctest::Approx(1.0 / r0).epsilon(1e-12));
  }

  // internal consistency K = prod(lam), H = sum(lam) for a generic profile
  RotationalProfile generic{[](double r) { return 2.0 * r + 0.3; },
                            [](double) { return 2.0; }, 3};
  for (double r : {0.2, 0.9, 2.5}) {
    const auto c = rotational_curvatures(generic, r);
    double prod = 1.0, sum = 0.0;
    for (double l : c.lam) {
      prod *= l;
      sum += l;
    }
    CHECK(c.K == doctest::Approx(prod).epsilon(1e-12));
    CHECK(c.H == doctest::Approx(sum).epsilon(1e-12));
  }

  CHECK_THROWS_AS(rotational_curvatures(sphere, 0.0), DomainError);
}
