#include <doctest.h>

#include <random>

#include "psm/numerics.hpp"

using namespace psm;

namespace {

const double kPi = std::acos(-1.0);

// K(m) from the arithmetic-geometric mean, independent of the library.
double agm_k(double m) {
  double a = 1.0, b = std::sqrt(1.0 - m);
  for (int i = 0; i < 30; ++i) {
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return kPi / (2.0 * a);
}

}  // namespace

TEST_CASE("segment quadrature handles inverse square root endpoints") {
  const QuadratureConfig cfg;
  const cplx beta = integrate_segment_offsets(
      [](cplx, cplx da, cplx db) { return 1.0 / std::sqrt(da * db); }, 0.0, 1.0, cfg);
  CHECK(std::abs(beta - kPi) < 1e-12);
  CHECK(std::abs(integrate_segment([](cplx x) { return x; }, 0.0, 1.0, cfg) - 0.5) < 1e-14);
}

TEST_CASE("elliptic integral just above the real axis matches the AGM") {
  // x = sin^2 t turns the integral into sqrt(2) K(1/2)
  const cplx v = integrate_segment_offsets(
      [](cplx, cplx da, cplx db) { return 1.0 / std::sqrt(da * db * (1.0 + db)); }, 0.0, 1.0, QuadratureConfig{});
  CHECK(std::abs(v - std::sqrt(2.0) * agm_k(0.5)) < 1e-12);
  // the literal cubic x (x - 1)(x - 2), with x - 1 taken from the end offset
  const cplx w = integrate_segment_offsets(
      [](cplx s, cplx da, cplx db) { return 1.0 / std::sqrt(da * (-db) * (s - 2.0)); }, 0.0, 1.0, QuadratureConfig{});
  CHECK(std::abs(w - std::sqrt(2.0) * agm_k(0.5)) < 1e-12);
}

TEST_CASE("path integrals") {
  const QuadratureConfig cfg;
  const cplx I(0.0, 1.0);
  CHECK(std::abs(integrate_path([](cplx) { return cplx(1.0); }, {0.0, I, 1.0 + I}, cfg) - (1.0 + I)) < 1e-14);
  const auto twice = [](cplx z) { return 2.0 * z; };
  CHECK(std::abs(integrate_path(twice, {0.0, 1.0 + I}, cfg) - integrate_path(twice, {0.0, I, 1.0 + I}, cfg)) < 1e-13);
  const cplx half_turn = integrate_path([](cplx z) { return 1.0 / z; }, {1.0, 1.0 + I, -1.0 + I, -1.0}, cfg);
  CHECK(std::abs(half_turn - I * kPi) < 1e-12);
  CHECK_THROWS_AS(integrate_path(twice, {0.0}, cfg), InvalidArgument);
}

TEST_CASE("half-line integrals") {
  const QuadratureConfig cfg;
  const cplx e = integrate_half_line([](double x, double) { return cplx(std::exp(-x)); }, 0.0, 1.0, cfg);
  CHECK(std::abs(e - 1.0) < 1e-12);
  const cplx a = integrate_half_line([](double x, double) { return cplx(1.0 / (1.0 + x * x)); }, 0.0, 1.0, cfg);
  CHECK(std::abs(a - kPi / 2) < 1e-12);
}

TEST_CASE("fixed rules integrate polynomials") {
  double s = 0.0;
  for (const auto& n : tanh_sinh_rule(-1.0, 2.0, 4)) s += n.weight * n.x * n.x;
  CHECK(s == doctest::Approx(3.0).epsilon(1e-12));
  double t = 0.0;
  for (const auto& n : half_line_rule(1.0, 1.0, 5)) t += n.weight * std::exp(1.0 - n.x);
  CHECK(t == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("non-convergence is reported") {
  QuadratureConfig cfg;
  cfg.max_levels = 3;
  cfg.target_abs_tol = 1e-15;
  CHECK_THROWS_AS(integrate_segment([](cplx x) { return std::sin(200.0 * x); }, 0.0, 1.0, cfg), NonConvergence);
}

TEST_CASE("quadrature config validation") {
  QuadratureConfig cfg;
  cfg.target_abs_tol = 0.0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = QuadratureConfig{};
  cfg.max_levels = 1;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
}

TEST_CASE("matrix inverse") {
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(3, 3);
  CHECK((invert(id) - id).norm() == 0.0);
  const Eigen::MatrixXd d = Eigen::Vector2d(2.0, 4.0).asDiagonal();
  CHECK((invert(Eigen::MatrixXd(d)) - Eigen::MatrixXd(Eigen::Vector2d(0.5, 0.25).asDiagonal())).norm() < 1e-16);

  std::mt19937_64 rng(7);
  std::normal_distribution<double> nd;
  Eigen::MatrixXcd m(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = cplx(nd(rng), nd(rng)) + (i == j ? 3.0 : 0.0);
  CHECK((m * invert(m) - Eigen::MatrixXcd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);

  Eigen::MatrixXd s(2, 2);
  s << 1.0, 2.0, 2.0, 4.0;
  CHECK_THROWS_AS(invert(s), Singular);
  CHECK_THROWS_AS(invert(Eigen::MatrixXd(2, 3)), InvalidArgument);
}

TEST_CASE("positive definiteness") {
  CHECK(is_positive_definite(Eigen::MatrixXd::Identity(2, 2)));
  CHECK_FALSE(is_positive_definite(Eigen::MatrixXd(Eigen::Vector2d(1.0, -1.0).asDiagonal())));
  Eigen::MatrixXd a(2, 2);
  a << 1.0, 0.5, 0.0, 1.0;
  CHECK_THROWS_AS(is_positive_definite(a), NotSymmetric);
}
