#include <doctest.h>

#include <random>

#include "psm/theta.hpp"

using namespace psm;

namespace {

const double kPi = std::acos(-1.0);
const cplx kI(0.0, 1.0);

// Direct sum over the box |n_i| <= R.
cplx brute_theta(const Eigen::VectorXcd& z, const Eigen::MatrixXcd& om, int R) {
  const int g = static_cast<int>(z.size());
  Eigen::VectorXi n = Eigen::VectorXi::Constant(g, -R);
  cplx sum = 0.0;
  while (true) {
    const Eigen::VectorXcd nc = n.cast<cplx>();
    sum += std::exp(kI * kPi * cplx(nc.transpose() * om * nc) + 2.0 * kPi * kI * cplx(nc.transpose() * z));
    int i = 0;
    while (i < g && n(i) == R) n(i++) = -R;
    if (i == g) break;
    ++n(i);
  }
  return sum;
}

Eigen::MatrixXcd random_siegel(int g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  Eigen::MatrixXd x(g, g), a(g, g);
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < g; ++j) {
      x(i, j) = u(rng);
      a(i, j) = u(rng);
    }
  x = 0.5 * (x + x.transpose()).eval();
  const Eigen::MatrixXd y = a * a.transpose() + 0.8 * Eigen::MatrixXd::Identity(g, g);
  return x.cast<cplx>() + kI * y.cast<cplx>();
}

Eigen::VectorXcd vec(std::initializer_list<cplx> v) {
  Eigen::VectorXcd out(v.size());
  int i = 0;
  for (cplx c : v) out(i++) = c;
  return out;
}

}  // namespace

TEST_CASE("genus one theta at the square lattice") {
  const PeriodMatrix om(Eigen::MatrixXcd::Constant(1, 1, kI));
  double oracle = 0.0;
  for (int n = -10; n <= 10; ++n) oracle += std::exp(-kPi * n * n);
  const cplx t = theta(vec({0.0}), om);
  CHECK(std::abs(t - oracle) < 1e-14);
  CHECK(t.real() == doctest::Approx(1.0864348112).epsilon(1e-10));
  CHECK(std::abs(theta_gradient(vec({0.0}), om)(0)) < 1e-14);
}

TEST_CASE("theta agrees with a brute-force sum in genus two and three") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int g : {2, 3}) {
    for (int trial = 0; trial < 5; ++trial) {
      const Eigen::MatrixXcd m = random_siegel(g, rng);
      Eigen::VectorXcd z(g);
      for (int i = 0; i < g; ++i) z(i) = cplx(u(rng), 0.5 * u(rng));
      const cplx want = brute_theta(z, m, g == 2 ? 12 : 7);
      CHECK(std::abs(theta(z, PeriodMatrix(m)) - want) < 1e-11 * std::max(1.0, std::abs(want)));
    }
  }
}

TEST_CASE("gradient matches central differences") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const PeriodMatrix om(random_siegel(2, rng));
  const double h = 1e-5;
  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::VectorXcd z = vec({cplx(u(rng), 0.3 * u(rng)), cplx(u(rng), 0.3 * u(rng))});
    const Eigen::VectorXcd grad = theta_gradient(z, om);
    for (int i = 0; i < 2; ++i) {
      Eigen::VectorXcd e = Eigen::VectorXcd::Zero(2);
      e(i) = h;
      const cplx fd = (theta(z + e, om) - theta(z - e, om)) / (2.0 * h);
      CHECK(std::abs(fd - grad(i)) < 1e-7 * std::max(1.0, std::abs(grad(i))));
    }
  }
}

TEST_CASE("theta is even") {
  std::mt19937_64 rng(5);
  const PeriodMatrix om(random_siegel(2, rng));
  const Eigen::VectorXcd z = vec({cplx(0.31, 0.12), cplx(-0.7, 0.05)});
  CHECK(theta(z, om) == theta(Eigen::VectorXcd(-z), om));
}

TEST_CASE("odd characteristic") {
  const PeriodMatrix om(Eigen::MatrixXcd::Constant(1, 1, kI));
  const Characteristic odd(Eigen::VectorXi::Ones(1), Eigen::VectorXi::Ones(1));
  CHECK(odd.parity() == 1);
  CHECK(std::abs(theta_with_characteristic(odd, vec({0.0}), om)) < 1e-10);
  // the corresponding half period is a simple zero of theta
  const Eigen::VectorXcd a = half_period(odd, om);
  CHECK(std::abs(a(0) - 0.5 * (1.0 + kI)) < 1e-15);
  CHECK(std::abs(theta(a, om)) < 1e-12);
  CHECK(std::abs(theta_gradient(a, om)(0)) > 1e-3);
}

TEST_CASE("lattice reduction and characteristics") {
  std::mt19937_64 rng(9);
  const PeriodMatrix om(random_siegel(2, rng));
  const Characteristic c(Eigen::Vector2i(1, 0), Eigen::Vector2i(1, 1));
  const Eigen::VectorXcd h = half_period(c, om);
  const Eigen::VectorXcd shifted = h + om.column(1) - 2.0 * Eigen::VectorXcd::Unit(2, 0);
  const Characteristic back = characteristic_of(shifted, om);
  CHECK(back.eps == c.eps);
  CHECK(back.eps_prime == c.eps_prime);
  CHECK(lattice_distance(Eigen::VectorXcd(om.column(0) + 3.0 * Eigen::VectorXcd::Unit(2, 1)), om) < 1e-14);
  const LatticeReduction r = reduce_mod_lattice(shifted, om);
  CHECK((r.n.cast<cplx>() + om.omega() * r.m.cast<cplx>() + r.remainder - shifted).norm() < 1e-14);
}

TEST_CASE("invalid period matrices") {
  Eigen::MatrixXcd a(2, 2);
  a << kI, 0.3, 0.1, kI;
  CHECK_THROWS_AS(PeriodMatrix{a}, NotSymmetric);
  Eigen::MatrixXcd b(2, 2);
  b << kI, 0.0, 0.0, -kI;
  CHECK_THROWS_AS(PeriodMatrix{b}, InvalidArgument);
  const PeriodMatrix thin(Eigen::MatrixXcd::Constant(1, 1, cplx(0.0, 1e-7)));
  CHECK_THROWS_AS(theta(vec({0.1}), thin), TailBoundFailure);
}
