#include <doctest.h>

#include <random>

#include "psm/kernels.hpp"

using namespace psm;

namespace {

const double kPi = std::acos(-1.0);
const cplx kI(0.0, 1.0);

std::shared_ptr<const PeriodFrame> frame1() {
  static const auto f =
      std::make_shared<const PeriodFrame>(build_frame(BranchData(std::vector<double>{0.0, 1.0, 2.0})));
  return f;
}

// Directional derivatives of the angle arg ratio(u_P, u_Q) / 2 pi by central differences,
// returned in the same (aQ, aP) encoding as KernelForm.
KernelForm fd_angle(cplx zQ, cplx zP, Which w, const Polygon& poly) {
  const double h = 1e-6;
  const MirrorMap& M = poly.mirror(w);
  auto angle = [&](cplx q, cplx p) { return M.psi(poly.chart(p).u, poly.chart(q).u); };
  auto diff = [&](cplx dq, cplx dp) {
    const double a = angle(zQ + dq, zP + dp), b = angle(zQ - dq, zP - dp);
    return std::remainder(a - b, 2.0 * kPi) / (2.0 * h * 2.0 * kPi);
  };
  // 2 Re(a dz): along h gives 2 Re a, along i h gives -2 Im a
  KernelForm k;
  k.aP = cplx(diff(0.0, h), -diff(0.0, kI * h)) / 2.0;
  k.aQ = cplx(diff(h, 0.0), -diff(kI * h, 0.0)) / 2.0;
  return k;
}

}  // namespace

TEST_CASE("relevant index sets") {
  const IndexSets a = relevant_sets({{1, 2}, {2, 3}}, 3);
  CHECK(a.S1 == std::set<int>{3});
  CHECK(a.S2 == std::set<int>{1});
  const IndexSets b = relevant_sets({{1, 2}, {2, 3}, {3, 4}}, 4);
  CHECK(b.S1.empty());
  CHECK(b.S2.empty());
  const IndexSets c = relevant_sets({{1, 3}, {1, 3}}, 3);
  CHECK(c.S1.empty());
  CHECK_THROWS_AS(relevant_sets({{1, 5}, {2}}, 3), InvalidArgument);
  CHECK_THROWS_AS(relevant_sets({{1}}, 3), InvalidArgument);
}

TEST_CASE("uniformizing maps") {
  CHECK(std::abs(map_u2(-1.0) - kI) < 1e-15);
  CHECK(std::abs(map_u3(0.0) - 0.5 * kI) < 1e-15);
  CHECK(std::abs(map_u3(1.0)) < 1e-15);
  for (cplx z : {cplx(0.3, 0.4), cplx(-2.0, 0.1), cplx(5.0, 3.0), cplx(0.5, 0.0)}) {
    CHECK(std::abs(map_u3(z) - map_u3_quadrature(z)) < 1e-11);
    const double h = 1e-6;
    CHECK(std::abs((map_u3(z + h) - map_u3(z - h)) / (2.0 * h) - map_u3_derivative(z)) < 1e-8);
  }
}

TEST_CASE("linear and sine mirror maps") {
  const cplx u(0.0, 0.7), v(0.4, 0.9);
  CHECK(std::abs(mirror2(u, v, Which::s1) - 1.0) < 1e-15);
  const cplx u2(0.3, 0.8), vr(1.7, 0.0);
  const cplx r = mirror2(u2, vr, Which::s1);
  CHECK(std::abs(r - std::norm(u2 - vr) / std::norm(u2 + vr)) < 1e-14);
  CHECK(std::abs(mirror3(0.37, cplx(0.2, 0.3), Which::s1) - 1.0) < 1e-14);
  CHECK(std::abs(mirror3(cplx(0.37, 0.5), cplx(0.2, 0.3), Which::s1) - 1.0) < 1e-14);
  CHECK_THROWS_AS(mirror2(u, u, Which::s1), DiagonalSingularity);
}

TEST_CASE("space-filling kernel is the Kontsevich angle form") {
  const Polygon poly = Polygon::two_branes();
  const cplx z(0.4, 0.9), w(-0.6, 0.3);
  const KernelForm k = kernel(w, z, Which::a1, poly);
  // d arg[(z - w)/(z - conj w)] / 2 pi by differences in z and w
  auto angle = [](cplx z_, cplx w_) { return std::arg((z_ - w_) / (z_ - std::conj(w_))) / (2.0 * kPi); };
  const double h = 1e-6;
  const double dzx = (angle(z + h, w) - angle(z - h, w)) / (2.0 * h);
  const double dzy = (angle(z + kI * h, w) - angle(z - kI * h, w)) / (2.0 * h);
  const double dwx = (angle(z, w + h) - angle(z, w - h)) / (2.0 * h);
  const double dwy = (angle(z, w + kI * h) - angle(z, w - kI * h)) / (2.0 * h);
  CHECK(std::abs(2.0 * k.aP - cplx(dzx, -dzy)) < 1e-8);
  CHECK(std::abs(2.0 * k.aQ - cplx(dwx, -dwy)) < 1e-8);
}

TEST_CASE("angular form is d of the mirror angle") {
  const Polygon p2 = Polygon::two_branes(), p3 = Polygon::three_branes();
  const Polygon p4 = Polygon::hyperelliptic(frame1());
  for (const Polygon* p : {&p2, &p3, &p4})
    for (Which w : {Which::s1, Which::s2}) {
      const cplx zQ(0.35, 0.6), zP(1.4, 0.25);
      const KernelForm a = angular_form(p->chart(zQ), p->chart(zP), w, *p);
      const KernelForm fd = fd_angle(zQ, zP, w, *p);
      CHECK(std::abs(a.aP - fd.aP) < 1e-7);
      CHECK(std::abs(a.aQ - fd.aQ) < 1e-7);
    }
}

TEST_CASE("zero-mode correction") {
  const Polygon p2 = Polygon::two_branes();
  const ChartPoint Q = p2.chart(cplx(0.2, 0.5)), P = p2.chart(cplx(-0.4, 0.8));
  const KernelForm z = zero_mode_term(Q, P, Which::s1, p2);
  CHECK(z.aP == cplx(0.0));
  CHECK(z.aQ == cplx(0.0));

  const Polygon p4 = Polygon::hyperelliptic(frame1());
  // phi(Q) is real on the even sides, so the S1 correction vanishes there
  const ChartPoint Qb = p4.chart(cplx(0.5, 0.0)), Pi = p4.chart(cplx(-0.4, 0.8));
  CHECK(std::abs(Qb.u(0).imag()) < 1e-12);
  CHECK(std::abs(zero_mode_term(Qb, Pi, Which::s1, p4).aP) < 1e-12);
}

TEST_CASE("kernel rejects the diagonal") {
  const Polygon p = Polygon::two_branes();
  CHECK_THROWS_AS(kernel(cplx(0.3, 0.4), cplx(0.3, 0.4), Which::s1, p), DiagonalSingularity);
}

TEST_CASE("odd half period choice does not change the genus two kernel") {
  const auto f2 =
      std::make_shared<const PeriodFrame>(build_frame(BranchData(std::vector<double>{0.0, 1.0, 2.0, 3.0, 4.0})));
  const Polygon a = Polygon::hyperelliptic(f2, {}, 1), b = Polygon::hyperelliptic(f2, {}, 2);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ux(-1.0, 5.0), uy(0.05, 2.0);
  for (int t = 0; t < 10; ++t) {
    const cplx zQ(ux(rng), uy(rng)), zP(ux(rng), uy(rng));
    for (Which w : {Which::s1, Which::s2}) {
      const KernelForm ka = kernel(zQ, zP, w, a), kb = kernel(zQ, zP, w, b);
      CHECK(std::abs(ka.aP - kb.aP) < 1e-7);
      CHECK(std::abs(ka.aQ - kb.aQ) < 1e-7);
    }
  }
}

TEST_CASE("near-diagonal remainder is Lipschitz") {
  const Polygon p2 = Polygon::two_branes(), p3 = Polygon::three_branes();
  const Polygon p4 = Polygon::hyperelliptic(frame1());
  const cplx zQ(0.6, 0.7);
  std::vector<cplx> zP;
  for (int k = 1; k <= 8; ++k) zP.push_back(zQ + std::pow(0.5, k) * cplx(0.3, 0.2));
  for (const Polygon* p : {&p2, &p3, &p4}) {
    const NearDiagonalReport r = near_diagonal_check(zQ, zP, Which::s1, *p);
    // the remainder after removing the 1/(zP - zQ) pole stays bounded and Lipschitz
    CHECK(r.max_residual < 10.0);
    CHECK(r.fitted_constant < 10.0);
    const double last_step = std::abs(r.residuals.back() - r.residuals[r.residuals.size() - 2]);
    CHECK(last_step <= r.fitted_constant * r.distances[r.distances.size() - 2] + 1e-12);
  }
}
