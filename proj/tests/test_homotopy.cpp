#include <doctest.h>

#include "psm/homotopy.hpp"

using namespace psm;

namespace {

const cplx kI(0.0, 1.0);

std::shared_ptr<const PeriodFrame> frame1() {
  static const auto f =
      std::make_shared<const PeriodFrame>(build_frame(BranchData(std::vector<double>{0.0, 1.0, 2.0})));
  return f;
}

}  // namespace

TEST_CASE("cohomology dimensions") {
  CHECK(cohomology_dims(2) == std::array<int, 3>{0, 0, 0});
  CHECK(cohomology_dims(3) == std::array<int, 3>{0, 0, 0});
  CHECK(cohomology_dims(4) == std::array<int, 3>{0, 1, 0});
  CHECK(cohomology_dims(6) == std::array<int, 3>{0, 2, 0});
  CHECK(cohomology_dims(7) == std::array<int, 3>{0, 2, 0});
  CHECK_THROWS_AS(cohomology_dims(1), InvalidArgument);
}

TEST_CASE("finite-difference exterior derivative") {
  auto f = [](cplx z) { return FormValue{0, z.real() * z.real() + z.imag(), 0.0}; };
  const cplx Q(0.3, 0.8);
  const FormValue d0 = exterior_derivative_fd(f, Q, 1e-3);
  CHECK(d0.degree == 1);
  CHECK(std::abs(d0.coeff - 0.5 * cplx(2.0 * Q.real(), -1.0)) < 1e-10);
  // 2 Re(i conj(z) dz) = 2 (y dx - x dy), whose d is -4 dx^dy
  auto w = [](cplx z) { return FormValue{1, 0.0, kI * std::conj(z)}; };
  const FormValue d1 = exterior_derivative_fd(w, Q, 1e-3);
  CHECK(d1.degree == 2);
  CHECK(d1.scalar == doctest::Approx(-4.0).epsilon(1e-10));
  // 2 Re(conj(z) dz) = d|z|^2 is closed
  CHECK(std::abs(exterior_derivative_fd([](cplx z) { return FormValue{1, 0.0, std::conj(z)}; }, Q, 1e-3).scalar) <
        1e-10);
}

TEST_CASE("closed-form derivatives of bump probes") {
  const SampledForm f = bump_function(cplx(0.2, 1.0), 0.6, cplx(0.5, -0.3));
  const SampledForm w = bump_one_form(cplx(0.2, 1.0), 0.6, cplx(1.0, 0.5), cplx(-0.3, 0.2));
  REQUIRE(f.d);
  REQUIRE(w.d);
  for (cplx Q : {cplx(0.3, 1.1), cplx(0.0, 0.8), cplx(0.6, 1.2)}) {
    const FormValue df = exterior_derivative_fd([&](cplx z) { return evaluate(f, z); }, Q, 1e-4);
    CHECK((df - evaluate(*f.d, Q)).magnitude() < 1e-8);
    const FormValue dw = exterior_derivative_fd([&](cplx z) { return evaluate(w, z); }, Q, 1e-4);
    CHECK((dw - evaluate(*w.d, Q)).magnitude() < 1e-8);
  }
  CHECK(evaluate(f, cplx(0.2, 1.7)).scalar == 0.0);
}

TEST_CASE("G inverts d on a compact bump for two branes") {
  const Polygon poly = Polygon::two_branes();
  const cplx c(0.1, 1.0);
  const SampledForm f = bump_function(c, 0.5, cplx(0.3, 0.2));
  const HomotopyBudget budget;
  for (Which w : {Which::s1, Which::s2}) {
    const HomotopyOperator G(poly, w, exact_form(f), budget);
    CHECK(G.output_degree() == 0);
    for (cplx Q : {c + 0.1, c + cplx(-0.05, 0.12), c + cplx(0.0, -0.2)}) {
      CHECK(std::abs(G.apply(Q).scalar - evaluate(f, Q).scalar) < 1e-3);
    }
  }
}

TEST_CASE("d G is the identity on compact two-forms for two branes") {
  const Polygon poly = Polygon::two_branes();
  const cplx c(-0.3, 0.9);
  const SampledForm rho = bump_two_form(c, 0.45, cplx(0.2, -0.4));
  const HomotopyOperator G(poly, Which::s1, rho, HomotopyBudget{});
  for (cplx Q : {c + cplx(0.1, 0.05), c + cplx(-0.08, -0.1)}) {
    const FormValue dG = exterior_derivative_fd([&](cplx z) { return G.apply(z); }, Q, 1e-4 * 0.45);
    CHECK(std::abs(dG.scalar - evaluate(rho, Q).scalar) < 5e-3);
  }
}

TEST_CASE("projection vanishes without zero modes") {
  const Polygon poly = Polygon::two_branes();
  const SampledForm w = bump_one_form(cplx(0.0, 1.0), 0.5, 1.0, 0.0);
  CHECK(project_P(w, cplx(0.1, 1.0), Which::s1, poly).magnitude() == 0.0);
}

TEST_CASE("projection for four branes") {
  const Polygon poly = Polygon::hyperelliptic(frame1());
  const HomotopyBudget budget;
  for (Which w : {Which::s1, Which::s2}) {
    const SampledForm z = zero_mode(poly, w, 1);
    CHECK(boundary_flag_residual(z, poly) < 1e-12);
    const Projection Pz(poly, w, z, budget);
    const SampledForm dg = exact_form(bump_function(cplx(1.0, 0.9), 0.45, cplx(0.2, -0.1)));
    const Projection Pe(poly, w, dg, budget);
    for (cplx Q : {cplx(1.1, 0.8), cplx(0.3, 0.4), cplx(2.5, 1.5)}) {
      CHECK((Pz.apply(Q) - evaluate(z, Q)).magnitude() < 1e-3);
      CHECK(Pe.apply(Q).magnitude() < 1e-3);
    }
  }
  CHECK_THROWS_AS(zero_mode(Polygon::two_branes(), Which::s1, 1), InvalidArgument);
}

TEST_CASE("bilinear relation in genus one") {
  QuadratureConfig cfg;
  cfg.target_abs_tol = 1e-10;
  cfg.max_levels = 12;
  const BilinearResult r = bilinear_check(*frame1(), cfg);
  CHECK(r.residual.maxCoeff() < 1e-6);
  CHECK(r.symmetric_residual < 1e-6);
  // the opposite orientation is off by |tau|
  CHECK(r.residual_plus_half_tau.maxCoeff() > 0.5);
}
