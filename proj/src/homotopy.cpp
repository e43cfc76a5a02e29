#include "psm/homotopy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace psm {

namespace {

constexpr double kPi = std::numbers::pi;

// exp(1 - 1/(1 - s2)) and its z-derivative for s2 = |z - c|^2 / R^2
struct BumpJet {
  double b = 0.0;
  cplx dz = 0.0;
};

BumpJet bump_jet(cplx z, cplx c, double R) {
  const cplx d = z - c;
  const double s2 = std::norm(d) / (R * R);
  if (s2 >= 1.0) return {};
  const double om = 1.0 - s2;
  const double b = std::exp(1.0 - 1.0 / om);
  return {b, -b / (om * om) * std::conj(d) / (R * R)};
}

SampledForm zero_two_form(std::optional<Disc> support) {
  SampledForm z;
  z.degree = 2;
  z.name = "zero";
  z.scalar = [](cplx) { return 0.0; };
  z.support = support;
  z.vanishes_on = {Parity::odd, Parity::even};
  return z;
}

bool is_zero_form(const SampledForm& f) { return f.name == "zero"; }

// Smooth partition: 1 on r <= r0/2, 0 on r >= r0.
double cutoff(double r, double r0) {
  if (r <= 0.5 * r0) return 1.0;
  if (r >= r0) return 0.0;
  const double t = (r - 0.5 * r0) / (0.5 * r0);
  const double a = std::exp(-1.0 / (1.0 - t)), b = std::exp(-1.0 / t);
  return a / (a + b);
}

// Distance from p (inside the disc) to the circle along direction e.
double ray_to_circle(cplx p, cplx e, const Disc& D) {
  const cplx d = p - D.center;
  const double b = (d * std::conj(e)).real();
  const double c = std::norm(d) - D.radius * D.radius;
  return -b + std::sqrt(b * b - c);
}

int angular_points(int level) { return 16 << level; }

// Singular parts of aP and aQ: (1/2pi) d arg(zP - zQ).
cplx singular_aP(cplx zQ, cplx zP) { return 1.0 / (cplx(0.0, 4.0 * kPi) * (zP - zQ)); }

std::vector<double> sorted_unique(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end(), [](double a, double b) { return std::abs(a - b) < 1e-12; }), v.end());
  return v;
}

}  // namespace

FormValue evaluate(const SampledForm& form, cplx z) {
  FormValue v;
  v.degree = form.degree;
  if (form.degree == 1) v.coeff = form.coeff(z);
  else v.scalar = form.scalar(z);
  return v;
}

FormValue operator-(const FormValue& a, const FormValue& b) {
  if (a.degree != b.degree) throw InvalidArgument("FormValue: degree mismatch");
  return {a.degree, a.scalar - b.scalar, a.coeff - b.coeff};
}

FormValue operator+(const FormValue& a, const FormValue& b) {
  if (a.degree != b.degree) throw InvalidArgument("FormValue: degree mismatch");
  return {a.degree, a.scalar + b.scalar, a.coeff + b.coeff};
}

SampledForm bump_function(cplx center, double radius, cplx kappa, const std::string& name) {
  if (!(radius > 0.0)) throw InvalidArgument("bump: radius must be positive");
  SampledForm f;
  f.degree = 0;
  f.name = name;
  f.support = Disc{center, radius};
  f.vanishes_on = {Parity::odd, Parity::even};
  f.scalar = [=](cplx z) {
    const BumpJet j = bump_jet(z, center, radius);
    return j.b * (1.0 + (std::conj(kappa) * (z - center) / radius).real());
  };
  auto df = std::make_shared<SampledForm>();
  df->degree = 1;
  df->name = "d" + name;
  df->support = f.support;
  df->vanishes_on = f.vanishes_on;
  df->coeff = [=](cplx z) {
    const BumpJet j = bump_jet(z, center, radius);
    const double m = 1.0 + (std::conj(kappa) * (z - center) / radius).real();
    return m * j.dz + j.b * std::conj(kappa) / (2.0 * radius);
  };
  df->d = std::make_shared<SampledForm>(zero_two_form(f.support));
  f.d = df;
  return f;
}

SampledForm bump_one_form(cplx center, double radius, cplx k0, cplx k1, const std::string& name) {
  if (!(radius > 0.0)) throw InvalidArgument("bump: radius must be positive");
  SampledForm f;
  f.degree = 1;
  f.name = name;
  f.support = Disc{center, radius};
  f.vanishes_on = {Parity::odd, Parity::even};
  f.coeff = [=](cplx z) { return bump_jet(z, center, radius).b * (k0 + k1 * (z - center) / radius); };
  auto d = std::make_shared<SampledForm>();
  d->degree = 2;
  d->name = "d" + name;
  d->support = f.support;
  d->vanishes_on = f.vanishes_on;
  // d(2 Re(c dz)) = -4 Im(dc/dzbar) dx^dy
  d->scalar = [=](cplx z) {
    const BumpJet j = bump_jet(z, center, radius);
    return -4.0 * (std::conj(j.dz) * (k0 + k1 * (z - center) / radius)).imag();
  };
  f.d = d;
  return f;
}

SampledForm bump_two_form(cplx center, double radius, cplx kappa, const std::string& name) {
  SampledForm f = bump_function(center, radius, kappa, name);
  f.degree = 2;
  f.d.reset();
  return f;
}

SampledForm exact_form(const SampledForm& f) {
  if (f.degree != 0 || !f.d) throw InvalidArgument("exact_form: need a function with a known derivative");
  return *f.d;
}

SampledForm zero_mode(const Polygon& poly, Which which, int k) {
  if (poly.n() < 4) throw InvalidArgument("zero_mode: no zero modes for n < 4");
  if (k < 1 || k > poly.genus()) throw InvalidArgument("zero_mode: index out of range");
  const PeriodFrame* fr = poly.frame();
  SampledForm f;
  f.degree = 1;
  if (which == Which::s1) {
    f.name = "dIm_phi" + std::to_string(k);
    f.coeff = [fr, k](cplx z) { return abel_differential(z, *fr)(k - 1) / cplx(0.0, 2.0); };
    f.vanishes_on = {Parity::even};
  } else if (which == Which::s2) {
    f.name = "dRe_phi" + std::to_string(k);
    f.coeff = [fr, k](cplx z) { return 0.5 * abel_differential(z, *fr)(k - 1); };
    f.vanishes_on = {Parity::odd};
  } else {
    throw InvalidArgument("zero_mode: s1 or s2 only");
  }
  f.d = std::make_shared<SampledForm>(zero_two_form(std::nullopt));
  return f;
}

double boundary_flag_residual(const SampledForm& form, const Polygon& poly, int samples) {
  if (form.degree == 2) return 0.0;
  double worst = 0.0;
  for (const BraneSide& s : poly.sides()) {
    if (std::find(form.vanishes_on.begin(), form.vanishes_on.end(), s.parity()) == form.vanishes_on.end()) continue;
    const double lo = std::isfinite(s.lo) ? s.lo : s.hi - 10.0;
    const double hi = std::isfinite(s.hi) ? s.hi : s.lo + 10.0;
    for (int i = 0; i < samples; ++i) {
      const cplx z(lo + (hi - lo) * (i + 0.5) / samples, 0.0);
      const FormValue v = evaluate(form, z);
      worst = std::max(worst, form.degree == 0 ? std::abs(v.scalar) : std::abs(v.coeff.real()));
    }
  }
  return worst;
}

HomotopyOperator::HomotopyOperator(const Polygon& poly, Which which, const SampledForm& form,
                                   const HomotopyBudget& budget, std::optional<cplx> anchor)
    : poly_(poly), which_(which), form_(form), budget_(budget) {
  if (form.degree < 1 || form.degree > 2) throw InvalidArgument("apply_G: form degree must be 1 or 2");
  const int L = budget.level;
  if (form.support) {
    disc_ = *form.support;
    compact_ = true;
  } else {
    if (!anchor) throw InvalidArgument("apply_G: non-compact form needs an anchor point");
    const double r0 = std::min(budget.cutoff_radius, 0.9 * anchor->imag());
    disc_ = Disc{*anchor, r0};
    compact_ = false;
  }
  if (disc_.center.imag() - disc_.radius <= 0.0 && compact_)
    throw InvalidArgument("apply_G: support must lie in the open upper half plane");

  auto add = [&](cplx z, double w, double eta) {
    if (w == 0.0) return;
    const FormValue v = evaluate(form_, z);
    if (v.magnitude() == 0.0) return;
    nodes_.push_back({poly_.chart(z), w, eta, v});
  };

  // inner polar rule about the disc centre
  const int nth = angular_points(L);
  const auto radial = tanh_sinh_rule(0.0, disc_.radius, L);
  for (int m = 0; m < nth; ++m) {
    const cplx e = std::polar(1.0, 2.0 * kPi * m / nth);
    for (const auto& r : radial) {
      const cplx z = disc_.center + r.x * e;
      const double et = compact_ ? 1.0 : eta(z);
      add(z, r.weight * r.x * 2.0 * kPi / nth * et, et);
    }
  }

  if (!compact_) {
    // outer tensor rule over the rest of the half plane
    std::vector<double> xb(poly_.breakpoints().begin(), poly_.breakpoints().end());
    xb.push_back(disc_.center.real() - disc_.radius);
    xb.push_back(disc_.center.real() + disc_.radius);
    xb = sorted_unique(xb);
    const double scale = std::max(1.0, xb.back() - xb.front());
    std::vector<RuleNode> xs = left_half_line_rule(xb.front(), scale, L);
    for (std::size_t i = 0; i + 1 < xb.size(); ++i) {
      const auto seg = tanh_sinh_rule(xb[i], xb[i + 1], L);
      xs.insert(xs.end(), seg.begin(), seg.end());
    }
    const auto tail = half_line_rule(xb.back(), scale, L);
    xs.insert(xs.end(), tail.begin(), tail.end());

    const double y0 = disc_.center.imag() - disc_.radius, y1 = disc_.center.imag() + disc_.radius;
    std::vector<RuleNode> ys = tanh_sinh_rule(0.0, y0, L);
    const auto mid = tanh_sinh_rule(y0, y1, L);
    ys.insert(ys.end(), mid.begin(), mid.end());
    const auto top = half_line_rule(y1, scale, L);
    ys.insert(ys.end(), top.begin(), top.end());

    for (const auto& x : xs)
      for (const auto& y : ys) {
        const cplx z(x.x, y.x);
        const double out = 1.0 - eta(z);
        if (out <= 0.0 || x.weight * y.weight < 1e-20) continue;
        // eta = -1 marks a node that carries the full kernel
        add(z, x.weight * y.weight * out, -1.0);
      }
  }

  // drop nodes that are negligible against the inner disc
  double inner = 0.0;
  for (const auto& nd : nodes_)
    if (nd.eta >= 0.0) inner += nd.weight * nd.value.magnitude();
  std::erase_if(nodes_, [&](const Node& nd) { return nd.weight * nd.value.magnitude() < 1e-14 * inner; });
}

double HomotopyOperator::eta(cplx z) const {
  if (compact_) return 1.0;
  return cutoff(std::abs(z - disc_.center), disc_.radius);
}

FormValue HomotopyOperator::singular_part(cplx Q) const {
  // polar about Q over the inner disc, excising B_mu(Q); Richardson in mu
  const int L = budget_.level + 1;
  const int nth = angular_points(L);
  const double mu = budget_.excision * disc_.radius;
  auto integral = [&](double m) {
    FormValue acc{form_.degree - 1, 0.0, 0.0};
    for (int k = 0; k < nth; ++k) {
      const cplx e = std::polar(1.0, 2.0 * kPi * (k + 0.5) / nth);
      const double R = ray_to_circle(Q, e, disc_);
      if (R <= m) continue;
      for (const auto& r : tanh_sinh_rule(m, R, L)) {
        const cplx P = Q + r.x * e;
        const double w = r.weight * r.x * 2.0 * kPi / nth * eta(P);
        if (w == 0.0) continue;
        const cplx s = singular_aP(Q, P);
        if (form_.degree == 1) acc.scalar += w * 4.0 * (s * std::conj(form_.coeff(P))).imag();
        else acc.coeff += w * (-s) * form_.scalar(P);
      }
    }
    return acc;
  };
  const FormValue a = integral(mu), b = integral(0.5 * mu);
  return {a.degree, 2.0 * b.scalar - a.scalar, 2.0 * b.coeff - a.coeff};
}

FormValue HomotopyOperator::apply(cplx Q) const {
  const bool inside = std::abs(Q - disc_.center) < disc_.radius;
  const ChartPoint CQ = poly_.chart(Q);
  FormValue acc{form_.degree - 1, 0.0, 0.0};
  for (const auto& nd : nodes_) {
    const cplx zP = nd.P.z;
    const bool subtract = inside && nd.eta >= 0.0;
    if (subtract && std::abs(zP - Q) < 1e-7) continue;
    const KernelForm k = kernel(CQ, nd.P, which_, poly_);
    const cplx s = subtract ? singular_aP(Q, zP) : 0.0;
    if (form_.degree == 1) acc.scalar += nd.weight * 4.0 * ((k.aP - s) * std::conj(nd.value.coeff)).imag();
    else acc.coeff += nd.weight * (k.aQ + s) * nd.value.scalar;
  }
  if (inside) acc = acc + singular_part(Q);
  return acc;
}

FormValue apply_G(const SampledForm& form, cplx Q, Which which, const Polygon& poly, const HomotopyBudget& budget) {
  if (form.degree == 0) return {0, 0.0, 0.0};
  std::optional<cplx> anchor;
  if (!form.support) anchor = Q;
  return HomotopyOperator(poly, which, form, budget, anchor).apply(Q);
}

FormValue exterior_derivative_fd(const std::function<FormValue(cplx)>& f, cplx Q, double h) {
  auto partials = [&](double step) {
    const FormValue xp = f(Q + step), xm = f(Q - step);
    const FormValue yp = f(Q + cplx(0.0, step)), ym = f(Q - cplx(0.0, step));
    return std::array<FormValue, 2>{FormValue{xp.degree, (xp.scalar - xm.scalar) / (2 * step), (xp.coeff - xm.coeff) / (2 * step)},
                                    FormValue{yp.degree, (yp.scalar - ym.scalar) / (2 * step), (yp.coeff - ym.coeff) / (2 * step)}};
  };
  const auto p1 = partials(h), p2 = partials(0.5 * h);
  auto rich = [](const FormValue& a, const FormValue& b) {
    return FormValue{a.degree, (4.0 * b.scalar - a.scalar) / 3.0, (4.0 * b.coeff - a.coeff) / 3.0};
  };
  const FormValue dx = rich(p1[0], p2[0]), dy = rich(p1[1], p2[1]);
  if (dx.degree == 0) return {1, 0.0, 0.5 * cplx(dx.scalar, -dy.scalar)};
  if (dx.degree == 1) {
    const cplx dzbar = 0.5 * (dx.coeff + cplx(0.0, 1.0) * dy.coeff);
    return {2, -4.0 * dzbar.imag(), 0.0};
  }
  throw InvalidArgument("exterior_derivative_fd: degree must be 0 or 1");
}

Eigen::VectorXcd integrate_upper_half_plane_vec(const std::function<Eigen::VectorXcd(cplx)>& f,
                                                const std::vector<double>& breaks, const QuadratureConfig& cfg) {
  const std::vector<double> xb = sorted_unique(breaks);
  if (xb.empty()) throw InvalidArgument("integrate_upper_half_plane: need at least one breakpoint");
  const double scale = std::max(1.0, xb.back() - xb.front());
  // columns closer than this to a breakpoint round onto it; their share is below 1e-13
  const double skip = 1e-15 * scale;
  const Eigen::Index dim = f(cplx(xb.front() - scale, scale)).size();
  auto column = [&](double x, double off) {
    if (off < skip) return Eigen::VectorXcd(Eigen::VectorXcd::Zero(dim));
    const Eigen::VectorXcd lower = integrate_segment_offsets(
        [&](cplx, cplx y, cplx) { return f(cplx(x, y.real())); }, 0.0, scale, cfg);
    const Eigen::VectorXcd upper = integrate_half_line([&](double y, double) { return f(cplx(x, y)); }, scale, scale, cfg);
    return Eigen::VectorXcd(lower + upper);
  };
  Eigen::VectorXcd total =
      integrate_half_line([&](double x, double off) { return column(x, off); }, xb.back(), scale, cfg);
  total += integrate_half_line([&](double x, double off) { return column(2.0 * xb.front() - x, off); }, xb.front(),
                               scale, cfg);
  for (std::size_t i = 0; i + 1 < xb.size(); ++i)
    total += integrate_segment_offsets(
        [&](cplx x, cplx da, cplx db) { return column(x.real(), std::min(da.real(), db.real())); }, xb[i], xb[i + 1],
        cfg);
  return total;
}

double integrate_upper_half_plane(const std::function<double(cplx)>& f, const std::vector<double>& breaks,
                                  const QuadratureConfig& cfg) {
  return integrate_upper_half_plane_vec([&](cplx z) { return Eigen::VectorXcd::Constant(1, f(z)); }, breaks, cfg)(0)
      .real();
}

Projection::Projection(const Polygon& poly, Which which, const SampledForm& form, const HomotopyBudget& budget)
    : poly_(poly), which_(which) {
  if (form.degree != 1) throw InvalidArgument("project_P: degree-1 forms only");
  const int g = poly.genus();
  pair_ = Eigen::VectorXd::Zero(g);
  if (poly.n() < 4 || (which != Which::s1 && which != Which::s2)) return;
  const PeriodFrame& fr = *poly.frame();
  // 4 Im(a conj(c)) is the density of 2Re(a dz) ^ 2Re(c dz)
  auto density = [&](cplx z) {
    const Eigen::VectorXcd dphi = abel_differential(z, fr);
    const cplx c = form.coeff(z);
    Eigen::VectorXcd out(g);
    for (int j = 0; j < g; ++j) {
      out(j) = which == Which::s1 ? 4.0 * (0.5 * dphi(j) * std::conj(c)).imag()
                                  : 4.0 * (c * std::conj(dphi(j) / cplx(0.0, 2.0))).imag();
    }
    return out;
  };
  if (form.support) {
    const Disc D = *form.support;
    const int L = budget.level + 1;
    const int nth = angular_points(L);
    Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(g);
    for (int m = 0; m < nth; ++m) {
      const cplx e = std::polar(1.0, 2.0 * kPi * m / nth);
      for (const auto& r : tanh_sinh_rule(0.0, D.radius, L))
        acc += (r.weight * r.x * 2.0 * kPi / nth) * density(D.center + r.x * e);
    }
    pair_ = acc.real();
  } else {
    QuadratureConfig cfg;
    cfg.target_abs_tol = budget.adaptive_tol;
    cfg.max_levels = 12;
    pair_ = integrate_upper_half_plane_vec(density, poly.breakpoints(), cfg).real();
  }
}

FormValue Projection::apply(cplx Q) const {
  FormValue v{1, 0.0, 0.0};
  if (poly_.n() < 4 || (which_ != Which::s1 && which_ != Which::s2)) return v;
  const PeriodFrame& fr = *poly_.frame();
  const Eigen::VectorXcd dphi = abel_differential(Q, fr);
  const Eigen::VectorXcd modes = which_ == Which::s1 ? Eigen::VectorXcd(dphi / cplx(0.0, 2.0)) : Eigen::VectorXcd(0.5 * dphi);
  const Eigen::MatrixXd O = 4.0 * fr.omega.imag_inverse();
  v.coeff = (modes.transpose() * (O * pair_).cast<cplx>())(0);
  return v;
}

FormValue project_P(const SampledForm& form, cplx Q, Which which, const Polygon& poly, const HomotopyBudget& budget) {
  return Projection(poly, which, form, budget).apply(Q);
}

BilinearResult bilinear_check(const PeriodFrame& frame, const QuadratureConfig& cfg) {
  const int g = frame.genus();
  std::vector<double> breaks(frame.branch.x().data(), frame.branch.x().data() + frame.branch.x().size());
  // omega_j ^ conj(omega_k) = f_j conj(f_k) dz ^ dzbar = -2i f_j conj(f_k) dx^dy
  auto f = [&](cplx z) {
    const Eigen::VectorXcd d = abel_differential(z, frame);
    Eigen::VectorXcd out(g * g);
    for (int j = 0; j < g; ++j)
      for (int k = 0; k < g; ++k) out(j * g + k) = cplx(0.0, -2.0) * d(j) * std::conj(d(k));
    return out;
  };
  const Eigen::VectorXcd flat = integrate_upper_half_plane_vec(f, breaks, cfg);
  BilinearResult r;
  r.integral.resize(g, g);
  for (int j = 0; j < g; ++j)
    for (int k = 0; k < g; ++k) r.integral(j, k) = flat(j * g + k);
  r.closed_form = -0.5 * frame.omega.omega();
  r.residual = (r.integral - r.closed_form).cwiseAbs();
  r.residual_plus_half_tau = (r.integral - 0.5 * frame.omega.omega()).cwiseAbs();
  const Eigen::MatrixXcd sym = 0.5 * (r.integral + r.integral.transpose());
  r.symmetric_residual = (sym - r.closed_form).cwiseAbs().maxCoeff();
  r.real_antisymmetric = r.integral.real().cwiseAbs().maxCoeff();
  return r;
}

std::array<int, 3> cohomology_dims(int n) {
  if (n < 2) throw InvalidArgument("cohomology_dims: n must be >= 2");
  return {0, n % 2 == 0 ? (n - 2) / 2 : (n - 3) / 2, 0};
}

std::vector<SplittingProbe> default_probes(const Polygon& poly, Which which) {
  const std::vector<double>& br = poly.breakpoints();
  const double lo = br.front(), hi = br.back();
  const double s = std::max(1.0, hi - lo);
  const double xm = 0.5 * (lo + hi);
  auto at = [&](double a, double b) { return cplx(xm + s * a, s * b); };
  auto around = [](cplx c, double R) {
    std::vector<cplx> pts;
    for (double ang : {0.3, 2.4, 4.4}) pts.push_back(c + 0.25 * R * std::polar(1.0, ang));
    return pts;
  };

  std::vector<SplittingProbe> out;
  const cplx c0 = at(0.1, 1.0), c1 = at(-0.35, 0.9), c2 = at(0.3, 1.4);
  const double r0 = 0.5 * s, r1 = 0.45 * s, r2 = 0.7 * s;
  out.push_back({bump_function(c0, r0, 0.0, "f_radial"), around(c0, r0), {}});
  out.push_back({bump_function(c1, r1, cplx(0.5, 0.3), "f_tilted"), around(c1, r1), {}});
  out.push_back({bump_function(c2, r2, cplx(0.0, -0.4), "f_wide"), around(c2, r2), {}});

  out.push_back({exact_form(bump_function(c1, r1, cplx(0.2, -0.1), "g")), around(c1, r1), {}, ProbeKind::exact});
  out.push_back({bump_one_form(c0, r0, cplx(1.0, 0.5), cplx(-0.3, 0.2), "w_general"), around(c0, r0), {}});
  if (poly.n() >= 4) {
    const cplx anchor = at(0.05, 0.8);
    std::vector<cplx> pts;
    for (double ang : {0.3, 2.4, 4.4}) pts.push_back(anchor + 0.05 * s * std::polar(1.0, ang));
    out.push_back({zero_mode(poly, which, 1), pts, anchor, ProbeKind::harmonic});
  } else {
    out.push_back({bump_one_form(c2, r2, cplx(0.0, 1.0), cplx(0.4, 0.0), "w_rotating"), around(c2, r2), {}});
  }

  out.push_back({bump_two_form(c0, r0, 0.0, "rho_radial"), around(c0, r0), {}});
  out.push_back({bump_two_form(c1, r1, cplx(-0.6, 0.2), "rho_tilted"), around(c1, r1), {}});
  out.push_back({bump_two_form(c2, r2, cplx(0.3, 0.3), "rho_wide"), around(c2, r2), {}});
  return out;
}

SplittingReport splitting_suite(const Polygon& poly, Which which, const std::vector<SplittingProbe>& probes,
                                const HomotopyBudget& budget) {
  SplittingReport rep;
  rep.n = poly.n();
  rep.which = which;
  rep.level = budget.level;
  for (const auto& pr : probes) {
    const SampledForm& f = pr.form;
    const double scale = f.support ? f.support->radius : budget.cutoff_radius;
    rep.excision_radii.push_back(budget.excision * scale);
    const double h = budget.fd_step * scale;

    ProbeReport out;
    out.name = f.name;
    out.degree = f.degree;

    std::unique_ptr<HomotopyOperator> G, Gd;
    std::unique_ptr<Projection> P;
    if (f.degree == 0) {
      if (!f.d) throw InvalidArgument("splitting_suite: degree-0 probe needs its derivative");
      Gd = std::make_unique<HomotopyOperator>(poly, which, *f.d, budget, pr.anchor);
    } else {
      G = std::make_unique<HomotopyOperator>(poly, which, f, budget, pr.anchor);
      if (f.degree == 1) {
        if (f.d && !is_zero_form(*f.d)) Gd = std::make_unique<HomotopyOperator>(poly, which, *f.d, budget, pr.anchor);
        P = std::make_unique<Projection>(poly, which, f, budget);
      }
    }

    for (cplx Q : pr.points) {
      ProbePoint pt;
      pt.Q = Q;
      const FormValue id = evaluate(f, Q);
      if (f.degree == 0) {
        pt.lhs = Gd->apply(Q);
        pt.rhs = id;
      } else {
        pt.lhs = exterior_derivative_fd([&](cplx z) { return G->apply(z); }, Q, h);
        if (Gd) pt.lhs = pt.lhs + Gd->apply(Q);
        pt.rhs = P ? id - P->apply(Q) : id;
      }
      pt.residual = (pt.lhs - pt.rhs).magnitude();
      out.max_residual = std::max(out.max_residual, pt.residual);
      out.points.push_back(pt);
    }
    rep.max_residual = std::max(rep.max_residual, out.max_residual);
    rep.probes.push_back(std::move(out));
  }
  return rep;
}

}  // namespace psm
