#include "psm/kernels.hpp"

#include <cmath>
#include <numbers>

namespace psm {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDiagonal = 1e-9;
constexpr double kThetaZero = 1e-13;

using Factor = MirrorMap::Factor;

Eigen::VectorXcd zeros(int g) { return Eigen::VectorXcd::Zero(g); }

// u - v, conj(u) - v, ... as coefficient tuples (cu, cub, cv, cvb)
Factor make(int power, double cu, double cub, double cv, double cvb, const Eigen::VectorXcd& shift) {
  return Factor{power, cu, cub, cv, cvb, shift};
}

std::vector<Factor> s1_factors(const Eigen::VectorXcd& A, const Eigen::VectorXcd& B, const Eigen::VectorXcd& C,
                               const Eigen::VectorXcd& D) {
  // theta(u-v+A) theta(ub-v+D) / [theta(u+v+C) theta(ub+v+B)]
  return {make(1, 1, 0, -1, 0, A), make(1, 0, 1, -1, 0, D), make(-1, 1, 0, 1, 0, C), make(-1, 0, 1, 1, 0, B)};
}

std::vector<Factor> s2_factors(const Eigen::VectorXcd& A, const Eigen::VectorXcd& B, const Eigen::VectorXcd& C,
                               const Eigen::VectorXcd& D) {
  // theta(u-v+A) theta(ub+v+B) / [theta(u+v+C) theta(ub-v+D)]
  return {make(1, 1, 0, -1, 0, A), make(1, 0, 1, 1, 0, B), make(-1, 1, 0, 1, 0, C), make(-1, 0, 1, -1, 0, D)};
}

Eigen::VectorXcd combine(const Factor& f, const Eigen::VectorXcd& u, const Eigen::VectorXcd& v) {
  return f.cu * u + f.cub * u.conjugate() + f.cv * v + f.cvb * v.conjugate() + f.shift;
}

void check_vectors(const Eigen::VectorXcd& u, const Eigen::VectorXcd& v, int dim) {
  if (u.size() != dim || v.size() != dim) throw InvalidArgument("mirror map: argument has wrong dimension");
  if ((u - v).norm() < 1e-12) throw DiagonalSingularity("mirror map: u and v coincide");
}

}  // namespace

Which parse_which(const std::string& s) {
  if (s == "s1" || s == "S1") return Which::s1;
  if (s == "s2" || s == "S2") return Which::s2;
  if (s == "a1" || s == "A1") return Which::a1;
  if (s == "a2" || s == "A2") return Which::a2;
  throw InvalidArgument("unknown index set '" + s + "' (expected s1, s2, a1, a2)");
}

std::string to_string(Which w) {
  switch (w) {
    case Which::s1: return "s1";
    case Which::s2: return "s2";
    case Which::a1: return "a1";
    case Which::a2: return "a2";
  }
  return "?";
}

IndexSets relevant_sets(const std::vector<std::set<int>>& I, int m) {
  if (I.size() < 2) throw InvalidArgument("relevant_sets: need at least two branes");
  if (m < 0) throw InvalidArgument("relevant_sets: negative dimension");
  IndexSets out;
  out.m = m;
  out.I = I;
  for (const auto& s : I)
    for (int i : s)
      if (i < 1 || i > m) throw InvalidArgument("relevant_sets: index outside 1..m");
  for (int i = 1; i <= m; ++i) {
    bool in1 = true, in2 = true;
    for (std::size_t k = 0; k < I.size(); ++k) {
      const bool has = I[k].count(i) > 0;
      const bool odd = (k % 2 == 0);  // k is 0-based, brane k+1
      in1 = in1 && (odd ? !has : has);
      in2 = in2 && (odd ? has : !has);
    }
    if (in1) out.S1.insert(i);
    if (in2) out.S2.insert(i);
  }
  return out;
}

cplx map_u2(cplx z) { return sqrt_from_above(z); }
cplx map_u2_derivative(cplx z) { return 0.5 / sqrt_from_above(z); }

cplx map_u3(cplx z) { return std::log(sqrt_from_above(z) + sqrt_from_above(z - 1.0)) / kPi; }

cplx map_u3_derivative(cplx z) { return 1.0 / (2.0 * kPi * sqrt_from_above(z) * sqrt_from_above(z - 1.0)); }

cplx map_u3_quadrature(cplx z, const QuadratureConfig& cfg) {
  if (z == cplx(1.0)) return 0.0;
  // integrand from the offsets s - 0 and s - 1
  auto f = [](cplx s0, cplx s1) { return 1.0 / (2.0 * kPi * sqrt_from_above(s0) * sqrt_from_above(s1)); };
  // first leg leaves s = 1 with exact offset s - 1
  const double h = std::max(z.imag(), 0.5);
  const cplx p1(1.0, h), p2(z.real(), h);
  cplx total = integrate_segment_offsets([&](cplx s, cplx da, cplx) { return f(s, da); }, 1.0, p1, cfg);
  total += integrate_segment_offsets([&](cplx s, cplx, cplx) { return f(s, s - 1.0); }, p1, p2, cfg);
  if (p2 != z) {
    // the last leg may end on s = 0
    total += integrate_segment_offsets(
        [&](cplx s, cplx, cplx db) { return f(z == cplx(0.0) ? -db : s, s - 1.0); }, p2, z, cfg);
  }
  return total;
}

MirrorMap MirrorMap::linear(Which which) {
  MirrorMap m;
  m.family_ = Family::linear;
  const auto o = zeros(1);
  switch (which) {
    case Which::s1:
      m.factors_ = {make(1, 1, 0, -1, 0, o), make(1, 0, 1, -1, 0, o), make(-1, 0, 1, 1, 0, o),
                    make(-1, 1, 0, 1, 0, o)};
      break;
    case Which::s2:
      m.factors_ = {make(1, 1, 0, -1, 0, o), make(1, 0, 1, 1, 0, o), make(-1, 0, 1, -1, 0, o),
                    make(-1, 1, 0, 1, 0, o)};
      break;
    case Which::a1:
      m.factors_ = {make(1, 1, 0, -1, 0, o), make(1, 1, 0, 1, 0, o), make(-1, 1, 0, 0, 1, o),
                    make(-1, 1, 0, 0, -1, o)};
      break;
    case Which::a2:
      m.factors_ = {make(1, 1, 0, -1, 0, o), make(1, 1, 0, 1, 0, o), make(-1, 0, 1, -1, 0, o),
                    make(-1, 0, 1, 1, 0, o)};
      break;
  }
  return m;
}

MirrorMap MirrorMap::sine(Which which) {
  MirrorMap m;
  m.family_ = Family::sine;
  const auto o = zeros(1);
  switch (which) {
    case Which::s1:
      m.factors_ = {make(1, 1, 0, -1, 0, o), make(1, 0, 1, 1, 0, o), make(-1, 0, 1, -1, 0, o),
                    make(-1, 1, 0, 1, 0, o)};
      break;
    case Which::s2:
      m.factors_ = {make(1, 1, 0, -1, 0, o), make(1, 0, 1, -1, 0, o), make(-1, 0, 1, 1, 0, o),
                    make(-1, 1, 0, 1, 0, o)};
      break;
    default: throw InvalidArgument("three-brane kernels exist for s1 and s2 only");
  }
  return m;
}

MirrorMap MirrorMap::theta_general(Which which, const PeriodMatrix& omega, const Eigen::VectorXcd& A,
                                   const Eigen::VectorXcd& B, const Eigen::VectorXcd& C,
                                   const Eigen::VectorXcd& D) {
  const int g = omega.genus();
  if (A.size() != g || B.size() != g || C.size() != g || D.size() != g)
    throw InvalidArgument("theta mirror map: shift has wrong dimension");
  MirrorMap m;
  m.family_ = Family::theta;
  m.dim_ = g;
  m.owned_ = std::make_shared<const PeriodMatrix>(omega);
  m.omega_ = m.owned_.get();
  switch (which) {
    case Which::s1: m.factors_ = s1_factors(A, B, C, D); break;
    case Which::s2: m.factors_ = s2_factors(A, B, C, D); break;
    default: throw InvalidArgument("hyperelliptic kernels exist for s1 and s2 only");
  }
  return m;
}

MirrorMap MirrorMap::theta(Which which, const PeriodMatrix& omega, const Eigen::VectorXcd& A) {
  const Eigen::VectorXcd Ab = A.conjugate();
  if (which == Which::s1) return theta_general(which, omega, A, -A, -Ab, Ab);
  return theta_general(which, omega, A, Ab, Ab, A);
}

cplx MirrorMap::ratio(const Eigen::VectorXcd& u, const Eigen::VectorXcd& v) const {
  check_vectors(u, v, dim_);
  cplx mant = 1.0;
  double log_scale = 0.0;
  for (const auto& f : factors_) {
    const Eigen::VectorXcd L = combine(f, u, v);
    cplx val;
    switch (family_) {
      case Family::linear: val = L(0); break;
      case Family::sine: val = std::sin(cplx(0.0, kPi) * L(0)); break;
      case Family::theta: {
        const ThetaJet j = theta_jet(L, *omega_, {}, false);
        val = j.value;
        log_scale += f.power * j.log_scale;
        if (f.power < 0 && std::abs(val) < kThetaZero) throw ZeroDenominator("mirror map: denominator theta vanishes");
        break;
      }
    }
    if (f.power < 0 && val == cplx(0.0)) throw ZeroDenominator("mirror map: denominator vanishes");
    mant = f.power > 0 ? mant * val : mant / val;
  }
  return mant * std::exp(log_scale);
}

MirrorMap::LogDerivatives MirrorMap::log_derivatives(const Eigen::VectorXcd& u, const Eigen::VectorXcd& v) const {
  check_vectors(u, v, dim_);
  LogDerivatives d{zeros(dim_), zeros(dim_), zeros(dim_), zeros(dim_)};
  for (const auto& f : factors_) {
    const Eigen::VectorXcd L = combine(f, u, v);
    Eigen::VectorXcd grad(dim_);
    switch (family_) {
      case Family::linear:
        if (L(0) == cplx(0.0)) throw DiagonalSingularity("mirror map: factor vanishes");
        grad(0) = 1.0 / L(0);
        break;
      case Family::sine: {
        const cplx a = cplx(0.0, kPi) * L(0);
        grad(0) = cplx(0.0, kPi) * std::cos(a) / std::sin(a);
        break;
      }
      case Family::theta: {
        const ThetaJet j = theta_jet(L, *omega_, {}, true);
        if (f.power < 0 && std::abs(j.value) < kThetaZero)
          throw ZeroDenominator("mirror map: denominator theta vanishes");
        grad = j.gradient / j.value;
        break;
      }
    }
    const double p = f.power;
    d.du += p * f.cu * grad;
    d.dub += p * f.cub * grad;
    d.dv += p * f.cv * grad;
    d.dvb += p * f.cvb * grad;
  }
  return d;
}

cplx mirror2(cplx u, cplx v, Which which) {
  return MirrorMap::linear(which).ratio(Eigen::VectorXcd::Constant(1, u), Eigen::VectorXcd::Constant(1, v));
}

cplx mirror3(cplx u, cplx v, Which which) {
  return MirrorMap::sine(which).ratio(Eigen::VectorXcd::Constant(1, u), Eigen::VectorXcd::Constant(1, v));
}

Polygon Polygon::two_branes() {
  Polygon p;
  p.n_ = 2;
  p.breaks_ = {0.0};
  return p;
}

Polygon Polygon::three_branes() {
  Polygon p;
  p.n_ = 3;
  p.breaks_ = {0.0, 1.0};
  return p;
}

Polygon Polygon::hyperelliptic(std::shared_ptr<const PeriodFrame> frame, const QuadratureConfig& cfg,
                               int half_period_j) {
  if (!frame) throw InvalidArgument("Polygon: frame required");
  Polygon p;
  p.n_ = 2 * frame->genus() + 2;
  p.cfg_ = cfg;
  p.A_ = half_period_j == 1 ? frame->A_default : odd_half_period(*frame, half_period_j);
  p.breaks_.assign(frame->branch.x().data(), frame->branch.x().data() + frame->branch.x().size());
  p.frame_ = std::move(frame);
  return p;
}

std::vector<BraneSide> Polygon::sides() const {
  std::vector<BraneSide> out;
  const double inf = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= n_; ++k) {
    BraneSide s;
    s.n = n_;
    s.side_index = k;
    s.lo = k == 1 ? -inf : breaks_[k - 2];
    s.hi = k == n_ ? inf : breaks_[k - 1];
    out.push_back(s);
  }
  return out;
}

ChartPoint Polygon::chart(cplx z) const {
  ChartPoint c;
  c.z = z;
  if (n_ == 2) {
    c.u = Eigen::VectorXcd::Constant(1, map_u2(z));
    c.du = Eigen::VectorXcd::Constant(1, map_u2_derivative(z));
  } else if (n_ == 3) {
    c.u = Eigen::VectorXcd::Constant(1, map_u3(z));
    c.du = Eigen::VectorXcd::Constant(1, map_u3_derivative(z));
  } else {
    c.u = abel(SheetedPoint(z), *frame_, cfg_);
    c.du = abel_differential(z, *frame_);
  }
  return c;
}

const MirrorMap& Polygon::mirror(Which which) const {
  auto& slot = mirrors_[static_cast<int>(which)];
  if (!slot) {
    if (n_ == 2) slot = std::make_shared<MirrorMap>(MirrorMap::linear(which));
    else if (n_ == 3) slot = std::make_shared<MirrorMap>(MirrorMap::sine(which));
    else slot = std::make_shared<MirrorMap>(MirrorMap::theta(which, frame_->omega, A_));
  }
  return *slot;
}

cplx mirror_g(const SheetedPoint& P, const SheetedPoint& Q, Which which, const PeriodFrame& frame,
              const QuadratureConfig& cfg) {
  if (std::abs(P.z - Q.z) < kDiagonal && P.sheet == Q.sheet) throw DiagonalSingularity("mirror_g: P = Q");
  const Eigen::VectorXcd u = abel(P, frame, cfg);
  const Eigen::VectorXcd v = abel(Q, frame, cfg);
  return MirrorMap::theta(which, frame.omega, frame.A_default).ratio(u, v);
}

KernelForm zero_mode_term(const ChartPoint& Q, const ChartPoint& P, Which which, const Polygon& poly) {
  KernelForm z;
  if (poly.n() < 4) return z;
  const Eigen::MatrixXcd O = (4.0 * poly.frame()->omega.imag_inverse()).cast<cplx>();
  if (which == Which::s1) {
    z.aP = 0.5 * (Q.u.imag().cast<cplx>().transpose() * O * P.du)(0);
  } else if (which == Which::s2) {
    z.aQ = 0.5 * (P.u.imag().cast<cplx>().transpose() * O * Q.du)(0);
  }
  return z;
}

KernelForm angular_form(const ChartPoint& Q, const ChartPoint& P, Which which, const Polygon& poly) {
  if (std::abs(P.z - Q.z) < kDiagonal) throw DiagonalSingularity("kernel: P and Q coincide");
  const MirrorMap::LogDerivatives d = poly.mirror(which).log_derivatives(P.u, Q.u);
  const cplx scale = 1.0 / (cplx(0.0, 2.0) * 2.0 * kPi);
  KernelForm k;
  k.aP = scale * (d.du - d.dub.conjugate()).cwiseProduct(P.du).sum();
  k.aQ = scale * (d.dv - d.dvb.conjugate()).cwiseProduct(Q.du).sum();
  if (!std::isfinite(std::abs(k.aP)) || !std::isfinite(std::abs(k.aQ)))
    throw DiagonalSingularity("kernel: non-finite value");
  return k;
}

KernelForm kernel(const ChartPoint& Q, const ChartPoint& P, Which which, const Polygon& poly) {
  KernelForm k = angular_form(Q, P, which, poly);
  k -= zero_mode_term(Q, P, which, poly);
  return k;
}

KernelForm kernel(cplx zQ, cplx zP, Which which, const Polygon& poly) {
  if (std::abs(zP - zQ) < kDiagonal) throw DiagonalSingularity("kernel: P and Q coincide");
  return kernel(poly.chart(zQ), poly.chart(zP), which, poly);
}

NearDiagonalReport near_diagonal_check(cplx zQ, const std::vector<cplx>& zP, Which which, const Polygon& poly) {
  NearDiagonalReport r;
  const ChartPoint Q = poly.chart(zQ);
  cplx prevP = 0.0, prevQ = 0.0;
  for (std::size_t i = 0; i < zP.size(); ++i) {
    const cplx p = zP[i];
    const KernelForm k = angular_form(Q, poly.chart(p), which, poly);
    const cplx ref = 1.0 / (cplx(0.0, 2.0) * 2.0 * kPi * (p - zQ));
    const cplx remP = k.aP - ref, remQ = k.aQ + ref;
    const double dist = std::abs(p - zQ);
    r.distances.push_back(dist);
    r.residuals.push_back(std::max(std::abs(remP), std::abs(remQ)));
    r.max_residual = std::max(r.max_residual, r.residuals.back());
    if (i > 0) {
      const double step = std::max(std::abs(remP - prevP), std::abs(remQ - prevQ));
      r.fitted_constant = std::max(r.fitted_constant, step / std::abs(p - zP[i - 1]));
    }
    prevP = remP;
    prevQ = remQ;
  }
  return r;
}

}  // namespace psm
