#include "psm/curve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace psm {

namespace {

constexpr double kFrameTol = 1e-8;

// Offsets from the ends of a segment that sit exactly on branch points.
// Index -1 means the end is an ordinary point.
struct Anchors {
  int ia = -1;
  int ib = -1;
};

// Vector (s^{j-1} / w(s))_{j=1..g}; factors at anchored branch points use
// the exact offsets da = s - x_ia and db = x_ib - s.
Eigen::VectorXcd raw_differentials(cplx s, cplx da, cplx db, const Eigen::VectorXd& x, int g, Anchors an) {
  cplx inv_w = 1.0;
  for (int i = 0; i < x.size(); ++i) {
    const cplx diff = (i == an.ia) ? da : (i == an.ib) ? -db : s - x(i);
    inv_w /= sqrt_from_above(diff);
  }
  Eigen::VectorXcd out(g);
  cplx pw = 1.0;
  for (int j = 0; j < g; ++j) {
    out(j) = pw * inv_w;
    pw *= s;
  }
  return out;
}

// Unnormalized integral of the differentials along [a, b].
Eigen::VectorXcd raw_segment(cplx a, cplx b, Anchors an, const BranchData& br, const QuadratureConfig& cfg) {
  const Eigen::VectorXd& x = br.x();
  const int g = br.genus();
  return integrate_segment_offsets(
      [&](cplx s, cplx da, cplx db) { return raw_differentials(s, da, db, x, g, an); }, a, b, cfg);
}

// Unnormalized integral from x_{2g+1} to infinity along the real axis.
Eigen::VectorXcd raw_last_tail(const BranchData& br, const QuadratureConfig& cfg) {
  const Eigen::VectorXd& x = br.x();
  const int g = br.genus();
  const int last = static_cast<int>(x.size()) - 1;
  const double len = std::max(br.span(), 1.0);
  // s = x_last + len * t / (1 - t)
  return integrate_segment_offsets(
      [&](cplx, cplx t, cplx one_minus_t) {
        const cplx off = len * t / one_minus_t;
        Anchors an;
        an.ia = last;
        Eigen::VectorXcd v = raw_differentials(x(last) + off, off, 0.0, x, g, an);
        return Eigen::VectorXcd(v * (len / (one_minus_t * one_minus_t)));
      },
      0.0, 1.0, cfg);
}

// Unnormalized integral from z to infinity along the ray from the centre c.
Eigen::VectorXcd raw_ray_tail(cplx z, cplx c, const BranchData& br, const QuadratureConfig& cfg) {
  const Eigen::VectorXd& x = br.x();
  const int g = br.genus();
  // s = c + (z - c) / t, ds = -(z - c)/t^2 dt
  return integrate_segment_offsets(
      [&](cplx, cplx t, cplx) {
        const cplx s = c + (z - c) / t;
        Eigen::VectorXcd v = raw_differentials(s, 0.0, 0.0, x, g, Anchors{});
        return Eigen::VectorXcd(v * ((z - c) / (t * t)));
      },
      0.0, 1.0, cfg);
}

Eigen::VectorXcd partial_e_sum(int g, int upto) {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(g);
  for (int i = 0; i < upto; ++i) out(i) = 1.0;
  return out;
}

double table_residual(const PeriodMatrix& pm, const Eigen::MatrixXcd& table) {
  double worst = 0.0;
  for (int k = 1; k <= table.cols(); ++k)
    worst = std::max(worst, lattice_distance(table.col(k - 1) - closed_form_half_period(pm, k), pm));
  return worst;
}

}  // namespace

BranchData::BranchData(Eigen::VectorXd x) : x_(std::move(x)) {
  if (x_.size() < 1 || x_.size() % 2 == 0)
    throw InvalidArgument("BranchData: need an odd number of finite branch points");
  if (!x_.allFinite()) throw InvalidArgument("BranchData: non-finite branch point");
  for (int i = 0; i + 1 < x_.size(); ++i)
    if (!(x_(i) < x_(i + 1))) throw InvalidArgument("BranchData: branch points must be strictly increasing");
}

BranchData::BranchData(const std::vector<double>& x)
    : BranchData(Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size())).eval()) {}

double BranchData::min_gap() const {
  if (x_.size() < 2) return 1.0;
  return (x_.tail(x_.size() - 1) - x_.head(x_.size() - 1)).minCoeff();
}

cplx sqrt_from_above(cplx s) {
  if (s.imag() == 0.0 && s.real() < 0.0) return {0.0, std::sqrt(-s.real())};
  return std::sqrt(s);
}

cplx w_eval(const SheetedPoint& p, const BranchData& branch) {
  if (p.at_infinity) return {std::numeric_limits<double>::infinity(), 0.0};
  cplx w = 1.0;
  for (int i = 0; i < branch.x().size(); ++i) {
    const cplx d = p.z - branch.x()(i);
    if (d == cplx(0.0)) return 0.0;
    w *= sqrt_from_above(d);
  }
  return p.sheet == Sheet::plus ? w : -w;
}

Eigen::VectorXcd closed_form_half_period(const PeriodMatrix& pm, int k) {
  const int g = pm.genus();
  if (k < 1 || k > 2 * g + 2) throw InvalidArgument("closed_form_half_period: index out of range");
  const Eigen::VectorXcd t1 = pm.column(0);
  if (k == 1) return Eigen::VectorXcd::Zero(g);
  if (k == 2) return 0.5 * partial_e_sum(g, 1);
  if (k == 2 * g + 1) return 0.5 * (partial_e_sum(g, g) + t1);
  if (k == 2 * g + 2) return 0.5 * t1;
  const int m = (k - 1) / 2;  // k = 2m+1 or 2m+2, 1 <= m <= g-1
  const int upto = (k % 2 == 1) ? m : m + 1;
  return 0.5 * (partial_e_sum(g, upto) + t1 + pm.column(m));
}

Eigen::VectorXcd riemann_constants(const PeriodFrame& frame) {
  const int g = frame.genus();
  const PeriodMatrix& pm = frame.omega;
  Eigen::VectorXcd k = Eigen::VectorXcd::Zero(g);
  for (int j = 1; j <= g; ++j) k += static_cast<double>(g - j + 1) * frame.e(j);
  k += static_cast<double>(g) * frame.tau(1);
  for (int j = 2; j <= g; ++j) k += frame.tau(j);
  k *= 0.5;

  Eigen::VectorXcd summed = Eigen::VectorXcd::Zero(g);
  for (int j = 1; j <= g; ++j) summed += frame.half_periods.col(2 * j);
  const double res = lattice_distance(k - summed, pm);
  if (res > kFrameTol)
    throw MismatchError("riemann_constants: closed form disagrees with the half-period sum (" + std::to_string(res) +
                        ")");
  return k;
}

Eigen::VectorXcd odd_half_period(const PeriodFrame& frame, int j) {
  const int g = frame.genus();
  if (j < 1 || j > g) throw InvalidArgument("odd_half_period: j out of range");
  const PeriodMatrix& pm = frame.omega;
  const Characteristic c = characteristic_of(frame.half_periods.col(2 * j), pm);
  if (c.parity() != 1) throw SingularHalfPeriod("odd_half_period: half period is even");
  const Eigen::VectorXcd a = half_period(c, pm);
  if (std::abs(theta(a, pm)) > kFrameTol) throw SingularHalfPeriod("odd_half_period: theta does not vanish");
  if (theta_gradient(a, pm).norm() < 1e-6) throw SingularHalfPeriod("odd_half_period: singular half period");
  return a;
}

Eigen::VectorXcd abel_differential(cplx z, const PeriodFrame& frame) {
  const Eigen::VectorXcd raw = raw_differentials(z, 0.0, 0.0, frame.branch.x(), frame.genus(), Anchors{});
  return frame.I.cast<cplx>() * raw;
}

PeriodFrame assemble_frame(const BranchData& branch, const Eigen::MatrixXd& I, const Eigen::MatrixXd& omega_im,
                           const Eigen::MatrixXcd& half_periods) {
  const int g = branch.genus();
  if (g < 1) throw InvalidArgument("frame: genus must be >= 1");
  if (I.rows() != g || I.cols() != g || omega_im.rows() != g || omega_im.cols() != g || half_periods.rows() != g ||
      half_periods.cols() != 2 * g + 2)
    throw InvalidArgument("frame: inconsistent shapes");
  if (!is_positive_definite(0.5 * (omega_im + omega_im.transpose())))
    throw FrameInvariantViolation("frame: Im Omega is not positive definite");
  if ((omega_im - omega_im.transpose()).cwiseAbs().maxCoeff() > kFrameTol)
    throw FrameInvariantViolation("frame: Omega is not symmetric");
  const Eigen::MatrixXd sym = 0.5 * (omega_im + omega_im.transpose());
  PeriodFrame f{branch, I, PeriodMatrix(cplx(0.0, 1.0) * sym.cast<cplx>()), half_periods, {}, {}};
  const double table = table_residual(f.omega, half_periods);
  if (table > kFrameTol)
    throw FrameInvariantViolation("frame: half-period table mismatch (" + std::to_string(table) + ")");
  f.K = riemann_constants(f);
  f.A_default = odd_half_period(f, 1);
  return f;
}

PeriodFrame build_frame(const BranchData& branch, const QuadratureConfig& cfg) {
  const int g = branch.genus();
  if (g < 1) throw InvalidArgument("build_frame: genus must be >= 1");
  const Eigen::VectorXd& x = branch.x();

  // a-periods over [x_{2k-1}, x_{2k}] and gap integrals over [x_{2k}, x_{2k+1}]
  Eigen::MatrixXcd A(g, g), G(g, g);
  for (int k = 0; k < g; ++k) {
    A.col(k) = 2.0 * raw_segment(x(2 * k), x(2 * k + 1), Anchors{2 * k, 2 * k + 1}, branch, cfg);
    G.col(k) = raw_segment(x(2 * k + 1), x(2 * k + 2), Anchors{2 * k + 1, 2 * k + 2}, branch, cfg);
  }
  const Eigen::MatrixXcd Ic = invert(A);
  if (Ic.imag().cwiseAbs().maxCoeff() > kFrameTol)
    throw FrameInvariantViolation("build_frame: normalization matrix is not real");
  const Eigen::MatrixXd I = Ic.real();

  // b-cycle columns from tail sums of the normalized gap integrals; the
  // orientation is the one giving Im Omega > 0.
  const Eigen::MatrixXcd V = 2.0 * I.cast<cplx>() * G;
  Eigen::MatrixXcd T = Eigen::MatrixXcd::Zero(g, g);
  T.col(g - 1) = V.col(g - 1);
  for (int j = g - 2; j >= 0; --j) T.col(j) = V.col(j) + T.col(j + 1);
  const Eigen::MatrixXd Y = T.imag();
  const Eigen::MatrixXd Ysym = 0.5 * (Y + Y.transpose());
  double sign = 0.0;
  if (is_positive_definite(Ysym)) sign = 1.0;
  else if (is_positive_definite(-Ysym)) sign = -1.0;
  else throw FrameInvariantViolation("build_frame: no orientation gives Im Omega > 0");
  const Eigen::MatrixXcd Omega = sign * T;
  if (Omega.real().cwiseAbs().maxCoeff() > kFrameTol)
    throw FrameInvariantViolation("build_frame: Omega is not purely imaginary");
  if ((Omega - Omega.transpose()).cwiseAbs().maxCoeff() > kFrameTol)
    throw FrameInvariantViolation("build_frame: Omega is not symmetric");

  // phi(P_k) by direct integration between consecutive branch points
  Eigen::MatrixXcd table(g, 2 * g + 2);
  table.col(0).setZero();
  for (int i = 0; i < 2 * g; ++i) {
    const Eigen::VectorXcd seg = (i % 2 == 0) ? Eigen::VectorXcd(0.5 * A.col(i / 2))
                                              : Eigen::VectorXcd(G.col(i / 2));
    table.col(i + 1) = table.col(i) + I.cast<cplx>() * seg;
  }
  table.col(2 * g + 1) = table.col(2 * g) + I.cast<cplx>() * raw_last_tail(branch, cfg);

  PeriodFrame frame = assemble_frame(branch, I, Omega.imag(), table);
  frame.build_imag_I = Ic.imag().cwiseAbs().maxCoeff();
  frame.build_real_omega = Omega.real().cwiseAbs().maxCoeff();
  frame.build_asym_omega = (Omega - Omega.transpose()).cwiseAbs().maxCoeff();
  return frame;
}

FrameChecks check_frame(const PeriodFrame& frame) {
  FrameChecks c;
  c.imag_I = frame.build_imag_I;
  c.real_omega = std::max(frame.build_real_omega, frame.omega.omega().real().cwiseAbs().maxCoeff());
  c.asym_omega = std::max(frame.build_asym_omega,
                          (frame.omega.omega() - frame.omega.omega().transpose()).cwiseAbs().maxCoeff());
  c.im_omega_pd = is_positive_definite(frame.omega.imag());
  c.half_period_table = table_residual(frame.omega, frame.half_periods);
  Eigen::VectorXcd summed = Eigen::VectorXcd::Zero(frame.genus());
  for (int j = 1; j <= frame.genus(); ++j) summed += frame.half_periods.col(2 * j);
  c.riemann_constants = lattice_distance(frame.K - summed, frame.omega);
  return c;
}

Eigen::VectorXcd abel_along(const std::vector<cplx>& waypoints, int start_branch, const PeriodFrame& frame,
                            const QuadratureConfig& cfg) {
  const BranchData& br = frame.branch;
  if (start_branch < 1 || start_branch > br.x().size())
    throw InvalidArgument("abel_along: start branch index out of range");
  if (waypoints.empty()) throw InvalidArgument("abel_along: empty path");
  Eigen::VectorXcd raw = Eigen::VectorXcd::Zero(frame.genus());
  cplx prev = br.x()(start_branch - 1);
  Anchors an{start_branch - 1, -1};
  for (cplx wp : waypoints) {
    raw += raw_segment(prev, wp, an, br, cfg);
    an = Anchors{};
    prev = wp;
  }
  return frame.half_periods.col(start_branch - 1) + frame.I.cast<cplx>() * raw;
}

Eigen::VectorXcd abel(const SheetedPoint& p, const PeriodFrame& frame, const QuadratureConfig& cfg) {
  const BranchData& br = frame.branch;
  const Eigen::VectorXd& x = br.x();
  const int g = frame.genus();
  if (p.at_infinity) return frame.half_periods.col(2 * g + 1);
  const cplx z = p.z;
  if (!(z.imag() >= 0.0) || !std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw InvalidArgument("abel: point must lie in the closed upper half plane");
  const double sgn = p.sheet == Sheet::plus ? 1.0 : -1.0;
  const Eigen::MatrixXcd I = frame.I.cast<cplx>();

  const cplx c = 0.5 * (x(0) + x(x.size() - 1));
  const double radius = std::max(0.5 * br.span(), br.min_gap());
  if (std::abs(z - c) > 4.0 * radius)
    return sgn * Eigen::VectorXcd(frame.half_periods.col(2 * g + 1) - I * raw_ray_tail(z, c, br, cfg));

  int k = 0;
  for (int i = 1; i < x.size(); ++i)
    if (std::abs(z.real() - x(i)) < std::abs(z.real() - x(k))) k = i;
  if (z == cplx(x(k), 0.0)) return sgn * Eigen::VectorXcd(frame.half_periods.col(k));

  const double h0 = 0.25 * br.min_gap();
  std::vector<cplx> path;
  if (std::abs(z.real() - x(k)) < 1e-15 * std::max(1.0, std::abs(x(k)))) {
    path = {z};
  } else {
    const double h = std::max(z.imag(), h0);
    path = {cplx(x(k), h), cplx(z.real(), h)};
    if (h != z.imag()) path.push_back(z);
  }
  return sgn * abel_along(path, k + 1, frame, cfg);
}

BranchData moebius_reduce(const Eigen::VectorXd& x, int j, int k) {
  const int m = static_cast<int>(x.size());
  if (m < 2 || m % 2 != 0) throw InvalidArgument("moebius_reduce: need an even number of branch points");
  if (j < 1 || j > m || k < 1 || k > m || j == k) throw InvalidArgument("moebius_reduce: invalid indices");
  if (k % 2 != 0) throw InvalidArgument("moebius_reduce: k must be even");
  for (int i = 0; i + 1 < m; ++i)
    if (!(x(i) < x(i + 1))) throw InvalidArgument("moebius_reduce: branch points must be strictly increasing");
  const double xj = x(j - 1), xk = x(k - 1);
  std::vector<double> img;
  for (int i = 0; i < m; ++i)
    if (i != k - 1) img.push_back((x(i) - xj) / (x(i) - xk));
  std::sort(img.begin(), img.end());
  for (std::size_t i = 0; i + 1 < img.size(); ++i)
    if (img[i + 1] - img[i] < 1e-12) throw DegenerateTransform("moebius_reduce: coinciding images");
  return BranchData(img);
}

}  // namespace psm
