#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <limits>
#include <type_traits>
#include <vector>

#include "psm/errors.hpp"

namespace psm {

using cplx = std::complex<double>;

struct QuadratureConfig {
  double target_abs_tol = 1e-12;
  int max_levels = 10;
  double excision_radius = 0.0;

  void validate() const;
};

namespace detail {

/// One abscissa of the tanh-sinh rule on [-1, 1] for t >= 0.
/// `gap` is 1 - x(t), kept separately so that points next to an
/// endpoint are not rounded onto it.
struct DeNode {
  double gap;
  double weight;
};

/// Nodes added at refinement level k (step 2^-k). Level 0 holds t = 0..tmax.
const std::vector<DeNode>& de_level(int k);
double de_step(int k);

}  // namespace detail

inline double de_norm(const cplx& v) { return std::abs(v); }
inline double de_norm(const Eigen::VectorXcd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }
inline bool de_finite(const cplx& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }
inline bool de_finite(const Eigen::VectorXcd& v) { return v.allFinite(); }

/// Integrates f over the segment [a, b] by tanh-sinh quadrature.
///
/// The integrand is called as f(s, da, db) where s is the node, da = s - a
/// and db = b - s. The offsets are computed without cancellation, so an
/// integrand with a (s - a)^(-1/2) singularity can use da directly.
/// The value type may be cplx or Eigen::VectorXcd.
template <typename F>
auto integrate_segment_offsets(F&& f, cplx a, cplx b, const QuadratureConfig& cfg)
    -> std::decay_t<decltype(f(a, a, a))> {
  using V = std::decay_t<decltype(f(a, a, a))>;
  cfg.validate();
  const cplx half = 0.5 * (b - a);
  // x = 1 - gap: distance gap*half from b, (2 - gap)*half from a
  const auto& base = detail::de_level(0);
  const detail::DeNode& mid = base.front();
  V sum = f(b - mid.gap * half, (2.0 - mid.gap) * half, mid.gap * half);
  if (half == cplx(0.0)) {
    if constexpr (std::is_same_v<V, cplx>) return cplx(0.0);
    else return V::Zero(sum.size());
  }
  sum *= mid.weight;
  double scale = de_norm(sum);  // sum of |w f|, for the rounding floor
  auto add = [&](const detail::DeNode& nd) {
    const cplx near = nd.gap * half;
    const cplx far = (2.0 - nd.gap) * half;
    V vb = f(b - near, far, near);
    scale += nd.weight * de_norm(vb);
    sum += nd.weight * vb;
    V va = f(a + near, near, far);
    scale += nd.weight * de_norm(va);
    sum += nd.weight * va;
  };

  for (std::size_t i = 1; i < base.size(); ++i) add(base[i]);
  V prev = sum * (detail::de_step(0) * half);

  for (int k = 1; k <= cfg.max_levels; ++k) {
    for (const auto& nd : detail::de_level(k)) add(nd);
    const double h = detail::de_step(k);
    V cur = sum * (h * half);
    if (!de_finite(cur)) throw QuadratureFailure("integrate_segment: non-finite integrand value");
    const double diff = de_norm(V(cur - prev));
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() * scale * h * std::abs(half);
    if (k >= 3 && diff <= std::max(cfg.target_abs_tol, floor)) return cur;
    prev = cur;
  }
  throw NonConvergence("integrate_segment: no convergence within max_levels");
}

/// Integrates a plain integrand f(s) over [a, b].
template <typename F>
cplx integrate_segment(F&& f, cplx a, cplx b, const QuadratureConfig& cfg) {
  return integrate_segment_offsets([&](cplx s, cplx, cplx) { return cplx(f(s)); }, a, b, cfg);
}

/// Sum of segment integrals along a polygonal path.
template <typename F>
cplx integrate_path(F&& f, const std::vector<cplx>& waypoints, const QuadratureConfig& cfg) {
  if (waypoints.size() < 2) throw InvalidArgument("integrate_path: need at least two waypoints");
  cplx total = 0.0;
  for (std::size_t i = 0; i + 1 < waypoints.size(); ++i)
    total += integrate_segment(f, waypoints[i], waypoints[i + 1], cfg);
  return total;
}

/// A node of a fixed quadrature rule on a real interval. `from_lo` and
/// `from_hi` are the distances to the interval ends.
struct RuleNode {
  double x;
  double weight;
  double from_lo;
  double from_hi;
};

/// Tanh-sinh rule on [a, b] using all nodes up to `level`.
std::vector<RuleNode> tanh_sinh_rule(double a, double b, int level);

/// Rule for [a, inf) through x = a + scale * t / (1 - t).
std::vector<RuleNode> half_line_rule(double a, double scale, int level);

/// Rule for (-inf, b] through x = b - scale * t / (1 - t).
std::vector<RuleNode> left_half_line_rule(double b, double scale, int level);

/// Integral over [a, inf) by the same substitution, adaptive.
template <typename F>
auto integrate_half_line(F&& f, double a, double scale, const QuadratureConfig& cfg) {
  return integrate_segment_offsets(
      [&](cplx, cplx t, cplx omt) {
        const double tt = t.real(), om = omt.real();
        const double off = scale * tt / om;
        auto v = f(a + off, off);
        return decltype(v)(v * (scale / (om * om)));
      },
      0.0, 1.0, cfg);
}

/// Inverse through partial-pivot LU. Throws Singular when a pivot falls
/// below `pivot_tol` relative to the largest entry.
Eigen::MatrixXcd invert(const Eigen::MatrixXcd& m, double pivot_tol = 1e-13);
Eigen::MatrixXd invert(const Eigen::MatrixXd& m, double pivot_tol = 1e-13);

/// True iff a real Cholesky factorization of the symmetric matrix succeeds.
bool is_positive_definite(const Eigen::MatrixXd& m, double sym_tol = 1e-10);

}  // namespace psm
