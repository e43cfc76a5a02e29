#include "psm/numerics.hpp"

#include <array>
#include <numbers>

namespace psm {

void QuadratureConfig::validate() const {
  if (!(target_abs_tol > 0.0)) throw InvalidArgument("QuadratureConfig: target_abs_tol must be > 0");
  if (max_levels < 3) throw InvalidArgument("QuadratureConfig: max_levels must be >= 3");
  if (!(excision_radius >= 0.0)) throw InvalidArgument("QuadratureConfig: excision_radius must be >= 0");
}

namespace detail {
namespace {

constexpr double kTmax = 4.0;
constexpr int kMaxLevel = 16;

DeNode make_node(double t) {
  const double u = 0.5 * std::numbers::pi * std::sinh(t);
  const double c = std::cosh(u);
  // 1 - tanh(u) = 2 / (1 + e^{2u})
  return {2.0 / (1.0 + std::exp(2.0 * u)), 0.5 * std::numbers::pi * std::cosh(t) / (c * c)};
}

std::array<std::vector<DeNode>, kMaxLevel + 1> build_tables() {
  std::array<std::vector<DeNode>, kMaxLevel + 1> out;
  for (int t = 0; t <= static_cast<int>(kTmax); ++t) out[0].push_back(make_node(t));
  for (int k = 1; k <= kMaxLevel; ++k) {
    const double h = std::ldexp(1.0, -k);
    for (double t = h; t <= kTmax; t += 2.0 * h) out[k].push_back(make_node(t));
  }
  return out;
}

}  // namespace

const std::vector<DeNode>& de_level(int k) {
  static const auto tables = build_tables();
  if (k < 0 || k > kMaxLevel) throw InvalidArgument("tanh-sinh level out of range");
  return tables[k];
}

double de_step(int k) { return std::ldexp(1.0, -k); }

}  // namespace detail

std::vector<RuleNode> tanh_sinh_rule(double a, double b, int level) {
  if (level < 0) throw InvalidArgument("tanh_sinh_rule: negative level");
  if (!(b > a)) throw InvalidArgument("tanh_sinh_rule: empty interval");
  const double half = 0.5 * (b - a);
  const double h = detail::de_step(level);
  std::vector<RuleNode> out;
  for (int k = 0; k <= level; ++k) {
    const auto& nodes = detail::de_level(k);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const auto& nd = nodes[i];
      const double w = nd.weight * h * half;
      if (w < 1e-30) continue;
      const double near = nd.gap * half, far = (2.0 - nd.gap) * half;
      out.push_back({b - near, w, far, near});
      if (k > 0 || i > 0) out.push_back({a + near, w, near, far});
    }
  }
  return out;
}

std::vector<RuleNode> half_line_rule(double a, double scale, int level) {
  std::vector<RuleNode> out;
  for (const auto& nd : tanh_sinh_rule(0.0, 1.0, level)) {
    const double t = nd.from_lo, om = nd.from_hi;
    const double off = scale * t / om;
    out.push_back({a + off, nd.weight * scale / (om * om), off, std::numeric_limits<double>::infinity()});
  }
  return out;
}

std::vector<RuleNode> left_half_line_rule(double b, double scale, int level) {
  std::vector<RuleNode> out;
  for (const auto& nd : half_line_rule(0.0, scale, level))
    out.push_back({b - nd.x, nd.weight, std::numeric_limits<double>::infinity(), nd.x});
  return out;
}

namespace {

template <typename Mat>
Mat invert_impl(const Mat& m, double pivot_tol) {
  if (m.rows() != m.cols() || m.rows() == 0) throw InvalidArgument("invert: matrix must be square");
  if (!m.allFinite()) throw InvalidArgument("invert: non-finite entries");
  Eigen::PartialPivLU<Mat> lu(m);
  const double big = m.cwiseAbs().maxCoeff();
  const auto diag = lu.matrixLU().diagonal().cwiseAbs();
  if (big == 0.0 || diag.minCoeff() < pivot_tol * big) throw Singular("invert: pivot below threshold");
  return lu.inverse();
}

}  // namespace

Eigen::MatrixXcd invert(const Eigen::MatrixXcd& m, double pivot_tol) { return invert_impl(m, pivot_tol); }
Eigen::MatrixXd invert(const Eigen::MatrixXd& m, double pivot_tol) { return invert_impl(m, pivot_tol); }

bool is_positive_definite(const Eigen::MatrixXd& m, double sym_tol) {
  if (m.rows() != m.cols()) throw InvalidArgument("is_positive_definite: matrix must be square");
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > sym_tol) throw NotSymmetric("is_positive_definite: not symmetric");
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  return llt.info() == Eigen::Success;
}

}  // namespace psm
