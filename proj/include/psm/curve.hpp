#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

#include "psm/numerics.hpp"
#include "psm/theta.hpp"

namespace psm {

/// Finite real branch points x_1 < ... < x_{2g+1} of w^2 = prod (z - x_i).
/// The last branch point P_{2g+2} lies over infinity.
class BranchData {
 public:
  BranchData() = default;
  explicit BranchData(Eigen::VectorXd x);
  explicit BranchData(const std::vector<double>& x);

  int genus() const { return static_cast<int>(x_.size() - 1) / 2; }
  const Eigen::VectorXd& x() const { return x_; }
  double min_gap() const;
  double span() const { return x_(x_.size() - 1) - x_(0); }

 private:
  Eigen::VectorXd x_;
};

enum class Sheet { plus, minus };

struct SheetedPoint {
  cplx z;
  Sheet sheet = Sheet::plus;
  bool at_infinity = false;

  SheetedPoint() = default;
  SheetedPoint(cplx z_, Sheet s = Sheet::plus) : z(z_), sheet(s) {}
  static SheetedPoint infinity() {
    SheetedPoint p;
    p.at_infinity = true;
    return p;
  }
};

/// Square root continuous from above on the real axis: negative reals map
/// to the positive imaginary axis.
cplx sqrt_from_above(cplx s);

/// w(z) on the closed upper half plane, positive on (x_{2g+1}, inf).
cplx w_eval(const SheetedPoint& p, const BranchData& branch);

/// Frame of normalized differentials, periods and distinguished half periods.
struct PeriodFrame {
  BranchData branch;
  Eigen::MatrixXd I;              // normalization: omega_i = I_ij z^{j-1}/w dz
  PeriodMatrix omega;
  Eigen::MatrixXcd half_periods;  // column k-1 holds phi(P_k), k = 1..2g+2
  Eigen::VectorXcd K;
  Eigen::VectorXcd A_default;
  /// Residuals of the quadrature results before I and Omega are stored as
  /// real and purely imaginary. Zero for frames assembled from stored data.
  double build_imag_I = 0.0;
  double build_real_omega = 0.0;
  double build_asym_omega = 0.0;

  int genus() const { return branch.genus(); }
  Eigen::VectorXcd e(int j) const { return Eigen::VectorXcd::Unit(genus(), j - 1); }
  Eigen::VectorXcd tau(int j) const { return omega.column(j - 1); }
};

/// Frame invariant residuals, as reported by the CLI.
struct FrameChecks {
  double imag_I = 0.0;
  double real_omega = 0.0;
  double asym_omega = 0.0;
  bool im_omega_pd = false;
  double half_period_table = 0.0;
  double riemann_constants = 0.0;
};

PeriodFrame build_frame(const BranchData& branch, const QuadratureConfig& cfg = {});

/// Rebuilds a frame from stored data and re-runs the structural checks.
PeriodFrame assemble_frame(const BranchData& branch, const Eigen::MatrixXd& I, const Eigen::MatrixXd& omega_im,
                           const Eigen::MatrixXcd& half_periods);

FrameChecks check_frame(const PeriodFrame& frame);

/// Closed-form value of phi(P_k), k = 1..2g+2, in terms of e and tau.
Eigen::VectorXcd closed_form_half_period(const PeriodMatrix& omega, int k);

/// Abel map from P_1 to p, vector of length g.
Eigen::VectorXcd abel(const SheetedPoint& p, const PeriodFrame& frame, const QuadratureConfig& cfg = {});

/// Abel map evaluated along an explicit path of waypoints starting at the
/// branch point x_k (1-based); used to test path independence.
Eigen::VectorXcd abel_along(const std::vector<cplx>& waypoints, int start_branch, const PeriodFrame& frame,
                            const QuadratureConfig& cfg = {});

/// Normalized differentials omega_j(z)/dz = I_jk z^{k-1}/w(z).
Eigen::VectorXcd abel_differential(cplx z, const PeriodFrame& frame);

Eigen::VectorXcd riemann_constants(const PeriodFrame& frame);

/// phi(P_{2j+1}) as the canonical half period (eps' + Omega eps)/2.
Eigen::VectorXcd odd_half_period(const PeriodFrame& frame, int j);

/// Sends x_k to infinity with z -> (z - x_j)/(z - x_k); 1-based indices.
BranchData moebius_reduce(const Eigen::VectorXd& x, int j, int k);

}  // namespace psm
