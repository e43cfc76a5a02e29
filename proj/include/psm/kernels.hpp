#pragma once

#include <Eigen/Dense>

#include <array>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "psm/curve.hpp"
#include "psm/theta.hpp"

namespace psm {

enum class Which { s1, s2, a1, a2 };

Which parse_which(const std::string& s);
std::string to_string(Which w);

struct IndexSets {
  int m = 0;
  std::vector<std::set<int>> I;
  std::set<int> S1, S2;
};

/// S1 intersects the complements of the odd-numbered sets with the even
/// ones, S2 the other way round.
IndexSets relevant_sets(const std::vector<std::set<int>>& I, int m);

enum class Parity { odd, even };

struct BraneSide {
  int n = 0;
  int side_index = 0;  // 1-based
  double lo = 0.0;     // z-interval on the real axis, may be -inf
  double hi = 0.0;     // may be +inf

  Parity parity() const { return side_index % 2 == 0 ? Parity::even : Parity::odd; }
};

/// Value of a kernel 1-form: 2 Re(aQ dzQ) + 2 Re(aP dzP).
struct KernelForm {
  cplx aQ = 0.0;
  cplx aP = 0.0;

  double evaluate(cplx dzQ, cplx dzP) const { return 2.0 * (aQ * dzQ).real() + 2.0 * (aP * dzP).real(); }
  KernelForm& operator-=(const KernelForm& o) {
    aQ -= o.aQ;
    aP -= o.aP;
    return *this;
  }
};

cplx map_u2(cplx z);
cplx map_u2_derivative(cplx z);
cplx map_u3(cplx z);
cplx map_u3_derivative(cplx z);
/// u3 by quadrature of ds / (2 pi sqrt(s(s-1))) from 1; used as a cross-check.
cplx map_u3_quadrature(cplx z, const QuadratureConfig& cfg = {});

/// A product of factors f(L)^(+-1) with L = cu u + cub conj(u) + cv v + cvb conj(v) + shift.
class MirrorMap {
 public:
  enum class Family { linear, sine, theta };

  struct Factor {
    int power;
    double cu, cub, cv, cvb;
    Eigen::VectorXcd shift;
  };

  /// Partial log-derivatives of the ratio with respect to u, conj(u), v, conj(v).
  struct LogDerivatives {
    Eigen::VectorXcd du, dub, dv, dvb;
  };

  static MirrorMap linear(Which which);
  static MirrorMap sine(Which which);
  static MirrorMap theta(Which which, const PeriodMatrix& omega, const Eigen::VectorXcd& A);
  /// General four-shift maps used by the reflection identities.
  static MirrorMap theta_general(Which which, const PeriodMatrix& omega, const Eigen::VectorXcd& A,
                                 const Eigen::VectorXcd& B, const Eigen::VectorXcd& C, const Eigen::VectorXcd& D);

  Family family() const { return family_; }
  int dimension() const { return dim_; }

  cplx ratio(const Eigen::VectorXcd& u, const Eigen::VectorXcd& v) const;
  double psi(const Eigen::VectorXcd& u, const Eigen::VectorXcd& v) const { return std::arg(ratio(u, v)); }
  LogDerivatives log_derivatives(const Eigen::VectorXcd& u, const Eigen::VectorXcd& v) const;

 private:
  Family family_ = Family::linear;
  int dim_ = 1;
  std::vector<Factor> factors_;
  const PeriodMatrix* omega_ = nullptr;
  std::shared_ptr<const PeriodMatrix> owned_;
};

cplx mirror2(cplx u, cplx v, Which which);
cplx mirror3(cplx u, cplx v, Which which);

/// A point of the source polygon with its chart image u and du/dz.
struct ChartPoint {
  cplx z;
  Eigen::VectorXcd u;
  Eigen::VectorXcd du;
};

/// The source polygon P_n in the z-chart of the closed upper half plane.
class Polygon {
 public:
  static Polygon two_branes();
  static Polygon three_branes();
  /// n = 2g+2; j selects the odd half period phi(P_{2j+1}).
  static Polygon hyperelliptic(std::shared_ptr<const PeriodFrame> frame, const QuadratureConfig& cfg = {},
                               int half_period_j = 1);

  int n() const { return n_; }
  int genus() const { return frame_ ? frame_->genus() : 0; }
  const PeriodFrame* frame() const { return frame_.get(); }
  const QuadratureConfig& quadrature() const { return cfg_; }
  const Eigen::VectorXcd& half_period() const { return A_; }
  /// Real breakpoints separating the sides (n-1 of them).
  const std::vector<double>& breakpoints() const { return breaks_; }
  std::vector<BraneSide> sides() const;

  ChartPoint chart(cplx z) const;
  /// Built on first use and cached.
  const MirrorMap& mirror(Which which) const;

 private:
  int n_ = 2;
  std::shared_ptr<const PeriodFrame> frame_;
  QuadratureConfig cfg_;
  Eigen::VectorXcd A_;
  std::vector<double> breaks_;
  mutable std::array<std::shared_ptr<const MirrorMap>, 4> mirrors_;
};

cplx mirror_g(const SheetedPoint& P, const SheetedPoint& Q, Which which, const PeriodFrame& frame,
              const QuadratureConfig& cfg = {});

/// Zero-mode correction of the hyperelliptic kernels (zero for n = 2, 3).
KernelForm zero_mode_term(const ChartPoint& Q, const ChartPoint& P, Which which, const Polygon& poly);

/// (1/2 pi) d arg of the mirror ratio, without the zero-mode correction.
KernelForm angular_form(const ChartPoint& Q, const ChartPoint& P, Which which, const Polygon& poly);

KernelForm kernel(const ChartPoint& Q, const ChartPoint& P, Which which, const Polygon& poly);
KernelForm kernel(cplx zQ, cplx zP, Which which, const Polygon& poly);

struct NearDiagonalReport {
  std::vector<double> distances;
  std::vector<double> residuals;
  double max_residual = 0.0;
  /// Lipschitz constant of the smooth remainder along the sequence:
  /// max |R_k - R_{k+1}| / |zP_k - zP_{k+1}|.
  double fitted_constant = 0.0;
};

/// Compares the angular part with d arg(zP - zQ)/(2 pi) along a sequence
/// of P approaching Q.
NearDiagonalReport near_diagonal_check(cplx zQ, const std::vector<cplx>& zP, Which which, const Polygon& poly);

}  // namespace psm
