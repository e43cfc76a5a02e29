#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "psm/kernels.hpp"

namespace psm {

struct Disc {
  cplx center;
  double radius;
};

/// A differential form on the z-chart of the polygon.
///   degree 0: scalar f
///   degree 1: 2 Re(c dz), stored as the coefficient c
///   degree 2: rho dx^dy, stored as the density rho
struct SampledForm {
  int degree = 0;
  std::string name;
  std::function<double(cplx)> scalar;
  std::function<cplx(cplx)> coeff;
  /// Compact support, when the form has one.
  std::optional<Disc> support;
  /// Sides on which the form is known to vanish (both for interior bumps).
  std::vector<Parity> vanishes_on;
  /// Closed-form exterior derivative, if the probe provides one.
  std::shared_ptr<const SampledForm> d;
};

/// Value of a form at a point, tagged with its degree.
struct FormValue {
  int degree = 0;
  double scalar = 0.0;
  cplx coeff = 0.0;

  double magnitude() const { return degree == 1 ? std::abs(coeff) : std::abs(scalar); }
};

FormValue evaluate(const SampledForm& form, cplx z);
FormValue operator-(const FormValue& a, const FormValue& b);
FormValue operator+(const FormValue& a, const FormValue& b);

/// Fixed quadrature budget for all two-dimensional integrals.
struct HomotopyBudget {
  int level = 2;                  // tanh-sinh level; angular points 16 * 2^level
  double excision = 1e-3;         // excision radius relative to the support radius
  double fd_step = 1e-4;          // finite-difference step relative to the support radius
  double cutoff_radius = 0.5;     // partition radius around the anchor for non-compact forms
  double adaptive_tol = 1e-10;    // nested adaptive quadrature for smooth integrals
};

/// Compactly supported smooth bump exp(1 - 1/(1 - s^2)), s = |z - c|/R,
/// multiplied by 1 + Re(conj(kappa) (z - c)/R).
SampledForm bump_function(cplx center, double radius, cplx kappa = 0.0, const std::string& name = "bump");
/// 1-form with coefficient bump * (k0 + k1 (z - c)/R); not closed.
SampledForm bump_one_form(cplx center, double radius, cplx k0, cplx k1, const std::string& name = "bump1");
/// 2-form with density bump * (1 + Re(conj(kappa)(z - c)/R)).
SampledForm bump_two_form(cplx center, double radius, cplx kappa = 0.0, const std::string& name = "bump2");
/// d of a degree-0 form with a closed-form derivative.
SampledForm exact_form(const SampledForm& f);
/// Zero modes d Im phi_k (S1) and d Re phi_k (S2), k = 1..g.
SampledForm zero_mode(const Polygon& poly, Which which, int k);

/// Boundary-parity check of a form at sampled boundary points.
double boundary_flag_residual(const SampledForm& form, const Polygon& poly, int samples = 32);

/// The homotopy operator G for one input form, with quadrature grids and
/// chart values cached so it can be evaluated at many Q.
class HomotopyOperator {
 public:
  /// `anchor` centres the partition of unity for non-compact forms.
  HomotopyOperator(const Polygon& poly, Which which, const SampledForm& form, const HomotopyBudget& budget,
                   std::optional<cplx> anchor = std::nullopt);

  FormValue apply(cplx Q) const;
  int output_degree() const { return form_.degree - 1; }
  std::size_t node_count() const { return nodes_.size(); }

 private:
  struct Node {
    ChartPoint P;
    double weight;   // includes the partition factor
    double eta;      // inner partition weight
    FormValue value;
  };

  FormValue singular_part(cplx Q) const;
  double eta(cplx z) const;

  const Polygon& poly_;
  Which which_;
  SampledForm form_;
  HomotopyBudget budget_;
  Disc disc_;
  bool compact_ = true;
  std::vector<Node> nodes_;
};

FormValue apply_G(const SampledForm& form, cplx Q, Which which, const Polygon& poly, const HomotopyBudget& budget = {});

/// d of a form given pointwise, by central differences with one
/// Richardson step. Works for degree 0 and 1.
FormValue exterior_derivative_fd(const std::function<FormValue(cplx)>& f, cplx Q, double h);

/// Projection onto the zero modes; zero for n < 4.
class Projection {
 public:
  Projection(const Polygon& poly, Which which, const SampledForm& form, const HomotopyBudget& budget);
  FormValue apply(cplx Q) const;
  /// The pairings int dRe phi_j ^ form (S1) or int form ^ dIm phi_j (S2).
  const Eigen::VectorXd& pairings() const { return pair_; }

 private:
  const Polygon& poly_;
  Which which_;
  Eigen::VectorXd pair_;
};

FormValue project_P(const SampledForm& form, cplx Q, Which which, const Polygon& poly,
                    const HomotopyBudget& budget = {});

/// Integral of a real function over the upper half plane, nested adaptive
/// tanh-sinh with the x axis split at `breaks` and mapped tails.
double integrate_upper_half_plane(const std::function<double(cplx)>& f, const std::vector<double>& breaks,
                                  const QuadratureConfig& cfg);
Eigen::VectorXcd integrate_upper_half_plane_vec(const std::function<Eigen::VectorXcd(cplx)>& f,
                                                const std::vector<double>& breaks, const QuadratureConfig& cfg);

struct BilinearResult {
  Eigen::MatrixXcd integral;      // int omega_j ^ conj(omega_k), dx^dy orientation
  Eigen::MatrixXcd closed_form;   // -tau/2 for this orientation
  Eigen::MatrixXd residual;       // |integral - closed_form|
  Eigen::MatrixXd residual_plus_half_tau;  // |integral - tau/2|
  /// The half-plane integral is -2i S + 2A with S real symmetric and A
  /// real antisymmetric; only the first term is fixed by the periods.
  double symmetric_residual = 0.0;  // |(M + M^T)/2 + tau/2|
  double real_antisymmetric = 0.0;  // max |Re M|
};

BilinearResult bilinear_check(const PeriodFrame& frame, const QuadratureConfig& cfg = {});

std::array<int, 3> cohomology_dims(int n);

struct ProbePoint {
  cplx Q;
  FormValue lhs;  // dG + G d
  FormValue rhs;  // (I - P)
  double residual;
};

struct ProbeReport {
  std::string name;
  int degree = 0;
  double max_residual = 0.0;
  std::vector<ProbePoint> points;
};

struct SplittingReport {
  std::string suite = "splitting";
  int n = 0;
  Which which = Which::s1;
  int level = 0;
  std::vector<double> excision_radii;
  std::vector<ProbeReport> probes;
  double max_residual = 0.0;
};

/// What P should return for a probe: 0 for exact forms, the form itself
/// for harmonic ones. Generic forms have no closed-form projection.
enum class ProbeKind { generic, exact, harmonic };

struct SplittingProbe {
  SampledForm form;
  std::vector<cplx> points;
  std::optional<cplx> anchor;
  ProbeKind kind = ProbeKind::generic;
};

/// Standard probes: three per degree, plus the zero mode for n >= 4.
std::vector<SplittingProbe> default_probes(const Polygon& poly, Which which);

SplittingReport splitting_suite(const Polygon& poly, Which which, const std::vector<SplittingProbe>& probes,
                                const HomotopyBudget& budget);

}  // namespace psm
