#pragma once

#include <Eigen/Dense>

#include <complex>

#include "psm/numerics.hpp"

namespace psm {

/// A point of the Siegel upper half space together with the
/// factorizations needed by the lattice sums.
class PeriodMatrix {
 public:
  explicit PeriodMatrix(const Eigen::MatrixXcd& omega, double sym_tol = 1e-10);

  int genus() const { return static_cast<int>(omega_.rows()); }
  const Eigen::MatrixXcd& omega() const { return omega_; }
  const Eigen::MatrixXd& imag() const { return im_; }
  const Eigen::MatrixXd& imag_inverse() const { return im_inv_; }
  /// Upper triangular T with Im(omega) = T^T T.
  const Eigen::MatrixXd& cholesky_upper() const { return chol_u_; }
  double min_eigenvalue() const { return min_eig_; }
  Eigen::VectorXcd column(int j) const { return omega_.col(j); }

 private:
  Eigen::MatrixXcd omega_;
  Eigen::MatrixXd im_, im_inv_, chol_u_;
  double min_eig_ = 0.0;
};

struct Characteristic {
  Eigen::VectorXi eps;        // multiplies the Omega half-shift
  Eigen::VectorXi eps_prime;  // multiplies the identity half-shift

  Characteristic() = default;
  Characteristic(Eigen::VectorXi e, Eigen::VectorXi ep);
  int parity() const;
};

struct ThetaOptions {
  double tol = 1e-12;
  /// Added to the tail-bound radius; used to check truncation stability.
  double extra_radius = 0.0;
  /// Largest admissible search radius measured in lattice units.
  double max_lattice_radius = 200.0;
};

/// theta(z) = exp(log_scale) * (value), gradient likewise scaled.
struct ThetaJet {
  cplx value;
  Eigen::VectorXcd gradient;
  double log_scale = 0.0;

  cplx unscaled_value() const { return value * std::exp(log_scale); }
};

ThetaJet theta_jet(const Eigen::VectorXcd& z, const PeriodMatrix& omega, const ThetaOptions& opt = {},
                   bool with_gradient = true);

cplx theta(const Eigen::VectorXcd& z, const PeriodMatrix& omega, double tol = 1e-12);
cplx theta(const Eigen::VectorXcd& z, const PeriodMatrix& omega, const ThetaOptions& opt);
Eigen::VectorXcd theta_gradient(const Eigen::VectorXcd& z, const PeriodMatrix& omega, double tol = 1e-12);
cplx theta_with_characteristic(const Characteristic& c, const Eigen::VectorXcd& z, const PeriodMatrix& omega,
                               double tol = 1e-12);

/// Number of lattice points the last call pattern would sum, for diagnostics.
int theta_term_count(const Eigen::VectorXcd& z, const PeriodMatrix& omega, const ThetaOptions& opt = {});

/// d = n + Omega m + r with integer n, m and r in the fundamental cell.
struct LatticeReduction {
  Eigen::VectorXd n, m;
  Eigen::VectorXcd remainder;
};

LatticeReduction reduce_mod_lattice(const Eigen::VectorXcd& d, const PeriodMatrix& omega);

/// Distance of d from the lattice Z^g + Omega Z^g (max-norm of the remainder
/// after rounding to the nearest lattice vector).
double lattice_distance(const Eigen::VectorXcd& d, const PeriodMatrix& omega);

/// Half period (eps' + Omega eps)/2 of a characteristic.
Eigen::VectorXcd half_period(const Characteristic& c, const PeriodMatrix& omega);

/// Characteristic of a vector that is a half period modulo the lattice.
Characteristic characteristic_of(const Eigen::VectorXcd& half, const PeriodMatrix& omega);

}  // namespace psm
