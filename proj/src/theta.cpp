#include "psm/theta.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace psm {

namespace {

constexpr double kPi = std::numbers::pi;

// Upper bound on sum_{q(N) > R^2} e^{-pi q(N)} (1 + |2 pi N|), counting the
// lattice points in each unit shell with the smallest eigenvalue lam.
double tail_bound(double r, double lam, int g, double center_norm) {
  double total = 0.0;
  for (int k = 0; k < 64; ++k) {
    const double rho = r + k + 1.0;
    const double count = std::pow(2.0 * rho / std::sqrt(lam) + 1.0, g);
    const double weight = 1.0 + 2.0 * kPi * (center_norm + rho / std::sqrt(lam));
    const double term = count * weight * std::exp(-kPi * (r + k) * (r + k));
    total += term;
    if (term < 1e-20 * total) break;
  }
  return total;
}

double search_radius(double tol, double lam, int g, double center_norm) {
  double r = 0.5;
  while (tail_bound(r, lam, g, center_norm) >= tol) r += 0.25;
  return r;
}

struct LatticeTerm {
  cplx value;
  std::size_t offset;  // into the flat array of lattice points
};

// Sum over M in Z^g + shift of exp(2 pi i (M^T Omega M / 2 + M^T z)), scaled
// by exp(-pi y^T Y^{-1} y). Terms are added in a canonical order so that the
// result depends only on the multiset of terms.
ThetaJet lattice_sum(const Eigen::VectorXcd& z, const PeriodMatrix& pm, const Eigen::VectorXd& shift,
                     const ThetaOptions& opt, bool with_gradient, int* count_out = nullptr) {
  const int g = pm.genus();
  if (z.size() != g) throw InvalidArgument("theta: argument has wrong dimension");
  if (!(opt.tol > 0.0)) throw InvalidArgument("theta: tol must be > 0");
  if (!z.allFinite()) throw InvalidArgument("theta: non-finite argument");

  const Eigen::VectorXd x = z.real();
  const Eigen::VectorXd y = z.imag();
  const Eigen::MatrixXd X = pm.omega().real();
  const Eigen::MatrixXd& T = pm.cholesky_upper();
  const Eigen::VectorXd c = -pm.imag_inverse() * y;
  const double log_scale = kPi * y.dot(pm.imag_inverse() * y);

  const double lam = pm.min_eigenvalue();
  const double r = search_radius(opt.tol, lam, g, c.cwiseAbs().maxCoeff() + 1.0) + opt.extra_radius;
  if (r / std::sqrt(lam) > opt.max_lattice_radius)
    throw TailBoundFailure("theta: truncation radius exceeds the lattice cap");
  const double r2 = r * r;

  // Integer N with M = N + shift near c.
  const Eigen::VectorXd ctr = c - shift;
  std::vector<LatticeTerm> terms;
  std::vector<double> points;
  Eigen::VectorXd d(g);
  Eigen::VectorXd n(g);
  Eigen::VectorXd m(g);

  auto recurse = [&](auto&& self, int i, double acc) -> void {
    if (i < 0) {
      m = n + shift;
      double phase = 0.0;
      for (int a = 0; a < g; ++a) {
        double row = 0.0;
        for (int b = 0; b < g; ++b) row += X(a, b) * m(b);
        phase += m(a) * (kPi * row + 2.0 * kPi * x(a));
      }
      terms.push_back({std::polar(std::exp(-kPi * acc), phase), points.size()});
      points.insert(points.end(), m.data(), m.data() + g);
      return;
    }
    double partial = 0.0;
    for (int j = i + 1; j < g; ++j) partial += T(i, j) * d(j);
    const double left = std::sqrt(std::max(r2 - acc, 0.0));
    const double lo = std::ceil(ctr(i) - (partial + left) / T(i, i));
    const double hi = std::floor(ctr(i) + (left - partial) / T(i, i));
    for (double k = lo; k <= hi; k += 1.0) {
      n(i) = k;
      d(i) = k - ctr(i);
      const double t = T(i, i) * d(i) + partial;
      const double next = acc + t * t;
      if (next <= r2) self(self, i - 1, next);
    }
  };
  recurse(recurse, g - 1, 0.0);

  std::sort(terms.begin(), terms.end(), [](const LatticeTerm& a, const LatticeTerm& b) {
    if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
    return a.value.imag() < b.value.imag();
  });

  ThetaJet out;
  out.value = 0.0;
  out.gradient = Eigen::VectorXcd::Zero(g);
  out.log_scale = log_scale;
  for (const auto& t : terms) {
    out.value += t.value;
    if (with_gradient) {
      const cplx s = cplx(0.0, 2.0 * kPi) * t.value;
      for (int a = 0; a < g; ++a) out.gradient(a) += s * points[t.offset + a];
    }
  }
  if (count_out) *count_out = static_cast<int>(terms.size());
  return out;
}

}  // namespace

PeriodMatrix::PeriodMatrix(const Eigen::MatrixXcd& omega, double sym_tol) : omega_(omega) {
  if (omega.rows() != omega.cols() || omega.rows() == 0) throw InvalidArgument("PeriodMatrix: must be square");
  if (!omega.allFinite()) throw InvalidArgument("PeriodMatrix: non-finite entries");
  const double scale = std::max(1.0, omega.cwiseAbs().maxCoeff());
  if ((omega - omega.transpose()).cwiseAbs().maxCoeff() > sym_tol * scale)
    throw NotSymmetric("PeriodMatrix: Omega is not symmetric");
  im_ = 0.5 * (omega.imag() + omega.imag().transpose());
  if (!is_positive_definite(im_)) throw InvalidArgument("PeriodMatrix: Im Omega is not positive definite");
  Eigen::LLT<Eigen::MatrixXd> llt(im_);
  chol_u_ = llt.matrixU();
  im_inv_ = invert(im_);
  min_eig_ = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(im_, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
}

Characteristic::Characteristic(Eigen::VectorXi e, Eigen::VectorXi ep) : eps(std::move(e)), eps_prime(std::move(ep)) {
  if (eps.size() != eps_prime.size()) throw InvalidArgument("Characteristic: length mismatch");
  for (int i = 0; i < eps.size(); ++i) {
    eps(i) = ((eps(i) % 2) + 2) % 2;
    eps_prime(i) = ((eps_prime(i) % 2) + 2) % 2;
  }
}

int Characteristic::parity() const { return eps_prime.dot(eps) % 2; }

ThetaJet theta_jet(const Eigen::VectorXcd& z, const PeriodMatrix& omega, const ThetaOptions& opt,
                   bool with_gradient) {
  return lattice_sum(z, omega, Eigen::VectorXd::Zero(omega.genus()), opt, with_gradient);
}

cplx theta(const Eigen::VectorXcd& z, const PeriodMatrix& omega, const ThetaOptions& opt) {
  return theta_jet(z, omega, opt, false).unscaled_value();
}

cplx theta(const Eigen::VectorXcd& z, const PeriodMatrix& omega, double tol) {
  ThetaOptions opt;
  opt.tol = tol;
  return theta(z, omega, opt);
}

Eigen::VectorXcd theta_gradient(const Eigen::VectorXcd& z, const PeriodMatrix& omega, double tol) {
  ThetaOptions opt;
  opt.tol = tol;
  const ThetaJet j = theta_jet(z, omega, opt, true);
  return j.gradient * std::exp(j.log_scale);
}

cplx theta_with_characteristic(const Characteristic& c, const Eigen::VectorXcd& z, const PeriodMatrix& omega,
                               double tol) {
  const int g = omega.genus();
  if (c.eps.size() != g) throw InvalidArgument("theta_with_characteristic: characteristic has wrong length");
  ThetaOptions opt;
  opt.tol = tol;
  const Eigen::VectorXd shift = 0.5 * c.eps.cast<double>();
  const Eigen::VectorXcd zs = z + 0.5 * c.eps_prime.cast<cplx>();
  return lattice_sum(zs, omega, shift, opt, false).unscaled_value();
}

int theta_term_count(const Eigen::VectorXcd& z, const PeriodMatrix& omega, const ThetaOptions& opt) {
  int count = 0;
  lattice_sum(z, omega, Eigen::VectorXd::Zero(omega.genus()), opt, false, &count);
  return count;
}

LatticeReduction reduce_mod_lattice(const Eigen::VectorXcd& d, const PeriodMatrix& omega) {
  LatticeReduction r;
  r.m = (omega.imag_inverse() * d.imag()).array().round().matrix();
  const Eigen::VectorXcd rest = d - omega.omega() * r.m.cast<cplx>();
  r.n = rest.real().array().round().matrix();
  r.remainder = rest - r.n.cast<cplx>();
  return r;
}

double lattice_distance(const Eigen::VectorXcd& d, const PeriodMatrix& omega) {
  return reduce_mod_lattice(d, omega).remainder.cwiseAbs().maxCoeff();
}

Eigen::VectorXcd half_period(const Characteristic& c, const PeriodMatrix& omega) {
  return 0.5 * (c.eps_prime.cast<cplx>() + omega.omega() * c.eps.cast<cplx>());
}

Characteristic characteristic_of(const Eigen::VectorXcd& half, const PeriodMatrix& omega) {
  const Eigen::VectorXd e = (2.0 * omega.imag_inverse() * half.imag()).array().round().matrix();
  const Eigen::VectorXcd rest = 2.0 * half - omega.omega() * e.cast<cplx>();
  const Eigen::VectorXd ep = rest.real().array().round().matrix();
  return Characteristic(e.cast<int>(), ep.cast<int>());
}

}  // namespace psm
