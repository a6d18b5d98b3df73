#include "owg/lsqr.hpp"

#include <cmath>
#include <limits>

namespace owg {
namespace {

// Stable Givens rotation: returns (c, s, r) with r = hypot(a, b).
void sym_ortho(double a, double b, double& c, double& s, double& r) {
  if (b == 0.0) {
    c = std::copysign(1.0, a);
    s = 0.0;
    r = std::abs(a);
  } else if (a == 0.0) {
    c = 0.0;
    s = std::copysign(1.0, b);
    r = std::abs(b);
  } else if (std::abs(b) > std::abs(a)) {
    const double tau = a / b;
    s = std::copysign(1.0, b) / std::sqrt(1.0 + tau * tau);
    c = s * tau;
    r = b / s;
  } else {
    const double tau = b / a;
    c = std::copysign(1.0, a) / std::sqrt(1.0 + tau * tau);
    s = c * tau;
    r = a / c;
  }
}

}  // namespace

LsqrResult lsqr(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& b, const LsqrOptions& opt) {
  const auto n = a.cols();
  LsqrResult res;
  res.x = Eigen::VectorXcd::Zero(n);
  const int max_iters = opt.max_iters > 0 ? opt.max_iters : static_cast<int>(100 * n + 1000);
  const double eps = std::numeric_limits<double>::epsilon();
  const double dampsq = opt.damp * opt.damp;

  Eigen::VectorXcd u = b;
  double beta = u.norm();
  const double bnorm = beta;
  if (beta == 0.0) {
    res.converged = true;
    return res;
  }
  u /= beta;
  Eigen::VectorXcd v = a.adjoint() * u;
  double alpha = v.norm();
  if (alpha == 0.0) {
    res.converged = true;
    res.residual_norm = bnorm;
    return res;
  }
  v /= alpha;
  Eigen::VectorXcd w = v;

  double rhobar = alpha;
  double phibar = beta;
  double anorm = 0.0;
  double res2 = 0.0;
  double xxnorm = 0.0;
  double z = 0.0;
  double cs2 = -1.0;
  double sn2 = 0.0;

  for (int it = 1; it <= max_iters; ++it) {
    u = a * v - alpha * u;
    beta = u.norm();
    if (beta > 0.0) {
      u /= beta;
      anorm = std::sqrt(anorm * anorm + alpha * alpha + beta * beta + dampsq);
      v = a.adjoint() * u - beta * v;
      alpha = v.norm();
      if (alpha > 0.0) v /= alpha;
    }

    double cs1 = 1.0;
    double sn1 = 0.0;
    double rhobar1 = rhobar;
    if (opt.damp > 0.0) {
      rhobar1 = std::sqrt(rhobar * rhobar + dampsq);
      cs1 = rhobar / rhobar1;
      sn1 = opt.damp / rhobar1;
    }
    const double psi = sn1 * phibar;
    phibar = cs1 * phibar;

    double cs = 0.0;
    double sn = 0.0;
    double rho = 0.0;
    sym_ortho(rhobar1, beta, cs, sn, rho);
    const double theta = sn * alpha;
    rhobar = -cs * alpha;
    const double phi = cs * phibar;
    phibar = sn * phibar;
    const double tau = sn * phi;

    res.x += (phi / rho) * w;
    w = v - (theta / rho) * w;

    // Running estimate of |x| (Paige-Saunders).
    const double delta = sn2 * rho;
    const double gambar = -cs2 * rho;
    const double rhs = phi - delta * z;
    const double zbar = rhs / gambar;
    const double xnorm = std::sqrt(xxnorm + zbar * zbar);
    double gamma = 0.0;
    sym_ortho(gambar, theta, cs2, sn2, gamma);
    z = rhs / gamma;
    xxnorm += z * z;

    res2 += psi * psi;
    const double rnorm = std::sqrt(phibar * phibar + res2);
    const double arnorm = alpha * std::abs(tau);
    res.iterations = it;
    res.residual_norm = rnorm;
    res.normal_residual_norm = arnorm;

    const double test1 = rnorm / bnorm;
    const double test2 = arnorm / (anorm * rnorm + eps);
    const double rtol = opt.btol + opt.atol * anorm * xnorm / bnorm;
    if (test1 <= rtol || test2 <= opt.atol || 1.0 + test2 <= 1.0 || 1.0 + test1 / (1.0 + anorm * xnorm / bnorm) <= 1.0) {
      res.converged = true;
      return res;
    }
    if (alpha == 0.0 || beta == 0.0) {
      res.converged = true;
      return res;
    }
  }
  return res;
}

}  // namespace owg
