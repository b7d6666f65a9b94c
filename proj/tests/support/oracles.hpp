// Independent reference computations used only by the tests.
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>

namespace oracle {

using cplx = std::complex<double>;
inline constexpr cplx kI{0.0, 1.0};

/// exp(i t P~) with P~ = [[omega/2, omega1], [-omega1*, -omega/2]], by eigendecomposition.
inline Eigen::Matrix2cd generator_exponential(double omega, cplx omega1, double t) {
  Eigen::Matrix2cd p;
  p << 0.5 * omega, omega1, -std::conj(omega1), -0.5 * omega;
  Eigen::ComplexEigenSolver<Eigen::Matrix2cd> es(p);
  Eigen::Vector2cd d;
  for (int i = 0; i < 2; ++i) d(i) = std::exp(kI * t * es.eigenvalues()(i));
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().inverse();
}

/// Ordered Gaussian moments written out by Wick pairing.
struct GaussianMoments {
  cplx a, a2, aad, a4, a2ad2;
};

inline GaussianMoments wick_moments(cplx mu, cplx m2, double n) {
  GaussianMoments g;
  const double mu2 = std::norm(mu);
  g.a = mu;
  g.a2 = m2 + mu * mu;
  g.aad = n + mu2;
  g.a4 = 3.0 * m2 * m2 + 6.0 * m2 * mu * mu + mu * mu * mu * mu;
  g.a2ad2 = 2.0 * n * n + std::norm(m2) + 4.0 * n * mu2 + std::conj(m2) * mu * mu +
            m2 * std::conj(mu) * std::conj(mu) + mu2 * mu2;
  return g;
}

/// Free mode at level spacing e: mean occupation from the geometric Boltzmann sum.
inline double bose_occupation(double spacing, double theta) {
  return 1.0 / std::expm1(spacing / theta);
}

template <class Fn>
double bisect(Fn&& fn, double lo, double hi, double tol = 1e-14) {
  double flo = fn(lo);
  for (int i = 0; i < 200 && hi - lo > tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = fn(mid);
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace oracle
