/**
 * @file thermal.hpp
 * @brief Thermalized mode rho = e^{-H/theta}/Z: P-function witness,
 *        critical temperatures, cumulants, squeezing and photon statistics
 */
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <utility>

#include "qfield/core_algebra.hpp"
#include "qfield/moments.hpp"
#include "qfield/squeezing.hpp"

namespace qfield {

using ThermalCumulants = Cumulants;

inline void require_positive_temperature(double theta) {
  if (!(theta > 0.0)) throw Error(ErrorCode::NonPositiveTemperature, "theta must be positive");
}

/**
 * Quadratic-form matrix of <-zeta|rho|zeta> e^{|zeta|^2} in (Re zeta, Im zeta).
 * det M = e^gamma - |beta|^2; the P-function exists as a Gaussian iff det >= 0.
 * det == 0 is reported as classical with `on_boundary` set.
 */
struct GaussianWitness {
  std::array<std::array<double, 2>, 2> m{};
  double det = 0.0;
  double trace = 0.0;
  bool classical = true;
  bool on_boundary = false;
};

inline GaussianWitness witness_matrix(const ValidatedParams& params, double theta) {
  require_positive_temperature(theta);
  const DisentangledForm form = disentangle_thermal(params, theta);
  const double half_exp = std::exp(0.5 * form.gamma.real());
  const double re_beta = form.beta.real();  // (beta + delta)/2 with delta = beta*
  const double im_beta = form.beta.imag();

  GaussianWitness w;
  w.m = {{{half_exp - re_beta, -im_beta}, {-im_beta, half_exp + re_beta}}};
  w.trace = 2.0 * half_exp;
  w.det = half_exp * half_exp - std::norm(form.beta);
  w.on_boundary = (w.det == 0.0);
  w.classical = (w.det >= 0.0);
  return w;
}

struct CriticalTemps {
  double theta_star = 0.0;  // exact zero of det M
  double theta_c = 0.0;     // leading-log approximation omega / (2 ln(omega/|omega1|))
  bool defined = false;
};

/// det M = 0 at sinh(phi/theta) = phi/|omega1|.
inline CriticalTemps critical_temperatures(const ValidatedParams& params) {
  CriticalTemps ct;
  const double w1 = std::abs(params.omega1());
  if (w1 == 0.0) return ct;
  const double phi = params.phi();
  ct.defined = true;
  ct.theta_star = phi / std::asinh(phi / w1);
  ct.theta_c = params.omega() / (2.0 * std::log(params.omega() / w1));
  return ct;
}

/**
 * ln Z(eps, eta) derivatives at the origin:
 *   t_eta = -alpha,  t_etaeta = -(omega1 / 2phi) coth(phi / 2theta),
 *   t_epseta = (1 + (omega / 2phi) coth(phi / 2theta)) / 2.
 */
inline ThermalCumulants cumulants(const ValidatedParams& params, double theta) {
  require_positive_temperature(theta);
  const double phi = params.phi();
  const double coth = 1.0 / std::tanh(0.5 * phi / theta);
  ThermalCumulants c;
  c.t_eta = -derive(params).alpha;
  c.t_eps = std::conj(c.t_eta);
  c.t_etaeta = -params.omega1() / (2.0 * phi) * coth;
  c.t_epseps = std::conj(c.t_etaeta);
  c.t_epseta = 0.5 * (1.0 + params.omega() / (2.0 * phi) * coth);
  return c;
}

inline MomentSet thermal_moments(const ValidatedParams& params, double theta, int max_order = 4) {
  return moments_from_cumulants(cumulants(params, theta), max_order,
                                MomentSource::ClosedFormThermal);
}

struct ThermalSqueezing {
  double d1 = 0.0;
  double d1_zhang = 0.0;
  double d2 = 0.0;
  double d2_zhang = 0.0;
};

/// First order straight from the cumulants; second order through squeezing_report.
inline ThermalSqueezing thermal_squeezing(const ValidatedParams& params, double theta) {
  const ThermalCumulants c = cumulants(params, theta);
  ThermalSqueezing s;
  s.d1 = 0.5 * (c.t_epseta - std::abs(c.t_etaeta) - 1.0);
  s.d1_zhang = 0.5 * (c.t_epseta + c.t_etaeta.real() - 1.0);
  const SqueezingReport r2 =
      squeezing_report(moments_from_cumulants(c, 4, MomentSource::ClosedFormThermal), 2);
  s.d2 = r2.dk;
  s.d2_zhang = r2.dk_zhang;
  return s;
}

/// (Delta n)^2 - <n> = <a^dag^2 a^2> - <a^dag a>^2 for any moment source.
inline double mandel_excess(const MomentSet& m) {
  const double n1 = std::real(m.normal(1, 1));
  return std::real(m.normal(2, 2)) - n1 * n1;
}

inline double mandel_excess(const ValidatedParams& params, double theta) {
  return mandel_excess(thermal_moments(params, theta));
}

inline double photon_number_mean(const ValidatedParams& params, double theta) {
  const ThermalCumulants c = cumulants(params, theta);
  return c.t_epseta - 1.0 + std::norm(c.t_eta);
}

/**
 * Bisection for a sign change of `fn` on [lo, hi]; stops when the bracket
 * is narrower than `tol`. Returns the midpoint of the final bracket.
 */
template <class Fn>
double bisect_sign_change(Fn&& fn, double lo, double hi, double tol = 1e-13) {
  double f_lo = fn(lo);
  const double f_hi = fn(hi);
  if ((f_lo < 0.0) == (f_hi < 0.0)) {
    throw Error(ErrorCode::ConfigInvalid, "bisection bracket has no sign change");
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double f_mid = fn(mid);
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace qfield
