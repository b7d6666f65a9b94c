/**
 * @file squeezing.hpp
 * @brief k-th order amplitude squeezing from ordered moments
 *
 * Quadrature X_k(theta) = (a^k e^{-i theta} + a^dag^k e^{i theta}) / 2 and
 *
 *   D_k(theta) = (Delta X_k(theta))^2 - |<[a^k, a^dag^k]>| / 4.
 *
 * D_k is the minimum over theta, D_k^Zhang the value at theta = 0. The
 * branch of the closed form follows the sign of <[a^k, a^dag^k]> in the
 * given state.
 */
#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include "qfield/moments.hpp"

namespace qfield {

inline void require_order(const MomentSet& m, int k) {
  if (k < 1) throw Error(ErrorCode::MissingMoments, "squeezing order must be >= 1");
  if (m.max_order() < 2 * k) {
    throw Error(ErrorCode::MissingMoments,
                "order-" + std::to_string(k) + " squeezing needs moments to total order " +
                    std::to_string(2 * k));
  }
}

/// <[a^k, a^dag^k]> = <a^k a^dag^k> - <a^dag^k a^k>.
inline double commutator_expectation(const MomentSet& m, int k) {
  require_order(m, k);
  return std::real(m.anti_normal(k, k) - m.normal(k, k));
}

/// (Delta X_k(theta))^2 straight from <X_k^2> - <X_k>^2.
inline double quadrature_variance(const MomentSet& m, int k, double theta_phase) {
  require_order(m, k);
  const cplx rot = std::polar(1.0, -theta_phase);
  const cplx second = m.anti_normal(2 * k, 0) * rot * rot + m.anti_normal(0, 2 * k) / (rot * rot) +
                      m.anti_normal(k, k) + m.normal(k, k);
  const double mean = std::real(m.anti_normal(k, 0) * rot);
  return 0.25 * std::real(second) - mean * mean;
}

/// Moments a SqueezingReport needs to re-evaluate D_k(theta).
struct QuadratureMoments {
  cplx mean_k{};        // <a^k>
  cplx variance_k{};    // <a^{2k}> - <a^k>^2
  double anti_normal{}; // <a^k a^dag^k>
  double normal{};      // <a^dag^k a^k>
};

struct SqueezingReport {
  int k = 1;
  double dk = 0.0;
  double dk_zhang = 0.0;
  double dk_theta_min_phase = 0.0;  // in [0, pi)
  double commutator_expect = 0.0;
  QuadratureMoments moments;

  double variance_at(double theta_phase) const {
    const cplx rot = std::polar(1.0, -theta_phase);
    return 0.5 * std::real(moments.variance_k * rot * rot) +
           0.25 * (moments.anti_normal + moments.normal) - 0.5 * std::norm(moments.mean_k);
  }

  double dk_at(double theta_phase) const {
    return variance_at(theta_phase) - 0.25 * std::abs(commutator_expect);
  }
};

inline constexpr double kZeroCommutatorTol = 1e-12;

inline SqueezingReport squeezing_report(const MomentSet& m, int k) {
  require_order(m, k);
  SqueezingReport r;
  r.k = k;
  r.moments.mean_k = m.anti_normal(k, 0);
  r.moments.variance_k = m.anti_normal(2 * k, 0) - r.moments.mean_k * r.moments.mean_k;
  r.moments.anti_normal = std::real(m.anti_normal(k, k));
  r.moments.normal = std::real(m.normal(k, k));
  r.commutator_expect = r.moments.anti_normal - r.moments.normal;

  if (std::abs(r.commutator_expect) < kZeroCommutatorTol) {
    throw Error(ErrorCode::ZeroCommutatorExpectation,
                "|<[a^k, a^dag^k]>| below 1e-12; squeezing threshold is degenerate");
  }

  const double ordered =
      r.commutator_expect > 0.0 ? r.moments.normal : r.moments.anti_normal;
  const double base = ordered - std::norm(r.moments.mean_k);
  r.dk = 0.5 * (base - std::abs(r.moments.variance_k));
  r.dk_zhang = 0.5 * (base + std::real(r.moments.variance_k));

  // cos(arg(variance_k) - 2 theta) = -1
  double phase = 0.5 * (std::arg(r.moments.variance_k) - std::numbers::pi);
  phase = std::fmod(phase, std::numbers::pi);
  if (phase < 0.0) phase += std::numbers::pi;
  r.dk_theta_min_phase = phase;
  return r;
}

}  // namespace qfield
