/**
 * @file unitary.hpp
 * @brief Short-time evolution of a coherent state under
 *        U(t) = e^{ict} D^dag(alpha) e^{-iPt} D(alpha)
 */
#pragma once

#include <cmath>
#include <complex>

#include "qfield/core_algebra.hpp"
#include "qfield/moments.hpp"
#include "qfield/squeezing.hpp"

namespace qfield {

/// Coefficients of the coherent-state kernel <chi|U(t)|zeta>.
struct UnitaryKernelCoeffs {
  cplx beta{};
  cplx gamma{};
  cplx delta{};
  cplx p{};
  cplx q{};
  cplx r{};
  double c = 0.0;
  double t = 0.0;
};

inline UnitaryKernelCoeffs kernel_coeffs(const ValidatedParams& params, double t,
                                         Branch branch = Branch::Principal) {
  const DerivedParams d = derive(params);
  const DisentangledForm form = disentangle_unitary(params, t, branch);
  const cplx alpha = d.alpha;
  const cplx shrink = std::exp(0.5 * form.gamma) - 1.0;

  UnitaryKernelCoeffs k;
  k.beta = form.beta;
  k.gamma = form.gamma;
  k.delta = form.delta;
  k.c = d.c;
  k.t = t;
  k.p = 2.0 * shrink * alpha + 2.0 * form.beta * std::conj(alpha);
  k.q = 2.0 * shrink * std::conj(alpha) + 2.0 * form.delta * alpha;
  k.r = form.beta * std::conj(alpha) * std::conj(alpha) + form.delta * alpha * alpha +
        2.0 * shrink * std::norm(alpha);
  return k;
}

/**
 * <chi|U(t)|zeta> in closed form, e^{gamma/4} and e^{ict} included.
 * The principal branch of gamma gives the right sign while arg f < pi;
 * pass Branch::Continuous for the exact phase at all t.
 */
inline cplx coherent_kernel(const ValidatedParams& params, cplx chi, cplx zeta, double t,
                            Branch branch = Branch::Principal) {
  const UnitaryKernelCoeffs k = kernel_coeffs(params, t, branch);
  const cplx chi_c = std::conj(chi);
  const cplx exponent =
      0.5 * (k.beta * chi_c * chi_c + k.delta * zeta * zeta +
             2.0 * std::exp(0.5 * k.gamma) * chi_c * zeta + k.p * chi_c + k.q * zeta + k.r);
  return std::exp(0.25 * k.gamma + kI * (k.c * t) -
                  0.5 * (std::norm(chi) + std::norm(zeta)) + exponent);
}

enum class PFunctionNote { DeltaFunction, DivergentGaussian };

struct PFunctionVerdict {
  cplx beta_at_t{};
  bool nonclassical = false;
  PFunctionNote note = PFunctionNote::DeltaFunction;
};

inline constexpr double kBetaZeroTol = 1e-12;

/**
 * The P-function of the evolved coherent state is the Fourier transform of
 * a Gaussian whose quadratic form has eigenvalues +-|beta|; it diverges for
 * every beta != 0 and is a delta function when beta = 0.
 */
inline PFunctionVerdict p_function_witness_unitary(const ValidatedParams& params, double t) {
  PFunctionVerdict v;
  v.beta_at_t = disentangle_unitary(params, t).beta;
  v.nonclassical = std::abs(v.beta_at_t) > kBetaZeroTol;
  v.note = v.nonclassical ? PFunctionNote::DivergentGaussian : PFunctionNote::DeltaFunction;
  return v;
}

/// D1(t) = |g| (|g| - |f|) / 2, never positive in the validated regime.
inline double d1_unitary(const ValidatedParams& params, double t) {
  const EvolutionMatrix e = evolution_matrix(params, t);
  const double f = std::abs(e.f());
  const double g = std::abs(e.g());
  return 0.5 * g * (g - f);
}

/// <a>(t) for the initial coherent state lambda0 (Heisenberg picture).
inline cplx unitary_mean(const ValidatedParams& params, double t) {
  const EvolutionMatrix e = evolution_matrix(params, t);
  const cplx fc = std::conj(e.f());
  const cplx g = e.g();
  const cplx lambda = params.lambda0();
  const cplx alpha = derive(params).alpha;
  return fc * lambda - g * std::conj(lambda) + (fc - 1.0) * alpha - g * std::conj(alpha);
}

/**
 * The evolved coherent state is Gaussian: a(t) = f* a - g a^dag + const, so
 * the centred moments are those of the vacuum pushed through (f*, -g).
 */
inline Cumulants unitary_cumulants(const ValidatedParams& params, double t) {
  const EvolutionMatrix e = evolution_matrix(params, t);
  Cumulants c;
  c.t_eta = unitary_mean(params, t);
  c.t_eps = std::conj(c.t_eta);
  c.t_etaeta = -std::conj(e.f()) * e.g();
  c.t_epseps = std::conj(c.t_etaeta);
  c.t_epseta = 1.0 + std::norm(e.g());
  return c;
}

inline MomentSet unitary_moments(const ValidatedParams& params, double t, int max_order = 4) {
  return moments_from_cumulants(unitary_cumulants(params, t), max_order,
                                MomentSource::ClosedFormUnitary);
}

}  // namespace qfield
