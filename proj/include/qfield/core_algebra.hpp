/**
 * @file core_algebra.hpp
 * @brief Model parameters, the 2x2 transfer matrix and the SU(1,1)
 *        disentanglement coefficients of the single-mode quadratic Hamiltonian
 *
 *   H = omega K3 + omega1 K+ + conj(omega1) K- + omega2 a^dag + conj(omega2) a
 *
 * with K3 = (a^dag a + 1/2)/2, K+ = a^dag^2/2, K- = a^2/2 (hbar = 1).
 * A displacement D(alpha) removes the linear drive, D H D^dag = P - c,
 * where P is the pure SU(1,1) part.
 */
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

#include "qfield/error.hpp"

namespace qfield {

using cplx = std::complex<double>;

inline constexpr cplx kI{0.0, 1.0};

struct ModelParams {
  double omega = 1.0;  // coefficient of K3
  cplx omega1{};       // pair-creation coefficient (K+)
  cplx omega2{};       // linear drive (a^dag)
  cplx lambda0{};      // initial coherent amplitude
};

class ValidatedParams;
ValidatedParams validate(const ModelParams& params);

/// Parameters that passed the regime guard: omega > 0 and |omega1| < omega/2.
class ValidatedParams {
 public:
  const ModelParams& raw() const noexcept { return p_; }
  double omega() const noexcept { return p_.omega; }
  cplx omega1() const noexcept { return p_.omega1; }
  cplx omega2() const noexcept { return p_.omega2; }
  cplx lambda0() const noexcept { return p_.lambda0; }

  /// phi = sqrt(omega^2/4 - |omega1|^2), factored to avoid cancellation.
  double phi() const noexcept {
    const double h = 0.5 * p_.omega;
    const double w1 = std::abs(p_.omega1);
    return std::sqrt((h - w1) * (h + w1));
  }

  /// Same physics, different initial amplitude.
  ValidatedParams with_lambda(cplx lambda) const {
    ValidatedParams copy = *this;
    copy.p_.lambda0 = lambda;
    return copy;
  }

 private:
  explicit ValidatedParams(const ModelParams& p) : p_(p) {}
  friend ValidatedParams validate(const ModelParams& params);

  ModelParams p_;
};

inline ValidatedParams validate(const ModelParams& params) {
  if (!(params.omega > 0.0) || !std::isfinite(params.omega)) {
    throw Error(ErrorCode::NonPositiveFrequency, "omega must be positive and finite");
  }
  if (!(std::abs(params.omega1) < 0.5 * params.omega)) {
    throw Error(ErrorCode::DegenerateSpectrum,
                "|omega1| must be strictly below omega/2 (phi^2 <= 0 otherwise)");
  }
  if (!std::isfinite(std::abs(params.omega2)) || !std::isfinite(std::abs(params.lambda0))) {
    throw Error(ErrorCode::ConfigInvalid, "omega2 and lambda0 must be finite");
  }
  return ValidatedParams(params);
}

struct DerivedParams {
  double phi = 0.0;
  cplx alpha{};    // displacement removing the drive
  double c = 0.0;  // energy shift: D(alpha) H D^dag(alpha) = P - c
  double tau = 0.0;

  /// Omega~^dag A^-1 Omega~ as a Hermitian form; equals 2c.
  double hermitian_form() const noexcept { return 2.0 * c; }
};

/**
 * Closed-form 2x2 solve of A (alpha, alpha*)^T = (omega2, omega2*)^T with
 * A = [[omega/2, omega1], [omega1*, omega/2]], det A = phi^2.
 *
 * Expanding D H D^dag with D a D^dag = a - alpha gives the constant
 * -(1/2) Omega~^dag A^-1 Omega~, so c is half the Hermitian form.
 */
inline DerivedParams derive(const ValidatedParams& params) {
  const double phi = params.phi();
  const double phi2 = phi * phi;
  const double h = 0.5 * params.omega();
  const cplx w1 = params.omega1();
  const cplx w2 = params.omega2();

  DerivedParams d;
  d.phi = phi;
  d.alpha = (h * w2 - w1 * std::conj(w2)) / phi2;
  d.c = (h * std::norm(w2) - std::real(std::conj(w1) * w2 * w2)) / phi2;
  d.tau = 2.0 * std::numbers::pi / phi;
  return d;
}

namespace detail {

/// cos(phi t) and sin(phi t)/phi, with a series for |phi t| < 1e-4.
struct TrigPair {
  cplx cos_term;
  cplx sinc_term;  // sin(phi t) / phi
};

inline TrigPair trig_pair(double phi, cplx t) {
  const cplx u = phi * t;
  TrigPair out;
  out.cos_term = std::cos(u);
  if (std::abs(u) < 1e-4) {
    const cplx u2 = u * u;
    out.sinc_term = t * (1.0 - u2 / 6.0 + u2 * u2 / 120.0);
  } else {
    out.sinc_term = std::sin(u) / phi;
  }
  return out;
}

}  // namespace detail

/**
 * exp(-i t P~) for the adjoint action of P on (a, a^dag):
 *
 *   [[cos + i(omega/2) s,  i omega1 s],
 *    [-i omega1* s,        cos - i(omega/2) s]],   s = sin(phi t)/phi.
 *
 * f is the top-left entry and g the top-right one. For real t the matrix
 * is symplectic: det = |f|^2 - |g|^2 = 1.
 */
struct EvolutionMatrix {
  std::array<std::array<cplx, 2>, 2> m{};

  cplx f() const noexcept { return m[0][0]; }
  cplx g() const noexcept { return m[0][1]; }
  cplx det() const noexcept { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }
};

inline EvolutionMatrix evolution_matrix(const ValidatedParams& params, double t) {
  const auto [c, s] = detail::trig_pair(params.phi(), cplx(t, 0.0));
  const double h = 0.5 * params.omega();
  EvolutionMatrix e;
  e.m[0][0] = c + kI * h * s;
  e.m[0][1] = kI * params.omega1() * s;
  e.m[1][0] = -kI * std::conj(params.omega1()) * s;
  e.m[1][1] = c - kI * h * s;
  return e;
}

enum class FormKind { Unitary, Thermal };

/// Branch used for gamma = -2 log f.
enum class Branch {
  Principal,   // std::log
  Continuous,  // arg f unwrapped analytically along real time
};

/**
 * Wei-Norman form exp(beta K+) exp(gamma K3) exp(delta K-).
 * `parameter` is the time t (Unitary) or the temperature theta (Thermal).
 */
struct DisentangledForm {
  cplx beta{};
  cplx gamma{};
  cplx delta{};
  FormKind kind = FormKind::Unitary;
  double parameter = 0.0;
};

namespace detail {

// Continuous argument of f(u) = cos u + i kappa sin u, kappa >= 1.
// Exact at u = n pi (arg = n pi); atan(kappa tan v) is continuous on
// [-pi/2, pi/2] and reaches +-pi/2 at the ends.
inline double continuous_arg(double u, double kappa) {
  const double n = std::nearbyint(u / std::numbers::pi);
  const double v = u - n * std::numbers::pi;
  return n * std::numbers::pi + std::atan(kappa * std::tan(v));
}

inline DisentangledForm disentangle_at(const ValidatedParams& params, cplx t) {
  const auto [c, s] = detail::trig_pair(params.phi(), t);
  const double h = 0.5 * params.omega();
  // f = cos + i(omega/2) s; the denominator phi cos + i(omega/2) sin is phi f.
  const cplx f = c + kI * h * s;
  DisentangledForm form;
  form.gamma = -2.0 * std::log(f);
  form.beta = -kI * params.omega1() * s / f;
  form.delta = -kI * std::conj(params.omega1()) * s / f;
  return form;
}

}  // namespace detail

/// Disentangled exp(-iPt). `Branch::Principal` is the default log branch.
inline DisentangledForm disentangle_unitary(const ValidatedParams& params, double t,
                                            Branch branch = Branch::Principal) {
  DisentangledForm form = detail::disentangle_at(params, cplx(t, 0.0));
  form.kind = FormKind::Unitary;
  form.parameter = t;
  if (branch == Branch::Continuous) {
    const double phi = params.phi();
    const double kappa = 0.5 * params.omega() / phi;
    const double arg = detail::continuous_arg(phi * t, kappa);
    form.gamma = cplx(form.gamma.real(), -2.0 * arg);
  }
  return form;
}

/**
 * Same formulas at complex time. disentangle_thermal(theta) is this
 * function at t = -i/theta; it exists so that the continuation can be
 * checked directly. Principal branch only.
 */
inline DisentangledForm disentangle_complex_time(const ValidatedParams& params, cplx t) {
  DisentangledForm form = detail::disentangle_at(params, t);
  form.kind = FormKind::Unitary;
  form.parameter = t.real();
  return form;
}

/**
 * Continuity mode: shifts Im(gamma) by multiples of 4 pi so that consecutive
 * entries differ by less than 2 pi. The grid must resolve the winding of f,
 * i.e. |phi dt| well below pi.
 */
inline void unwrap_gamma(std::span<DisentangledForm> path) {
  constexpr double kFourPi = 4.0 * std::numbers::pi;
  for (std::size_t i = 1; i < path.size(); ++i) {
    const double prev = path[i - 1].gamma.imag();
    double cur = path[i].gamma.imag();
    cur -= kFourPi * std::nearbyint((cur - prev) / kFourPi);
    path[i].gamma = cplx(path[i].gamma.real(), cur);
  }
}

inline std::vector<DisentangledForm> disentangle_unitary_path(const ValidatedParams& params,
                                                              std::span<const double> times) {
  std::vector<DisentangledForm> path;
  path.reserve(times.size());
  for (double t : times) path.push_back(disentangle_unitary(params, t));
  unwrap_gamma(path);
  return path;
}

/**
 * Adjoint action of V = exp(beta K+) exp(gamma K3) exp(delta K-) on (a, a^dag):
 *
 *   V a V^-1     = e^{-gamma/2} (a - beta a^dag)
 *   V a^dag V^-1 = (e^{gamma/2} - beta delta e^{-gamma/2}) a^dag + delta e^{-gamma/2} a
 *
 * For a unitary form this reproduces evolution_matrix(); det is 1 for any form.
 */
inline EvolutionMatrix transfer_matrix(const DisentangledForm& form) {
  const cplx em = std::exp(-0.5 * form.gamma);
  const cplx ep = std::exp(0.5 * form.gamma);
  EvolutionMatrix e;
  e.m[0][0] = em;
  e.m[0][1] = -form.beta * em;
  e.m[1][0] = form.delta * em;
  e.m[1][1] = ep - form.beta * form.delta * em;
  return e;
}

/**
 * Disentangled exp(-P/theta), i.e. t -> -i/theta. With x = phi/theta,
 *
 *   beta  = -omega1 / (phi coth x + omega/2),   delta = conj(beta)
 *   gamma = -2 [x + log1p(s (kappa - 1))],     s = (1 - e^{-2x})/2,
 *
 * where kappa = omega/(2 phi). Nothing here overflows as theta -> 0+.
 */
inline DisentangledForm disentangle_thermal(const ValidatedParams& params, double theta) {
  if (!(theta > 0.0)) {
    throw Error(ErrorCode::NonPositiveTemperature, "theta must be positive");
  }
  const double phi = params.phi();
  const double h = 0.5 * params.omega();
  const double x = phi / theta;
  const double kappa = h / phi;
  const double s = -0.5 * std::expm1(-2.0 * x);

  DisentangledForm form;
  form.kind = FormKind::Thermal;
  form.parameter = theta;
  form.beta = -params.omega1() / (phi / std::tanh(x) + h);
  form.delta = std::conj(form.beta);
  form.gamma = cplx(-2.0 * (x + std::log1p(s * (kappa - 1.0))), 0.0);
  return form;
}

}  // namespace qfield
