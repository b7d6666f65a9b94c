/**
 * @file fock_oracle.hpp
 * @brief Brute-force truncated Fock-space reference for every closed form
 *
 * Dense matrices on the first `dim` number states. Functions of Hermitian
 * operators go through a full eigendecomposition; the ladder exponentials of
 * K+ and K- are nilpotent on the ladder, so their series terminate and are
 * summed exactly. Results are escalated geometrically (x2) from
 * TruncationConfig::n_start until the requested quantities change by less
 * than rel_tol.
 */
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <map>
#include <optional>
#include <utility>

#include "qfield/core_algebra.hpp"
#include "qfield/error.hpp"
#include "qfield/moments.hpp"

namespace qfield {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

struct TruncationConfig {
  int n_start = 32;
  int n_max = 512;
  double rel_tol = 1e-8;

  void check() const {
    if (n_start < 4 || n_start > n_max) {
      throw Error(ErrorCode::InvalidTruncationConfig, "need 4 <= n_start <= n_max");
    }
    if (!(rel_tol > 0.0)) throw Error(ErrorCode::InvalidTruncationConfig, "rel_tol must be > 0");
  }
};

namespace fock {

inline MatrixXcd annihilation(int dim) {
  MatrixXcd a = MatrixXcd::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

/// omega K3 + omega1 K+ + omega1* K- on the ladder (no drive).
inline MatrixXcd build_pair_operator(const ValidatedParams& params, int dim) {
  MatrixXcd p = MatrixXcd::Zero(dim, dim);
  const double h = 0.5 * params.omega();
  for (int n = 0; n < dim; ++n) {
    p(n, n) = h * (n + 0.5);
    if (n + 2 < dim) {
      const double s = 0.5 * std::sqrt(static_cast<double>((n + 1) * (n + 2)));
      p(n + 2, n) = params.omega1() * s;
      p(n, n + 2) = std::conj(params.omega1()) * s;
    }
  }
  return p;
}

/// Full Hamiltonian, drive included. Hermitian by construction.
inline MatrixXcd build_hamiltonian(const ValidatedParams& params, int dim) {
  if (dim < 4) throw Error(ErrorCode::InvalidTruncationConfig, "dim must be >= 4");
  MatrixXcd hmat = build_pair_operator(params, dim);
  for (int n = 0; n + 1 < dim; ++n) {
    const double s = std::sqrt(static_cast<double>(n + 1));
    hmat(n + 1, n) += params.omega2() * s;
    hmat(n, n + 1) += std::conj(params.omega2()) * s;
  }
  return hmat;
}

struct HermitianSpectrum {
  VectorXd values;
  MatrixXcd vectors;

  /// V fn(Lambda) V^dag
  template <class Fn>
  MatrixXcd apply(Fn&& fn) const {
    VectorXcd weights(values.size());
    for (Eigen::Index i = 0; i < values.size(); ++i) weights(i) = fn(values(i));
    return vectors * weights.asDiagonal() * vectors.adjoint();
  }
};

inline HermitianSpectrum spectrum(const MatrixXcd& hermitian) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> solver(hermitian);
  return {solver.eigenvalues(), solver.eigenvectors()};
}

/// Exact Fock amplitudes e^{-|z|^2/2} z^n / sqrt(n!) of |z>, first dim of them.
inline VectorXcd coherent_vector(cplx z, int dim) {
  VectorXcd v(dim);
  v(0) = std::exp(-0.5 * std::norm(z));
  for (int n = 1; n < dim; ++n) v(n) = v(n - 1) * z / std::sqrt(static_cast<double>(n));
  return v;
}

/// exp(x A) for a generator A = a^dag^2/2 (raise) or a^2/2 (lower); terminating series.
inline MatrixXcd pair_exponential(cplx x, int dim, bool raise) {
  MatrixXcd out = MatrixXcd::Zero(dim, dim);
  for (int n = 0; n < dim; ++n) {
    cplx term = 1.0;  // (x/2)^k / k! * sqrt((n+2k)!/n!)
    for (int k = 0; n + 2 * k < dim; ++k) {
      if (k > 0) {
        const double m = n + 2 * k;
        term *= 0.5 * x / static_cast<double>(k) * std::sqrt(m * (m - 1.0));
      }
      if (raise) {
        out(n + 2 * k, n) = term;
      } else {
        out(n, n + 2 * k) = term;
      }
    }
  }
  return out;
}

/// exp(x a) (upper) or exp(x a^dag) (lower) on the ladder; terminating series.
inline MatrixXcd linear_exponential(cplx x, int dim, bool creation) {
  MatrixXcd out = MatrixXcd::Zero(dim, dim);
  for (int n = 0; n < dim; ++n) {
    cplx term = 1.0;  // x^k / k! * sqrt((n+k)!/n!)
    for (int k = 0; n + k < dim; ++k) {
      if (k > 0) term *= x / static_cast<double>(k) * std::sqrt(static_cast<double>(n + k));
      if (creation) {
        out(n + k, n) = term;
      } else {
        out(n, n + k) = term;
      }
    }
  }
  return out;
}

/// max |x - y| over the leading block x block entries.
inline double block_distance(const MatrixXcd& x, const MatrixXcd& y, int block) {
  return (x.topLeftCorner(block, block) - y.topLeftCorner(block, block)).cwiseAbs().maxCoeff();
}

/**
 * Runs `compute(dim)` at n_start, 2 n_start, ... until `distance` between
 * consecutive results drops below rel_tol. Returns the finer result and its dim.
 */
template <class Compute, class Distance>
auto escalate(const TruncationConfig& cfg, int min_dim, Compute&& compute, Distance&& distance) {
  cfg.check();
  int dim = std::max(cfg.n_start, min_dim);
  if (dim > cfg.n_max) {
    throw Error(ErrorCode::TruncationNotConverged, "minimum ladder size exceeds n_max");
  }
  auto previous = compute(dim);
  double last_change = 0.0;
  while (2 * dim <= cfg.n_max) {
    dim *= 2;
    auto next = compute(dim);
    last_change = distance(previous, next);
    if (last_change < cfg.rel_tol) return std::make_pair(std::move(next), dim);
    previous = std::move(next);
  }
  char change[32];
  std::snprintf(change, sizeof change, "%.3e", last_change);
  throw Error(ErrorCode::TruncationNotConverged,
              "no convergence up to dim " + std::to_string(dim) + " (last change " + change + ")");
}

}  // namespace fock

enum class StateKind { Pure, Mixed };

struct TruncatedState {
  int dim = 0;
  MatrixXcd rho;
  std::optional<VectorXcd> vector;  // set for pure states

  StateKind kind() const noexcept { return vector ? StateKind::Pure : StateKind::Mixed; }
};

struct StateDefects {
  double trace = 0.0;        // |tr rho - 1|
  double hermiticity = 0.0;  // max |rho - rho^dag|
  double min_eigenvalue = 0.0;
};

inline StateDefects state_defects(const TruncatedState& s) {
  StateDefects d;
  d.trace = std::abs(s.rho.trace() - 1.0);
  d.hermiticity = (s.rho - s.rho.adjoint()).cwiseAbs().maxCoeff();
  const MatrixXcd herm = 0.5 * (s.rho + s.rho.adjoint());
  d.min_eigenvalue = Eigen::SelfAdjointEigenSolver<MatrixXcd>(herm, Eigen::EigenvaluesOnly)
                         .eigenvalues()
                         .minCoeff();
  return d;
}

/// tr(rho a^n a^dag^m) with the truncated ladder operators in that order.
inline cplx moment(const TruncatedState& state, int n, int m) {
  const int dim = state.dim;
  if (n < 0 || m < 0 || 4 * (n + m) > dim) {
    throw Error(ErrorCode::OrderTooHighForTruncation,
                "moment order " + std::to_string(n + m) + " needs dim >= " +
                    std::to_string(4 * (n + m)));
  }
  cplx sum{};
  for (int j = 0; j + m < dim; ++j) {
    const int top = j + m;
    if (top < n) continue;
    double coeff = 1.0;
    for (int i = j + 1; i <= top; ++i) coeff *= std::sqrt(static_cast<double>(i));
    for (int i = top - n + 1; i <= top; ++i) coeff *= std::sqrt(static_cast<double>(i));
    // a^n a^dag^m |j> = coeff |top - n>
    sum += state.rho(j, top - n) * coeff;
  }
  return sum;
}

inline MomentSet oracle_moments(const TruncatedState& state, int max_order = 4) {
  MomentSet out(max_order, MomentSource::Oracle);
  for (int n = 0; n <= max_order; ++n)
    for (int m = 0; n + m <= max_order; ++m) out.set(n, m, moment(state, n, m));
  return out;
}

namespace fock {

inline double moment_distance(const TruncatedState& x, const TruncatedState& y, int max_order) {
  double worst = 0.0;
  for (int n = 0; n <= max_order; ++n)
    for (int m = 0; n + m <= max_order; ++m) {
      const cplx mx = moment(x, n, m);
      const cplx my = moment(y, n, m);
      worst = std::max(worst, std::abs(mx - my) / std::max(1.0, std::abs(my)));
    }
  return worst;
}

}  // namespace fock

/// U(t)|lambda0> with U = exp(-iHt) from the eigendecomposition of H.
inline TruncatedState evolve_coherent(const ValidatedParams& params, double t,
                                      const TruncationConfig& cfg = {}, int max_order = 4) {
  const auto compute = [&](int dim) {
    VectorXcd psi0 = fock::coherent_vector(params.lambda0(), dim);
    psi0.normalize();
    const fock::HermitianSpectrum spec = fock::spectrum(fock::build_hamiltonian(params, dim));
    VectorXcd coeffs = spec.vectors.adjoint() * psi0;
    for (Eigen::Index i = 0; i < coeffs.size(); ++i) coeffs(i) *= std::exp(-kI * spec.values(i) * t);
    VectorXcd psi = spec.vectors * coeffs;
    TruncatedState s;
    s.dim = dim;
    s.rho = psi * psi.adjoint();
    s.vector = std::move(psi);
    return s;
  };
  const auto distance = [&](const TruncatedState& x, const TruncatedState& y) {
    return fock::moment_distance(x, y, max_order);
  };
  return fock::escalate(cfg, 4 * max_order, compute, distance).first;
}

namespace fock {

/// e^{-H/theta}/Z at a fixed ladder size, weights shifted by the ground energy.
inline TruncatedState thermal_state_at(const ValidatedParams& params, double theta, int dim) {
  const HermitianSpectrum spec = spectrum(build_hamiltonian(params, dim));
  const double ground = spec.values.minCoeff();
  double z = 0.0;
  for (Eigen::Index i = 0; i < spec.values.size(); ++i) z += std::exp(-(spec.values(i) - ground) / theta);
  TruncatedState s;
  s.dim = dim;
  s.rho = spec.apply([&](double e) { return cplx(std::exp(-(e - ground) / theta) / z, 0.0); });
  return s;
}

}  // namespace fock

/// e^{-H/theta}/Z, escalated until every moment up to max_order settles.
inline TruncatedState thermal_state(const ValidatedParams& params, double theta,
                                    const TruncationConfig& cfg = {}, int max_order = 4) {
  if (!(theta > 0.0)) throw Error(ErrorCode::NonPositiveTemperature, "theta must be positive");
  const auto compute = [&](int dim) { return fock::thermal_state_at(params, theta, dim); };
  const auto distance = [&](const TruncatedState& x, const TruncatedState& y) {
    return fock::moment_distance(x, y, max_order);
  };
  return fock::escalate(cfg, 4 * max_order, compute, distance).first;
}

/// exp(beta K+) exp(gamma K3) exp(delta K-) on the ladder. Entries are exact
/// for any dim: the product only sums over levels below both indices.
inline MatrixXcd recompose_disentangled(const DisentangledForm& form, int dim) {
  const MatrixXcd raise = fock::pair_exponential(form.beta, dim, true);
  const MatrixXcd lower = fock::pair_exponential(form.delta, dim, false);
  VectorXcd diag(dim);
  for (int n = 0; n < dim; ++n) diag(n) = std::exp(0.5 * form.gamma * (n + 0.5));
  return raise * diag.asDiagonal() * lower;
}

/**
 * exp(-iPt) and exp(-P/theta) restricted to the leading `block` levels,
 * converged by escalation. Spectra of P are cached per ladder size, so one
 * oracle object serves a whole time or temperature grid.
 */
class PairOperatorOracle {
 public:
  PairOperatorOracle(const ValidatedParams& params, TruncationConfig cfg)
      : params_(params), cfg_(cfg) {
    cfg_.check();
  }

  /// Leading block of exp(-iPt); convergence in max absolute entry change.
  MatrixXcd unitary_block(double t, int block) {
    const auto compute = [&](int dim) {
      return MatrixXcd(spectrum_at(dim).apply([&](double e) { return std::exp(-kI * e * t); })
                           .topLeftCorner(block, block));
    };
    const auto distance = [&](const MatrixXcd& x, const MatrixXcd& y) {
      return fock::block_distance(x, y, block);
    };
    return fock::escalate(cfg_, 2 * block, compute, distance).first;
  }

  /// Leading block of exp(-P/theta); convergence relative to the largest entry.
  MatrixXcd boltzmann_block(double theta, int block) {
    if (!(theta > 0.0)) throw Error(ErrorCode::NonPositiveTemperature, "theta must be positive");
    const auto compute = [&](int dim) {
      return MatrixXcd(spectrum_at(dim).apply([&](double e) { return cplx(std::exp(-e / theta), 0.0); })
                           .topLeftCorner(block, block));
    };
    const auto distance = [&](const MatrixXcd& x, const MatrixXcd& y) {
      return fock::block_distance(x, y, block) / y.cwiseAbs().maxCoeff();
    };
    return fock::escalate(cfg_, 2 * block, compute, distance).first;
  }

 private:
  const fock::HermitianSpectrum& spectrum_at(int dim) {
    auto it = cache_.find(dim);
    if (it == cache_.end()) {
      it = cache_.emplace(dim, fock::spectrum(fock::build_pair_operator(params_, dim))).first;
    }
    return it->second;
  }

  ValidatedParams params_;
  TruncationConfig cfg_;
  std::map<int, fock::HermitianSpectrum> cache_;
};

/// <chi| exp(-iHt) |zeta> from exact truncated coherent amplitudes.
inline cplx coherent_matrix_element(const ValidatedParams& params, cplx chi, cplx zeta, double t,
                                    const TruncationConfig& cfg = {}) {
  const auto compute = [&](int dim) {
    const fock::HermitianSpectrum spec = fock::spectrum(fock::build_hamiltonian(params, dim));
    const VectorXcd left = spec.vectors.adjoint() * fock::coherent_vector(chi, dim);
    const VectorXcd right = spec.vectors.adjoint() * fock::coherent_vector(zeta, dim);
    cplx sum{};
    for (Eigen::Index i = 0; i < spec.values.size(); ++i) {
      sum += std::conj(left(i)) * std::exp(-kI * spec.values(i) * t) * right(i);
    }
    return sum;
  };
  const auto distance = [](cplx x, cplx y) { return std::abs(x - y) / std::max(1.0, std::abs(y)); };
  return fock::escalate(cfg, 16, compute, distance).first;
}

namespace fock {

/// log(1 + x) without losing the relative precision of small x.
inline cplx complex_log1p(cplx x) {
  const double re = x.real();
  const double im = x.imag();
  return {0.5 * std::log1p(2.0 * re + re * re + im * im), std::atan2(im, 1.0 + re)};
}

}  // namespace fock

/**
 * ln(Z(eps, eta) / Z(0, 0)) with Z(eps, eta) = tr(e^{-H/theta} e^{eta a} e^{eps a^dag}),
 * the trace form of the partition function with disentangled sources.
 * tr(rho (E - 1)) is formed directly so that small sources keep full
 * relative precision.
 */
inline cplx log_source_partition(const TruncatedState& thermal, cplx eps, cplx eta) {
  const int dim = thermal.dim;
  // E - 1 = AB + A + B with A = exp(eta a) - 1 and B = exp(eps a^dag) - 1.
  MatrixXcd a = fock::linear_exponential(eta, dim, false);
  MatrixXcd b = fock::linear_exponential(eps, dim, true);
  a.diagonal().array() -= 1.0;
  b.diagonal().array() -= 1.0;
  const MatrixXcd rho_a = thermal.rho * a.triangularView<Eigen::StrictlyUpper>();
  const cplx trace = rho_a.cwiseProduct(b.transpose()).sum() + thermal.rho.cwiseProduct(a.transpose()).sum() +
                     thermal.rho.cwiseProduct(b.transpose()).sum();
  return fock::complex_log1p(trace);
}

/// Five log-partition derivatives of a fixed thermal state by central differences with step h.
inline Cumulants finite_difference_cumulants(const TruncatedState& s, double h = 1e-4) {
  const auto f = [&](double de, double dn) { return log_source_partition(s, de, dn); };
  Cumulants c;
  c.t_eta = (f(0, h) - f(0, -h)) / (2.0 * h);
  c.t_eps = (f(h, 0) - f(-h, 0)) / (2.0 * h);
  c.t_etaeta = (f(0, h) + f(0, -h)) / (h * h);  // f(0, 0) = 0
  c.t_epseps = (f(h, 0) + f(-h, 0)) / (h * h);
  c.t_epseta = std::real(f(h, h) - f(h, -h) - f(-h, h) + f(-h, -h)) / (4.0 * h * h);
  return c;
}

/**
 * Same, on a thermal state whose ladder size is converged through its
 * moments. The differences carry ~eps/h^2 rounding noise and are not used
 * as the escalation criterion.
 */
inline Cumulants finite_difference_cumulants(const ValidatedParams& params, double theta,
                                             const TruncationConfig& cfg = {}, double h = 1e-4) {
  return finite_difference_cumulants(thermal_state(params, theta, cfg, 4), h);
}

}  // namespace qfield
