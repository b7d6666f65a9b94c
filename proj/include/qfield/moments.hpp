/**
 * @file moments.hpp
 * @brief Anti-normally ordered moments <a^n a^dag^m> and their Gaussian
 *        generating function
 *
 * MomentSet is the common currency between the closed forms, the Fock
 * oracle and the squeezing metrics. Values are stored for n + m <= max_order;
 * normally ordered moments are derived through
 *
 *   a^dag^m a^n = sum_j (-1)^j j! C(m,j) C(n,j) a^{n-j} a^dag^{m-j}.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "qfield/core_algebra.hpp"
#include "qfield/error.hpp"

namespace qfield {

enum class MomentSource { ClosedFormThermal, ClosedFormUnitary, Oracle };

inline const char* to_string(MomentSource s) {
  switch (s) {
    case MomentSource::ClosedFormThermal: return "ClosedFormThermal";
    case MomentSource::ClosedFormUnitary: return "ClosedFormUnitary";
    case MomentSource::Oracle: return "Oracle";
  }
  return "Unknown";
}

namespace detail {

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

inline double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

}  // namespace detail

class MomentSet {
 public:
  MomentSet(int max_order, MomentSource source)
      : max_order_(max_order),
        source_(source),
        values_(static_cast<std::size_t>((max_order + 1) * (max_order + 1))) {
    if (max_order < 0) throw Error(ErrorCode::MissingMoments, "max_order must be >= 0");
  }

  int max_order() const noexcept { return max_order_; }
  MomentSource source() const noexcept { return source_; }

  /// Sets <a^n a^dag^m>.
  void set(int n, int m, cplx value) {
    check_range(n, m);
    slot(n, m) = value;
  }

  /// Sets <a^n a^dag^m> and its conjugate partner <a^m a^dag^n>.
  void set_pair(int n, int m, cplx value) {
    set(n, m, value);
    if (n != m) set(m, n, std::conj(value));
  }

  bool has(int n, int m) const {
    if (n < 0 || m < 0 || n + m > max_order_) return false;
    return slot(n, m).has_value();
  }

  /// <a^n a^dag^m>
  cplx anti_normal(int n, int m) const {
    if (!has(n, m)) {
      throw Error(ErrorCode::MissingMoments,
                  "<a^" + std::to_string(n) + " a^dag^" + std::to_string(m) + "> not available");
    }
    return *slot(n, m);
  }

  /// <a^dag^m a^n>
  cplx normal(int m, int n) const {
    cplx sum{};
    for (int j = 0; j <= std::min(m, n); ++j) {
      const double coeff = detail::factorial(j) * detail::binomial(m, j) * detail::binomial(n, j);
      sum += ((j % 2 == 0) ? coeff : -coeff) * anti_normal(n - j, m - j);
    }
    return sum;
  }

  /// Largest |<a^n a^dag^m> - conj(<a^m a^dag^n>)| over stored pairs.
  double conjugate_symmetry_defect() const {
    double worst = 0.0;
    for (int n = 0; n <= max_order_; ++n) {
      for (int m = 0; n + m <= max_order_; ++m) {
        if (has(n, m) && has(m, n)) {
          worst = std::max(worst, std::abs(anti_normal(n, m) - std::conj(anti_normal(m, n))));
        }
      }
    }
    return worst;
  }

  /// Returns a copy with every moment multiplied by e^{i(m-n)chi}, i.e. a -> a e^{-i chi}.
  MomentSet phase_rotated(double chi) const {
    MomentSet out(max_order_, source_);
    for (int n = 0; n <= max_order_; ++n) {
      for (int m = 0; n + m <= max_order_; ++m) {
        if (has(n, m)) out.slot(n, m) = std::polar(1.0, (m - n) * chi) * *slot(n, m);
      }
    }
    return out;
  }

 private:
  void check_range(int n, int m) const {
    if (n < 0 || m < 0 || n + m > max_order_) {
      throw Error(ErrorCode::MissingMoments, "moment order exceeds MomentSet capacity");
    }
  }
  std::optional<cplx>& slot(int n, int m) {
    return values_[static_cast<std::size_t>(n * (max_order_ + 1) + m)];
  }
  const std::optional<cplx>& slot(int n, int m) const {
    return values_[static_cast<std::size_t>(n * (max_order_ + 1) + m)];
  }

  int max_order_;
  MomentSource source_;
  std::vector<std::optional<cplx>> values_;
};

/**
 * Derivatives of ln <e^{eta a} e^{eps a^dag}> at the origin. For a Gaussian
 * state these five numbers determine every ordered moment; higher
 * derivatives vanish.
 */
struct Cumulants {
  cplx t_eta{};      // <a>
  cplx t_eps{};      // <a^dag>
  cplx t_etaeta{};   // <a^2> - <a>^2
  cplx t_epseps{};   // conj(t_etaeta)
  double t_epseta{}; // <a a^dag> - |<a>|^2
};

/**
 * Ordered moments from the Gaussian generating function
 *
 *   G(eps, eta) = exp(t_eps eps + t_eta eta + t_epseps eps^2/2
 *                     + t_etaeta eta^2/2 + t_epseta eps eta),
 *
 * <a^n a^dag^m> = d^m/d eps^m d^n/d eta^n G at 0. The exponential is
 * expanded as a truncated bivariate power series.
 */
inline MomentSet moments_from_cumulants(const Cumulants& c, int max_order = 4,
                                        MomentSource source = MomentSource::ClosedFormThermal) {
  const int d = max_order;
  const auto idx = [d](int i, int j) { return static_cast<std::size_t>(i * (d + 1) + j); };
  using Series = std::vector<cplx>;  // coefficient of eps^i eta^j at idx(i, j)

  Series q(idx(d, d) + 1);
  if (d >= 1) {
    q[idx(1, 0)] = c.t_eps;
    q[idx(0, 1)] = c.t_eta;
  }
  if (d >= 2) {
    q[idx(2, 0)] = 0.5 * c.t_epseps;
    q[idx(0, 2)] = 0.5 * c.t_etaeta;
    q[idx(1, 1)] = c.t_epseta;
  }

  const auto multiply = [&](const Series& x, const Series& y) {
    Series out(x.size());
    for (int i1 = 0; i1 <= d; ++i1)
      for (int j1 = 0; i1 + j1 <= d; ++j1) {
        const cplx xv = x[idx(i1, j1)];
        if (xv == cplx{}) continue;
        for (int i2 = 0; i1 + i2 <= d; ++i2)
          for (int j2 = 0; i1 + j1 + i2 + j2 <= d; ++j2) {
            out[idx(i1 + i2, j1 + j2)] += xv * y[idx(i2, j2)];
          }
      }
    return out;
  };

  // exp(Q) = sum_p Q^p / p!; Q has no constant term so p <= d suffices.
  Series result(q.size());
  result[idx(0, 0)] = 1.0;
  Series power = result;
  for (int p = 1; p <= d; ++p) {
    power = multiply(power, q);
    for (std::size_t k = 0; k < power.size(); ++k) result[k] += power[k] / detail::factorial(p);
  }

  MomentSet moments(max_order, source);
  for (int n = 0; n <= d; ++n) {
    for (int m = 0; n + m <= d; ++m) {
      // eps <-> a^dag (m), eta <-> a (n)
      const double weight = detail::factorial(m) * detail::factorial(n);
      moments.set(n, m, weight * result[idx(m, n)]);
    }
  }
  return moments;
}

}  // namespace qfield
