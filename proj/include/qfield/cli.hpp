/**
 * @file cli.hpp
 * @brief Batch sweeps behind the `qfield` executable: evolve, thermal,
 *        critical and verify
 *
 * Config JSON:
 *   {
 *     "params":  {"omega": 1, "omega1": [re, im], "omega2": [re, im], "lambda0": [re, im]},
 *     "sweep":   {"kind": "time" | "temperature", "start": 0, "stop": 10, "points": 101},
 *     "outputs": ["t", "D1", ...],                       (optional column subset)
 *     "oracle":  {"n_start": 32, "n_max": 512, "rel_tol": 1e-8},
 *     "with_oracle": false,
 *     "verify":  {"t": 1.0, "theta": 0.2}
 *   }
 *
 * CSV numbers use %.12e, LF line endings, fixed column order.
 * Exit codes: 0 success, 1 verification failure, 2 invalid input or
 * oracle non-convergence.
 */
#pragma once

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "qfield/core_algebra.hpp"
#include "qfield/fock_oracle.hpp"
#include "qfield/params_json.hpp"
#include "qfield/squeezing.hpp"
#include "qfield/thermal.hpp"
#include "qfield/unitary.hpp"

namespace qfield::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailed = 1;
inline constexpr int kExitInvalid = 2;

enum class SweepKind { Time, Temperature };

struct SweepSpec {
  SweepKind kind = SweepKind::Time;
  double start = 0.0;
  double stop = 1.0;
  int points = 2;

  std::vector<double> grid() const {
    std::vector<double> g(static_cast<std::size_t>(points));
    const double step = (stop - start) / (points - 1);
    for (int i = 0; i < points; ++i) g[static_cast<std::size_t>(i)] = start + i * step;
    g.back() = stop;
    return g;
  }
};

struct RunConfig {
  ModelParams params;
  std::optional<SweepSpec> sweep;
  std::vector<std::string> outputs;
  TruncationConfig oracle;
  bool with_oracle = false;
  double verify_t = 1.0;
  double verify_theta = 0.2;
};

/// Command-line flags; each set value replaces the file value.
struct Overrides {
  std::optional<double> omega, omega1_re, omega1_im, omega2_re, omega2_im, lambda_re, lambda_im;
  std::optional<double> start, stop;
  std::optional<int> points;
  std::optional<double> t, theta;
  bool with_oracle = false;
};

inline SweepKind parse_sweep_kind(const std::string& s) {
  if (s == "time") return SweepKind::Time;
  if (s == "temperature") return SweepKind::Temperature;
  throw Error(ErrorCode::ConfigInvalid, "sweep.kind must be \"time\" or \"temperature\"");
}

inline RunConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorCode::ConfigInvalid, "config must be a JSON object");
  RunConfig cfg;
  try {
    if (j.contains("params")) cfg.params = j.at("params").get<ModelParams>();
    if (j.contains("sweep")) {
      const auto& s = j.at("sweep");
      SweepSpec sweep;
      if (s.contains("kind")) sweep.kind = parse_sweep_kind(s.at("kind").get<std::string>());
      sweep.start = s.value("start", sweep.start);
      sweep.stop = s.value("stop", sweep.stop);
      sweep.points = s.value("points", sweep.points);
      cfg.sweep = sweep;
    }
    if (j.contains("outputs")) cfg.outputs = j.at("outputs").get<std::vector<std::string>>();
    if (j.contains("oracle")) {
      const auto& o = j.at("oracle");
      cfg.oracle.n_start = o.value("n_start", cfg.oracle.n_start);
      cfg.oracle.n_max = o.value("n_max", cfg.oracle.n_max);
      cfg.oracle.rel_tol = o.value("rel_tol", cfg.oracle.rel_tol);
    }
    cfg.with_oracle = j.value("with_oracle", false);
    if (j.contains("verify")) {
      cfg.verify_t = j.at("verify").value("t", cfg.verify_t);
      cfg.verify_theta = j.at("verify").value("theta", cfg.verify_theta);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ConfigInvalid, e.what());
  }
  return cfg;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigInvalid, "cannot open config file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ConfigInvalid, e.what());
  }
  return config_from_json(j);
}

inline void apply_overrides(RunConfig& cfg, const Overrides& o) {
  if (o.omega) cfg.params.omega = *o.omega;
  if (o.omega1_re) cfg.params.omega1.real(*o.omega1_re);
  if (o.omega1_im) cfg.params.omega1.imag(*o.omega1_im);
  if (o.omega2_re) cfg.params.omega2.real(*o.omega2_re);
  if (o.omega2_im) cfg.params.omega2.imag(*o.omega2_im);
  if (o.lambda_re) cfg.params.lambda0.real(*o.lambda_re);
  if (o.lambda_im) cfg.params.lambda0.imag(*o.lambda_im);
  if (o.start || o.stop || o.points) {
    if (!cfg.sweep) cfg.sweep = SweepSpec{};
    if (o.start) cfg.sweep->start = *o.start;
    if (o.stop) cfg.sweep->stop = *o.stop;
    if (o.points) cfg.sweep->points = *o.points;
  }
  if (o.t) cfg.verify_t = *o.t;
  if (o.theta) cfg.verify_theta = *o.theta;
  if (o.with_oracle) cfg.with_oracle = true;
}

inline const SweepSpec& require_sweep(const RunConfig& cfg, SweepKind kind) {
  if (!cfg.sweep) throw Error(ErrorCode::ConfigInvalid, "a sweep is required");
  const SweepSpec& s = *cfg.sweep;
  if (s.kind != kind) {
    throw Error(ErrorCode::ConfigInvalid, kind == SweepKind::Time ? "evolve needs a time sweep"
                                                                  : "thermal needs a temperature sweep");
  }
  if (!(s.start < s.stop)) throw Error(ErrorCode::ConfigInvalid, "sweep needs start < stop");
  if (s.points < 2 || s.points > 100000) {
    throw Error(ErrorCode::ConfigInvalid, "sweep.points must be in [2, 100000]");
  }
  if (kind == SweepKind::Temperature && !(s.start > 0.0)) {
    throw Error(ErrorCode::ConfigInvalid, "temperature sweep must start above 0");
  }
  return s;
}

inline std::string format_real(double x) {
  if (x == 0.0) x = 0.0;  // no "-0"
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12e", x);
  return buf;
}

/// A CSV column: header name plus its cell for one row.
struct Cell {
  std::string column;
  std::string text;
};

/// Evaluates `row(i)` for i in [0, n) on worker threads; results keep grid order.
inline std::vector<std::vector<Cell>> evaluate_rows(
    std::size_t n, const std::function<std::vector<Cell>(std::size_t)>& row) {
  std::vector<std::vector<Cell>> rows(n);
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(n, std::thread::hardware_concurrency()));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) rows[i] = row(i);
    return rows;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < n; i += workers) rows[i] = row(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return rows;
}

/// Writes header + rows, restricted to `selected` (kept in row order) when non-empty.
inline void write_csv(std::ostream& out, const std::vector<std::vector<Cell>>& rows,
                      const std::vector<std::string>& selected) {
  if (rows.empty()) return;
  std::vector<std::size_t> keep;
  for (std::size_t c = 0; c < rows.front().size(); ++c) {
    const std::string& name = rows.front()[c].column;
    if (selected.empty() || std::find(selected.begin(), selected.end(), name) != selected.end()) {
      keep.push_back(c);
    }
  }
  for (const std::string& s : selected) {
    const bool known = std::any_of(rows.front().begin(), rows.front().end(),
                                   [&](const Cell& cell) { return cell.column == s; });
    if (!known) throw Error(ErrorCode::ConfigInvalid, "unknown output column " + s);
  }
  for (std::size_t k = 0; k < keep.size(); ++k) {
    out << (k ? "," : "") << rows.front()[keep[k]].column;
  }
  out << '\n';
  for (const auto& r : rows) {
    for (std::size_t k = 0; k < keep.size(); ++k) out << (k ? "," : "") << r[keep[k]].text;
    out << '\n';
  }
}

/// Columns: t, beta_re, beta_im, D1, nonclassical [, D1_oracle, D2_oracle].
inline int cmd_evolve(const RunConfig& cfg, std::ostream& out) {
  const ValidatedParams params = validate(cfg.params);
  const std::vector<double> times = require_sweep(cfg, SweepKind::Time).grid();
  if (cfg.with_oracle) cfg.oracle.check();

  const auto rows = evaluate_rows(times.size(), [&](std::size_t i) {
    const double t = times[i];
    const PFunctionVerdict verdict = p_function_witness_unitary(params, t);
    std::vector<Cell> row{{"t", format_real(t)},
                          {"beta_re", format_real(verdict.beta_at_t.real())},
                          {"beta_im", format_real(verdict.beta_at_t.imag())},
                          {"D1", format_real(d1_unitary(params, t))},
                          {"nonclassical", verdict.nonclassical ? "1" : "0"}};
    if (cfg.with_oracle) {
      const MomentSet m = oracle_moments(evolve_coherent(params, t, cfg.oracle, 4), 4);
      row.push_back({"D1_oracle", format_real(squeezing_report(m, 1).dk)});
      row.push_back({"D2_oracle", format_real(squeezing_report(m, 2).dk)});
    }
    return row;
  });
  write_csv(out, rows, cfg.outputs);
  return kExitOk;
}

/// Columns: theta, detM, classical, D1, D1_zhang, D2, D2_zhang, mandel_excess, n_mean
/// [, D1_oracle, D2_oracle].
inline int cmd_thermal(const RunConfig& cfg, std::ostream& out) {
  const ValidatedParams params = validate(cfg.params);
  const std::vector<double> temps = require_sweep(cfg, SweepKind::Temperature).grid();
  if (cfg.with_oracle) cfg.oracle.check();

  const auto rows = evaluate_rows(temps.size(), [&](std::size_t i) {
    const double theta = temps[i];
    const GaussianWitness w = witness_matrix(params, theta);
    const ThermalSqueezing sq = thermal_squeezing(params, theta);
    std::vector<Cell> row{{"theta", format_real(theta)},
                          {"detM", format_real(w.det)},
                          {"classical", w.classical ? "1" : "0"},
                          {"D1", format_real(sq.d1)},
                          {"D1_zhang", format_real(sq.d1_zhang)},
                          {"D2", format_real(sq.d2)},
                          {"D2_zhang", format_real(sq.d2_zhang)},
                          {"mandel_excess", format_real(mandel_excess(params, theta))},
                          {"n_mean", format_real(photon_number_mean(params, theta))}};
    if (cfg.with_oracle) {
      const MomentSet m = oracle_moments(thermal_state(params, theta, cfg.oracle, 4), 4);
      row.push_back({"D1_oracle", format_real(squeezing_report(m, 1).dk)});
      row.push_back({"D2_oracle", format_real(squeezing_report(m, 2).dk)});
    }
    return row;
  });
  write_csv(out, rows, cfg.outputs);
  return kExitOk;
}

/**
 * {"defined", "theta_star", "theta_c", "theta_bisection", "bisection_residual"}.
 * The bisection brackets the sign change of det M independently of the
 * closed-form root; the residual is their distance.
 */
inline nlohmann::json critical_report(const ValidatedParams& params) {
  const CriticalTemps ct = critical_temperatures(params);
  nlohmann::json j;
  j["defined"] = ct.defined;
  if (!ct.defined) {
    j["theta_star"] = nullptr;
    j["theta_c"] = nullptr;
    return j;
  }
  const auto det = [&](double theta) { return witness_matrix(params, theta).det; };
  const double root = bisect_sign_change(det, 0.25 * ct.theta_star, 4.0 * ct.theta_star);
  j["theta_star"] = ct.theta_star;
  j["theta_c"] = ct.theta_c;
  j["theta_bisection"] = root;
  j["bisection_residual"] = std::abs(root - ct.theta_star);
  return j;
}

inline int cmd_critical(const RunConfig& cfg, std::ostream& out) {
  out << critical_report(validate(cfg.params)).dump(2) << '\n';
  return kExitOk;
}

struct CheckResult {
  std::string name;
  double deviation = 0.0;
  double tolerance = 0.0;
  bool passed() const { return deviation < tolerance; }
};

/**
 * Closed form against the Fock oracle at one parameter point
 * (cfg.verify_t, cfg.verify_theta).
 */
inline std::vector<CheckResult> run_verification(const RunConfig& cfg) {
  const ValidatedParams params = validate(cfg.params);
  const double t = cfg.verify_t;
  const double theta = cfg.verify_theta;
  require_positive_temperature(theta);
  cfg.oracle.check();

  constexpr int kLadder = 40;
  constexpr int kInterior = 30;
  std::vector<CheckResult> checks;
  PairOperatorOracle pair_oracle(params, cfg.oracle);

  {
    const MatrixXcd closed =
        recompose_disentangled(disentangle_unitary(params, t, Branch::Continuous), kLadder);
    const MatrixXcd exact = pair_oracle.unitary_block(t, kInterior);
    checks.push_back({"unitary_recomposition", fock::block_distance(closed, exact, kInterior), 1e-8});
  }
  {
    const MatrixXcd closed = recompose_disentangled(disentangle_thermal(params, theta), kLadder);
    const MatrixXcd exact = pair_oracle.boltzmann_block(theta, kInterior);
    checks.push_back({"thermal_recomposition",
                      fock::block_distance(closed, exact, kInterior) / exact.cwiseAbs().maxCoeff(),
                      1e-8});
  }
  {
    const std::vector<std::pair<cplx, cplx>> points{
        {params.lambda0(), params.lambda0()}, {cplx(0.3, -0.2), cplx(0.0, 0.5)}, {cplx(-0.4, 0.1), cplx(0.2, 0.2)}};
    double worst = 0.0;
    for (const auto& [chi, zeta] : points) {
      const cplx closed = coherent_kernel(params, chi, zeta, t, Branch::Continuous);
      worst = std::max(worst, std::abs(closed - coherent_matrix_element(params, chi, zeta, t, cfg.oracle)));
    }
    checks.push_back({"coherent_kernel", worst, 1e-8});
  }

  const auto moment_gap = [](const MomentSet& closed, const MomentSet& oracle) {
    double worst = 0.0;
    for (int n = 0; n <= 4; ++n)
      for (int m = 0; n + m <= 4; ++m) {
        const cplx o = oracle.anti_normal(n, m);
        worst = std::max(worst, std::abs(closed.anti_normal(n, m) - o) / std::max(1.0, std::abs(o)));
      }
    return worst;
  };

  {
    const MomentSet closed = unitary_moments(params, t);
    const MomentSet oracle = oracle_moments(evolve_coherent(params, t, cfg.oracle, 4), 4);
    checks.push_back({"unitary_moments", moment_gap(closed, oracle), 1e-6});
    checks.push_back(
        {"unitary_d1", std::abs(d1_unitary(params, t) - squeezing_report(oracle, 1).dk), 1e-8});
  }
  {
    const ThermalCumulants closed = cumulants(params, theta);
    const Cumulants fd = finite_difference_cumulants(params, theta, cfg.oracle);
    const double gap = std::max({std::abs(closed.t_eta - fd.t_eta), std::abs(closed.t_eps - fd.t_eps),
                                 std::abs(closed.t_etaeta - fd.t_etaeta),
                                 std::abs(closed.t_epseps - fd.t_epseps),
                                 std::abs(closed.t_epseta - fd.t_epseta)});
    checks.push_back({"thermal_cumulants_fd", gap, 1e-5});
  }
  {
    const MomentSet closed = thermal_moments(params, theta);
    const MomentSet oracle = oracle_moments(thermal_state(params, theta, cfg.oracle, 4), 4);
    checks.push_back({"thermal_moments", moment_gap(closed, oracle), 1e-6});
    const ThermalSqueezing sq = thermal_squeezing(params, theta);
    const SqueezingReport r1 = squeezing_report(oracle, 1);
    const SqueezingReport r2 = squeezing_report(oracle, 2);
    checks.push_back({"thermal_squeezing",
                      std::max({std::abs(sq.d1 - r1.dk), std::abs(sq.d1_zhang - r1.dk_zhang),
                                std::abs(sq.d2 - r2.dk), std::abs(sq.d2_zhang - r2.dk_zhang)}),
                      1e-8});
  }
  return checks;
}

inline int cmd_verify(const RunConfig& cfg, std::ostream& out, bool as_json) {
  const std::vector<CheckResult> checks = run_verification(cfg);
  const bool all_passed =
      std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed(); });
  if (as_json) {
    nlohmann::json j;
    j["passed"] = all_passed;
    j["checks"] = nlohmann::json::array();
    for (const auto& c : checks) {
      j["checks"].push_back(
          {{"name", c.name}, {"deviation", c.deviation}, {"tolerance", c.tolerance}, {"passed", c.passed()}});
    }
    out << j.dump(2) << '\n';
  } else {
    for (const auto& c : checks) {
      char line[160];
      std::snprintf(line, sizeof line, "%-24s max_dev=%.3e tol=%.1e %s", c.name.c_str(), c.deviation,
                    c.tolerance, c.passed() ? "PASS" : "FAIL");
      out << line << '\n';
    }
    out << (all_passed ? "verify: all checks passed" : "verify: FAILED") << '\n';
  }
  return all_passed ? kExitOk : kExitVerificationFailed;
}

/// Runs a command, mapping library errors to exit code 2 with a message on `err`.
inline int guarded(const std::function<int()>& command, std::ostream& err) {
  try {
    return command();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
}

}  // namespace qfield::cli
