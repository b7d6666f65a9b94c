// qfield: parameter sweeps and oracle verification for the single-mode
// double-photon-algebra Hamiltonian. See README.md for the config schema.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qfield/cli.hpp"

namespace {

void add_common_flags(CLI::App* sub, std::string& config_path, qfield::cli::Overrides& o) {
  sub->add_option("config", config_path, "JSON run configuration");
  sub->add_option("--omega", o.omega, "coefficient of K3");
  sub->add_option("--omega1-re", o.omega1_re);
  sub->add_option("--omega1-im", o.omega1_im);
  sub->add_option("--omega2-re", o.omega2_re);
  sub->add_option("--omega2-im", o.omega2_im);
  sub->add_option("--lambda-re", o.lambda_re, "initial coherent amplitude, real part");
  sub->add_option("--lambda-im", o.lambda_im);
}

void add_sweep_flags(CLI::App* sub, qfield::cli::Overrides& o) {
  sub->add_option("--start", o.start);
  sub->add_option("--stop", o.stop);
  sub->add_option("--points", o.points);
  sub->add_flag("--with-oracle", o.with_oracle, "add Fock-oracle columns");
}

}  // namespace

int main(int argc, char** argv) {
  namespace qc = qfield::cli;
  CLI::App app{"Quadratic bosonic mode: evolution and thermal sweeps with Fock-space checks"};
  app.require_subcommand(1);

  std::string config_path;
  qc::Overrides overrides;
  bool as_json = false;

  auto* evolve = app.add_subcommand("evolve", "time sweep of the evolved coherent state (CSV)");
  auto* thermal = app.add_subcommand("thermal", "temperature sweep of the thermal state (CSV)");
  auto* critical = app.add_subcommand("critical", "critical temperatures (JSON)");
  auto* verify = app.add_subcommand("verify", "closed forms against the Fock oracle");
  for (auto* sub : {evolve, thermal, critical, verify}) add_common_flags(sub, config_path, overrides);
  add_sweep_flags(evolve, overrides);
  add_sweep_flags(thermal, overrides);
  verify->add_option("--t", overrides.t, "time of the unitary checks");
  verify->add_option("--theta", overrides.theta, "temperature of the thermal checks");
  verify->add_flag("--json", as_json);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : qc::kExitInvalid;
  }

  return qc::guarded(
      [&] {
        qc::RunConfig cfg = config_path.empty() ? qc::RunConfig{} : qc::load_config(config_path);
        if (!cfg.sweep && (overrides.start || overrides.stop || overrides.points)) {
          cfg.sweep = qc::SweepSpec{};
          cfg.sweep->kind = thermal->parsed() ? qc::SweepKind::Temperature : qc::SweepKind::Time;
        }
        qc::apply_overrides(cfg, overrides);
        if (evolve->parsed()) return qc::cmd_evolve(cfg, std::cout);
        if (thermal->parsed()) return qc::cmd_thermal(cfg, std::cout);
        if (critical->parsed()) return qc::cmd_critical(cfg, std::cout);
        return qc::cmd_verify(cfg, std::cout, as_json);
      },
      std::cerr);
}
