// daa_cli: tables, trajectories and maps for difficulty-adjustment attacks.
//
// Exit codes: 0 success, 1 validation failure, 2 usage or domain error.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

using namespace daa;
using namespace daa::cli;

void add_strategy_flags(CLI::App* cmd, StrategyOptions& s) {
  cmd->add_option("--strategy", s.name, "selfish | intermittent | smart | alternate | paw")
      ->capture_default_str();
  cmd->add_option("--depth", s.depth, "L as a positive integer, inf, or star for L*")
      ->capture_default_str();
  cmd->add_option("--eta", s.eta, "smart intermittent mixing fraction in [0, 0.5]")
      ->capture_default_str();
  cmd->add_option("--l-max", s.l_max, "largest finite L searched for L*")->capture_default_str();
}

void add_paw_point_flags(CLI::App* cmd, PawPointOptions& p) {
  cmd->add_option("--beta", p.beta, "honest pool share")->capture_default_str();
  cmd->add_option("--gamma-c", p.gamma_c, "fork race win probability")->capture_default_str();
  cmd->add_option("--p1", p.p1, "pool fraction before finding a block")->capture_default_str();
  cmd->add_option("--p2", p.p2, "pool fraction while withholding")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Incentive attacks on difficulty adjustment: closed forms, maps and simulation"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand
  app.set_config("--run-file", "", "key = value file mirroring the flags; flags win");

  std::string format = "csv";
  std::string out_path;
  unsigned threads = default_threads();
  app.add_option("--format", format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("--out", out_path, "output file (default stdout)");
  app.add_option("--threads", threads, "worker threads for maps and simulation (env DAA_THREADS)")
      ->check(CLI::PositiveNumber);

  QuantitiesOptions quantities;
  auto* q = app.add_subcommand("quantities", "attack-cycle expectations, delta, rho and L*");
  q->add_option("--alpha", quantities.alpha)->required();
  q->add_option("--gamma", quantities.gamma)->required();
  q->add_option("--depth", quantities.depth, "L, inf, or star")->capture_default_str();
  q->add_option("--l-max", quantities.l_max)->capture_default_str();

  TrajectoryOptions trajectory;
  auto* tr = app.add_subcommand("trajectory", "expected revenue change at each epoch boundary");
  add_strategy_flags(tr, trajectory.strategy);
  tr->add_option("--alpha", trajectory.alpha)->required();
  tr->add_option("--gamma", trajectory.gamma)->capture_default_str();
  tr->add_option("--horizon", trajectory.horizon, "epochs")->capture_default_str();
  add_paw_point_flags(tr, trajectory.paw);

  LagMapOptions lag_map;
  auto* lm = app.add_subcommand("lag-map", "profit lag over a parameter grid");
  add_strategy_flags(lm, lag_map.strategy);
  lm->add_option("--mode", lag_map.mode, "profit | relative | difference")->capture_default_str();
  lm->add_option("--against", lag_map.against, "second strategy for relative/difference")
      ->capture_default_str();
  lm->add_option("--alpha", lag_map.alpha, "grid start:stop:step or a,b,c")->capture_default_str();
  lm->add_option("--gamma", lag_map.gamma, "grid")->capture_default_str();
  lm->add_option("--beta", lag_map.beta, "grid (paw)")->capture_default_str();
  lm->add_option("--gamma-c", lag_map.gamma_c, "grid (paw)")->capture_default_str();
  lm->add_option("--objective", lag_map.objective, "paw objective")->capture_default_str();
  lm->add_option("--who", lag_map.who, "adversary | pool | rest (paw)")->capture_default_str();

  EfficiencyMapOptions efficiency_map;
  auto* em = app.add_subcommand("efficiency-map", "best strategy and efficiencies over a grid");
  em->add_option("--alpha", efficiency_map.alpha, "grid")->capture_default_str();
  em->add_option("--gamma", efficiency_map.gamma, "grid")->capture_default_str();
  em->add_option("--l-max", efficiency_map.l_max)->capture_default_str();

  BoundaryOptions boundary;
  auto* bd = app.add_subcommand("boundary", "alpha where L-selfish overtakes alternate mining");
  bd->add_option("--gamma", boundary.gamma, "value or grid")->capture_default_str();
  bd->add_option("--depth", boundary.depth)->capture_default_str();
  bd->add_option("--tol", boundary.tol)->capture_default_str();

  PawOptimizeOptions paw_optimize_opts;
  auto* po = app.add_subcommand("paw-optimize", "optimal (p1, p2) for a PAW objective");
  po->add_option("--alpha", paw_optimize_opts.alpha)->required();
  po->add_option("--beta", paw_optimize_opts.beta)->required();
  po->add_option("--gamma-c", paw_optimize_opts.gamma_c)->required();
  po->add_option("--objective", paw_optimize_opts.objective,
                 "max_rho | max_u_adv | max_u_ratio | max_initial_gain | all")
      ->capture_default_str();

  NoLagOptions no_lag;
  auto* nl = app.add_subcommand("no-lag-region", "cells where PAW gains already in the first epoch");
  nl->add_option("--alpha", no_lag.alpha, "grid")->capture_default_str();
  nl->add_option("--beta", no_lag.beta, "grid")->capture_default_str();
  nl->add_option("--gamma-c", no_lag.gamma_c, "grid")->capture_default_str();

  ValidateOptions validate;
  auto* va = app.add_subcommand("validate", "Monte Carlo check of the closed forms");
  va->add_option("--scope", validate.scope, "selfish | paw")->capture_default_str();
  va->add_option("--alpha", validate.alpha)->capture_default_str();
  va->add_option("--gamma", validate.gamma)->capture_default_str();
  va->add_option("--depth", validate.depth)->capture_default_str();
  add_paw_point_flags(va, validate.paw);
  va->add_option("--seed", validate.seed)->capture_default_str();
  va->add_option("--cycles", validate.cycles)->capture_default_str();
  va->add_option("--z-limit", validate.z_limit)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  int status = 0;
  Table table;
  try {
    lag_map.threads = efficiency_map.threads = no_lag.threads = validate.threads = threads;
    if (*q) {
      table = cmd_quantities(quantities);
    } else if (*tr) {
      table = cmd_trajectory(trajectory);
    } else if (*lm) {
      table = cmd_lag_map(lag_map);
    } else if (*em) {
      table = cmd_efficiency_map(efficiency_map);
    } else if (*bd) {
      table = cmd_boundary(boundary);
    } else if (*po) {
      table = cmd_paw_optimize(paw_optimize_opts);
    } else if (*nl) {
      table = cmd_no_lag_region(no_lag);
    } else if (*va) {
      ValidateResult r = cmd_validate(validate);
      table = std::move(r.table);
      status = r.passed ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) {
      std::cerr << "error: cannot open " << out_path << '\n';
      return 2;
    }
  }
  std::ostream& out = out_path.empty() ? std::cout : file;
  if (format == "json") {
    out << to_json(table).dump(2) << '\n';
  } else {
    write_csv(out, table);
  }
  return status;
}
