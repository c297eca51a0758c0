#pragma once

// Command implementations behind daa_cli. Each command turns its options into
// a Table; the front end only parses flags and writes the table out.

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "daa/daa.hpp"
#include "daa/table.hpp"

namespace daa::cli {

inline unsigned default_threads() {
  if (const char* env = std::getenv("DAA_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n >= 1) return static_cast<unsigned>(n);
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Evaluates fn(i) for i in [0, n) on `threads` workers and returns the
/// results in index order.
template <class Row, class Fn>
std::vector<Row> parallel_cells(std::size_t n, unsigned threads, Fn&& fn) {
  std::vector<std::optional<Row>> out(n);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex mutex;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        out[i] = fn(i);
      } catch (...) {
        std::lock_guard lock(mutex);
        if (!failure) failure = std::current_exception();
        next.store(n);
      }
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  std::vector<Row> rows;
  rows.reserve(n);
  for (auto& r : out) rows.push_back(std::move(*r));
  return rows;
}

inline nlohmann::ordered_json to_json(const Table& table) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      const Cell& cell = row[i];
      const std::string& key = table.columns[i];
      if (const auto* d = std::get_if<double>(&cell)) {
        // Same digits as the CSV; non-finite values keep their CSV spelling.
        const std::string text = format_number(*d);
        if (std::isfinite(*d)) {
          obj[key] = std::stod(text);
        } else {
          obj[key] = text;
        }
      } else if (const auto* s = std::get_if<std::string>(&cell)) {
        obj[key] = *s;
      } else if (const auto* i64 = std::get_if<std::int64_t>(&cell)) {
        obj[key] = *i64;
      } else {
        obj[key] = std::get<bool>(cell);
      }
    }
    rows.push_back(std::move(obj));
  }
  return {{"columns", table.columns}, {"rows", rows}};
}

// ------------------------------------------------------------ strategies

struct StrategyOptions {
  std::string name = "selfish";
  std::string depth = "2";  // positive integer, "inf", or "star" for L*
  double eta = 0.5;
  unsigned l_max = kDefaultMaxDepth;
};

inline Depth resolve_depth(const std::string& depth, double alpha, double gamma, unsigned l_max) {
  if (depth == "star" || depth == "opt") return optimal_depth(alpha, gamma, l_max);
  return Depth::parse(depth);
}

inline Strategy make_strategy(const StrategyOptions& o, double alpha, double gamma) {
  if (o.name == "alternate") return AlternateNetwork{};
  const Depth depth = resolve_depth(o.depth, alpha, gamma, o.l_max);
  if (o.name == "selfish") return Selfish{depth};
  if (o.name == "intermittent") return Intermittent{depth};
  if (o.name == "smart") return SmartIntermittent{depth, o.eta};
  throw DomainError("unknown strategy '" + o.name + "'");
}

// ------------------------------------------------------------ quantities

struct QuantitiesOptions {
  double alpha = 0.0;
  double gamma = 0.0;
  std::string depth = "star";
  unsigned l_max = kDefaultMaxDepth;
};

inline Table cmd_quantities(const QuantitiesOptions& o) {
  const NetworkParams network(o.alpha, o.gamma);
  const Depth l_star = optimal_depth(o.alpha, o.gamma, o.l_max);
  const Depth depth = (o.depth == "star" || o.depth == "opt") ? l_star : Depth::parse(o.depth);
  const CycleExpectations c = cycle_expectations(AttackParams(network, depth));
  Table t{{"quantity", "value"}, {}};
  t.add_row({std::string("alpha"), o.alpha});
  t.add_row({std::string("gamma"), o.gamma});
  t.add_row({std::string("depth"), depth.to_string()});
  t.add_row({std::string("e_la_s"), c.e_la_s});
  t.add_row({std::string("e_lh_s"), c.e_lh_s});
  t.add_row({std::string("e_la_u"), c.e_la_u});
  t.add_row({std::string("e_lh_u"), c.e_lh_u});
  t.add_row({std::string("e_la_captured"), c.e_la_captured});
  t.add_row({std::string("t_b"), c.t_b});
  t.add_row({std::string("t_o"), c.t_o});
  t.add_row({std::string("delta"), c.delta});
  t.add_row({std::string("rho"), c.rho});
  t.add_row({std::string("l_star"), l_star.to_string()});
  return t;
}

// ------------------------------------------------------------ trajectory

struct PawPointOptions {
  double beta = 0.04;
  double gamma_c = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;
};

struct TrajectoryOptions {
  StrategyOptions strategy;
  double alpha = 0.0;
  double gamma = 0.0;
  std::size_t horizon = 20;
  PawPointOptions paw;
};

inline Table cmd_trajectory(const TrajectoryOptions& o) {
  if (o.strategy.name == "paw") {
    const PawParams params(o.alpha, o.paw.beta, o.paw.gamma_c, o.paw.p1, o.paw.p2);
    const PawTrajectories tr = paw_trajectory(params, o.horizon);
    Table t{{"epoch", "t", "delta_adv", "delta_pool", "delta_rest", "delta_adv_norm",
             "delta_pool_norm", "delta_rest_norm"},
            {}};
    const auto a = tr.adversary.nodes();
    const auto p = tr.pool.nodes();
    const auto r = tr.rest.nodes();
    for (std::size_t k = 0; k < a.size(); ++k) {
      t.add_row({static_cast<std::int64_t>(k), a[k].t, a[k].value, p[k].value, r[k].value,
                 a[k].value / params.alpha, p[k].value / params.beta, r[k].value / params.rest()});
    }
    return t;
  }
  const NetworkParams network(o.alpha, o.gamma);
  const Strategy strategy = make_strategy(o.strategy, o.alpha, o.gamma);
  const RevenueTrajectory tr = revenue_trajectory(strategy, network, o.horizon);
  Table t{{"epoch", "t", "delta_adv", "delta_hon", "delta_adv_norm", "delta_hon_norm"}, {}};
  const auto a = tr.adversary.nodes();
  const auto h = tr.honest.nodes();
  for (std::size_t k = 0; k < a.size(); ++k) {
    t.add_row({static_cast<std::int64_t>(k), a[k].t, a[k].value, h[k].value, a[k].value / o.alpha,
               h[k].value / (1.0 - o.alpha)});
  }
  return t;
}

// --------------------------------------------------------------- lag map

struct LagMapOptions {
  StrategyOptions strategy;
  std::string mode = "profit";  // profit | relative | difference
  std::string against = "intermittent";
  std::string alpha = "0.005:0.495:0.005";
  std::string gamma = "0:1:0.01";
  // PAW maps
  std::string beta = "0.01:0.29:0.01";
  std::string gamma_c = "0:0.95:0.01";
  std::string objective = "max_rho";
  std::string who = "adversary";
  unsigned threads = 1;
};

inline Table cmd_lag_map(const LagMapOptions& o) {
  const std::vector<double> alphas = parse_grid(o.alpha);
  if (o.strategy.name == "paw") {
    const std::vector<double> betas = parse_grid(o.beta);
    const std::vector<double> gcs = parse_grid(o.gamma_c);
    const PawObjective objective = parse_paw_objective(o.objective);
    const PawClass who = parse_paw_class(o.who);
    struct Point {
      double a, b, g;
    };
    std::vector<Point> points;
    for (double a : alphas)
      for (double b : betas)
        for (double g : gcs)
          if (a + b < 0.5) points.push_back({a, b, g});
    auto rows = parallel_cells<std::vector<Cell>>(points.size(), o.threads, [&](std::size_t i) {
      const Point& pt = points[i];
      const PawOptimum best = paw_optimize(pt.a, pt.b, pt.g, objective);
      const double lag = paw_profit_lag(PawParams(pt.a, pt.b, pt.g, best.p1, best.p2), who);
      return std::vector<Cell>{pt.a, pt.b, pt.g, best.p1, best.p2, lag};
    });
    Table t{{"alpha", "beta", "gamma_c", "p1", "p2", "lag"}, {}};
    for (auto& r : rows) t.add_row(std::move(r));
    return t;
  }

  if (o.mode != "profit" && o.mode != "relative" && o.mode != "difference") {
    throw DomainError("unknown lag-map mode '" + o.mode + "'");
  }
  const std::vector<double> gammas = parse_grid(o.gamma);
  const std::size_t n = alphas.size() * gammas.size();
  auto rows = parallel_cells<std::vector<Cell>>(n, o.threads, [&](std::size_t i) {
    const double a = alphas[i / gammas.size()];
    const double g = gammas[i % gammas.size()];
    const NetworkParams network(a, g);
    const Strategy s = make_strategy(o.strategy, a, g);
    double lag = 0.0;
    if (o.mode == "profit") {
      lag = strategy_profit_lag(s, network);
    } else {
      StrategyOptions other = o.strategy;
      other.name = o.against;
      const Strategy b = make_strategy(other, a, g);
      lag = strategy_relative_lag(s, b, network);
      if (o.mode == "difference") lag -= strategy_profit_lag(b, network);
    }
    return std::vector<Cell>{a, g, lag};
  });
  Table t{{"alpha", "gamma", "lag"}, {}};
  for (auto& r : rows) t.add_row(std::move(r));
  return t;
}

// -------------------------------------------------------- efficiency map

struct EfficiencyMapOptions {
  std::string alpha = "0.005:0.495:0.005";
  std::string gamma = "0:1:0.01";
  unsigned l_max = kDefaultMaxDepth;
  unsigned threads = 1;
};

inline Table cmd_efficiency_map(const EfficiencyMapOptions& o) {
  const std::vector<double> alphas = parse_grid(o.alpha);
  const std::vector<double> gammas = parse_grid(o.gamma);
  const std::size_t n = alphas.size() * gammas.size();
  auto rows = parallel_cells<std::vector<Cell>>(n, o.threads, [&](std::size_t i) {
    const double a = alphas[i / gammas.size()];
    const double g = gammas[i % gammas.size()];
    const NetworkParams network(a, g);
    const BestStrategy best = best_strategy(a, g, o.l_max);
    const Depth l_star = optimal_depth(a, g, o.l_max);
    const double rho2 = revenue_ratio(AttackParams(network, Depth{2}));
    const double rho_star = revenue_ratio(AttackParams(network, l_star));
    return std::vector<Cell>{a,
                             g,
                             strategy_label(best.strategy),
                             best.u_adv,
                             l_star.to_string(),
                             best.u_selfish,
                             selfish_efficiency(a, rho2),
                             intermittent_efficiency(a, rho_star),
                             best.u_alternate};
  });
  Table t{{"alpha", "gamma", "best_strategy", "u_value", "l_star", "u_selfish_lstar", "u_selfish_2",
           "u_intermittent_lstar", "u_alternate"},
          {}};
  for (auto& r : rows) t.add_row(std::move(r));
  return t;
}

// -------------------------------------------------------------- boundary

struct BoundaryOptions {
  std::string gamma = "0";
  std::string depth = "2";
  double tol = 1e-6;
};

inline Table cmd_boundary(const BoundaryOptions& o) {
  Table t{{"gamma", "depth", "alpha"}, {}};
  const Depth depth = Depth::parse(o.depth);
  for (double g : parse_grid(o.gamma)) {
    double alpha = 0.0;
    try {
      alpha = boundary_alpha(g, depth, o.tol);
    } catch (const NoSignChangeError&) {
      alpha = std::nan("");
    }
    t.add_row({g, depth.to_string(), alpha});
  }
  return t;
}

// ---------------------------------------------------------- paw optimize

struct PawOptimizeOptions {
  double alpha = 0.2;
  double beta = 0.04;
  double gamma_c = 0.0;
  std::string objective = "all";
};

inline Table cmd_paw_optimize(const PawOptimizeOptions& o) {
  std::vector<PawObjective> objectives;
  if (o.objective == "all") {
    objectives = {PawObjective::max_rho, PawObjective::max_u_adv, PawObjective::max_u_ratio,
                  PawObjective::max_initial_gain};
  } else {
    objectives = {parse_paw_objective(o.objective)};
  }
  Table t{{"objective", "p1", "p2", "value", "p", "p_w", "delta", "rho", "rho_pool", "rho_rest",
           "u_adv", "u_rest", "initial_gain"},
          {}};
  for (PawObjective obj : objectives) {
    const PawOptimum best = paw_optimize(o.alpha, o.beta, o.gamma_c, obj);
    const PawParams params(o.alpha, o.beta, o.gamma_c, best.p1, best.p2);
    const PawEfficiency eff = paw_efficiency(params);
    const PawQuantities& q = best.quantities;
    t.add_row({to_string(obj), best.p1, best.p2, best.value, q.p, q.p_w, q.delta, q.rho, q.rho_pool,
               q.rho_rest, eff.u_adv, eff.u_rest, q.rho - o.alpha * q.delta});
  }
  return t;
}

// --------------------------------------------------------- no-lag region

struct NoLagOptions {
  std::string alpha = "0.2";
  std::string beta = "0.01:0.29:0.01";
  std::string gamma_c = "0:0.95:0.05";
  unsigned threads = 1;
};

inline Table cmd_no_lag_region(const NoLagOptions& o) {
  struct Point {
    double a, b, g;
  };
  std::vector<Point> points;
  for (double a : parse_grid(o.alpha))
    for (double b : parse_grid(o.beta))
      for (double g : parse_grid(o.gamma_c))
        if (a + b < 0.5) points.push_back({a, b, g});
  auto rows = parallel_cells<std::vector<Cell>>(points.size(), o.threads, [&](std::size_t i) {
    const Point& pt = points[i];
    const PawOptimum best = paw_optimize(pt.a, pt.b, pt.g, PawObjective::max_initial_gain);
    const bool no_lag = best.value > 0.0 && best.quantities.rho > pt.a;
    return std::vector<Cell>{pt.a, pt.b, pt.g, no_lag, best.value, best.p1, best.p2, best.quantities.rho};
  });
  Table t{{"alpha", "beta", "gamma_c", "no_lag", "max_initial_gain", "p1", "p2", "rho"}, {}};
  for (auto& r : rows) t.add_row(std::move(r));
  return t;
}

// -------------------------------------------------------------- validate

struct ValidateOptions {
  std::string scope = "selfish";  // selfish | paw
  double alpha = 0.3;
  double gamma = 0.5;
  std::string depth = "3";
  PawPointOptions paw{0.04, 0.75, 0.04, 0.93};
  std::uint64_t seed = 1;
  std::uint64_t cycles = 1'000'000;
  double z_limit = 3.0;
  unsigned threads = 1;
};

struct ValidateResult {
  Table table;
  bool passed = true;
};

inline ValidateResult cmd_validate(const ValidateOptions& o) {
  std::vector<std::pair<std::string, double>> formula;
  NamedEstimates estimates;
  if (o.scope == "selfish") {
    const AttackParams params(o.alpha, o.gamma, Depth::parse(o.depth));
    const CycleExpectations c = cycle_expectations(params);
    formula = {{"e_la_s", c.e_la_s}, {"e_lh_s", c.e_lh_s}, {"e_la_u", c.e_la_u},
               {"e_lh_u", c.e_lh_u}, {"e_la_captured", c.e_la_captured}, {"t_b", c.t_b},
               {"t_o", c.t_o}, {"delta", c.delta}, {"rho", c.rho}};
    estimates = simulate_selfish({o.cycles, o.seed, params, o.threads}).named();
  } else if (o.scope == "paw") {
    const PawParams params(o.alpha, o.paw.beta, o.paw.gamma_c, o.paw.p1, o.paw.p2);
    const PawQuantities q = paw_quantities(params);
    formula = {{"rho", q.rho}, {"rho_pool", q.rho_pool}, {"rho_rest", q.rho_rest},
               {"delta", q.delta}, {"p", q.p}, {"p_w", q.p_w}};
    estimates = simulate_paw({o.cycles, o.seed, params, o.threads}).named();
  } else {
    throw DomainError("unknown validation scope '" + o.scope + "'");
  }

  ValidateResult result{{{"quantity", "formula", "sim_mean", "std_err", "z", "pass"}, {}}, true};
  for (std::size_t i = 0; i < formula.size(); ++i) {
    const Estimate& e = estimates[i].second;
    const double z = e.z_score(formula[i].second);
    const bool ok = std::abs(z) <= o.z_limit;
    result.passed = result.passed && ok;
    result.table.add_row({formula[i].first, formula[i].second, e.mean, e.std_err, z, ok});
  }
  return result;
}

}  // namespace daa::cli
