#pragma once

// Power-adjusting withholding (PAW). An adversary with hash share alpha puts a
// fraction p1 of its power into an honest pool of size beta and mines solo
// with the rest. When its pool share finds a full PoW it withholds it and moves
// to fraction p2 until someone else finds a block: a pool block (its share is
// paid), its own solo block (the withheld one is discarded), or a block by
// the rest of the network, in which case it releases the withheld block and
// wins the fork race with probability gamma_c.

#include <cstddef>
#include <string>
#include <string_view>

#include "daa/errors.hpp"
#include "daa/optimize.hpp"
#include "daa/trajectory.hpp"

namespace daa {

struct PawParams {
  double alpha;
  double beta;
  double gamma_c;
  double p1;
  double p2;

  PawParams(double alpha_, double beta_, double gamma_c_, double p1_, double p2_)
      : alpha(alpha_), beta(beta_), gamma_c(gamma_c_), p1(p1_), p2(p2_) {
    detail::require(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0, 1)");
    detail::require(beta > 0.0 && beta < 1.0, "beta must lie in (0, 1)");
    detail::require(alpha + beta < 0.5, "alpha + beta must be below 0.5");
    detail::require(gamma_c >= 0.0 && gamma_c <= 1.0, "gamma_c must lie in [0, 1]");
    detail::require(p1 >= 0.0 && p1 <= 1.0, "p1 must lie in [0, 1]");
    detail::require(p2 >= 0.0 && p2 <= 1.0, "p2 must lie in [0, 1]");
  }

  double rest() const noexcept { return 1.0 - alpha - beta; }
};

struct PawQuantities {
  double p = 0.0;      // average adversarial share of the pool while in a cycle
  double p_w = 0.0;    // average fraction of adversarial power wasted
  double delta = 1.0;  // first-epoch stretch
  double rho = 0.0;
  double rho_pool = 0.0;
  double rho_rest = 0.0;
};

inline PawQuantities paw_quantities(const PawParams& q) {
  const double a = q.alpha;
  const double b = q.beta;
  const double rest = q.rest();
  // Expected sub-cycles per main cycle.
  const double k = a * q.p1 / (1.0 - a * q.p2);
  // Pool blocks found in a sub-cycle plus the fork races won there.
  const double sub_pool_blocks = b + q.gamma_c * rest;

  PawQuantities out;
  out.p = (q.p1 + q.p2 - a * q.p1 * q.p2) / (2.0 - a * q.p2);
  out.p_w = q.p1 / (1.0 - a * q.p2 + a * q.p1);
  out.delta = 1.0 + k;
  out.rho = a * (1.0 - q.p1) + b * a * q.p1 / (b + a * q.p1) +
            k * (a * (1.0 - q.p2) + a * out.p / (b + a * out.p) * sub_pool_blocks);
  out.rho_pool = b * b / (b + a * q.p1) + k * b / (b + a * out.p) * sub_pool_blocks;
  out.rho_rest = rest * (1.0 + (1.0 - q.gamma_c) * k);
  return out;
}

struct PawEfficiency {
  double u_adv = 1.0;
  double u_rest = 1.0;  // the honest pool sits at 1 by convention
};

inline PawEfficiency paw_efficiency(const PawParams& params) {
  const PawQuantities q = paw_quantities(params);
  detail::require(q.rho_pool > 0.0, "pool revenue ratio must be positive");
  const double pool_scale = params.beta / q.rho_pool;
  return {q.rho / params.alpha * pool_scale, q.rho_rest / params.rest() * pool_scale};
}

struct PawTrajectories {
  Trajectory adversary;
  Trajectory pool;
  Trajectory rest;
};

/// The first epoch lasts delta * tau_0 and every later one tau_0; each class
/// earns its revenue ratio of every epoch's issuance.
inline PawTrajectories paw_trajectory(const PawParams& params,
                                      std::size_t horizon_epochs = kDefaultHorizonEpochs) {
  detail::require(horizon_epochs >= 2, "horizon must span at least two epochs");
  const PawQuantities q = paw_quantities(params);
  std::vector<double> durations(horizon_epochs, 1.0);
  durations[0] = q.delta;
  auto build = [&](double share, double fair) {
    const std::vector<double> rewards(horizon_epochs, share);
    return accumulate_revenue_change(durations, rewards, fair, 1, 1, share - fair);
  };
  return {build(q.rho, params.alpha), build(q.rho_pool, params.beta),
          build(q.rho_rest, params.rest())};
}

enum class PawClass { adversary, pool, rest };

inline PawClass parse_paw_class(std::string_view text) {
  if (text == "adversary") return PawClass::adversary;
  if (text == "pool") return PawClass::pool;
  if (text == "rest") return PawClass::rest;
  throw DomainError("unknown miner class '" + std::string(text) + "'");
}

inline double paw_profit_lag(const PawParams& params, PawClass who,
                             std::size_t horizon_epochs = kDefaultHorizonEpochs) {
  return with_extended_horizon(
      [&](std::size_t h) {
        const PawTrajectories t = paw_trajectory(params, h);
        switch (who) {
          case PawClass::adversary: return profit_lag(t.adversary);
          case PawClass::pool: return profit_lag(t.pool);
          case PawClass::rest: break;
        }
        return profit_lag(t.rest);
      },
      horizon_epochs);
}

enum class PawObjective { max_rho, max_u_adv, max_u_ratio, max_initial_gain };

inline PawObjective parse_paw_objective(std::string_view text) {
  if (text == "max_rho") return PawObjective::max_rho;
  if (text == "max_u_adv") return PawObjective::max_u_adv;
  if (text == "max_u_ratio") return PawObjective::max_u_ratio;
  if (text == "max_initial_gain") return PawObjective::max_initial_gain;
  throw DomainError("unknown objective '" + std::string(text) + "'");
}

inline std::string to_string(PawObjective objective) {
  switch (objective) {
    case PawObjective::max_rho: return "max_rho";
    case PawObjective::max_u_adv: return "max_u_adv";
    case PawObjective::max_u_ratio: return "max_u_ratio";
    case PawObjective::max_initial_gain: break;
  }
  return "max_initial_gain";
}

inline double paw_objective_value(const PawParams& params, PawObjective objective) {
  const PawQuantities q = paw_quantities(params);
  switch (objective) {
    case PawObjective::max_rho: return q.rho;
    case PawObjective::max_u_adv: return q.rho / params.alpha * params.beta / q.rho_pool;
    // U_A / U_R reduces to rho / rho_rest.
    case PawObjective::max_u_ratio: return q.rho / q.rho_rest;
    case PawObjective::max_initial_gain: break;
  }
  return q.rho - params.alpha * q.delta;
}

struct PawOptimum {
  double p1 = 0.0;
  double p2 = 0.0;
  double value = 0.0;
  PawQuantities quantities;
};

inline PawOptimum paw_optimize(double alpha, double beta, double gamma_c, PawObjective objective,
                               const GridRefineOptions& options = {}) {
  const PawParams base(alpha, beta, gamma_c, 0.0, 0.0);
  const Maximum2D m = maximize_unit_square(
      [&](double p1, double p2) {
        return paw_objective_value(PawParams(alpha, beta, gamma_c, p1, p2), objective);
      },
      options);
  return {m.x, m.y, m.value, paw_quantities(PawParams(base.alpha, beta, gamma_c, m.x, m.y))};
}

/// True when some (p1, p2) gains revenue already in the first epoch with
/// rho > alpha, i.e. the attack has no profit lag.
inline bool no_lag_cell(double alpha, double beta, double gamma_c,
                        const GridRefineOptions& options = {}) {
  const PawOptimum best = paw_optimize(alpha, beta, gamma_c, PawObjective::max_initial_gain, options);
  return best.value > 0.0 && best.quantities.rho > alpha;
}

}  // namespace daa
