#pragma once

// Short-term effect of the four mining strategies on epoch lengths and on the
// expected revenue of the adversary and of the honest miners.
//
// Time is in tau_0 units (one epoch at the pre-attack difficulty) and rewards
// in units of one epoch's issuance. The attack starts right after a
// difficulty adjustment.

#include <algorithm>
#include <cstddef>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "daa/errors.hpp"
#include "daa/params.hpp"
#include "daa/selfish_math.hpp"
#include "daa/trajectory.hpp"

namespace daa {

/// (L): L-selfish in every epoch.
struct Selfish {
  Depth depth{2};
};

/// (L,1): L-selfish in odd epochs, honest in even ones.
struct Intermittent {
  Depth depth{2};
};

/// (L/1): mixes the two behaviours inside each epoch. In odd epochs a fraction
/// 1-eta of the canonical blocks is mined selfishly, in even epochs a fraction
/// eta; eta = 0.5 keeps every epoch after the first at tau_0.
struct SmartIntermittent {
  Depth depth{2};
  double eta = 0.5;
};

/// (1,0): mines another chain during odd epochs and returns for even ones.
struct AlternateNetwork {};

using Strategy = std::variant<Selfish, Intermittent, SmartIntermittent, AlternateNetwork>;

inline std::string strategy_label(const Strategy& strategy) {
  return std::visit(
      [](const auto& s) -> std::string {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Selfish>) {
          return "selfish(" + s.depth.to_string() + ")";
        } else if constexpr (std::is_same_v<S, Intermittent>) {
          return "intermittent(" + s.depth.to_string() + ",1)";
        } else if constexpr (std::is_same_v<S, SmartIntermittent>) {
          return "smart(" + s.depth.to_string() + "/1)";
        } else {
          return "alternate(1,0)";
        }
      },
      strategy);
}

namespace detail {

inline void validate_strategy(const Strategy& strategy) {
  if (const auto* smart = std::get_if<SmartIntermittent>(&strategy)) {
    require(smart->eta >= 0.0 && smart->eta <= 0.5, "eta must lie in [0, 0.5]");
  }
}

// What one epoch looks like under a strategy: blocks mined per canonical block
// (`work`), the hashrate present on the chain, the adversary's share of the
// epoch's canonical rewards, and rewards it earns elsewhere per tau_0.
struct EpochRegime {
  double work = 1.0;
  double hashrate = 1.0;
  double adversary_share = 0.0;
  double offchain_rate = 0.0;
};

struct StrategyShape {
  EpochRegime odd;   // epochs 1, 3, 5, ...
  EpochRegime even;  // epochs 2, 4, ...
  std::size_t period_start = 0;
  std::size_t period_epochs = 2;
};

inline StrategyShape strategy_shape(const Strategy& strategy, const NetworkParams& network) {
  validate_strategy(strategy);
  const double alpha = network.alpha;
  const EpochRegime honest{1.0, 1.0, alpha, 0.0};
  return std::visit(
      [&](const auto& s) -> StrategyShape {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, AlternateNetwork>) {
          return {{1.0, 1.0 - alpha, 0.0, alpha}, honest, 0, 2};
        } else {
          const CycleExpectations c = cycle_expectations(AttackParams(network, s.depth));
          const EpochRegime attack{c.delta, 1.0, c.rho, 0.0};
          if constexpr (std::is_same_v<S, Selfish>) {
            return {attack, attack, 1, 1};
          } else if constexpr (std::is_same_v<S, Intermittent>) {
            return {attack, honest, 0, 2};
          } else {
            const double eta = s.eta;
            const EpochRegime odd{eta + (1.0 - eta) * c.delta, 1.0,
                                  (1.0 - eta) * c.rho + eta * alpha, 0.0};
            const EpochRegime even{(1.0 - eta) + eta * c.delta, 1.0,
                                   eta * c.rho + (1.0 - eta) * alpha, 0.0};
            return {odd, even, 1, 2};
          }
        }
      },
      strategy);
}

inline std::size_t round_to_period(std::size_t epochs, const StrategyShape& shape) {
  epochs = std::max(epochs, shape.period_start + shape.period_epochs);
  const std::size_t extra = (epochs - shape.period_start) % shape.period_epochs;
  return extra == 0 ? epochs : epochs + shape.period_epochs - extra;
}

}  // namespace detail

/// Epoch lengths in tau_0 units. Each retarget sets the difficulty so that
/// the previous epoch's hashrate and work would have taken exactly tau_0.
inline std::vector<double> epoch_durations(const Strategy& strategy, const NetworkParams& network,
                                           std::size_t n_epochs) {
  detail::require(n_epochs >= 1, "n_epochs must be positive");
  const detail::StrategyShape shape = detail::strategy_shape(strategy, network);
  // Closed forms rather than the retarget recurrence so that the periodic
  // tail is bit-for-bit periodic.
  const double t1 = shape.odd.work / shape.odd.hashrate;
  const double t2 = (shape.even.work / shape.even.hashrate) / t1;
  const double t3 = t1 / (shape.even.work / shape.even.hashrate);
  std::vector<double> durations(n_epochs);
  for (std::size_t k = 0; k < n_epochs; ++k) {
    if (k == 0) {
      durations[k] = t1;
    } else if (std::holds_alternative<Selfish>(strategy)) {
      durations[k] = 1.0;
    } else {
      durations[k] = (k % 2 == 1) ? t2 : t3;
    }
  }
  return durations;
}

/// Expected revenue changes of the adversary and of the honest miners.
struct RevenueTrajectory {
  Trajectory adversary;
  Trajectory honest;
  double alpha = 0.0;

  double adversary_normalized(double t) const { return adversary.value_at(t) / alpha; }
  double honest_normalized(double t) const { return honest.value_at(t) / (1.0 - alpha); }
};

/// Revenue gained per repeating period relative to honest mining, from the
/// closed forms: the adversary collects its per-epoch shares and pays alpha per
/// tau_0 of elapsed time; honest miners likewise with 1 - alpha.
inline std::pair<double, double> period_drift(const Strategy& strategy,
                                              const NetworkParams& network) {
  const detail::StrategyShape shape = detail::strategy_shape(strategy, network);
  const double alpha = network.alpha;
  const std::vector<double> d = epoch_durations(strategy, network, shape.period_start + shape.period_epochs);
  double adversary = 0.0;
  double honest = 0.0;
  for (std::size_t k = shape.period_start; k < d.size(); ++k) {
    const detail::EpochRegime& r = (k % 2 == 0) ? shape.odd : shape.even;
    adversary += r.adversary_share + r.offchain_rate * d[k] - alpha * d[k];
    honest += (1.0 - r.adversary_share) - (1.0 - alpha) * d[k];
  }
  return {adversary, honest};
}

inline RevenueTrajectory revenue_trajectory(const Strategy& strategy, const NetworkParams& network,
                                            std::size_t horizon_epochs = kDefaultHorizonEpochs) {
  detail::require(horizon_epochs >= 2, "horizon must span at least two epochs");
  const detail::StrategyShape shape = detail::strategy_shape(strategy, network);
  const std::size_t n = detail::round_to_period(horizon_epochs, shape);
  const std::vector<double> durations = epoch_durations(strategy, network, n);
  const double alpha = network.alpha;

  std::vector<double> adversary_rewards(n);
  std::vector<double> honest_rewards(n);
  for (std::size_t k = 0; k < n; ++k) {
    const detail::EpochRegime& r = (k % 2 == 0) ? shape.odd : shape.even;
    adversary_rewards[k] = r.adversary_share + r.offchain_rate * durations[k];
    honest_rewards[k] = 1.0 - r.adversary_share;
  }
  const auto [drift_adversary, drift_honest] = period_drift(strategy, network);
  return {accumulate_revenue_change(durations, adversary_rewards, alpha, shape.period_start,
                                    shape.period_epochs, drift_adversary),
          accumulate_revenue_change(durations, honest_rewards, 1.0 - alpha, shape.period_start,
                                    shape.period_epochs, drift_honest),
          alpha};
}

/// Adversarial profit lag of a strategy in tau_0 units (+inf if never durably
/// profitable). The horizon grows automatically until the lag is certified.
inline double strategy_profit_lag(const Strategy& strategy, const NetworkParams& network,
                                  std::size_t horizon_epochs = kDefaultHorizonEpochs) {
  return with_extended_horizon(
      [&](std::size_t h) { return profit_lag(revenue_trajectory(strategy, network, h).adversary); },
      horizon_epochs);
}

/// Time after which strategy `a` out-earns strategy `b` for good.
inline double strategy_relative_lag(const Strategy& a, const Strategy& b,
                                    const NetworkParams& network,
                                    std::size_t horizon_epochs = kDefaultHorizonEpochs) {
  return with_extended_horizon(
      [&](std::size_t h) {
        return relative_lag(revenue_trajectory(a, network, h).adversary,
                            revenue_trajectory(b, network, h).adversary);
      },
      horizon_epochs);
}

/// Closed-form lag of pure L-selfish mining: delta + (alpha*delta - rho)/(rho - alpha).
inline double selfish_lag_closed_form(const AttackParams& params) {
  const CycleExpectations c = cycle_expectations(params);
  const double alpha = params.alpha();
  if (!(c.rho - alpha > 0.0)) return kInfiniteLag;
  if (c.rho - alpha * c.delta > 0.0) return 0.0;
  return c.delta + (alpha * c.delta - c.rho) / (c.rho - alpha);
}

}  // namespace daa
