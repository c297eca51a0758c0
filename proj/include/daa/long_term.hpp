#pragma once

// Long-run mining efficiency (revenue per hashpower per time) once the
// difficulty has stabilised, normalised so that honest miners sit at U = 1.

#include <cmath>
#include <string>
#include <type_traits>
#include <variant>

#include "daa/errors.hpp"
#include "daa/params.hpp"
#include "daa/selfish_math.hpp"
#include "daa/short_term.hpp"

namespace daa {

struct EfficiencyReport {
  std::string strategy;
  double u_adv = 1.0;
  double u_hon = 1.0;
  double alpha_final = 0.0;
  double gamma = 0.0;
  double rho = 0.0;  // revenue ratio behind u_adv; 0 for alternate mining
};

inline double selfish_efficiency(double alpha, double rho) {
  detail::require(rho < 1.0, "revenue ratio must be below 1");
  return (1.0 - alpha) / alpha * rho / (1.0 - rho);
}

// Intermittent and smart intermittent mining share this value.
inline double intermittent_efficiency(double alpha, double rho) {
  return (1.0 - alpha) / alpha * (alpha + rho) / (2.0 - alpha - rho);
}

inline double alternate_efficiency(double alpha) {
  const double beta = 1.0 - alpha;
  return beta / (2.0 - alpha) + 1.0 / (1.0 + beta * beta);
}

inline EfficiencyReport efficiency(const Strategy& strategy, const NetworkParams& network) {
  detail::validate_strategy(strategy);
  EfficiencyReport report;
  report.strategy = strategy_label(strategy);
  report.alpha_final = network.alpha;
  report.gamma = network.gamma;
  std::visit(
      [&](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, AlternateNetwork>) {
          report.u_adv = alternate_efficiency(network.alpha);
        } else {
          report.rho = revenue_ratio(AttackParams(network, s.depth));
          if constexpr (std::is_same_v<S, Selfish>) {
            report.u_adv = selfish_efficiency(network.alpha, report.rho);
          } else {
            report.u_adv = intermittent_efficiency(network.alpha, report.rho);
          }
        }
      },
      strategy);
  return report;
}

struct BestStrategy {
  Strategy strategy;
  double u_adv = 1.0;
  double u_selfish = 1.0;    // best L-selfish candidate (L = L*)
  double u_alternate = 1.0;
};

/// Most efficient of {L-selfish for L in 1..l_max or Unbounded, alternate}.
/// U^(L) increases with rho_L, so the selfish candidate is the L* one.
/// Intermittent variants never win and are not candidates. Ties go to selfish.
inline BestStrategy best_strategy(double alpha, double gamma,
                                  unsigned l_max = kDefaultMaxDepth) {
  const NetworkParams network(alpha, gamma);
  const Depth depth = optimal_depth(alpha, gamma, l_max);
  BestStrategy best;
  best.u_selfish = selfish_efficiency(alpha, revenue_ratio(AttackParams(network, depth)));
  best.u_alternate = alternate_efficiency(alpha);
  if (best.u_alternate > best.u_selfish) {
    best.strategy = AlternateNetwork{};
    best.u_adv = best.u_alternate;
  } else {
    best.strategy = Selfish{depth};
    best.u_adv = best.u_selfish;
  }
  return best;
}

inline constexpr double kBoundaryScanStep = 0.005;

/// Smallest alpha at which L-selfish mining becomes more efficient than
/// alternate mining at this gamma, to absolute tolerance `tol`.
inline double boundary_alpha(double gamma, Depth depth, double tol = 1e-6) {
  detail::require(tol > 0.0, "tolerance must be positive");
  detail::require(gamma >= 0.0 && gamma <= 1.0, "gamma must lie in [0, 1]");
  auto gap = [&](double alpha) {
    const double rho = revenue_ratio(AttackParams(alpha, gamma, depth));
    return selfish_efficiency(alpha, rho) - alternate_efficiency(alpha);
  };

  double lo = kBoundaryScanStep;
  double gap_lo = gap(lo);
  if (gap_lo > 0.0) {
    throw NoSignChangeError("selfish mining already beats alternate mining at the smallest alpha");
  }
  for (int i = 2; i * kBoundaryScanStep < 0.5; ++i) {
    const double hi = i * kBoundaryScanStep;
    const double gap_hi = gap(hi);
    if (gap_hi > 0.0) {
      double a = lo;
      double b = hi;
      while (b - a > tol) {
        const double mid = 0.5 * (a + b);
        (gap(mid) > 0.0 ? b : a) = mid;
      }
      return 0.5 * (a + b);
    }
    lo = hi;
  }
  throw NoSignChangeError("selfish mining never beats alternate mining on (0, 0.5)");
}

}  // namespace daa
