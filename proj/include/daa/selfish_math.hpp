#pragma once

// Attack-cycle probabilities and expectations of L-selfish mining.
//
// An attack cycle starts from an agreed offset chain. The adversary withholds
// blocks at heights below L and matches each honest block; it gives up when
// it falls one block behind before reaching length L (unsuccessful cycle) and
// otherwise keeps mining privately until it leads by exactly one block, then
// publishes everything (successful cycle).

#include <cmath>
#include <cstdint>
#include <limits>

#include "daa/errors.hpp"
#include "daa/params.hpp"

namespace daa {

namespace detail {

inline constexpr unsigned kExactBinomialLimit = 60;

inline double log_binomial(unsigned n, unsigned k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// Exact for n <= 60 (every intermediate fits in 128 bits), log-gamma beyond.
inline double binomial(unsigned n, unsigned k) {
  if (k > n) return 0.0;
  if (n > kExactBinomialLimit) return std::exp(log_binomial(n, k));
  k = (k > n - k) ? n - k : k;
  unsigned __int128 c = 1;
  for (unsigned i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return static_cast<double>(c);
}

inline void require_probability_share(double alpha) {
  require(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0, 1)");
}

inline void require_gamma(double gamma) {
  require(gamma >= 0.0 && gamma <= 1.0, "gamma must lie in [0, 1]");
}

}  // namespace detail

/// Probability that a cycle succeeds with the adversary reaching length L
/// while the honest chain has m blocks:
/// (L-m)/(L+m) * C(L+m, L) * alpha^L * beta^m.
inline double success_prob(unsigned length, unsigned m, double alpha) {
  detail::require(length >= 1, "L must be positive");
  detail::require(m < length, "success_prob requires m < L");
  detail::require_probability_share(alpha);
  const double beta = 1.0 - alpha;
  const unsigned n = length + m;
  const double ratio = static_cast<double>(length - m) / n;
  if (n <= detail::kExactBinomialLimit) {
    return ratio * detail::binomial(n, length) * std::pow(alpha, length) * std::pow(beta, m);
  }
  return std::exp(std::log(ratio) + detail::log_binomial(n, length) + length * std::log(alpha) +
                  m * std::log(beta));
}

/// Probability that a cycle fails after the adversary mined n blocks:
/// Catalan(n) * alpha^n * beta^(n+1).
inline double unsuccess_prob(unsigned n, double alpha) {
  detail::require_probability_share(alpha);
  const double beta = 1.0 - alpha;
  if (2 * n <= detail::kExactBinomialLimit) {
    return detail::binomial(2 * n, n) / (n + 1.0) * std::pow(alpha, n) * std::pow(beta, n + 1);
  }
  return std::exp(detail::log_binomial(2 * n, n) - std::log(n + 1.0) + n * std::log(alpha) +
                  (n + 1) * std::log(beta));
}

/// Failure after n adversarial blocks with exactly i of them captured into the
/// offset chain. The last honest block that built on the adversarial branch
/// fixes i; the factor gamma appears only when such a block exists (i > 0).
inline double unsuccess_prob_captured(unsigned n, unsigned i, double alpha, double gamma) {
  detail::require(i <= n, "unsuccess_prob_captured requires i <= n");
  detail::require_gamma(gamma);
  const double tail = std::pow(1.0 - gamma, n - i) * (i > 0 ? gamma : 1.0);
  return unsuccess_prob(n, alpha) * tail;
}

/// Expected per-cycle block counts of an L-selfish attack.
struct CycleExpectations {
  double e_la_s = 0.0;         // E[L_A 1_S]
  double e_lh_s = 0.0;         // E[L_H 1_S]
  double e_la_u = 0.0;         // E[L_A (1 - 1_S)]
  double e_lh_u = 0.0;         // E[L_H (1 - 1_S)]
  double e_la_captured = 0.0;  // E[L_{A,u}]
  double t_b = 0.0;            // blocks mined per cycle
  double t_o = 0.0;            // canonical blocks per cycle
  double delta = 1.0;          // block redundancy ratio t_b / t_o
  double rho = 0.0;            // adversarial revenue ratio
  std::size_t terms = 0;       // unsuccessful-series terms summed
};

inline constexpr double kSeriesTailTolerance = 1e-12;
inline constexpr std::size_t kSeriesTermCap = 1'000'000;

inline CycleExpectations cycle_expectations(const AttackParams& params) {
  const double alpha = params.alpha();
  const double beta = params.beta();
  const double gamma = params.gamma();
  if (4.0 * alpha * beta >= 1.0) throw ConvergenceError("4*alpha*beta >= 1: cycle series diverge");

  CycleExpectations out;
  const bool unbounded = params.depth.is_unbounded();

  if (!unbounded) {
    const unsigned length = params.depth.length();
    const double drift = 1.0 - 2.0 * alpha;
    for (unsigned m = 0; m < length; ++m) {
      const double ps = success_prob(length, m, alpha);
      const double chase = static_cast<double>(length - m - 1) / drift;
      out.e_la_s += ps * (length + chase * alpha);
      out.e_lh_s += ps * (m + chase * beta);
    }
  }

  // Unsuccessful cycles. P_u(m) follows the Catalan recurrence and the
  // captured count sum_i i * gamma^[i>0] (1-gamma)^(m-i) obeys
  // S(m+1) = (1-gamma) S(m) + gamma (m+1).
  const double ratio_bound = 4.0 * alpha * beta;
  const std::size_t limit = unbounded ? kSeriesTermCap : params.depth.length();
  double pu = beta;
  double captured_weight = 0.0;
  bool converged = !unbounded;
  std::size_t m = 0;
  for (; m < limit; ++m) {
    const double md = static_cast<double>(m);
    out.e_la_u += pu * md;
    out.e_lh_u += pu * (md + 1.0);
    out.e_la_captured += pu * captured_weight;
    if (unbounded && pu * (md + 1.0) / (1.0 - ratio_bound) < kSeriesTailTolerance) {
      converged = true;
      ++m;
      break;
    }
    captured_weight = (1.0 - gamma) * captured_weight + gamma * (md + 1.0);
    pu *= 2.0 * (2.0 * md + 1.0) / (md + 2.0) * alpha * beta;
  }
  if (!converged) {
    throw ConvergenceError("unbounded-depth series did not reach tail bound within term cap");
  }
  out.terms = m;

  out.t_b = out.e_la_s + out.e_la_u + out.e_lh_s + out.e_lh_u;
  out.t_o = out.e_la_s + out.e_lh_u;
  out.delta = out.t_b / out.t_o;
  out.rho = (out.e_la_s + out.e_la_captured) / out.t_o;
  return out;
}

inline double revenue_ratio(const AttackParams& params) { return cycle_expectations(params).rho; }

inline constexpr unsigned kDefaultMaxDepth = 64;
inline constexpr double kDepthPlateauTolerance = 1e-14;
// The truncated Unbounded value may sit below the finite-L plateau by the
// series truncation error, so it is compared with a looser tolerance.
inline constexpr double kUnboundedTieTolerance = 1e-10;

/// argmax_L rho_L over {1..l_max, Unbounded}. rho_L is quasiconcave in L, so
/// the scan stops at the first decrease.
inline Depth optimal_depth(double alpha, double gamma, unsigned l_max = kDefaultMaxDepth) {
  detail::require(l_max >= 2, "l_max must be at least 2");
  const NetworkParams network(alpha, gamma);

  unsigned best_length = 1;
  double best = revenue_ratio(AttackParams(network, Depth{1}));
  double previous = best;
  for (unsigned length = 2; length <= l_max; ++length) {
    const double rho = revenue_ratio(AttackParams(network, Depth{length}));
    if (rho < previous - kDepthPlateauTolerance) return Depth{best_length};
    if (rho > best) {
      best = rho;
      best_length = length;
    }
    previous = rho;
  }
  const double rho_unbounded = revenue_ratio(AttackParams(network, Depth::unbounded()));
  return rho_unbounded >= best - kUnboundedTieTolerance ? Depth::unbounded() : Depth{best_length};
}

}  // namespace daa
