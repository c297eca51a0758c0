#pragma once

// Block-by-block simulation of attack cycles, used as an independent check
// of the closed forms.

#include <algorithm>
#include <array>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "daa/errors.hpp"
#include "daa/params.hpp"
#include "daa/paw.hpp"
#include "daa/rng.hpp"
#include "daa/stats.hpp"

namespace daa {

inline constexpr std::uint64_t kRunawayBlocks = 1'000'000;
inline constexpr std::size_t kCyclesPerBlock = 4096;
inline constexpr unsigned kHistogramDepth = 4;

template <class Params>
struct SimConfig {
  std::uint64_t n_cycles = 1'000'000;
  std::uint64_t seed = 1;
  Params params;
  unsigned threads = 1;
};

using NamedEstimates = std::vector<std::pair<std::string, Estimate>>;

namespace detail {

// Runs `n_cycles` cycles in fixed-size blocks. Each block is accumulated on
// its own and blocks are merged in index order, so the result is the same
// for any thread count.
template <class Accumulator, class RunCycle>
Accumulator run_blocks(std::uint64_t n_cycles, std::uint64_t seed, unsigned threads,
                       RunCycle&& run_cycle) {
  require(n_cycles >= 1, "n_cycles must be positive");
  const std::size_t n_blocks = static_cast<std::size_t>((n_cycles + kCyclesPerBlock - 1) / kCyclesPerBlock);
  std::vector<Accumulator> blocks(n_blocks);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t b = next.fetch_add(1);
      if (b >= n_blocks) return;
      const std::uint64_t first = static_cast<std::uint64_t>(b) * kCyclesPerBlock;
      const std::uint64_t last = std::min<std::uint64_t>(first + kCyclesPerBlock, n_cycles);
      try {
        for (std::uint64_t i = first; i < last; ++i) {
          Xoshiro256pp rng = Xoshiro256pp::for_stream(seed, i);
          run_cycle(rng, blocks[b]);
        }
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(n_blocks);
        return;
      }
    }
  };

  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n_blocks)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  Accumulator total;
  for (const Accumulator& a : blocks) total.merge(a);
  return total;
}

}  // namespace detail

// ---------------------------------------------------------------- selfish

struct SelfishCycle {
  std::uint64_t adversary_blocks = 0;
  std::uint64_t honest_blocks = 0;
  std::uint64_t captured = 0;  // adversarial blocks kept by a failed cycle
  bool success = false;
};

/// One L-selfish cycle. Below height L the adversary withholds and matches
/// every honest block, so each honest block after the first meets two
/// equal-length public tips and extends the adversarial one with probability
/// gamma, which keeps the adversary's first h blocks. Falling one block
/// behind before reaching L ends the cycle unsuccessfully; reaching L means
/// racing on privately until the lead drops to one block, then publishing.
inline SelfishCycle simulate_selfish_cycle(const AttackParams& params, Xoshiro256pp& rng) {
  const double alpha = params.alpha();
  const double gamma = params.gamma();
  const bool unbounded = params.depth.is_unbounded();
  const std::uint64_t length = unbounded ? 0 : params.depth.length();

  SelfishCycle c;
  bool past_length = false;
  for (std::uint64_t blocks = 0;; ++blocks) {
    if (blocks >= kRunawayBlocks) {
      throw SimIntegrityError("selfish cycle exceeded " + std::to_string(kRunawayBlocks) + " blocks");
    }
    const bool adversary_found = rng.uniform() < alpha;
    if (past_length) {
      if (adversary_found) {
        ++c.adversary_blocks;
      } else {
        ++c.honest_blocks;
      }
      if (c.adversary_blocks == c.honest_blocks + 1) {
        c.success = true;
        return c;
      }
      continue;
    }
    if (adversary_found) {
      ++c.adversary_blocks;
      if (!unbounded && c.adversary_blocks == length) {
        past_length = true;
        if (c.adversary_blocks == c.honest_blocks + 1) {
          c.success = true;
          return c;
        }
      }
      continue;
    }
    if (c.honest_blocks >= 1 && rng.uniform() < gamma) c.captured = c.honest_blocks;
    const bool was_level = c.adversary_blocks == c.honest_blocks;
    ++c.honest_blocks;
    if (was_level) return c;
  }
}

struct SelfishAccumulator {
  // la*S, lh*S, la*(1-S), lh*(1-S), captured, la+lh, canonical, adversary canonical
  MomentAccumulator<8> moments;
  std::uint64_t successes = 0;
  std::array<std::array<std::uint64_t, kHistogramDepth + 1>, kHistogramDepth + 1> captured_counts{};
  std::array<std::uint64_t, kHistogramDepth + 1> failure_counts{};

  void add(const SelfishCycle& c) {
    const double la = static_cast<double>(c.adversary_blocks);
    const double lh = static_cast<double>(c.honest_blocks);
    const double cap = static_cast<double>(c.captured);
    const double s = c.success ? 1.0 : 0.0;
    const double u = 1.0 - s;
    moments.add({la * s, lh * s, la * u, lh * u, cap * u, la + lh, la * s + lh * u, la * s + cap * u});
    if (c.success) {
      ++successes;
    } else if (c.adversary_blocks <= kHistogramDepth) {
      ++failure_counts[c.adversary_blocks];
      ++captured_counts[c.adversary_blocks][c.captured];
    }
  }

  void merge(const SelfishAccumulator& o) {
    moments.merge(o.moments);
    successes += o.successes;
    for (std::size_t n = 0; n <= kHistogramDepth; ++n) {
      failure_counts[n] += o.failure_counts[n];
      for (std::size_t i = 0; i <= kHistogramDepth; ++i) captured_counts[n][i] += o.captured_counts[n][i];
    }
  }
};

struct SelfishEstimates {
  Estimate e_la_s, e_lh_s, e_la_u, e_lh_u, e_la_captured, t_b, t_o, delta, rho;
  Estimate success_rate;
  std::uint64_t n_cycles = 0;
  // failures[n] cycles failed with n adversarial blocks; captured[n][i] of
  // them kept i blocks (n <= 4).
  std::array<std::uint64_t, kHistogramDepth + 1> failures{};
  std::array<std::array<std::uint64_t, kHistogramDepth + 1>, kHistogramDepth + 1> captured{};

  NamedEstimates named() const {
    return {{"e_la_s", e_la_s}, {"e_lh_s", e_lh_s}, {"e_la_u", e_la_u},
            {"e_lh_u", e_lh_u}, {"e_la_captured", e_la_captured}, {"t_b", t_b},
            {"t_o", t_o}, {"delta", delta}, {"rho", rho}};
  }
};

inline SelfishEstimates simulate_selfish(const SimConfig<AttackParams>& config) {
  const auto total = detail::run_blocks<SelfishAccumulator>(
      config.n_cycles, config.seed, config.threads,
      [&](Xoshiro256pp& rng, SelfishAccumulator& acc) { acc.add(simulate_selfish_cycle(config.params, rng)); });

  const auto& m = total.moments;
  SelfishEstimates out;
  out.n_cycles = m.count();
  out.e_la_s = m.mean_estimate(0);
  out.e_lh_s = m.mean_estimate(1);
  out.e_la_u = m.mean_estimate(2);
  out.e_lh_u = m.mean_estimate(3);
  out.e_la_captured = m.mean_estimate(4);
  out.t_b = m.mean_estimate(5);
  out.t_o = m.mean_estimate(6);
  out.delta = m.ratio_estimate(5, 6);
  out.rho = m.ratio_estimate(7, 6);
  const double n = static_cast<double>(out.n_cycles);
  const double rate = static_cast<double>(total.successes) / n;
  out.success_rate = {rate, std::sqrt(rate * (1.0 - rate) / n), out.n_cycles};
  out.failures = total.failure_counts;
  out.captured = total.captured_counts;
  return out;
}

// -------------------------------------------------------------------- PAW

/// Per-cycle tallies. Every cycle ends with exactly one canonical block whose
/// reward is split among the fields 0..3.
struct PawCycle {
  double adversary = 0.0;     // solo blocks plus pool shares earned in the main cycle
  double pool = 0.0;          // honest pool members' share of main-cycle pool blocks
  double rest = 0.0;          // blocks of miners outside the pool
  double sub_pool = 0.0;      // pool blocks credited during a sub-cycle (split later)
  double main_duration = 0.0;
  double sub_duration = 0.0;
  bool sub_cycle = false;
};

/// One PAW cycle in block-interval units (the whole network finds one full
/// PoW per unit time). Main cycle: the first full PoW decides the cycle unless
/// the adversary's pool power found it; then it is withheld and the adversary
/// moves a fraction p2 of its power to the pool. In the sub-cycle the
/// adversary's pool PoWs are duplicates and discarded; its solo block ends
/// the cycle (the withheld one is dropped), a pool block ends it with the
/// pool paid, and a block from the rest triggers a fork race the withheld
/// block wins with probability gamma_c (paying the pool).
inline PawCycle simulate_paw_cycle(const PawParams& q, Xoshiro256pp& rng) {
  const double adv_pool = q.alpha * q.p1;
  const double adv_solo = q.alpha * (1.0 - q.p1);
  PawCycle c;
  c.main_duration = rng.exponential();
  const double u = rng.uniform();
  if (u < adv_solo) {
    c.adversary = 1.0;
    return c;
  }
  if (u < adv_solo + q.beta) {
    const double share = adv_pool / (q.beta + adv_pool);
    c.adversary = share;
    c.pool = 1.0 - share;
    return c;
  }
  if (u < adv_solo + q.beta + q.rest()) {
    c.rest = 1.0;
    return c;
  }

  c.sub_cycle = true;
  const double dup = q.alpha * q.p2;
  const double solo2 = q.alpha * (1.0 - q.p2);
  for (std::uint64_t events = 0;; ++events) {
    if (events >= kRunawayBlocks) throw SimIntegrityError("PAW sub-cycle exceeded the event guard");
    c.sub_duration += rng.exponential();
    const double v = rng.uniform();
    if (v < dup) continue;
    if (v < dup + solo2) {
      c.adversary = 1.0;
    } else if (v < dup + solo2 + q.beta) {
      c.sub_pool = 1.0;
    } else if (rng.uniform() < q.gamma_c) {
      c.sub_pool = 1.0;
    } else {
      c.rest = 1.0;
    }
    return c;
  }
}

struct PawAccumulator {
  // adversary, pool, rest, sub_pool, duration, p numerator, p denominator,
  // wasted-power numerator, sub-cycle flag
  MomentAccumulator<9> moments;

  void add(const PawCycle& c, const PawParams& q) {
    const double d2 = c.sub_cycle ? c.sub_duration : 0.0;
    const double flag = c.sub_cycle ? 1.0 : 0.0;
    const double p_num = c.sub_cycle ? q.p1 * c.main_duration + q.p2 * d2 : 0.0;
    const double p_den = c.sub_cycle ? c.main_duration + d2 : 0.0;
    moments.add({c.adversary, c.pool, c.rest, c.sub_pool, c.main_duration + d2, p_num, p_den,
                 q.p1 * c.main_duration + q.p2 * d2, flag});
  }

  void merge(const PawAccumulator& o) { moments.merge(o.moments); }
};

struct PawEstimates {
  Estimate rho, rho_pool, rho_rest, delta, p, p_w;
  std::uint64_t n_cycles = 0;

  NamedEstimates named() const {
    return {{"rho", rho}, {"rho_pool", rho_pool}, {"rho_rest", rho_rest},
            {"delta", delta}, {"p", p}, {"p_w", p_w}};
  }
};

/// Sub-cycle pool blocks are split with the adversary's average pool share p,
/// itself estimated from the simulated durations; the standard errors of rho
/// and rho_pool carry the uncertainty of that estimate.
inline PawEstimates simulate_paw(const SimConfig<PawParams>& config) {
  const PawParams& q = config.params;
  const auto total = detail::run_blocks<PawAccumulator>(
      config.n_cycles, config.seed, config.threads,
      [&](Xoshiro256pp& rng, PawAccumulator& acc) { acc.add(simulate_paw_cycle(q, rng), q); });

  const auto& m = total.moments;
  const auto mu = m.means();
  PawEstimates out;
  out.n_cycles = m.count();
  out.rho_rest = m.mean_estimate(2);
  out.delta = m.mean_estimate(4);
  out.p_w = m.ratio_estimate(7, 4);

  const bool any_sub = mu[6] > 0.0;
  out.p = any_sub ? m.ratio_estimate(5, 6) : Estimate{0.0, 0.0, out.n_cycles};
  const double p_hat = out.p.mean;
  const double denom = q.beta + q.alpha * p_hat;
  const double share = q.alpha * p_hat / denom;
  const double share_slope = q.alpha * q.beta / (denom * denom);

  using Vec = MomentAccumulator<9>::Vector;
  Vec grad_rho{};
  grad_rho[0] = 1.0;
  grad_rho[3] = share;
  Vec grad_pool{};
  grad_pool[1] = 1.0;
  grad_pool[3] = 1.0 - share;
  if (any_sub) {
    const double dp_dnum = 1.0 / mu[6];
    const double dp_dden = -p_hat / mu[6];
    grad_rho[5] = mu[3] * share_slope * dp_dnum;
    grad_rho[6] = mu[3] * share_slope * dp_dden;
    grad_pool[5] = -grad_rho[5];
    grad_pool[6] = -grad_rho[6];
  }
  out.rho = m.function_estimate(mu[0] + share * mu[3], grad_rho);
  out.rho_pool = m.function_estimate(mu[1] + (1.0 - share) * mu[3], grad_pool);
  return out;
}

}  // namespace daa
