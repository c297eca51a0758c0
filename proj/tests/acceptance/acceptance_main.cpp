// Acceptance checks, one line per criterion:
//   PASS|FAIL <n> <title> :: <detail>
// Exits non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "daa/daa.hpp"
#include "properties.hpp"

using namespace daa;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

unsigned worker_count() { return std::max(1u, std::thread::hardware_concurrency()); }

std::string fmt(const char* format, auto... args) {
  char buffer[512];
  std::snprintf(buffer, sizeof buffer, format, args...);
  return buffer;
}

// Runs fn(i) for i in [0, n) across threads; results land in index order.
template <class T, class Fn>
std::vector<T> parallel(std::size_t n, Fn&& fn) {
  std::vector<T> out(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) out[i] = fn(i);
  };
  std::vector<std::jthread> pool;
  for (unsigned t = 1; t < worker_count(); ++t) pool.emplace_back(work);
  work();
  return out;
}

Outcome counterexample() {
  const PawParams p(0.2, 0.04, 0.75, 0.04, 0.93);
  const PawQuantities q = paw_quantities(p);
  const double gain = paw_trajectory(p, 4).adversary.nodes()[1].value;
  const bool ok = std::abs(q.rho - 0.2032) <= 5e-4 && std::abs(q.delta - 1.0098) <= 5e-4 &&
                  std::abs(gain - 1.2e-3) <= 2e-4 && gain > 0.0 &&
                  paw_profit_lag(p, PawClass::adversary) == 0.0;
  return {ok, fmt("rho=%.6f delta=%.6f first-epoch gain=%.4e", q.rho, q.delta, gain)};
}

Outcome optimal_depths() {
  const Depth a = optimal_depth(0.4, 0.4);
  const Depth b = optimal_depth(0.1, 0.9);
  return {a == Depth(5) && b.is_unbounded(),
          "L*(0.4,0.4)=" + a.to_string() + " L*(0.1,0.9)=" + b.to_string()};
}

Outcome efficiency_point() {
  const Depth star = optimal_depth(0.4, 0.5);
  const EfficiencyReport r = efficiency(Selfish{star}, NetworkParams(0.4, 0.5));
  const double ratio = r.rho / 0.4;
  return {std::abs(ratio - 1.41) <= 0.01 && std::abs(r.u_adv - 1.95) <= 0.02,
          fmt("L*=%s rho/alpha=%.4f U_A=%.4f", star.to_string().c_str(), ratio, r.u_adv)};
}

Outcome boundary() {
  const double alpha = boundary_alpha(0.0, Depth(2), 1e-6);
  const double u = selfish_efficiency(1.0 / 3.0, revenue_ratio(AttackParams(1.0 / 3.0, 0.0, Depth(2))));
  return {std::abs(alpha - 0.355) <= 0.002 && std::abs(u - 1.0) <= 1e-6,
          fmt("crossover alpha=%.6f U_2(1/3,0)=%.9f", alpha, u)};
}

Outcome paw_lag_bound() {
  struct Cell {
    double beta, gamma_c, lag;
  };
  std::vector<Cell> cells;
  std::size_t skipped = 0;
  for (int b = 1; b <= 45; ++b) {
    for (int g = 0; g <= 95; ++g) {
      const double beta = b / 100.0;
      if (0.2 + beta >= 0.5) {
        ++skipped;
        continue;
      }
      cells.push_back({beta, g / 100.0, 0.0});
    }
  }
  const auto lags = parallel<double>(cells.size(), [&](std::size_t i) {
    const PawOptimum best = paw_optimize(0.2, cells[i].beta, cells[i].gamma_c, PawObjective::max_rho);
    return paw_profit_lag(PawParams(0.2, cells[i].beta, cells[i].gamma_c, best.p1, best.p2), PawClass::adversary);
  });
  std::size_t worst = 0;
  for (std::size_t i = 0; i < lags.size(); ++i)
    if (lags[i] > lags[worst]) worst = i;
  return {lags[worst] <= 2.53 + 0.01,
          fmt("%zu cells (%zu outside alpha+beta<0.5 skipped), max lag %.4f at beta=%.2f gamma_c=%.2f",
              cells.size(), skipped, lags[worst], cells[worst].beta, cells[worst].gamma_c)};
}

Outcome paw_rest_lag() {
  struct Point {
    double alpha, beta, gamma_c;
  };
  std::vector<Point> points;
  for (double a : {0.05, 0.10, 0.15, 0.20, 0.25})
    for (double b : {0.02, 0.06, 0.10, 0.14, 0.18})
      for (double g : {0.0, 0.25, 0.5, 0.75}) points.push_back({a, b, g});
  const auto errors = parallel<double>(points.size(), [&](std::size_t i) {
    const Point& pt = points[i];
    const PawOptimum best = paw_optimize(pt.alpha, pt.beta, pt.gamma_c, PawObjective::max_rho);
    const double lag = paw_profit_lag(PawParams(pt.alpha, pt.beta, pt.gamma_c, best.p1, best.p2), PawClass::rest);
    return std::abs(lag - 1.0 / (1.0 - pt.gamma_c));
  });
  const auto worst = std::max_element(errors.begin(), errors.end()) - errors.begin();
  return {errors[worst] <= 0.1,
          fmt("%zu points, max |lag - 1/(1-gamma_c)| = %.4f at (%.2f, %.2f, %.2f)", points.size(), errors[worst],
              points[worst].alpha, points[worst].beta, points[worst].gamma_c)};
}

Outcome wasted_power_ordering() {
  struct Point {
    double alpha, beta, gamma_c;
  };
  std::vector<Point> points;
  for (double a : {0.1, 0.2, 0.3})
    for (double b : {0.05, 0.10, 0.15})
      for (double g : {0.2, 0.5, 0.8}) points.push_back({a, b, g});
  const auto margins = parallel<double>(points.size(), [&](std::size_t i) {
    const Point& pt = points[i];
    const double ratio = paw_optimize(pt.alpha, pt.beta, pt.gamma_c, PawObjective::max_u_ratio).quantities.p_w;
    const double rho = paw_optimize(pt.alpha, pt.beta, pt.gamma_c, PawObjective::max_rho).quantities.p_w;
    const double u = paw_optimize(pt.alpha, pt.beta, pt.gamma_c, PawObjective::max_u_adv).quantities.p_w;
    // Negative margin means the ordering breaks.
    return std::min(rho - ratio, u + 1e-6 - rho);
  });
  const auto worst = std::min_element(margins.begin(), margins.end()) - margins.begin();
  return {margins[worst] >= 0.0, fmt("%zu points, smallest ordering margin %.3e", points.size(), margins[worst])};
}

Outcome selfish_sim() {
  struct Case {
    double alpha, gamma;
    Depth depth;
  };
  std::vector<Case> cases;
  for (double a : {0.1, 0.2, 0.3, 0.4})
    for (double g : {0.0, 0.5, 1.0})
      for (Depth d : {Depth(2), Depth(3), Depth::unbounded()}) cases.push_back({a, g, d});

  std::size_t comparisons = 0;
  std::size_t sim_failures = 0;
  double max_z = 0.0;
  std::string worst;
  std::size_t lag_checks = 0;
  double max_lag_error = 0.0;
  for (const Case& c : cases) {
    const AttackParams params(c.alpha, c.gamma, c.depth);
    const CycleExpectations f = cycle_expectations(params);
    const SelfishEstimates sim = simulate_selfish({1'000'000, 20240601, params, worker_count()});
    const double expected[] = {f.e_la_s, f.e_lh_s, f.e_la_u, f.e_lh_u, f.e_la_captured,
                               f.t_b,    f.t_o,    f.delta,  f.rho};
    const NamedEstimates named = sim.named();
    for (std::size_t i = 0; i < named.size(); ++i) {
      const double z = std::abs(named[i].second.z_score(expected[i]));
      ++comparisons;
      if (z > 3.0) ++sim_failures;
      if (z > max_z) {
        max_z = z;
        worst = fmt("%s at (%.1f, %.1f, L=%s)", named[i].first.c_str(), c.alpha, c.gamma,
                    c.depth.to_string().c_str());
      }
    }
    if (f.rho > c.alpha) {
      const double closed = selfish_lag_closed_form(params);
      const double scanned = strategy_profit_lag(Selfish{c.depth}, params.network);
      max_lag_error = std::max(max_lag_error, std::abs(closed - scanned));
      ++lag_checks;
    }
  }
  return {sim_failures == 0 && max_lag_error <= 1e-9 && lag_checks > 0,
          fmt("%zu comparisons, %zu beyond 3 SE, max |z|=%.2f (%s); %zu lag checks, max error %.1e", comparisons,
              sim_failures, max_z, worst.c_str(), lag_checks, max_lag_error)};
}

Outcome paw_sim() {
  std::size_t comparisons = 0;
  std::size_t failures = 0;
  double max_z = 0.0;
  std::string worst;
  for (double a : {0.1, 0.2, 0.3})
    for (double b : {0.05, 0.10, 0.15})
      for (double g : {0.0, 0.5, 0.9})
        for (auto [p1, p2] : {std::pair{0.3, 0.6}, std::pair{0.1, 0.9}}) {
          const PawParams params(a, b, g, p1, p2);
          const PawQuantities f = paw_quantities(params);
          const PawEstimates sim = simulate_paw({1'000'000, 20240601, params, worker_count()});
          const double expected[] = {f.rho, f.rho_pool, f.rho_rest, f.delta, f.p, f.p_w};
          const NamedEstimates named = sim.named();
          for (std::size_t i = 0; i < named.size(); ++i) {
            const double z = std::abs(named[i].second.z_score(expected[i]));
            ++comparisons;
            if (z > 3.0) ++failures;
            if (z > max_z) {
              max_z = z;
              worst = fmt("%s at (%.2f, %.2f, %.1f, %.1f, %.1f)", named[i].first.c_str(), a, b, g, p1, p2);
            }
          }
        }
  return {failures == 0, fmt("%zu comparisons, %zu beyond 3 SE, max |z|=%.2f (%s)", comparisons, failures, max_z,
                             worst.c_str())};
}

Outcome property_suites() {
  constexpr std::size_t draws = 2000;
  const props::Report reports[] = {
      props::probability_closure(draws, 1),    props::paw_revenue_sum(draws, 2),
      props::paw_rest_bound(draws, 3),         props::paw_delta_identity(draws, 4),
      props::alternate_equality(draws, 5),     props::smart_eta_optimality(draws, 6),
      props::alternate_efficiency_above_one(draws, 7), props::intermittent_smart_identical(draws, 8)};
  bool ok = true;
  std::ostringstream detail;
  std::size_t total = 0;
  for (const auto& r : reports) {
    ok = ok && r.ok();
    total += r.draws;
    if (!r.ok()) detail << " [" << r.name << ": " << r.failures << " failures, first " << r.first_failure << "]";
  }
  return {ok, fmt("%zu properties x %zu draws (%zu total)", std::size(reports), draws, total) + detail.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"withholding counterexample gains in the first epoch", counterexample},
      {"optimal stubbornness depths", optimal_depths},
      {"selfish efficiency at (0.4, 0.5)", efficiency_point},
      {"selfish/alternate crossover at gamma=0", boundary},
      {"withholding adversary lag <= 2.53 at alpha=0.2", paw_lag_bound},
      {"rest-miner lag ~ 1/(1-gamma_c)", paw_rest_lag},
      {"wasted-power ordering across objectives", wasted_power_ordering},
      {"selfish simulator vs closed forms", selfish_sim},
      {"withholding simulator vs closed forms", paw_sim},
      {"randomised property suites", property_suites},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %2zu %s :: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
