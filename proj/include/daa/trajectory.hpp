#pragma once

// Expected revenue-change curves and profit lags.
//
// A trajectory holds the expected revenue change of one miner class at every
// epoch boundary (time in tau_0 units, rewards in per-epoch issuance units)
// and is linear between boundaries. From some node on the epoch pattern
// repeats, so the curve continues past its last node by repeating its final
// period shifted up by a fixed drift.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "daa/errors.hpp"

namespace daa {

inline constexpr double kInfiniteLag = std::numeric_limits<double>::infinity();
inline constexpr std::size_t kDefaultHorizonEpochs = 200;
inline constexpr std::size_t kMaxHorizonEpochs = std::size_t{1} << 20;

struct Node {
  double t;
  double value;
};

class Trajectory {
 public:
  Trajectory() : Trajectory({{0.0, 0.0}, {1.0, 0.0}}, 0, 1, 0.0) {}

  /// `period_start` is the node index where the repeating pattern begins and
  /// `period_nodes` the number of segments per period; `drift` is the value
  /// gained per period.
  Trajectory(std::vector<Node> nodes, std::size_t period_start, std::size_t period_nodes,
             double drift)
      : nodes_(std::move(nodes)), period_start_(period_start), period_nodes_(period_nodes),
        drift_(drift) {
    detail::require(nodes_.size() >= 2, "trajectory needs at least two nodes");
    detail::require(nodes_.front().t == 0.0 && nodes_.front().value == 0.0,
                    "trajectory must start at (0, 0)");
    for (std::size_t i = 1; i < nodes_.size(); ++i) {
      detail::require(nodes_[i].t > nodes_[i - 1].t, "trajectory times must strictly increase");
    }
    detail::require(period_nodes_ >= 1, "period must span at least one segment");
    detail::require(period_start_ + period_nodes_ < nodes_.size(),
                    "trajectory must contain one full period");
    detail::require((nodes_.size() - 1 - period_start_) % period_nodes_ == 0,
                    "trajectory must end on a period boundary");

    const Node& last = nodes_.back();
    period_duration_ = last.t - nodes_[nodes_.size() - 1 - period_nodes_].t;
    slope_ = drift_ / period_duration_;
    deviation_low_ = 0.0;
    deviation_high_ = 0.0;
    for (std::size_t i = period_start_; i < nodes_.size(); ++i) {
      const double deviation = nodes_[i].value - trend(nodes_[i].t);
      deviation_low_ = std::min(deviation_low_, deviation);
      deviation_high_ = std::max(deviation_high_, deviation);
    }
  }

  std::span<const Node> nodes() const noexcept { return nodes_; }
  double horizon() const noexcept { return nodes_.back().t; }
  double drift() const noexcept { return drift_; }
  double period_duration() const noexcept { return period_duration_; }
  double periodic_from() const noexcept { return nodes_[period_start_].t; }

  /// Long-run average slope (reward units per tau_0).
  double slope() const noexcept { return slope_; }

  /// Line through the last node with the long-run slope. On the periodic part
  /// the curve stays within [trend + deviation_low, trend + deviation_high].
  double trend(double t) const noexcept { return nodes_.back().value + slope_ * (t - horizon()); }
  double deviation_low() const noexcept { return deviation_low_; }
  double deviation_high() const noexcept { return deviation_high_; }

  double value_at(double t) const {
    detail::require(t >= 0.0, "trajectory is defined for t >= 0");
    const double end = horizon();
    if (t > end) {
      const double offset = t - end;
      const double periods = std::floor(offset / period_duration_);
      const double within = offset - periods * period_duration_;
      return value_at(end - period_duration_ + within) + (periods + 1.0) * drift_;
    }
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t,
                               [](double x, const Node& n) { return x < n.t; });
    if (it == nodes_.end()) return nodes_.back().value;
    const Node& hi = *it;
    const Node& lo = *(it - 1);
    return lo.value + (hi.value - lo.value) * (t - lo.t) / (hi.t - lo.t);
  }

 private:
  std::vector<Node> nodes_;
  std::size_t period_start_;
  std::size_t period_nodes_;
  double drift_;
  double period_duration_ = 1.0;
  double slope_ = 0.0;
  double deviation_low_ = 0.0;
  double deviation_high_ = 0.0;
};

/// Revenue change of a miner class from per-epoch durations and rewards:
/// value(t_k) = sum_{j<=k} reward_j - fair_share * t_k.
inline Trajectory accumulate_revenue_change(std::span<const double> durations,
                                            std::span<const double> rewards, double fair_share,
                                            std::size_t period_start, std::size_t period_epochs,
                                            double drift) {
  detail::require(durations.size() == rewards.size(), "durations and rewards must align");
  std::vector<Node> nodes;
  nodes.reserve(durations.size() + 1);
  nodes.push_back({0.0, 0.0});
  double t = 0.0;
  double earned = 0.0;
  for (std::size_t k = 0; k < durations.size(); ++k) {
    t += durations[k];
    earned += rewards[k];
    nodes.push_back({t, earned - fair_share * t});
  }
  return Trajectory(std::move(nodes), period_start, period_epochs, drift);
}

namespace detail {

// sup{t : a(t) - b(t) <= 0} given that the difference is certified positive
// past `end`. Both curves are linear between their own nodes, so the
// difference is linear on the merged breakpoint set.
inline double last_nonpositive_point(const Trajectory& a, const Trajectory* b, double end) {
  std::vector<double> times;
  for (const Node& n : a.nodes()) {
    if (n.t < end) times.push_back(n.t);
  }
  if (b != nullptr) {
    for (const Node& n : b->nodes()) {
      if (n.t < end) times.push_back(n.t);
    }
  }
  times.push_back(end);
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());

  auto difference = [&](double t) { return a.value_at(t) - (b != nullptr ? b->value_at(t) : 0.0); };
  std::vector<double> values(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) values[i] = difference(times[i]);

  std::size_t last = 0;
  bool found = false;
  for (std::size_t i = times.size(); i-- > 0;) {
    if (values[i] <= 0.0) {
      last = i;
      found = true;
      break;
    }
  }
  if (!found) return 0.0;
  if (last + 1 == times.size()) throw HorizonError("difference is not positive at the horizon");
  const double v0 = values[last];
  const double v1 = values[last + 1];
  if (v0 == 0.0) return times[last];
  return times[last] + (-v0) / (v1 - v0) * (times[last + 1] - times[last]);
}

}  // namespace detail

/// inf{tau : traj(t) > 0 for all t > tau}, in tau_0 units. Infinite when the
/// long-run drift is not strictly positive.
inline double profit_lag(const Trajectory& traj) {
  if (!(traj.slope() > 0.0)) return kInfiniteLag;
  const double end = traj.horizon();
  if (traj.trend(end) + traj.deviation_low() <= 0.0) {
    throw HorizonError("trajectory is not certifiably positive at its horizon; extend it");
  }
  return detail::last_nonpositive_point(traj, nullptr, end);
}

/// inf{tau : a(t) > b(t) for all t > tau}, in tau_0 units. Infinite when a does
/// not out-earn b in the long run, including identical curves.
inline double relative_lag(const Trajectory& a, const Trajectory& b) {
  if (!(a.slope() - b.slope() > 0.0)) return kInfiniteLag;
  const double end = std::min(a.horizon(), b.horizon());
  if (end < a.periodic_from() || end < b.periodic_from()) {
    throw HorizonError("common horizon ends before both curves become periodic");
  }
  const double lower_a = a.trend(end) + a.deviation_low();
  const double upper_b = b.trend(end) + b.deviation_high();
  if (lower_a - upper_b <= 0.0) {
    throw HorizonError("difference is not certifiably positive at the common horizon; extend it");
  }
  return detail::last_nonpositive_point(a, &b, end);
}

/// Calls `compute(horizon)` and doubles the horizon on HorizonError.
template <class Compute>
double with_extended_horizon(Compute&& compute, std::size_t horizon = kDefaultHorizonEpochs,
                             std::size_t max_horizon = kMaxHorizonEpochs) {
  for (;;) {
    try {
      return compute(horizon);
    } catch (const HorizonError&) {
      if (horizon >= max_horizon) throw;
      horizon = std::min(horizon * 2, max_horizon);
    }
  }
}

}  // namespace daa
