#pragma once

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>

#include "daa/errors.hpp"

namespace daa {

/// Stubbornness depth L of an L-selfish strategy: a positive integer or
/// Unbounded (equal-fork stubborn mining). L = 1 is honest mining and
/// L = 2 is the classic selfish-mining attack.
class Depth {
 public:
  static constexpr Depth unbounded() noexcept { return Depth{}; }

  explicit Depth(std::uint32_t length) : length_(length) {
    detail::require(length >= 1, "depth must be a positive integer");
  }

  bool is_unbounded() const noexcept { return length_ == 0; }

  std::uint32_t length() const {
    if (is_unbounded()) throw DomainError("unbounded depth has no finite length");
    return length_;
  }

  std::string to_string() const { return is_unbounded() ? "inf" : std::to_string(length_); }

  // Accepts "inf", "unbounded" or a positive integer.
  static Depth parse(std::string_view text) {
    if (text == "inf" || text == "unbounded" || text == "infinity") return unbounded();
    std::uint32_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || value == 0) {
      throw DomainError("invalid depth '" + std::string(text) + "'");
    }
    return Depth{value};
  }

  friend bool operator==(const Depth&, const Depth&) = default;

 private:
  constexpr Depth() = default;
  std::uint32_t length_ = 0;  // 0 encodes Unbounded
};

/// Adversarial hash share and network influence, shared by every strategy.
struct NetworkParams {
  double alpha;
  double gamma;

  NetworkParams(double alpha_, double gamma_) : alpha(alpha_), gamma(gamma_) {
    detail::require(alpha > 0.0 && alpha < 0.5, "alpha must lie in (0, 0.5)");
    detail::require(gamma >= 0.0 && gamma <= 1.0, "gamma must lie in [0, 1]");
  }

  double beta() const noexcept { return 1.0 - alpha; }
};

struct AttackParams {
  NetworkParams network;
  Depth depth;

  AttackParams(double alpha, double gamma, Depth depth_) : network(alpha, gamma), depth(depth_) {}
  AttackParams(NetworkParams network_, Depth depth_) : network(network_), depth(depth_) {}

  double alpha() const noexcept { return network.alpha; }
  double beta() const noexcept { return network.beta(); }
  double gamma() const noexcept { return network.gamma; }
};

}  // namespace daa
