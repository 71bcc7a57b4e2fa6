#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace commons {

/// Thrown when a type or profile leaves the interval of types.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Thrown when a profile has the wrong number of agents.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Closed interval of admissible types [low, high].
class TypeInterval {
 public:
  TypeInterval(double low, double high);

  double low() const { return low_; }
  double high() const { return high_; }
  double width() const { return high_ - low_; }

  /// Snap tolerance used when a computed type lands a rounding error outside.
  double slack() const { return 1e-12 * std::max(1.0, std::abs(low_) + std::abs(high_)); }

  bool contains(double t) const { return t >= low_ - slack() && t <= high_ + slack(); }

  /// Clamps `t` into the interval; throws DomainError if it is genuinely outside.
  double admit(double t) const;

  bool operator==(const TypeInterval&) const = default;

 private:
  double low_;
  double high_;
};

/// A profile of types, one per agent. Order carries agent identity.
using Profile = std::vector<double>;

/// Weakly decreasing permutation of the profile: result[0] is the maximum.
std::vector<double> order_statistics(const Profile& x);

std::string format_profile(const Profile& x);

}  // namespace commons
