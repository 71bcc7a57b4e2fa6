#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "commons/function1d.hpp"
#include "commons/grid.hpp"
#include "commons/guarantees.hpp"
#include "commons/welfare.hpp"

namespace commons {

using Shares = std::vector<double>;

/// Budget-balanced division rule: shares sum to W(x), in the caller's agent order.
struct SharingRule {
  std::string name;
  std::function<Shares(const Profile&)> allocate;

  Shares operator()(const Profile& x) const { return allocate(x); }
};

/// Serial rule serving agents in increasing order of type.
Shares serial_up(const WelfareSpec& spec, const Profile& x);
/// Serial rule serving agents in decreasing order of type.
Shares serial_down(const WelfareSpec& spec, const Profile& x);

/// share_i = x_i / x_N * F(x_N); equal split of F(0) when x_N = 0.
Shares average_returns(const Function1D& f, const Profile& x);

/// lambda g_minus(x_i) + (1 - lambda) g_plus(x_i) with lambda chosen for budget balance.
Shares moving_average_rule(const Guarantee& g_minus, const Guarantee& g_plus, const WelfareSpec& spec, const Profile& x);

/// share_i = (x_i - x_N / n)^2; balances the variance welfare.
Shares quadratic_transport_rule(const Profile& x);

/// Implements the simple upper guarantee g_c of the spread x^1 - x^n.
Shares spread_rule(const std::vector<double>& c, const Profile& x);

Shares equal_split(const WelfareSpec& spec, const Profile& x);
/// share_i = x_i / x_N * W(x); equal split when x_N = 0.
Shares proportional(const WelfareSpec& spec, const Profile& x);

SharingRule serial_up_rule(const WelfareSpec& spec);
SharingRule serial_down_rule(const WelfareSpec& spec);
SharingRule average_returns_rule(const Function1D& f);
SharingRule moving_average(const Guarantee& g_minus, const Guarantee& g_plus, const WelfareSpec& spec);
SharingRule quadratic_transport();
SharingRule spread(std::vector<double> c);
SharingRule equal_split_rule(const WelfareSpec& spec);
SharingRule proportional_rule(const WelfareSpec& spec);

struct ImpliedGuarantees {
  GuaranteeCurve lower;
  GuaranteeCurve upper;
};

/// For every grid type t: min and max of agent 0's share over all grid opponents.
ImpliedGuarantees implied_guarantees(const SharingRule& rule, const WelfareSpec& spec, const Grid& grid);

}  // namespace commons
