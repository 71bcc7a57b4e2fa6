#include "commons/rules.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "commons/profile_table.hpp"

namespace commons {

namespace {

void check_length(const WelfareSpec& spec, const Profile& x) {
  if (x.size() != spec.n()) {
    throw ShapeError("profile has " + std::to_string(x.size()) + " entries, spec expects n = " +
                     std::to_string(spec.n()));
  }
}

/// Serial shares along `order` (agent indices, first served first): V_i = W(z_1..z_{i-1}, z_i, ..., z_i),
/// share_i = V_i / (n-i+1) - sum_{j<i} V_j / ((n-j+1)(n-j)).
Shares serial(const WelfareSpec& spec, const Profile& x, const std::vector<std::size_t>& order) {
  const std::size_t n = x.size();
  Shares out(n, 0.0);
  Profile z(n);
  double carried = 0.0;  // sum_{j<i} V_j / ((n-j+1)(n-j))
  for (std::size_t pos = 0; pos < n; ++pos) {
    for (std::size_t j = 0; j < pos; ++j) z[j] = x[order[j]];
    for (std::size_t j = pos; j < n; ++j) z[j] = x[order[pos]];
    const double remaining = static_cast<double>(n - pos);  // n - i + 1
    const double v = spec.evaluate(z);
    out[order[pos]] = v / remaining - carried;
    if (pos + 1 < n) carried += v / (remaining * (remaining - 1.0));
  }
  return out;
}

std::vector<std::size_t> stable_order(const Profile& x, bool increasing) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return increasing ? x[a] < x[b] : x[a] > x[b]; });
  return order;
}

double sum(const Profile& x) { return std::accumulate(x.begin(), x.end(), 0.0); }

}  // namespace

Shares serial_up(const WelfareSpec& spec, const Profile& x) {
  check_length(spec, x);
  return serial(spec, x, stable_order(x, true));
}

Shares serial_down(const WelfareSpec& spec, const Profile& x) {
  check_length(spec, x);
  return serial(spec, x, stable_order(x, false));
}

Shares average_returns(const Function1D& f, const Profile& x) {
  if (x.empty()) throw ShapeError("empty profile");
  const double total = sum(x);
  const double out = f(total);
  if (total == 0.0) return Shares(x.size(), out / static_cast<double>(x.size()));
  Shares s(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) s[i] = x[i] / total * out;
  return s;
}

Shares moving_average_rule(const Guarantee& g_minus, const Guarantee& g_plus, const WelfareSpec& spec,
                           const Profile& x) {
  check_length(spec, x);
  const double w = spec.evaluate(x);
  double lo = 0.0;
  double hi = 0.0;
  Shares gm(x.size());
  Shares gp(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    gm[i] = g_minus(x[i]);
    gp[i] = g_plus(x[i]);
    lo += gm[i];
    hi += gp[i];
  }
  const double tol = 1e-9 * std::max({1.0, std::abs(w), std::abs(lo), std::abs(hi)});
  if (w < lo - tol || w > hi + tol) {
    throw std::domain_error("guarantee pair is infeasible at " + format_profile(x) + ": W = " + std::to_string(w) +
                            " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  const double span = hi - lo;
  const double lambda = span == 0.0 ? 0.0 : std::clamp((hi - w) / span, 0.0, 1.0);
  Shares s(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) s[i] = lambda * gm[i] + (1.0 - lambda) * gp[i];
  return s;
}

Shares quadratic_transport_rule(const Profile& x) {
  if (x.empty()) throw ShapeError("empty profile");
  const double mean = sum(x) / static_cast<double>(x.size());
  Shares s(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) s[i] = (x[i] - mean) * (x[i] - mean);
  return s;
}

Shares spread_rule(const std::vector<double>& c, const Profile& x) {
  if (c.empty()) throw std::invalid_argument("spread rule needs benchmark types");
  if (x.size() != c.size() + 1) throw ShapeError("spread rule: profile length must be len(c) + 1");
  const auto [cmin_it, cmax_it] = std::minmax_element(c.begin(), c.end());
  const double cmin = *cmin_it;
  const double cmax = *cmax_it;
  const double top = *std::max_element(x.begin(), x.end());
  const double bottom = *std::min_element(x.begin(), x.end());
  const std::size_t n = x.size();
  const double above_cost = std::max(0.0, top - cmax);
  const double below_cost = std::max(0.0, cmin - bottom);
  const auto above = static_cast<double>(std::count_if(x.begin(), x.end(), [&](double v) { return v > cmax; }));
  const auto below = static_cast<double>(std::count_if(x.begin(), x.end(), [&](double v) { return v < cmin; }));
  const double rest = (top - bottom - above_cost - below_cost) / static_cast<double>(n);
  Shares s(n, rest);
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] > cmax) s[i] += above_cost / above;
    if (x[i] < cmin) s[i] += below_cost / below;
  }
  return s;
}

Shares equal_split(const WelfareSpec& spec, const Profile& x) {
  return Shares(x.size(), spec.evaluate(x) / static_cast<double>(spec.n()));
}

Shares proportional(const WelfareSpec& spec, const Profile& x) {
  const double w = spec.evaluate(x);
  const double total = sum(x);
  if (total == 0.0) return Shares(x.size(), w / static_cast<double>(x.size()));
  Shares s(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) s[i] = x[i] / total * w;
  return s;
}

SharingRule serial_up_rule(const WelfareSpec& spec) {
  return {"serial_up", [spec](const Profile& x) { return serial_up(spec, x); }};
}

SharingRule serial_down_rule(const WelfareSpec& spec) {
  return {"serial_down", [spec](const Profile& x) { return serial_down(spec, x); }};
}

SharingRule average_returns_rule(const Function1D& f) {
  return {"average_returns", [f](const Profile& x) { return average_returns(f, x); }};
}

SharingRule moving_average(const Guarantee& g_minus, const Guarantee& g_plus, const WelfareSpec& spec) {
  return {"moving_average",
          [g_minus, g_plus, spec](const Profile& x) { return moving_average_rule(g_minus, g_plus, spec, x); }};
}

SharingRule quadratic_transport() { return {"quadratic_transport", quadratic_transport_rule}; }

SharingRule spread(std::vector<double> c) {
  return {"spread", [c = std::move(c)](const Profile& x) { return spread_rule(c, x); }};
}

SharingRule equal_split_rule(const WelfareSpec& spec) {
  return {"equal_split", [spec](const Profile& x) { return equal_split(spec, x); }};
}

SharingRule proportional_rule(const WelfareSpec& spec) {
  return {"proportional", [spec](const Profile& x) { return proportional(spec, x); }};
}

ImpliedGuarantees implied_guarantees(const SharingRule& rule, const WelfareSpec& spec, const Grid& grid) {
  const std::size_t n = spec.n();
  const std::size_t m = grid.size();
  check_evaluation_budget(static_cast<std::uint64_t>(m) * multiset_count(m, n - 1), kDefaultEvaluationCap,
                          "implied guarantees");
  ImpliedGuarantees out{{rule.name + " lower", {}}, {rule.name + " upper", {}}};
  const auto& pts = grid.points();
  Profile x(n);
  for (std::size_t t = 0; t < m; ++t) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for_each_multiset(m, n - 1, [&](std::span<const std::size_t> idx) {
      x[0] = pts[t];
      for (std::size_t j = 0; j < n - 1; ++j) x[j + 1] = pts[idx[j]];
      const double s = rule(x)[0];
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    });
    out.lower.points.emplace_back(pts[t], lo);
    out.upper.points.emplace_back(pts[t], hi);
  }
  return out;
}

}  // namespace commons
