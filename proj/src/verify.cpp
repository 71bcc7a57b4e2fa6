#include "commons/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace commons {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> sample(const Guarantee& g, const Grid& grid) {
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) out[i] = g(grid[i]);
  return out;
}

Profile to_profile(const Grid& grid, std::span<const std::size_t> idx) {
  Profile p(idx.size());
  for (std::size_t j = 0; j < idx.size(); ++j) p[j] = grid[idx[j]];
  std::sort(p.begin(), p.end());
  return p;
}

Profile ascending(Profile p) {
  std::sort(p.begin(), p.end());
  return p;
}

Profile join(double t, const std::vector<double>& rest) {
  Profile p{t};
  p.insert(p.end(), rest.begin(), rest.end());
  return p;
}

void require_interval(const Guarantee& g, const WelfareSpec& spec) {
  if (!(g.interval() == spec.interval())) throw std::invalid_argument("guarantee and spec intervals differ");
}

double guarantee_scale(const std::vector<double>& values) {
  double s = 1.0;
  for (double v : values) s = std::max(s, std::abs(v));
  return s;
}

struct Contact {
  std::vector<double> opponents;
  double slack;
};

/// Best grid opponent plus every hint, each with its slack at type t (grid index i).
std::vector<Contact> contacts_at(const Guarantee& g, const WelfareSpec& spec, const Grid& grid,
                                 const ProfileTable& table, const std::vector<double>& gv, std::size_t i) {
  const std::size_t n = spec.n();
  const double gt = gv[i];
  Contact best{{}, kInf};
  std::vector<std::size_t> idx(n);
  for_each_multiset(grid.size(), n - 1, [&](std::span<const std::size_t> opp) {
    double s = gt;
    idx[0] = i;
    for (std::size_t j = 0; j < n - 1; ++j) {
      s += gv[opp[j]];
      idx[j + 1] = opp[j];
    }
    const double slack = std::abs(table.at(idx) - s);
    if (slack < best.slack) {
      best.slack = slack;
      best.opponents.resize(n - 1);
      for (std::size_t j = 0; j < n - 1; ++j) best.opponents[j] = grid[opp[j]];
    }
  });
  std::vector<Contact> out{best};
  const double t = grid[i];
  for (auto& h : g.contact_hints(t)) {
    if (h.size() != n - 1) continue;
    for (double& v : h) v = spec.interval().admit(v);
    double s = gt;
    for (double v : h) s += g(v);
    out.push_back({h, std::abs(spec.evaluate(join(t, h)) - s)});
  }
  return out;
}

VerificationReport make(std::string check, bool passed, double gap, Profile witness, double tol, std::string note = {}) {
  return {std::move(check), passed, gap, std::move(witness), tol, std::move(note)};
}

}  // namespace

std::string VerificationReport::summary() const {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s: %s  worst_gap=%.6g  tolerance=%.3g", check.c_str(), passed ? "PASS" : "FAIL",
                worst_gap, tolerance);
  std::string s = buf;
  if (!witness.empty()) s += "  witness=" + format_profile(witness);
  if (!note.empty()) s += "  (" + note + ")";
  return s;
}

VerificationReport feasibility_gap(const Guarantee& g, const WelfareSpec& spec, const Grid& grid,
                                   const Tolerances& tol) {
  require_interval(g, spec);
  const ProfileTable table(spec, grid, tol.evaluation_cap);
  const auto gv = sample(g, grid);
  const double sign = g.side() == Side::Lower ? 1.0 : -1.0;
  double worst = kInf;
  Profile witness;
  for_each_multiset(grid.size(), spec.n(), [&](std::span<const std::size_t> idx) {
    double s = 0.0;
    for (std::size_t k : idx) s += gv[k];
    const double gap = sign * (table.at_sorted(idx) - s);
    if (gap < worst) {
      worst = gap;
      witness = to_profile(grid, idx);
    }
  });
  const double t = tol.feasibility * table.scale();
  return make(std::string("feasibility (") + to_string(g.side()) + ")", worst >= -t, worst, witness, t);
}

VerificationReport tightness_slack(const Guarantee& g, const WelfareSpec& spec, const Grid& grid,
                                   const Tolerances& tol) {
  const auto feas = feasibility_gap(g, spec, grid, tol);
  if (!feas.passed) {
    throw std::invalid_argument("tightness is undefined for an infeasible guarantee; " + feas.summary());
  }
  const std::size_t n = spec.n();
  check_evaluation_budget(static_cast<std::uint64_t>(grid.size()) * multiset_count(grid.size(), n - 1),
                          tol.evaluation_cap, "tightness scan");
  const ProfileTable table(spec, grid, tol.evaluation_cap);
  const auto gv = sample(g, grid);
  double worst = -kInf;
  double worst_type = grid[0];
  Profile witness;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto cs = contacts_at(g, spec, grid, table, gv, i);
    const auto best = std::min_element(cs.begin(), cs.end(), [](const Contact& a, const Contact& b) {
      return a.slack < b.slack;
    });
    if (best->slack > worst) {
      worst = best->slack;
      worst_type = grid[i];
      witness = ascending(join(grid[i], best->opponents));
    }
  }
  const double t = tol.tightness * table.scale();
  char type_buf[40];
  std::snprintf(type_buf, sizeof type_buf, "%.10g", worst_type);
  return make("tightness", worst <= t, worst, witness, t,
              worst <= t ? "" : std::string("no contact profile at type ") + type_buf);
}

bool dominates(const Guarantee& g1, const Guarantee& g2, const Grid& grid, double rel_tol) {
  if (g1.side() != g2.side()) throw std::invalid_argument("dominance compares guarantees on the same side");
  const auto a = sample(g1, grid);
  const auto b = sample(g2, grid);
  const double tol = rel_tol * std::max(guarantee_scale(a), guarantee_scale(b));
  const double sign = g1.side() == Side::Lower ? 1.0 : -1.0;
  bool strict = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = sign * (a[i] - b[i]);
    if (d < -tol) return false;
    if (d > tol) strict = true;
  }
  return strict;
}

VerificationReport bracket_check(const Guarantee& g, const WelfareSpec& spec, const ModularityClass& cls,
                                 const Grid& grid, const Tolerances& tol) {
  require_interval(g, spec);
  const Guarantee low = low_guarantee(spec, cls);
  const Guarantee high = high_guarantee(spec, cls);
  const double scale = guarantee_scale(sample(low, grid)) + guarantee_scale(sample(high, grid));
  const double t = tol.ordering * scale;
  const bool is_low = max_deviation(g, low, grid) <= t;
  const bool is_high = max_deviation(g, high, grid) <= t;
  const double lo = spec.interval().low();
  const double hi = spec.interval().high();
  // Supermodular: g_H(L) < g(L) < g_L(L) and g_L(H) < g(H) < g_H(H); submodular swaps g_L and g_H.
  const bool super = g.side() == Side::Lower;
  const Guarantee& below_at_l = super ? high : low;
  const Guarantee& above_at_l = super ? low : high;
  const bool below_eq = super ? is_high : is_low;
  const bool above_eq = super ? is_low : is_high;

  double worst = kInf;
  Profile witness;
  auto link = [&](double x, double smaller, double larger, bool equal) {
    // strict links must clear the tolerance; equality links must stay within it
    const double effective = equal ? t - std::abs(larger - smaller) : (larger - smaller) - t;
    if (effective < worst) {
      worst = effective;
      witness = {x};
    }
  };
  link(lo, below_at_l(lo), g(lo), below_eq);
  link(lo, g(lo), above_at_l(lo), above_eq);
  // at H the roles of g_L and g_H swap
  link(hi, above_at_l(hi), g(hi), above_eq);
  link(hi, g(hi), below_at_l(hi), below_eq);
  std::string note = is_low ? "equals g_L" : is_high ? "equals g_H" : "";
  return make("bracket", worst >= 0.0, worst, witness, t, note);
}

VerificationReport growth_order_check(const Guarantee& g, const WelfareSpec& spec, const ModularityClass& cls,
                                      const Grid& grid, const Tolerances& tol) {
  require_interval(g, spec);
  const auto lo = sample(low_guarantee(spec, cls), grid);
  const auto hi = sample(high_guarantee(spec, cls), grid);
  const auto gv = sample(g, grid);
  const double t = tol.ordering * (guarantee_scale(lo) + guarantee_scale(hi));
  // supermodular: inc g_L <= inc g <= inc g_H; submodular: inc g_H <= inc g <= inc g_L
  const bool super = g.side() == Side::Lower;
  const auto& slow = super ? lo : hi;
  const auto& fast = super ? hi : lo;
  double worst = kInf;
  Profile witness;
  for (std::size_t i = 0; i < gv.size(); ++i) {
    for (std::size_t j = i + 1; j < gv.size(); ++j) {
      const double inc = gv[j] - gv[i];
      const double m = std::min(inc - (slow[j] - slow[i]), (fast[j] - fast[i]) - inc);
      if (m < worst) {
        worst = m;
        witness = {grid[i], grid[j]};
      }
    }
  }
  return make("growth order", worst >= -t, worst, witness, t);
}

VerificationReport sandwich_check(const Guarantee& g_minus, const Guarantee& g_plus, const WelfareSpec& spec,
                                  const Grid& grid, const Tolerances& tol) {
  require_interval(g_minus, spec);
  require_interval(g_plus, spec);
  double worst = kInf;
  Profile witness;
  double scale = 1.0;
  for (double x : grid.points()) {
    const double u = spec.unanimity_value(x);
    const double m = std::min(u - g_minus(x), g_plus(x) - u);
    scale = std::max(scale, std::abs(u));
    if (m < worst) {
      worst = m;
      witness = {x};
    }
  }
  const double t = tol.ordering * scale;
  return make("sandwich", worst >= -t, worst, witness, t);
}

VerificationReport contact_derivative_check(const Guarantee& g, const WelfareSpec& spec, const Grid& grid,
                                            const Tolerances& tol) {
  require_interval(g, spec);
  const ProfileTable table(spec, grid, tol.evaluation_cap);
  const auto gv = sample(g, grid);
  const double contact_tol = tol.tightness * table.scale();
  const double t = tol.derivative * table.scale();
  const double lo = spec.interval().low();
  const double hi = spec.interval().high();
  const double sign = g.side() == Side::Lower ? 1.0 : -1.0;
  double worst = kInf;
  Profile witness;
  std::size_t checked = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid[i];
    const Slope dg = g.derivative(x);
    for (const auto& c : contacts_at(g, spec, grid, table, gv, i)) {
      if (c.slack > contact_tol) continue;
      ++checked;
      const Slope dw = spec.partial_derivative(0, join(x, c.opponents));
      // W(s, y) - sum g is minimised (lower) at s = x: right slope >= 0, left slope <= 0
      double m = kInf;
      if (x < hi) m = std::min(m, sign * (dw.right - dg.right));
      if (x > lo) m = std::min(m, sign * (dg.left - dw.left));
      if (m < worst) {
        worst = m;
        witness = join(x, c.opponents);
      }
    }
  }
  if (checked == 0) return make("contact derivative", false, -kInf, {}, t, "no contact profiles found");
  return make("contact derivative", worst >= -t, worst, witness, t, std::to_string(checked) + " contacts");
}

std::size_t unanimity_touch_count(const Guarantee& g, const WelfareSpec& spec, const Grid& grid,
                                  const Tolerances& tol) {
  require_interval(g, spec);
  std::vector<double> una(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) una[i] = spec.unanimity_value(grid[i]);
  const double t = tol.tightness * guarantee_scale(una);
  std::size_t clusters = 0;
  bool inside = false;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const bool touch = std::abs(g(grid[i]) - una[i]) <= t;
    if (touch && !inside) ++clusters;
    inside = touch;
  }
  return clusters;
}

VerificationReport rank_growth_check(const std::vector<Function1D>& w, const Grid& grid, ModularityTag direction,
                                     double rel_tol) {
  if (direction != ModularityTag::Supermodular && direction != ModularityTag::Submodular) {
    throw std::invalid_argument("rank growth direction must be supermodular or submodular");
  }
  const double sign = direction == ModularityTag::Supermodular ? 1.0 : -1.0;
  std::vector<std::vector<double>> vals(w.size(), std::vector<double>(grid.size()));
  double scale = 1.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      vals[k][i] = w[k](grid[i]);
      scale = std::max(scale, std::abs(vals[k][i]));
    }
  }
  double worst = kInf;
  Profile witness;
  for (std::size_t k = 0; k + 1 < w.size(); ++k) {
    for (std::size_t z = 0; z < grid.size(); ++z) {
      for (std::size_t y = z + 1; y < grid.size(); ++y) {
        const double m = sign * ((vals[k + 1][y] - vals[k + 1][z]) - (vals[k][y] - vals[k][z]));
        if (m < worst) {
          worst = m;
          witness = {grid[z], grid[y]};
        }
      }
    }
  }
  const double t = rel_tol * scale;
  if (w.size() < 2) worst = 0.0;
  return make(std::string("rank growth (") + to_string(direction) + ")", worst >= -t, worst, witness, t);
}

Profile random_profile(const WelfareSpec& spec, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(spec.interval().low(), spec.interval().high());
  Profile x(spec.n());
  for (double& v : x) v = u(rng);
  return x;
}

VerificationReport symmetry_audit(const WelfareSpec& spec, std::mt19937_64& rng, std::size_t profiles) {
  double worst = 0.0;
  Profile witness;
  for (std::size_t p = 0; p < profiles; ++p) {
    Profile x = random_profile(spec, rng);
    const double w = spec.evaluate(x);
    for (int k = 0; k < 20; ++k) {
      std::shuffle(x.begin(), x.end(), rng);
      const double d = std::abs(spec.evaluate(x) - w);
      if (d > worst || witness.empty()) {
        worst = std::max(worst, d);
        witness = ascending(x);
      }
    }
  }
  return make("symmetry audit", worst == 0.0, worst, witness, 0.0);
}

VerificationReport budget_balance_check(const SharingRule& rule, const WelfareSpec& spec, std::mt19937_64& rng,
                                        std::size_t profiles, double rel_tol) {
  double worst = 0.0;
  double tol_used = 0.0;
  Profile witness;
  bool ok = true;
  for (std::size_t p = 0; p < profiles; ++p) {
    const Profile x = random_profile(spec, rng);
    const Shares s = rule(x);
    const double w = spec.evaluate(x);
    const double total = std::accumulate(s.begin(), s.end(), 0.0);
    const double t = rel_tol * std::max(1.0, std::abs(w));
    const double d = std::abs(total - w);
    if (d > t) ok = false;
    if (d >= worst) {
      worst = d;
      tol_used = t;
      witness = ascending(x);
    }
  }
  return make("budget balance (" + rule.name + ")", ok, worst, witness, tol_used);
}

VerificationReport rule_symmetry_check(const SharingRule& rule, const WelfareSpec& spec, std::mt19937_64& rng,
                                       std::size_t profiles, double rel_tol) {
  double worst = 0.0;
  Profile witness;
  bool ok = true;
  double tol_used = 0.0;
  for (std::size_t p = 0; p < profiles; ++p) {
    const Profile x = random_profile(spec, rng);
    const Shares s = rule(x);
    std::vector<std::size_t> perm(x.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Profile y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[perm[i]];
    const Shares sy = rule(y);
    const double t = rel_tol * std::max(1.0, std::abs(spec.evaluate(x)));
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double d = std::abs(sy[i] - s[perm[i]]);
      if (d > t) ok = false;
      if (d >= worst) {
        worst = d;
        tol_used = t;
        witness = ascending(x);
      }
    }
  }
  return make("rule symmetry (" + rule.name + ")", ok, worst, witness, tol_used);
}

}  // namespace commons
