#include "commons/guarantees.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace commons {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

Profile with_opponents(double x, std::span<const double> opponents) {
  Profile p;
  p.reserve(opponents.size() + 1);
  p.push_back(x);
  p.insert(p.end(), opponents.begin(), opponents.end());
  return p;
}

std::vector<double> repeat(double v, std::size_t k) { return std::vector<double>(k, v); }

std::vector<double> concat(std::vector<double> a, const std::vector<double>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

/// Inverse of a strictly monotone function by bisection on its domain.
double invert(const Function1D& theta, double y) {
  double lo = theta.domain().low();
  double hi = theta.domain().high();
  const bool inc = theta(hi) > theta(lo);
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if ((theta(mid) < y) == inc) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

Side side_for_shape(const Function1D& f) {
  if (f.is_convex()) return Side::Lower;
  if (f.is_concave()) return Side::Upper;
  throw std::invalid_argument("F must be convex or concave, got " + f.to_string());
}

void check_sum_domain(const Function1D& f, std::size_t n, TypeInterval interval) {
  const double k = static_cast<double>(n);
  if (!f.domain().contains(k * interval.low()) || !f.domain().contains(k * interval.high())) {
    throw std::invalid_argument("F must be defined on [n low, n high]");
  }
}

}  // namespace

const char* to_string(Side side) { return side == Side::Lower ? "lower" : "upper"; }

Side opposite(Side side) { return side == Side::Lower ? Side::Upper : Side::Lower; }

Guarantee::Guarantee(Side side, TypeInterval interval, std::string label, Params params, Eval eval,
                     Derivative derivative, ContactHint hint)
    : side_(side),
      interval_(interval),
      label_(std::move(label)),
      params_(std::move(params)),
      eval_(std::move(eval)),
      derivative_(std::move(derivative)),
      hint_(std::move(hint)) {
  if (!eval_) throw std::invalid_argument("guarantee without an evaluator");
}

double Guarantee::operator()(double x) const { return eval_(interval_.admit(x)); }

Slope Guarantee::derivative(double x) const {
  x = interval_.admit(x);
  if (derivative_) return derivative_(x);
  const double h = 1e-6 * interval_.width();
  const double gx = eval_(x);
  const bool has_left = x - h >= interval_.low();
  const bool has_right = x + h <= interval_.high();
  const double left = has_left ? (gx - eval_(x - h)) / h : (eval_(x + h) - gx) / h;
  const double right = has_right ? (eval_(x + h) - gx) / h : left;
  return {left, right};
}

std::vector<std::vector<double>> Guarantee::contact_hints(double t) const {
  if (!hint_) return {};
  return hint_(interval_.admit(t));
}

Guarantee Guarantee::relabeled(std::string label) const {
  Guarantee g = *this;
  g.label_ = std::move(label);
  return g;
}

Guarantee Guarantee::with_side(Side side) const {
  Guarantee g = *this;
  g.side_ = side;
  return g;
}

Side side_opposite_unanimity(const ModularityClass& cls, Side additive_side) {
  switch (cls.tag) {
    case ModularityTag::Supermodular: return Side::Lower;
    case ModularityTag::Submodular: return Side::Upper;
    case ModularityTag::Additive: return additive_side;
    case ModularityTag::Neither: break;
  }
  throw std::invalid_argument(
      "W is neither supermodular nor submodular: the unanimity guarantee is not a guarantee on either side; "
      "use quota_guarantees or a custom guarantee and verify it numerically");
}

Guarantee unanimity_guarantee(const WelfareSpec& spec, const ModularityClass& cls, std::optional<Side> additive_side) {
  const Side side = opposite(side_opposite_unanimity(cls, opposite(additive_side.value_or(Side::Lower))));
  const std::size_t n = spec.n();
  return Guarantee(
      side, spec.interval(), "una", {}, [spec](double t) { return spec.unanimity_value(t); }, {},
      [n](double t) { return std::vector<std::vector<double>>{repeat(t, n - 1)}; });
}

Guarantee simple_guarantee(const WelfareSpec& spec, std::vector<double> c, Side side) {
  const std::size_t n = spec.n();
  if (c.size() + 1 != n) {
    throw ShapeError("simple guarantee needs n-1 = " + std::to_string(n - 1) + " benchmark types, got " +
                     std::to_string(c.size()));
  }
  for (double& v : c) v = spec.interval().admit(v);
  double constant = 0.0;
  for (double cl : c) constant += spec.evaluate(with_opponents(cl, c));
  constant /= static_cast<double>(n);

  Guarantee::Params params;
  for (std::size_t l = 0; l < c.size(); ++l) params.emplace_back("c" + std::to_string(l + 1), c[l]);
  return Guarantee(
      side, spec.interval(), "g_c", std::move(params),
      [spec, c, constant](double x) { return spec.evaluate(with_opponents(x, c)) - constant; },
      [spec, c](double x) { return spec.partial_derivative(0, with_opponents(x, c)); },
      [c](double) { return std::vector<std::vector<double>>{c}; });
}

Guarantee simple_guarantee(const WelfareSpec& spec, std::vector<double> c, const ModularityClass& cls) {
  return simple_guarantee(spec, std::move(c), side_opposite_unanimity(cls));
}

Guarantee stand_alone_guarantee(const WelfareSpec& spec, double c0, Side side) {
  const auto& iv = spec.interval();
  c0 = iv.admit(c0);
  std::string label = c0 == iv.low() ? "g_L" : c0 == iv.high() ? "g_H" : "g_" + num(c0);
  Guarantee g = simple_guarantee(spec, repeat(c0, spec.n() - 1), side).relabeled(std::move(label));
  return Guarantee(g.side(), g.interval(), g.label(), {{"c0", c0}}, [g](double x) { return g(x); },
                   [g](double x) { return g.derivative(x); }, [g](double t) { return g.contact_hints(t); });
}

Guarantee stand_alone_guarantee(const WelfareSpec& spec, double c0, const ModularityClass& cls) {
  return stand_alone_guarantee(spec, c0, side_opposite_unanimity(cls));
}

Guarantee low_guarantee(const WelfareSpec& spec, const ModularityClass& cls) {
  return stand_alone_guarantee(spec, spec.interval().low(), cls);
}

Guarantee high_guarantee(const WelfareSpec& spec, const ModularityClass& cls) {
  return stand_alone_guarantee(spec, spec.interval().high(), cls);
}

Guarantee lh_guarantee(const Function1D& f, std::size_t n, std::size_t ell, std::size_t h, TypeInterval interval) {
  if (n < 2) throw std::invalid_argument("n must be at least 2");
  if (ell + h + 1 != n) {
    throw std::invalid_argument("need ell + h = n - 1, got ell=" + std::to_string(ell) + " h=" + std::to_string(h));
  }
  check_sum_domain(f, n, interval);
  const Side side = side_for_shape(f);
  const double lo = interval.low();
  const double hi = interval.high();
  const double l = static_cast<double>(ell);
  const double k = static_cast<double>(h);
  const double shift = l * lo + k * hi;
  const double constant = (l * f((l + 1.0) * lo + k * hi) + k * f(l * lo + (k + 1.0) * hi)) / static_cast<double>(n);
  std::string label = ell + 1 == n ? "g_L" : h + 1 == n ? "g_H" : "g_{" + std::to_string(ell) + "," + std::to_string(h) + "}";
  const std::vector<double> contact = concat(repeat(lo, ell), repeat(hi, h));
  return Guarantee(
      side, interval, std::move(label), {{"ell", l}, {"h", k}},
      [f, shift, constant](double x) { return f(x + shift) - constant; },
      [f, shift](double x) { return f.derivative(x + shift); },
      [contact](double) { return std::vector<std::vector<double>>{contact}; });
}

Guarantee tangent_guarantee(const Function1D& f, std::size_t n, double a, TypeInterval interval,
                            std::optional<double> slope) {
  if (n < 2) throw std::invalid_argument("n must be at least 2");
  check_sum_domain(f, n, interval);
  a = interval.admit(a);
  const Side side = side_for_shape(f);
  const double nd = static_cast<double>(n);
  const double lo = interval.low();
  const double hi = interval.high();
  const Slope df = f.derivative(nd * a);
  const double s = slope.value_or(df.mid());
  if (slope && !df.contains(s, 1e-12 * std::max(1.0, std::abs(s)))) {
    throw std::invalid_argument("tangent slope " + num(s) + " outside F's one-sided derivatives [" + num(df.left) +
                                ", " + num(df.right) + "] at n a");
  }
  const double una_a = f(nd * a) / nd;
  auto theta = [una_a, s, a](double x) { return una_a + s * (x - a); };

  // [switch_lo, switch_hi]: types whose tangent contact (x, y, ..., y), y = (na - x)/(n-1), stays in [L,H]
  const double switch_hi = nd * a - (nd - 1.0) * lo;
  const double switch_lo = nd * a - (nd - 1.0) * hi;
  const double theta_lo = theta(lo);
  const double theta_hi = theta(hi);
  const double tail_lo = (nd - 1.0) * lo;
  const double tail_hi = (nd - 1.0) * hi;

  auto eval = [=](double x) {
    if (x > switch_hi) return f(x + tail_lo) - (nd - 1.0) * theta_lo;
    if (x < switch_lo) return f(x + tail_hi) - (nd - 1.0) * theta_hi;
    return theta(x);
  };
  auto deriv = [=](double x) -> Slope {
    const Slope up = x >= switch_hi ? f.derivative(x + tail_lo) : Slope{s, s};
    const Slope down = x <= switch_lo ? f.derivative(x + tail_hi) : Slope{s, s};
    if (x > switch_hi) return up;
    if (x < switch_lo) return down;
    // at a switch point the two branches meet
    Slope out{s, s};
    if (x == switch_hi) out.right = up.right;
    if (x == switch_lo) out.left = down.left;
    return out;
  };
  auto hint = [=](double x) {
    if (x > switch_hi) return std::vector<std::vector<double>>{repeat(lo, n - 1)};
    if (x < switch_lo) return std::vector<std::vector<double>>{repeat(hi, n - 1)};
    const double y = std::clamp((nd * a - x) / (nd - 1.0), lo, hi);
    return std::vector<std::vector<double>>{repeat(y, n - 1)};
  };
  return Guarantee(side, interval, "tangent " + num(a), {{"a", a}, {"slope", s}}, eval, deriv, hint);
}

std::optional<SubstituteDecomposition> substitute_decomposition(const WelfareSpec& spec) {
  std::optional<Function1D> f;
  std::optional<Function1D> additive;
  auto add = [&](const Function1D& w) { additive = additive ? additive->plus(w) : w; };
  for (const auto& term : spec.terms()) {
    if (const auto* s = std::get_if<SubstituteInputs>(&term)) {
      if (f) return std::nullopt;
      f = s->f;
    } else if (const auto* a = std::get_if<SeparableAdditive>(&term)) {
      add(a->w0);
    } else if (const auto* r = std::get_if<RankSeparable>(&term)) {
      // equal weights on every rank are additive
      for (const auto& w : r->w) {
        if (w.to_string() != r->w.front().to_string() || !w.is_piecewise_polynomial()) return std::nullopt;
      }
      add(r->w.front());
    } else {
      return std::nullopt;
    }
  }
  if (!f) return std::nullopt;
  return SubstituteDecomposition{*f, additive};
}

namespace {

template <class Build>
Guarantee via_decomposition(const WelfareSpec& spec, Build build, const char* what) {
  if (auto d = substitute_decomposition(spec)) {
    Guarantee g = build(d->f, spec.interval());
    return d->additive ? shift_guarantee(g, *d->additive) : g;
  }
  if (spec.terms().size() == 1) {
    if (const auto* t = std::get_if<Transformed>(&spec.terms().front())) {
      if (auto d = substitute_decomposition(*t->base)) {
        Guarantee g = build(d->f, t->base->interval());
        if (d->additive) g = shift_guarantee(g, *d->additive);
        return transform_guarantee(g, t->theta);
      }
    }
  }
  throw std::invalid_argument(std::string(what) +
                              " needs W = F(x_N) (optionally plus an additive part, or transformed)");
}

}  // namespace

Guarantee lh_guarantee(const WelfareSpec& spec, std::size_t ell, std::size_t h) {
  const std::size_t n = spec.n();
  return via_decomposition(
      spec, [&](const Function1D& f, TypeInterval iv) { return lh_guarantee(f, n, ell, h, iv); }, "lh guarantee");
}

Guarantee tangent_guarantee(const WelfareSpec& spec, double a, std::optional<double> slope) {
  const std::size_t n = spec.n();
  if (spec.terms().size() == 1 && std::holds_alternative<Transformed>(spec.terms().front())) {
    const auto& t = std::get<Transformed>(spec.terms().front());
    a = t.theta(spec.interval().admit(a));
  }
  return via_decomposition(
      spec, [&](const Function1D& f, TypeInterval iv) { return tangent_guarantee(f, n, a, iv, slope); },
      "tangent guarantee");
}

QuotaGuarantees quota_guarantees(const Function1D& f, std::size_t n, std::size_t q, double p_minus, double p_plus) {
  if (q < 2 || q + 1 > n) throw std::invalid_argument("quota q must satisfy 2 <= q <= n-1");
  if (!f.is_strictly_increasing()) throw std::invalid_argument("quota production F must be strictly increasing");
  const TypeInterval iv = f.domain();
  p_minus = iv.admit(p_minus);
  p_plus = iv.admit(p_plus);
  const double nd = static_cast<double>(n);
  const double qd = static_cast<double>(q);
  const double lo = iv.low();
  const double base_minus = f(p_minus);
  const double base_plus = f(p_plus);

  // Lower side: types below the benchmark are charged for dragging x^q down.
  Guarantee lower(
      Side::Lower, iv, "quota lower", {{"q", qd}, {"p", p_minus}},
      [=](double x) { return base_minus / nd + std::min(0.0, f(x) - base_minus) / (nd - qd + 1.0); },
      [=](double x) -> Slope {
        const Slope d = f.derivative(x);
        const double k = 1.0 / (nd - qd + 1.0);
        if (x < p_minus) return {k * d.left, k * d.right};
        if (x > p_minus) return {0.0, 0.0};
        return {k * d.left, 0.0};
      },
      [=](double x) {
        if (x >= p_minus) return std::vector<std::vector<double>>{repeat(p_minus, n - 1)};
        return std::vector<std::vector<double>>{concat(repeat(x, n - q), repeat(p_minus, q - 1))};
      });

  Guarantee upper(
      Side::Upper, iv, "quota upper", {{"q", qd}, {"p", p_plus}},
      [=](double x) { return base_plus / nd + std::max(0.0, f(x) - base_plus) / qd; },
      [=](double x) -> Slope {
        const Slope d = f.derivative(x);
        if (x > p_plus) return {d.left / qd, d.right / qd};
        if (x < p_plus) return {0.0, 0.0};
        return {0.0, d.right / qd};
      },
      [=](double x) {
        if (x >= p_plus) return std::vector<std::vector<double>>{concat(repeat(x, q - 1), repeat(lo, n - q))};
        return std::vector<std::vector<double>>{repeat(p_plus, n - 1)};
      });
  return {std::move(lower), std::move(upper)};
}

Guarantee transform_guarantee(const Guarantee& g, const Function1D& theta) {
  const bool inc = theta.is_strictly_increasing();
  if (!inc && !theta.is_strictly_decreasing()) throw std::invalid_argument("theta must be strictly monotone");
  const TypeInterval& target = g.interval();
  const double a = theta(theta.domain().low());
  const double b = theta(theta.domain().high());
  const double tol = 1e-9 * std::max(1.0, target.width());
  if (std::abs(std::min(a, b) - target.low()) > tol || std::abs(std::max(a, b) - target.high()) > tol) {
    throw std::invalid_argument("theta must map its domain onto the guarantee's interval");
  }
  return Guarantee(
      g.side(), theta.domain(), g.label(), g.params(), [g, theta](double x) { return g(g.interval().admit(theta(x))); },
      [g, theta, inc](double x) -> Slope {
        const Slope outer = g.derivative(g.interval().admit(theta(x)));
        const Slope inner = theta.derivative(x);
        return inc ? Slope{outer.left * inner.left, outer.right * inner.right}
                   : Slope{outer.right * inner.left, outer.left * inner.right};
      },
      g.has_contact_hint() ? Guarantee::ContactHint([g, theta](double x) {
        auto hints = g.contact_hints(g.interval().admit(theta(x)));
        for (auto& h : hints)
          for (double& v : h) v = invert(theta, v);
        return hints;
      })
                           : Guarantee::ContactHint{});
}

Guarantee negate_guarantee(const Guarantee& g) {
  return Guarantee(
      opposite(g.side()), g.interval(), "-" + g.label(), g.params(), [g](double x) { return -g(x); },
      [g](double x) -> Slope {
        const Slope d = g.derivative(x);
        return {-d.left, -d.right};
      },
      g.has_contact_hint() ? Guarantee::ContactHint([g](double x) { return g.contact_hints(x); })
                           : Guarantee::ContactHint{});
}

Guarantee chore_guarantee(const Guarantee& g) {
  const TypeInterval& iv = g.interval();
  const Function1D reflect = Function1D::linear({-iv.high(), -iv.low()}, -1.0, 0.0);
  return negate_guarantee(transform_guarantee(g, reflect)).relabeled("chore " + g.label());
}

Guarantee shift_guarantee(const Guarantee& g, const Function1D& w0) {
  if (!(w0.domain() == g.interval())) throw std::invalid_argument("shift must live on the guarantee's interval");
  return Guarantee(
      g.side(), g.interval(), g.label(), g.params(), [g, w0](double x) { return g(x) + w0(x); },
      [g, w0](double x) -> Slope {
        const Slope a = g.derivative(x);
        const Slope b = w0.derivative(x);
        return {a.left + b.left, a.right + b.right};
      },
      g.has_contact_hint() ? Guarantee::ContactHint([g](double x) { return g.contact_hints(x); })
                           : Guarantee::ContactHint{});
}

Guarantee mixture(std::vector<Guarantee> parts, std::vector<double> weights) {
  if (parts.empty() || parts.size() != weights.size()) {
    throw std::invalid_argument("mixture needs one weight per guarantee");
  }
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw std::invalid_argument("mixture weights must be nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("mixture weights must sum to 1");
  std::string label = "mix(";
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (parts[k].side() != parts.front().side() || !(parts[k].interval() == parts.front().interval())) {
      throw std::invalid_argument("mixture parts must share side and interval");
    }
    label += (k ? "," : "") + parts[k].label();
  }
  label += ")";
  Guarantee::Params params;
  for (std::size_t k = 0; k < weights.size(); ++k) params.emplace_back("w" + std::to_string(k + 1), weights[k]);
  const Side side = parts.front().side();
  const TypeInterval iv = parts.front().interval();
  return Guarantee(
      side, iv, std::move(label), std::move(params),
      [parts, weights](double x) {
        double acc = 0.0;
        for (std::size_t k = 0; k < parts.size(); ++k) acc += weights[k] * parts[k](x);
        return acc;
      },
      [parts, weights](double x) {
        Slope acc{0.0, 0.0};
        for (std::size_t k = 0; k < parts.size(); ++k) {
          const Slope d = parts[k].derivative(x);
          acc.left += weights[k] * d.left;
          acc.right += weights[k] * d.right;
        }
        return acc;
      });
}

double max_deviation(const Guarantee& g1, const Guarantee& g2, const Grid& grid) {
  double worst = 0.0;
  for (double t : grid.points()) worst = std::max(worst, std::abs(g1(t) - g2(t)));
  return worst;
}

GuaranteeCurve sample_curve(const Guarantee& g, const Grid& grid) {
  GuaranteeCurve curve{g.label(), {}};
  curve.points.reserve(grid.size());
  for (double t : grid.points()) curve.points.emplace_back(t, g(t));
  return curve;
}

}  // namespace commons
