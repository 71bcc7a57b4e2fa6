#include "commons/welfare.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "commons/grid.hpp"
#include "commons/profile_table.hpp"

namespace commons {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_covers(const Function1D& f, double lo, double hi, const char* what) {
  if (!f.domain().contains(lo) || !f.domain().contains(hi)) {
    throw std::invalid_argument(std::string(what) + " must be defined on [" + std::to_string(lo) + ", " +
                                std::to_string(hi) + "], got " + f.to_string());
  }
}

Slope add(Slope a, Slope b) { return {a.left + b.left, a.right + b.right}; }

}  // namespace

WelfareSpec::WelfareSpec(TypeInterval interval, std::size_t n, std::vector<WelfareTerm> terms, std::string name)
    : interval_(interval), n_(n), terms_(std::move(terms)), name_(std::move(name)) {
  if (n_ < 2) throw std::invalid_argument("a commons needs n >= 2 agents");
  if (terms_.empty()) throw std::invalid_argument("welfare spec needs at least one term");
  const double lo = interval_.low();
  const double hi = interval_.high();
  const double nd = static_cast<double>(n_);
  for (const auto& term : terms_) {
    std::visit(overloaded{
                   [&](const SubstituteInputs& t) { require_covers(t.f, nd * lo, nd * hi, "substitute-inputs f"); },
                   [&](const RankSeparable& t) {
                     if (t.w.size() != n_) {
                       throw std::invalid_argument("rank-separable term needs " + std::to_string(n_) +
                                                   " rank functions, got " + std::to_string(t.w.size()));
                     }
                     for (const auto& w : t.w) require_covers(w, lo, hi, "rank function");
                   },
                   [&](const SeparableAdditive& t) { require_covers(t.w0, lo, hi, "additive w0"); },
                   [&](const Transformed& t) {
                     if (!t.base) throw std::invalid_argument("transformed term without a base spec");
                     if (t.base->n() != n_) throw std::invalid_argument("transformed base has a different n");
                     require_covers(t.theta, lo, hi, "transform theta");
                     const double a = t.theta(lo);
                     const double b = t.theta(hi);
                     const auto& bi = t.base->interval();
                     const bool inc = t.theta.is_strictly_increasing();
                     const bool dec = t.theta.is_strictly_decreasing();
                     if (!inc && !dec) throw std::invalid_argument("transform theta must be strictly monotone");
                     const double img_lo = inc ? a : b;
                     const double img_hi = inc ? b : a;
                     const double tol = 1e-9 * std::max(1.0, bi.width());
                     if (std::abs(img_lo - bi.low()) > tol || std::abs(img_hi - bi.high()) > tol) {
                       throw std::invalid_argument("transform theta must map the interval onto the base interval");
                     }
                   },
                   [&](const Custom& t) {
                     if (!t.evaluate) throw std::invalid_argument("custom term without an evaluator");
                   },
               },
               term);
  }
}

Profile WelfareSpec::sorted_checked(const Profile& x) const {
  if (x.size() != n_) {
    throw ShapeError("profile has " + std::to_string(x.size()) + " entries, spec expects n = " + std::to_string(n_));
  }
  Profile s(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) s[i] = interval_.admit(x[i]);
  std::sort(s.begin(), s.end());
  return s;
}

double WelfareSpec::evaluate(const Profile& x) const { return evaluate_sorted(sorted_checked(x)); }

double WelfareSpec::evaluate_sorted(std::span<const double> xs) const {
  double total = 0.0;
  for (const auto& term : terms_) {
    total += std::visit(overloaded{
                            [&](const SubstituteInputs& t) {
                              double sum = 0.0;
                              for (double v : xs) sum += v;
                              return t.f(sum);
                            },
                            [&](const RankSeparable& t) {
                              double acc = 0.0;
                              const std::size_t n = xs.size();
                              for (std::size_t k = 0; k < n; ++k) acc += t.w[k](xs[n - 1 - k]);
                              return acc;
                            },
                            [&](const SeparableAdditive& t) {
                              double acc = 0.0;
                              for (double v : xs) acc += t.w0(v);
                              return acc;
                            },
                            [&](const Transformed& t) {
                              std::vector<double> z(xs.size());
                              for (std::size_t i = 0; i < xs.size(); ++i) z[i] = t.base->interval().admit(t.theta(xs[i]));
                              std::sort(z.begin(), z.end());
                              return t.base->evaluate_sorted(z);
                            },
                            [&](const Custom& t) { return t.evaluate(xs); },
                        },
                        term);
  }
  return total;
}

double WelfareSpec::unanimity_value(double t) const {
  t = interval_.admit(t);
  const std::vector<double> diag(n_, t);
  return evaluate_sorted(diag) / static_cast<double>(n_);
}

Slope WelfareSpec::partial_derivative(std::size_t index, const Profile& x) const {
  if (index >= n_) throw ShapeError("agent index out of range");
  const Profile xs = sorted_checked(x);
  const double xi = interval_.admit(x[index]);
  Slope total{0.0, 0.0};
  for (const auto& term : terms_) {
    const Slope s = std::visit(
        overloaded{
            [&](const SubstituteInputs& t) {
              double sum = 0.0;
              for (double v : xs) sum += v;
              return t.f.derivative(sum);
            },
            [&](const RankSeparable& t) {
              // Ties: moving right makes x_i the top of its tie block, moving left the bottom.
              std::size_t greater = 0;
              std::size_t less = 0;
              for (double v : xs) {
                if (v > xi) ++greater;
                if (v < xi) ++less;
              }
              const std::size_t rank_right = greater;         // 0-based rank, 0 = largest
              const std::size_t rank_left = n_ - 1 - less;
              return Slope{t.w[rank_left].derivative(xi).left, t.w[rank_right].derivative(xi).right};
            },
            [&](const SeparableAdditive& t) { return t.w0.derivative(xi); },
            [&](const Transformed& t) {
              Profile z(x.size());
              for (std::size_t i = 0; i < x.size(); ++i) z[i] = t.base->interval().admit(t.theta(interval_.admit(x[i])));
              const Slope inner = t.base->partial_derivative(index, z);
              const Slope d = t.theta.derivative(xi);
              const bool increasing = d.mid() >= 0.0;
              return increasing ? Slope{inner.left * d.left, inner.right * d.right}
                                : Slope{inner.right * d.left, inner.left * d.right};
            },
            [&](const Custom& t) {
              const double h = 1e-6 * interval_.width();
              auto at = [&](double v) {
                Profile y(x.begin(), x.end());
                y[index] = v;
                std::sort(y.begin(), y.end());
                return t.evaluate(y);
              };
              double d;
              if (xi - h < interval_.low()) {
                d = (at(xi + h) - at(xi)) / h;
              } else if (xi + h > interval_.high()) {
                d = (at(xi) - at(xi - h)) / h;
              } else {
                d = (at(xi + h) - at(xi - h)) / (2.0 * h);
              }
              return Slope{d, d};
            },
        },
        term);
    total = add(total, s);
  }
  return total;
}

std::vector<double> WelfareSpec::coordinate_kinks() const {
  std::vector<double> out;
  for (const auto& term : terms_) {
    std::visit(overloaded{
                   [&](const SubstituteInputs&) {},
                   [&](const RankSeparable& t) {
                     for (const auto& w : t.w) {
                       auto b = w.interior_breakpoints();
                       out.insert(out.end(), b.begin(), b.end());
                     }
                   },
                   [&](const SeparableAdditive& t) {
                     auto b = t.w0.interior_breakpoints();
                     out.insert(out.end(), b.begin(), b.end());
                   },
                   [&](const Transformed& t) {
                     // pull base kinks back through theta by bisection
                     for (double z : t.base->coordinate_kinks()) {
                       double lo = interval_.low();
                       double hi = interval_.high();
                       const bool inc = t.theta(hi) > t.theta(lo);
                       for (int it = 0; it < 200; ++it) {
                         const double mid = 0.5 * (lo + hi);
                         if ((t.theta(mid) < z) == inc) lo = mid; else hi = mid;
                       }
                       out.push_back(0.5 * (lo + hi));
                     }
                     auto b = t.theta.interior_breakpoints();
                     out.insert(out.end(), b.begin(), b.end());
                   },
                   [&](const Custom& t) { out.insert(out.end(), t.coordinate_kinks.begin(), t.coordinate_kinks.end()); },
               },
               term);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<double> WelfareSpec::sum_kinks() const {
  std::vector<double> out;
  for (const auto& term : terms_) {
    if (const auto* t = std::get_if<SubstituteInputs>(&term)) {
      auto b = t->f.interior_breakpoints();
      out.insert(out.end(), b.begin(), b.end());
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

const Function1D* WelfareSpec::substitute_function() const {
  if (terms_.size() != 1) return nullptr;
  if (const auto* t = std::get_if<SubstituteInputs>(&terms_.front())) return &t->f;
  return nullptr;
}

std::optional<std::vector<Function1D>> WelfareSpec::rank_weights() const {
  std::optional<std::vector<Function1D>> acc;
  auto add_to = [&](std::size_t k, const Function1D& f) {
    if (!acc) {
      acc.emplace(n_, Function1D::polynomial(interval_, {0.0}));
    }
    (*acc)[k] = (*acc)[k].plus(f);
  };
  for (const auto& term : terms_) {
    if (const auto* t = std::get_if<RankSeparable>(&term)) {
      for (std::size_t k = 0; k < n_; ++k) add_to(k, t->w[k]);
    } else if (const auto* a = std::get_if<SeparableAdditive>(&term)) {
      for (std::size_t k = 0; k < n_; ++k) add_to(k, a->w0);
    } else {
      return std::nullopt;
    }
  }
  return acc;
}

WelfareSpec WelfareSpec::plus(WelfareTerm term, std::string name) const {
  auto terms = terms_;
  terms.push_back(std::move(term));
  return WelfareSpec(interval_, n_, std::move(terms), name.empty() ? name_ : std::move(name));
}

const char* to_string(ModularityTag tag) {
  switch (tag) {
    case ModularityTag::Supermodular: return "supermodular";
    case ModularityTag::Submodular: return "submodular";
    case ModularityTag::Additive: return "additive";
    case ModularityTag::Neither: return "neither";
  }
  return "?";
}

ModularityClass classify_modularity(const WelfareSpec& spec, const Grid& grid, ModularityOptions opts) {
  const std::size_t m = grid.size();
  if (grid.uniform_count() < 3) throw std::invalid_argument("modularity classification needs >= 3 grid points");
  const std::size_t n = spec.n();
  const ProfileTable table(spec, grid);
  const double tol = opts.rel_tol * table.scale();

  // Only (a,b) <= (c,d) lexicographically: swapping the two coordinates leaves the defect unchanged.
  const std::uint64_t pairs = static_cast<std::uint64_t>(m) * (m - 1) / 2;
  const std::uint64_t quads = pairs * (pairs + 1) / 2 * multiset_count(m, n - 2);
  check_evaluation_budget(quads, 100 * kDefaultEvaluationCap, "modularity classification");

  double min_defect = std::numeric_limits<double>::infinity();
  double max_defect = -std::numeric_limits<double>::infinity();
  ModularityWitness min_w{};
  ModularityWitness max_w{};
  bool all_pos = true;  // every defect > tol
  bool all_neg = true;  // every defect < -tol

  const auto& pts = grid.points();
  std::vector<std::size_t> idx(n);
  auto record = [&](std::size_t a, std::size_t b, std::size_t c, std::size_t d, std::span<const std::size_t> rest,
                    double defect, ModularityWitness& w) {
    w.x1 = pts[a];
    w.x1_star = pts[b];
    w.x2 = pts[c];
    w.x2_star = pts[d];
    w.rest.clear();
    for (std::size_t r : rest) w.rest.push_back(pts[r]);
    w.defect = defect;
  };
  auto value = [&](std::size_t p, std::size_t q, std::span<const std::size_t> rest) {
    idx[0] = p;
    idx[1] = q;
    std::copy(rest.begin(), rest.end(), idx.begin() + 2);
    return table.at(idx);
  };

  for_each_multiset(m, n - 2, [&](std::span<const std::size_t> rest) {
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = a + 1; b < m; ++b) {
        for (std::size_t c = a; c < m; ++c) {
          for (std::size_t d = c + 1; d < m; ++d) {
            if (c == a && d < b) continue;
            const double defect = value(a, c, rest) + value(b, d, rest) - value(a, d, rest) - value(b, c, rest);
            if (defect < min_defect) {
              min_defect = defect;
              record(a, b, c, d, rest, defect, min_w);
            }
            if (defect > max_defect) {
              max_defect = defect;
              record(a, b, c, d, rest, defect, max_w);
            }
            if (!(defect > tol)) all_pos = false;
            if (!(defect < -tol)) all_neg = false;
          }
        }
      }
    }
  });

  ModularityClass out;
  out.scale = table.scale();
  const bool super = min_defect >= -tol;
  const bool sub = max_defect <= tol;
  if (super && sub) {
    out.tag = ModularityTag::Additive;
    out.witness = std::abs(min_defect) > std::abs(max_defect) ? min_w : max_w;
  } else if (super) {
    out.tag = ModularityTag::Supermodular;
    out.strict = all_pos;
    out.witness = min_w;
  } else if (sub) {
    out.tag = ModularityTag::Submodular;
    out.strict = all_neg;
    out.witness = max_w;
  } else {
    out.tag = ModularityTag::Neither;
    out.witness = min_w;
    out.counter_witness = max_w;
  }
  return out;
}

}  // namespace commons
