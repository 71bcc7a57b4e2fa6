#include "commons/contact.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace commons {

namespace quadrature {

namespace {

constexpr std::array<double, 8> kNodes = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                          -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                          0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kWeights = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                            0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                            0.2223810344533745, 0.1012285362903763};

double gauss8(const std::function<double(double)>& f, double a, double b) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double acc = 0.0;
  for (std::size_t k = 0; k < kNodes.size(); ++k) acc += kWeights[k] * f(mid + half * kNodes[k]);
  return half * acc;
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, std::vector<double> cuts) {
  if (a == b) return 0.0;
  const double sign = a < b ? 1.0 : -1.0;
  const double lo = std::min(a, b);
  const double hi = std::max(a, b);
  cuts.erase(std::remove_if(cuts.begin(), cuts.end(), [&](double c) { return !(c > lo && c < hi); }), cuts.end());
  cuts.push_back(lo);
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) acc += gauss8(f, cuts[k], cuts[k + 1]);
  return sign * acc;
}

}  // namespace quadrature

namespace {

std::string pt(Point2 p) { return "(" + std::to_string(p.x) + ", " + std::to_string(p.y) + ")"; }

}  // namespace

ContactCorrespondence ContactCorrespondence::from_path(TypeInterval interval, std::vector<Point2> half_path) {
  if (half_path.size() < 2) throw std::invalid_argument("contact path needs at least two vertices");
  for (auto& p : half_path) {
    p.x = interval.admit(p.x);
    p.y = interval.admit(p.y);
  }
  half_path.erase(std::unique(half_path.begin(), half_path.end(),
                              [](Point2 u, Point2 v) { return u.x == v.x && u.y == v.y; }),
                  half_path.end());
  if (half_path.size() < 2) throw std::invalid_argument("contact path collapses to a point");
  const double a = half_path.back().x;
  ContactCorrespondence out(interval, std::move(half_path), a);
  out.validate();
  return out;
}

void ContactCorrespondence::validate() const {
  const Point2 first = path_.front();
  const Point2 last = path_.back();
  if (first.x != interval_.low() || first.y != interval_.high()) {
    throw std::invalid_argument("contact path must start at (L, H) so that H is a partner of L; starts at " + pt(first));
  }
  if (last.x != last.y) throw std::invalid_argument("contact path must end on the diagonal, ends at " + pt(last));
  for (std::size_t k = 0; k + 1 < path_.size(); ++k) {
    const Point2 p = path_[k];
    const Point2 q = path_[k + 1];
    if (q.x < p.x || q.y > p.y) {
      throw std::invalid_argument("contact path must be weakly decreasing: " + pt(p) + " -> " + pt(q));
    }
  }
  // Monotone from (L,H) to (a,a) forces x <= a <= y on the half path, so the
  // diagonal is met only at (a,a): the fixed point is unique.
  for (const auto& p : path_) {
    if (p.x > a_ || p.y < a_) throw std::invalid_argument("contact path crosses the diagonal at " + pt(p));
  }
}

ContactCorrespondence ContactCorrespondence::from_steps(TypeInterval interval, double a, std::vector<Point2> steps) {
  a = interval.admit(a);
  std::vector<Point2> path{{interval.low(), interval.high()}};
  double prev_x = interval.low();
  for (const auto& s : steps) {
    if (s.x < prev_x) throw std::invalid_argument("step abscissae must increase, got " + pt(s));
    if (s.x > a) throw std::invalid_argument("step beyond the fixed point: " + pt(s));
    path.push_back({prev_x, s.y});
    path.push_back({s.x, s.y});
    prev_x = s.x;
  }
  path.push_back({a, path.back().y});
  path.push_back({a, a});
  return from_path(interval, std::move(path));
}

ContactCorrespondence ContactCorrespondence::antidiagonal(TypeInterval interval) {
  const double mid = 0.5 * (interval.low() + interval.high());
  return from_path(interval, {{interval.low(), interval.high()}, {mid, mid}});
}

ContactCorrespondence ContactCorrespondence::low_edge(TypeInterval interval) {
  return from_path(interval, {{interval.low(), interval.high()}, {interval.low(), interval.low()}});
}

ContactCorrespondence ContactCorrespondence::random_staircase(TypeInterval interval, std::size_t steps,
                                                              std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double a = interval.low() + interval.width() * (0.1 + 0.8 * unit(rng));
  std::vector<double> xs(steps);
  std::vector<double> ys(steps);
  for (auto& x : xs) x = interval.low() + (a - interval.low()) * unit(rng);
  for (auto& y : ys) y = a + (interval.high() - a) * unit(rng);
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end(), std::greater<>());
  std::vector<Point2> pts;
  for (std::size_t k = 0; k < steps; ++k) pts.push_back({xs[k], ys[k]});
  return from_steps(interval, a, std::move(pts));
}

std::vector<Point2> ContactCorrespondence::full_path() const {
  std::vector<Point2> out = path_;
  for (std::size_t k = path_.size() - 1; k-- > 0;) out.push_back({path_[k].y, path_[k].x});
  return out;
}

PartnerSet ContactCorrespondence::gamma(double x) const {
  x = interval_.admit(x);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  auto take = [&](double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  };
  for (std::size_t k = 0; k + 1 < path_.size(); ++k) {
    const Point2 p = path_[k];
    const Point2 q = path_[k + 1];
    // left half: points of the path with abscissa x
    if (p.x <= x && x <= q.x) {
      if (p.x == q.x) {
        take(p.y);
        take(q.y);
      } else {
        take(p.y + (q.y - p.y) * (x - p.x) / (q.x - p.x));
      }
    }
    // mirrored half: points of the path with ordinate x
    if (q.y <= x && x <= p.y) {
      if (p.y == q.y) {
        take(p.x);
        take(q.x);
      } else {
        take(p.x + (q.x - p.x) * (p.y - x) / (p.y - q.y));
      }
    }
  }
  return {lo, hi};
}

bool ContactCorrespondence::contains(double x1, double x2, double tol) const {
  const PartnerSet s = gamma(x1);
  return x2 >= s.lo - tol && x2 <= s.hi + tol;
}

std::vector<double> ContactCorrespondence::breakpoints() const {
  std::vector<double> out;
  for (const auto& p : full_path()) out.push_back(p.x);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double ContactCorrespondence::distance(double x1, double x2) const {
  const auto pts = full_path();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    const Point2 p = pts[k];
    const Point2 q = pts[k + 1];
    auto dist = [&](double s) {
      return std::max(std::abs(p.x + s * (q.x - p.x) - x1), std::abs(p.y + s * (q.y - p.y) - x2));
    };
    // convex in s: golden-section search
    double lo = 0.0;
    double hi = 1.0;
    constexpr double kPhi = 0.6180339887498949;
    for (int it = 0; it < 80; ++it) {
      const double m1 = hi - kPhi * (hi - lo);
      const double m2 = lo + kPhi * (hi - lo);
      if (dist(m1) <= dist(m2)) hi = m2; else lo = m1;
    }
    best = std::min({best, dist(0.5 * (lo + hi)), dist(0.0), dist(1.0)});
  }
  return best;
}

Guarantee integrate_guarantee(const WelfareSpec& spec, const ModularityClass& cls, const ContactCorrespondence& gamma) {
  if (spec.n() != 2) throw std::invalid_argument("the contact integral is defined for two agents only");
  if (!(spec.interval() == gamma.interval())) throw std::invalid_argument("correspondence and spec intervals differ");
  if (cls.tag != ModularityTag::Supermodular && cls.tag != ModularityTag::Submodular) {
    throw std::invalid_argument(std::string("contact integral needs strict semi-modularity, W is ") + to_string(cls.tag));
  }
  if (!cls.strict) {
    throw std::invalid_argument("contact integral needs strict semi-modularity; W is only weakly " +
                                std::string(to_string(cls.tag)) + ", use the simple or stand-alone families");
  }
  const Side side = cls.tag == ModularityTag::Supermodular ? Side::Lower : Side::Upper;
  const TypeInterval iv = spec.interval();
  const double a = gamma.fixed_point();

  std::vector<double> cuts = gamma.breakpoints();
  for (double k : spec.coordinate_kinks()) cuts.push_back(k);
  const auto full = gamma.full_path();
  for (double s : spec.sum_kinks()) {
    for (std::size_t k = 0; k + 1 < full.size(); ++k) {
      const Point2 p = full[k];
      const Point2 q = full[k + 1];
      if (p.x == q.x) continue;
      // t + y(t) is linear on the segment
      const double u = p.x + p.y;
      const double v = q.x + q.y;
      if (u == v) continue;
      const double r = (s - u) / (v - u);
      if (r > 0.0 && r < 1.0) cuts.push_back(p.x + r * (q.x - p.x));
    }
  }
  cuts.push_back(iv.low());
  cuts.push_back(iv.high());
  cuts.push_back(a);
  cuts.erase(std::remove_if(cuts.begin(), cuts.end(), [&](double c) { return c < iv.low() || c > iv.high(); }),
             cuts.end());
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  auto integrand = [spec, gamma](double t) { return spec.partial_derivative(0, {t, gamma.lower_selection(t)}).mid(); };

  // cumulative integral from a to each cut
  const std::size_t ia = static_cast<std::size_t>(std::find(cuts.begin(), cuts.end(), a) - cuts.begin());
  std::vector<double> cum(cuts.size(), 0.0);
  for (std::size_t k = ia + 1; k < cuts.size(); ++k) cum[k] = cum[k - 1] + quadrature::integrate(integrand, cuts[k - 1], cuts[k]);
  for (std::size_t k = ia; k-- > 0;) cum[k] = cum[k + 1] - quadrature::integrate(integrand, cuts[k], cuts[k + 1]);

  const double base = spec.unanimity_value(a);
  auto eval = [cuts, cum, base, integrand](double x) {
    auto it = std::upper_bound(cuts.begin(), cuts.end(), x);
    std::size_t k = it == cuts.begin() ? 0 : static_cast<std::size_t>(it - cuts.begin()) - 1;
    k = std::min(k, cuts.size() - 1);
    if (cuts[k] == x) return base + cum[k];
    return base + cum[k] + quadrature::integrate(integrand, cuts[k], x);
  };
  auto deriv = [spec, gamma](double x) -> Slope {
    const PartnerSet s = gamma.gamma(x);
    return {spec.partial_derivative(0, {x, s.hi}).left, spec.partial_derivative(0, {x, s.lo}).right};
  };
  auto hint = [gamma](double t) {
    const PartnerSet s = gamma.gamma(t);
    return std::vector<std::vector<double>>{{s.lo}, {s.hi}};
  };
  return Guarantee(side, iv, "contact", {{"a", a}}, eval, deriv, hint);
}

std::vector<std::pair<double, double>> recover_contact_set(const Guarantee& g, const WelfareSpec& spec,
                                                           const Grid& grid, double tol) {
  if (spec.n() != 2) throw std::invalid_argument("contact sets are recovered for two agents only");
  std::vector<std::pair<double, double>> out;
  const auto& pts = grid.points();
  std::vector<double> gv(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) gv[i] = g(pts[i]);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = 0; j < pts.size(); ++j) {
      const double w = spec.evaluate({pts[i], pts[j]});
      if (std::abs(gv[i] + gv[j] - w) <= tol) out.emplace_back(pts[i], pts[j]);
    }
  }
  return out;
}

}  // namespace commons
