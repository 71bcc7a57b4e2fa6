#include "commons/function1d.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace commons {

bool Slope::contains(double s, double tol) const {
  const double lo = std::min(left, right);
  const double hi = std::max(left, right);
  return s >= lo - tol && s <= hi + tol;
}

namespace poly {

double eval(const Function1D::Coefficients& c, double x) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

double deriv(const Function1D::Coefficients& c, double x) {
  double acc = 0.0;
  for (std::size_t k = c.size(); k-- > 1;) acc = acc * x + static_cast<double>(k) * c[k];
  return acc;
}

}  // namespace poly

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Function1D Function1D::piecewise(std::vector<double> breakpoints, std::vector<Coefficients> coeffs) {
  if (breakpoints.size() < 2) throw std::invalid_argument("piecewise function needs at least two breakpoints");
  if (coeffs.size() + 1 != breakpoints.size()) {
    throw std::invalid_argument("piecewise function: " + std::to_string(breakpoints.size()) +
                                " breakpoints need " + std::to_string(breakpoints.size() - 1) +
                                " coefficient lists, got " + std::to_string(coeffs.size()));
  }
  for (std::size_t k = 0; k + 1 < breakpoints.size(); ++k) {
    if (!(breakpoints[k] < breakpoints[k + 1])) {
      throw std::invalid_argument("piecewise function: breakpoints must be strictly increasing");
    }
  }
  for (auto& c : coeffs) {
    if (c.empty()) c.push_back(0.0);
    if (c.size() > kMaxDegree + 1) {
      throw std::invalid_argument("piecewise function: degree capped at 4, got " + std::to_string(c.size() - 1));
    }
    for (double v : c) {
      if (!std::isfinite(v)) throw std::invalid_argument("piecewise function: non-finite coefficient");
    }
  }
  for (std::size_t k = 1; k + 1 < breakpoints.size(); ++k) {
    const double b = breakpoints[k];
    const double left = poly::eval(coeffs[k - 1], b);
    const double right = poly::eval(coeffs[k], b);
    const double scale = std::max({1.0, std::abs(left), std::abs(right)});
    if (std::abs(left - right) > 1e-9 * scale) {
      throw std::invalid_argument("piecewise function is discontinuous at breakpoint " + fmt(b) + ": " +
                                  fmt(left) + " vs " + fmt(right));
    }
  }
  Function1D out(TypeInterval(breakpoints.front(), breakpoints.back()));
  out.breaks_ = std::move(breakpoints);
  out.coeffs_ = std::move(coeffs);
  out.name_ = "piecewise";
  return out;
}

Function1D Function1D::polynomial(TypeInterval domain, Coefficients coeffs) {
  return piecewise({domain.low(), domain.high()}, {std::move(coeffs)});
}

Function1D Function1D::linear(TypeInterval domain, double slope, double intercept) {
  return polynomial(domain, {intercept, slope});
}

Function1D Function1D::analytic(TypeInterval domain, std::string name, std::function<double(double)> f,
                                std::function<double(double)> df) {
  Function1D out(domain);
  out.breaks_ = {domain.low(), domain.high()};
  out.name_ = std::move(name);
  out.analytic_ = std::make_shared<const Analytic>(Analytic{std::move(f), std::move(df)});
  return out;
}

Function1D Function1D::exp(TypeInterval domain) {
  return analytic(
      domain, "exp", [](double x) { return std::exp(x); }, [](double x) { return std::exp(x); });
}

Function1D Function1D::log(TypeInterval domain) {
  if (domain.low() <= 0.0) throw std::invalid_argument("log needs a positive domain");
  return analytic(
      domain, "log", [](double x) { return std::log(x); }, [](double x) { return 1.0 / x; });
}

std::size_t Function1D::piece_index(double x) const {
  auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
  std::size_t idx = it == breaks_.begin() ? 0 : static_cast<std::size_t>(it - breaks_.begin()) - 1;
  return std::min(idx, coeffs_.size() - 1);
}

double Function1D::operator()(double x) const {
  x = domain_.admit(x);
  if (analytic_) return analytic_->f(x);
  return poly::eval(coeffs_[piece_index(x)], x);
}

Slope Function1D::derivative(double x) const {
  x = domain_.admit(x);
  if (analytic_) {
    const double d = analytic_->df(x);
    return {d, d};
  }
  const std::size_t k = piece_index(x);
  const double right = poly::deriv(coeffs_[k], x);
  double left = right;
  if (k > 0 && x == breaks_[k]) left = poly::deriv(coeffs_[k - 1], x);
  if (x == domain_.high()) {
    // upper endpoint: only the left derivative exists
    return {left, left};
  }
  if (x == domain_.low()) return {right, right};
  return {left, right};
}

std::vector<double> Function1D::interior_breakpoints() const {
  if (breaks_.size() <= 2) return {};
  return {breaks_.begin() + 1, breaks_.end() - 1};
}

std::vector<double> Function1D::shape_sample() const {
  constexpr int kSamples = 256;
  std::vector<double> pts;
  pts.reserve(kSamples + breaks_.size() + 1);
  for (int i = 0; i <= kSamples; ++i) {
    pts.push_back(domain_.low() + domain_.width() * i / kSamples);
  }
  pts.insert(pts.end(), breaks_.begin(), breaks_.end());
  std::sort(pts.begin(), pts.end());
  const double merge = 1e-12 * domain_.width();
  pts.erase(std::unique(pts.begin(), pts.end(), [merge](double a, double b) { return b - a <= merge; }),
            pts.end());
  return pts;
}

bool Function1D::chords_monotone(bool increasing_slopes, double rel_tol) const {
  const auto pts = shape_sample();
  std::vector<double> slopes;
  slopes.reserve(pts.size());
  double smax = 1.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double s = ((*this)(pts[i + 1]) - (*this)(pts[i])) / (pts[i + 1] - pts[i]);
    slopes.push_back(s);
    smax = std::max(smax, std::abs(s));
  }
  const double tol = rel_tol * smax;
  for (std::size_t i = 0; i + 1 < slopes.size(); ++i) {
    const double d = slopes[i + 1] - slopes[i];
    if (increasing_slopes ? d < -tol : d > tol) return false;
  }
  return true;
}

bool Function1D::is_convex(double rel_tol) const { return chords_monotone(true, rel_tol); }
bool Function1D::is_concave(double rel_tol) const { return chords_monotone(false, rel_tol); }

bool Function1D::is_strictly_increasing() const {
  const auto pts = shape_sample();
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (!((*this)(pts[i + 1]) > (*this)(pts[i]))) return false;
  }
  return true;
}

bool Function1D::is_strictly_decreasing() const {
  const auto pts = shape_sample();
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (!((*this)(pts[i + 1]) < (*this)(pts[i]))) return false;
  }
  return true;
}

std::string Function1D::to_string() const {
  if (analytic_) return name_ + " on [" + fmt(domain_.low()) + ", " + fmt(domain_.high()) + "]";
  std::string s = "[";
  for (std::size_t i = 0; i < breaks_.size(); ++i) s += (i ? ", " : "") + fmt(breaks_[i]);
  s += "] / [";
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    s += k ? ", [" : "[";
    for (std::size_t j = 0; j < coeffs_[k].size(); ++j) s += (j ? ", " : "") + fmt(coeffs_[k][j]);
    s += "]";
  }
  return s + "]";
}

Function1D Function1D::plus(const Function1D& other) const {
  if (!(domain_ == other.domain_)) throw std::invalid_argument("cannot add functions on different domains");
  if (!analytic_ && !other.analytic_) {
    std::vector<double> bs = breaks_;
    bs.insert(bs.end(), other.breaks_.begin(), other.breaks_.end());
    std::sort(bs.begin(), bs.end());
    bs.erase(std::unique(bs.begin(), bs.end()), bs.end());
    std::vector<Coefficients> cs;
    for (std::size_t k = 0; k + 1 < bs.size(); ++k) {
      const double mid = 0.5 * (bs[k] + bs[k + 1]);
      const auto& a = coeffs_[piece_index(mid)];
      const auto& b = other.coeffs_[other.piece_index(mid)];
      Coefficients c(std::max(a.size(), b.size()), 0.0);
      for (std::size_t j = 0; j < a.size(); ++j) c[j] += a[j];
      for (std::size_t j = 0; j < b.size(); ++j) c[j] += b[j];
      cs.push_back(std::move(c));
    }
    return piecewise(std::move(bs), std::move(cs));
  }
  const Function1D lhs = *this;
  const Function1D rhs = other;
  Function1D out = analytic(
      domain_, lhs.name_ + "+" + rhs.name_, [lhs, rhs](double x) { return lhs(x) + rhs(x); },
      [lhs, rhs](double x) { return lhs.derivative(x).mid() + rhs.derivative(x).mid(); });
  std::vector<double> bs = breaks_;
  bs.insert(bs.end(), other.breaks_.begin(), other.breaks_.end());
  std::sort(bs.begin(), bs.end());
  bs.erase(std::unique(bs.begin(), bs.end()), bs.end());
  out.breaks_ = std::move(bs);
  return out;
}

Function1D Function1D::scaled(double k) const {
  if (!analytic_) {
    auto cs = coeffs_;
    for (auto& c : cs)
      for (double& v : c) v *= k;
    return piecewise(breaks_, std::move(cs));
  }
  const Function1D base = *this;
  return analytic(
      domain_, std::to_string(k) + "*" + name_, [base, k](double x) { return k * base(x); },
      [base, k](double x) { return k * base.derivative(x).mid(); });
}

}  // namespace commons
