#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "commons/interval.hpp"

namespace commons {

/// One-sided derivatives at a point. For smooth points left == right.
struct Slope {
  double left;
  double right;

  double mid() const { return 0.5 * (left + right); }
  bool contains(double s, double tol) const;
};

/// Continuous real function of one variable on a closed interval.
///
/// Two representations share this interface:
///  - piecewise polynomials (degree <= 4) over ordered breakpoints, with
///    coefficients in ascending degree of the absolute variable;
///  - smooth closed forms (exp, log, ...) carrying an explicit derivative.
///
/// Values and one-sided derivatives are exact for piecewise polynomials, which
/// is what lets quadrature and contact checks reach float precision.
class Function1D {
 public:
  static constexpr std::size_t kMaxDegree = 4;

  using Coefficients = std::vector<double>;

  /// `breakpoints` has one more entry than `coeffs`; throws if pieces disagree
  /// at a shared breakpoint or a piece exceeds degree 4.
  static Function1D piecewise(std::vector<double> breakpoints, std::vector<Coefficients> coeffs);
  static Function1D polynomial(TypeInterval domain, Coefficients coeffs);
  static Function1D linear(TypeInterval domain, double slope, double intercept);
  static Function1D identity(TypeInterval domain) { return linear(domain, 1.0, 0.0); }

  /// Smooth closed form; `name` is used for serialization and diagnostics.
  static Function1D analytic(TypeInterval domain, std::string name, std::function<double(double)> f,
                             std::function<double(double)> df);
  static Function1D exp(TypeInterval domain);
  static Function1D log(TypeInterval domain);

  double operator()(double x) const;
  Slope derivative(double x) const;

  const TypeInterval& domain() const { return domain_; }

  /// All breakpoints including the two domain endpoints (just the endpoints for
  /// smooth closed forms).
  const std::vector<double>& breakpoints() const { return breaks_; }
  /// Breakpoints strictly inside the domain.
  std::vector<double> interior_breakpoints() const;

  bool is_piecewise_polynomial() const { return !analytic_; }
  const std::vector<Coefficients>& coefficients() const { return coeffs_; }
  const std::string& name() const { return name_; }

  /// Chord-slope test on a breakpoint-augmented sample.
  bool is_convex(double rel_tol = 1e-9) const;
  bool is_concave(double rel_tol = 1e-9) const;
  bool is_strictly_increasing() const;
  bool is_strictly_decreasing() const;

  /// Human readable form; piecewise polynomials use the document syntax
  /// `[b0, b1, ...] / [[c0, c1, ...], ...]`.
  std::string to_string() const;

  /// Pointwise sum; domains must coincide.
  Function1D plus(const Function1D& other) const;
  Function1D scaled(double k) const;

 private:
  Function1D(TypeInterval domain) : domain_(domain) {}

  std::size_t piece_index(double x) const;
  std::vector<double> shape_sample() const;
  bool chords_monotone(bool increasing_slopes, double rel_tol) const;

  TypeInterval domain_;
  std::vector<double> breaks_;
  std::vector<Coefficients> coeffs_;
  std::string name_;
  struct Analytic {
    std::function<double(double)> f;
    std::function<double(double)> df;
  };
  std::shared_ptr<const Analytic> analytic_;
};

namespace poly {
double eval(const Function1D::Coefficients& c, double x);
double deriv(const Function1D::Coefficients& c, double x);
}  // namespace poly

}  // namespace commons
