#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "commons/function1d.hpp"
#include "commons/grid.hpp"
#include "commons/interval.hpp"
#include "commons/welfare.hpp"

namespace commons {

enum class Side { Lower, Upper };

const char* to_string(Side side);
Side opposite(Side side);

/// A one-variable bound on individual shares: sum_i g(x_i) <= W(x) for the
/// lower side, >= W(x) for the upper side.
///
/// Constructors that know where the guarantee touches W attach a contact
/// hint: for a type t it proposes opponent profiles (n-1 types) at which the
/// inequality should hold with equality. Hints are only proposals; the verify
/// module re-evaluates them through W.
class Guarantee {
 public:
  using Eval = std::function<double(double)>;
  using Derivative = std::function<Slope(double)>;
  using ContactHint = std::function<std::vector<std::vector<double>>(double)>;
  using Params = std::vector<std::pair<std::string, double>>;

  Guarantee(Side side, TypeInterval interval, std::string label, Params params, Eval eval, Derivative derivative = {},
            ContactHint hint = {});

  Side side() const { return side_; }
  const TypeInterval& interval() const { return interval_; }
  const std::string& label() const { return label_; }
  const Params& params() const { return params_; }

  /// Throws DomainError outside the interval.
  double operator()(double x) const;
  /// Analytic when the constructor supplied one, else one-sided finite differences.
  Slope derivative(double x) const;
  bool has_analytic_derivative() const { return static_cast<bool>(derivative_); }

  std::vector<std::vector<double>> contact_hints(double t) const;
  bool has_contact_hint() const { return static_cast<bool>(hint_); }

  Guarantee relabeled(std::string label) const;
  Guarantee with_side(Side side) const;

 private:
  Side side_;
  TypeInterval interval_;
  std::string label_;
  Params params_;
  Eval eval_;
  Derivative derivative_;
  ContactHint hint_;
};

struct GuaranteeCurve {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

/// Side on the far side of the unanimity guarantee: Lower for supermodular W,
/// Upper for submodular W. Additive W takes `additive_side`.
Side side_opposite_unanimity(const ModularityClass& cls, Side additive_side = Side::Lower);

/// una(t) = W(t,...,t)/n; Upper for supermodular W, Lower for submodular W.
/// Additive W accepts either side (default Lower). Throws for Neither.
Guarantee unanimity_guarantee(const WelfareSpec& spec, const ModularityClass& cls,
                              std::optional<Side> additive_side = std::nullopt);

/// g_c(x) = W(x, c) - (1/n) sum_l W(c_l, c) with c of length n-1.
Guarantee simple_guarantee(const WelfareSpec& spec, std::vector<double> c, Side side);
Guarantee simple_guarantee(const WelfareSpec& spec, std::vector<double> c, const ModularityClass& cls);

/// simple_guarantee with c = (c0, ..., c0).
Guarantee stand_alone_guarantee(const WelfareSpec& spec, double c0, Side side);
Guarantee stand_alone_guarantee(const WelfareSpec& spec, double c0, const ModularityClass& cls);
Guarantee low_guarantee(const WelfareSpec& spec, const ModularityClass& cls);
Guarantee high_guarantee(const WelfareSpec& spec, const ModularityClass& cls);

/// g_{l,h}(x) = F(x + lL + hH) - (1/n)[l F((l+1)L + hH) + h F(lL + (h+1)H)].
/// Lower when F is convex, Upper when concave (linear F defaults to Lower).
Guarantee lh_guarantee(const Function1D& f, std::size_t n, std::size_t ell, std::size_t h, TypeInterval interval);

/// Tangent to una at a, patched with g_L or g_H when a lies outside the band
/// where the tangent alone stays feasible. `slope` defaults to the midpoint of
/// F's one-sided derivatives at n a.
Guarantee tangent_guarantee(const Function1D& f, std::size_t n, double a, TypeInterval interval,
                            std::optional<double> slope = std::nullopt);

/// F(x_N) plus an additive part sum w0(x_i); recovered from specs built that way.
struct SubstituteDecomposition {
  Function1D f;
  std::optional<Function1D> additive;
};
std::optional<SubstituteDecomposition> substitute_decomposition(const WelfareSpec& spec);

/// lh / tangent guarantees for a spec whose substitute decomposition exists,
/// or for a single Transformed term over such a spec.
Guarantee lh_guarantee(const WelfareSpec& spec, std::size_t ell, std::size_t h);
Guarantee tangent_guarantee(const WelfareSpec& spec, double a, std::optional<double> slope = std::nullopt);

struct QuotaGuarantees {
  Guarantee lower;
  Guarantee upper;
};

/// Tight pair for W(x) = F(x^q); F strictly increasing, 2 <= q <= n-1.
QuotaGuarantees quota_guarantees(const Function1D& f, std::size_t n, std::size_t q, double p_minus, double p_plus);

/// x -> g(theta(x)) on theta's domain; theta must map it onto g's interval.
/// The side is kept for increasing and decreasing theta alike.
Guarantee transform_guarantee(const Guarantee& g, const Function1D& theta);

/// -g: a guarantee of -W on the other side.
Guarantee negate_guarantee(const Guarantee& g);

/// From an upper guarantee g of max on [L,H], the lower guarantee of min on
/// [-H,-L] given by x -> -g(-x).
Guarantee chore_guarantee(const Guarantee& g);

/// g(x) + w0(x): a guarantee of W + sum w0(x_i) on the same side.
Guarantee shift_guarantee(const Guarantee& g, const Function1D& w0);

/// sum_k weights_k g_k; all on the same side and interval, weights >= 0 summing to 1.
Guarantee mixture(std::vector<Guarantee> parts, std::vector<double> weights);

/// max over grid points of |g1 - g2|.
double max_deviation(const Guarantee& g1, const Guarantee& g2, const Grid& grid);

GuaranteeCurve sample_curve(const Guarantee& g, const Grid& grid);

}  // namespace commons
