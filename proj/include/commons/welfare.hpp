#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "commons/function1d.hpp"
#include "commons/interval.hpp"

namespace commons {

class Grid;
class WelfareSpec;

/// W(x) = f(x_1 + ... + x_n); f lives on [n*low, n*high].
struct SubstituteInputs {
  Function1D f;
};

/// W(x) = sum_k w_k(x^k) with x^1 the largest type; w has one entry per rank.
struct RankSeparable {
  std::vector<Function1D> w;
};

/// W(x) = sum_i w0(x_i).
struct SeparableAdditive {
  Function1D w0;
};

/// W(x) = base(theta(x_1), ..., theta(x_n)); theta maps this interval onto the base's.
struct Transformed {
  std::shared_ptr<const WelfareSpec> base;
  Function1D theta;
};

/// Arbitrary evaluator. It receives the profile sorted ascending and must be
/// symmetric; partial derivatives fall back to finite differences.
struct Custom {
  std::string name;
  std::function<double(std::span<const double>)> evaluate;
  /// Types at which W may fail to be differentiable in one coordinate.
  std::vector<double> coordinate_kinks = {};
};

using WelfareTerm = std::variant<SubstituteInputs, RankSeparable, SeparableAdditive, Transformed, Custom>;

/// Symmetric welfare function on [low, high]^n, the sum of its terms.
///
/// Immutable after construction. Every evaluation sorts the profile first, so
/// permuting a profile can never change the value.
class WelfareSpec {
 public:
  WelfareSpec(TypeInterval interval, std::size_t n, std::vector<WelfareTerm> terms, std::string name = {});

  const TypeInterval& interval() const { return interval_; }
  std::size_t n() const { return n_; }
  const std::string& name() const { return name_; }
  const std::vector<WelfareTerm>& terms() const { return terms_; }

  /// Throws ShapeError on a length mismatch and DomainError outside the interval.
  double evaluate(const Profile& x) const;
  /// Fast path for already validated, ascending profiles.
  double evaluate_sorted(std::span<const double> ascending) const;

  /// W(t, ..., t) / n.
  double unanimity_value(double t) const;

  /// One-sided derivatives of W in coordinate `index` at `x`.
  Slope partial_derivative(std::size_t index, const Profile& x) const;

  /// Types where some term may kink in a single coordinate.
  std::vector<double> coordinate_kinks() const;
  /// Values of the coordinate sum where a SubstituteInputs term may kink.
  std::vector<double> sum_kinks() const;

  /// Present when the spec is a single SubstituteInputs term.
  const Function1D* substitute_function() const;
  /// Present when every term is RankSeparable or SeparableAdditive; merged per rank.
  std::optional<std::vector<Function1D>> rank_weights() const;

  WelfareSpec plus(WelfareTerm term, std::string name = {}) const;

 private:
  Profile sorted_checked(const Profile& x) const;

  TypeInterval interval_;
  std::size_t n_;
  std::vector<WelfareTerm> terms_;
  std::string name_;
};

enum class ModularityTag { Supermodular, Submodular, Additive, Neither };

const char* to_string(ModularityTag tag);

/// A quadruple (x1 < x1*, x2 < x2*) with the remaining n-2 coordinates, and
/// defect = W(x1,x2,r) + W(x1*,x2*,r) - W(x1,x2*,r) - W(x1*,x2,r).
/// Supermodularity means defect >= 0 everywhere.
struct ModularityWitness {
  double x1;
  double x1_star;
  double x2;
  double x2_star;
  std::vector<double> rest;
  double defect;
};

struct ModularityClass {
  ModularityTag tag = ModularityTag::Neither;
  bool strict = false;
  /// Supermodular/Submodular/Additive: the quadruple closest to violating.
  /// Neither: a violation of supermodularity.
  std::optional<ModularityWitness> witness;
  /// Neither only: a violation of submodularity.
  std::optional<ModularityWitness> counter_witness;
  double scale = 1.0;

  bool semi_modular() const { return tag != ModularityTag::Neither; }
};

struct ModularityOptions {
  /// Violation threshold relative to max(1, max |W| on the grid).
  double rel_tol = 1e-9;
};

/// Tests the increasing-differences inequality on every grid quadruple.
ModularityClass classify_modularity(const WelfareSpec& spec, const Grid& grid, ModularityOptions opts = {});

}  // namespace commons
