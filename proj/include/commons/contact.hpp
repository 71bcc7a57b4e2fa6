#pragma once

#include <random>
#include <utility>
#include <vector>

#include "commons/grid.hpp"
#include "commons/guarantees.hpp"
#include "commons/interval.hpp"
#include "commons/welfare.hpp"

namespace commons {

struct Point2 {
  double x;
  double y;
};

/// Closed interval of contact partners.
struct PartnerSet {
  double lo;
  double hi;
};

/// Two-person contact correspondence on [L,H]^2, stored as the half of its
/// graph left of the fixed point: a monotone polyline from (L, H) down to
/// (a, a). Consecutive vertices with equal x are jump fills, equal y are flat
/// steps. The other half is the mirror image across the diagonal.
class ContactCorrespondence {
 public:
  /// Validates the path and every structural invariant; throws
  /// std::invalid_argument naming the offending vertex pair.
  static ContactCorrespondence from_path(TypeInterval interval, std::vector<Point2> half_path);

  /// Samples a weakly decreasing map from [L, a] onto [a, H] at the given
  /// abscissae (plus L and a); jumps between samples are filled vertically.
  static ContactCorrespondence from_steps(TypeInterval interval, double a, std::vector<Point2> steps);

  /// gamma(x) = L + H - x.
  static ContactCorrespondence antidiagonal(TypeInterval interval);
  /// gamma(L) = [L,H], gamma(x) = L for x > L.
  static ContactCorrespondence low_edge(TypeInterval interval);
  /// Random staircase with `steps` jumps and fixed point drawn uniformly.
  static ContactCorrespondence random_staircase(TypeInterval interval, std::size_t steps, std::mt19937_64& rng);

  const TypeInterval& interval() const { return interval_; }
  double fixed_point() const { return a_; }
  const std::vector<Point2>& half_path() const { return path_; }
  /// Both halves, ordered from (L, H) to (H, L).
  std::vector<Point2> full_path() const;

  PartnerSet gamma(double x) const;
  double lower_selection(double x) const { return gamma(x).lo; }
  bool contains(double x1, double x2, double tol = 0.0) const;

  /// Abscissae where the full graph changes slope or jumps.
  std::vector<double> breakpoints() const;

  /// Chebyshev distance from (x1, x2) to the full graph.
  double distance(double x1, double x2) const;

 private:
  ContactCorrespondence(TypeInterval interval, std::vector<Point2> path, double a)
      : interval_(interval), path_(std::move(path)), a_(a) {}

  void validate() const;

  TypeInterval interval_;
  std::vector<Point2> path_;
  double a_;
};

/// g(x) = una(a) + int_a^x dW/dx1(t, gamma_lo(t)) dt by composite 8-point
/// Gauss-Legendre split at every breakpoint of gamma and of W.
/// Requires n = 2 and strict super/submodularity; Lower for supermodular W.
Guarantee integrate_guarantee(const WelfareSpec& spec, const ModularityClass& cls, const ContactCorrespondence& gamma);

/// Grid pairs where g(x1) + g(x2) is within `tol` of W(x1, x2); both orders.
std::vector<std::pair<double, double>> recover_contact_set(const Guarantee& g, const WelfareSpec& spec,
                                                           const Grid& grid, double tol);

namespace quadrature {

/// Composite 8-point Gauss-Legendre over [a, b] split at `cuts` (any order).
double integrate(const std::function<double(double)>& f, double a, double b, std::vector<double> cuts = {});

}  // namespace quadrature

}  // namespace commons
