#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "commons/grid.hpp"
#include "commons/guarantees.hpp"
#include "commons/profile_table.hpp"
#include "commons/rules.hpp"
#include "commons/welfare.hpp"

namespace commons {

/// Relative tolerances; each is multiplied by max(1, max |W| on the grid).
struct Tolerances {
  double feasibility = 1e-8;
  double tightness = 1e-7;
  double derivative = 1e-4;
  double ordering = 1e-8;
  std::uint64_t evaluation_cap = kDefaultEvaluationCap;
};

struct VerificationReport {
  std::string check;
  bool passed = false;
  /// Signed margin: >= -tolerance passes for feasibility/order checks;
  /// for tightness it is the largest slack (<= tolerance passes).
  double worst_gap = 0.0;
  /// Ascending profile (or a single type, or a type pair) where worst_gap occurs.
  Profile witness;
  double tolerance = 0.0;
  std::string note;

  std::string summary() const;
};

/// Lower side: min over sorted grid profiles of W(x) - sum g(x_i); upper side mirrored.
VerificationReport feasibility_gap(const Guarantee& g, const WelfareSpec& spec, const Grid& grid,
                                   const Tolerances& tol = {});

/// max over grid types t of the smallest |W(t, y) - g(t) - sum g(y_j)| over grid
/// opponents y and the guarantee's own contact hints. Throws
/// std::invalid_argument when g fails feasibility.
VerificationReport tightness_slack(const Guarantee& g, const WelfareSpec& spec, const Grid& grid,
                                   const Tolerances& tol = {});

/// Lower side: g1 >= g2 on the grid and strictly somewhere. Upper side flipped.
bool dominates(const Guarantee& g1, const Guarantee& g2, const Grid& grid, double rel_tol = 1e-9);

/// Endpoint chains g_H(L) < g(L) < g_L(L) and g_L(H) < g(H) < g_H(H)
/// (supermodular; reversed for submodular). Equality allowed only where g
/// coincides with g_L or g_H.
VerificationReport bracket_check(const Guarantee& g, const WelfareSpec& spec, const ModularityClass& cls,
                                 const Grid& grid, const Tolerances& tol = {});

/// Increments of g lie between those of g_L and g_H for every grid pair t < t'.
VerificationReport growth_order_check(const Guarantee& g, const WelfareSpec& spec, const ModularityClass& cls,
                                      const Grid& grid, const Tolerances& tol = {});

/// g_minus <= una <= g_plus pointwise on the grid.
VerificationReport sandwich_check(const Guarantee& g_minus, const Guarantee& g_plus, const WelfareSpec& spec,
                                  const Grid& grid, const Tolerances& tol = {});

/// One-sided slope inequalities of g against dW/dx1 at every contact found on
/// the grid: for a lower guarantee g'_+ <= dW_+ and g'_- >= dW_-, reversed for
/// an upper one. At smooth contacts this forces g' = dW/dx1.
VerificationReport contact_derivative_check(const Guarantee& g, const WelfareSpec& spec, const Grid& grid,
                                            const Tolerances& tol = {});

/// Number of maximal runs of consecutive grid points where |g - una| <= tolerance.
std::size_t unanimity_touch_count(const Guarantee& g, const WelfareSpec& spec, const Grid& grid,
                                  const Tolerances& tol = {});

/// w_k(y) - w_k(z) <= w_{k+1}(y) - w_{k+1}(z) for grid z <= y (Supermodular
/// direction) or the reverse chain (Submodular direction).
VerificationReport rank_growth_check(const std::vector<Function1D>& w, const Grid& grid, ModularityTag direction,
                                     double rel_tol = 1e-9);

/// Random profiles, each evaluated under 20 random permutations.
VerificationReport symmetry_audit(const WelfareSpec& spec, std::mt19937_64& rng, std::size_t profiles = 50);

/// Shares sum to W(x) and permute with the profile, on random profiles.
VerificationReport budget_balance_check(const SharingRule& rule, const WelfareSpec& spec, std::mt19937_64& rng,
                                        std::size_t profiles = 200, double rel_tol = 1e-9);
VerificationReport rule_symmetry_check(const SharingRule& rule, const WelfareSpec& spec, std::mt19937_64& rng,
                                       std::size_t profiles = 200, double rel_tol = 1e-9);

Profile random_profile(const WelfareSpec& spec, std::mt19937_64& rng);

}  // namespace commons
