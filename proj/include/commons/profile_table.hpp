#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace commons {

class WelfareSpec;
class Grid;

/// Default ceiling on the number of sorted profiles a scan may touch.
inline constexpr std::uint64_t kDefaultEvaluationCap = 5'000'000;

/// Number of multisets of size k drawn from m items: C(m + k - 1, k).
std::uint64_t multiset_count(std::size_t m, std::size_t k);

/// Calls `fn` once per nondecreasing index vector of length k over [0, m).
/// Enumeration order is lexicographic, so results are reproducible.
void for_each_multiset(std::size_t m, std::size_t k, const std::function<void(std::span<const std::size_t>)>& fn);

/// Throws std::length_error with a hint when `count` exceeds `cap`.
void check_evaluation_budget(std::uint64_t count, std::uint64_t cap, const char* what);

/// W tabulated on every sorted grid profile; lookups take grid indices.
///
/// Symmetry of W means one value per multiset suffices. The table is shared by
/// the modularity classifier and the feasibility/tightness scans.
class ProfileTable {
 public:
  ProfileTable(const WelfareSpec& spec, const Grid& grid, std::uint64_t cap = kDefaultEvaluationCap);

  std::size_t n() const { return n_; }
  std::size_t grid_size() const { return m_; }

  /// `idx` must be sorted ascending and have length n.
  double at_sorted(std::span<const std::size_t> idx) const { return values_[rank(idx)]; }
  /// Any order; sorts a copy.
  double at(std::span<const std::size_t> idx) const;

  /// max(1, max |W|) over the grid: the scale for relative tolerances.
  double scale() const { return scale_; }

 private:
  std::uint64_t rank(std::span<const std::size_t> idx) const;

  std::size_t n_;
  std::size_t m_;
  std::vector<std::vector<std::uint64_t>> binom_;
  std::vector<double> values_;
  double scale_ = 1.0;
};

}  // namespace commons
