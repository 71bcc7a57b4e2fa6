#include "commons/profile_table.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "commons/grid.hpp"
#include "commons/welfare.hpp"

namespace commons {

std::uint64_t multiset_count(std::size_t m, std::size_t k) {
  // C(m + k - 1, k) computed incrementally; saturates instead of overflowing.
  long double acc = 1.0L;
  for (std::size_t j = 1; j <= k; ++j) {
    acc = acc * static_cast<long double>(m + k - j) / static_cast<long double>(j);
  }
  if (acc > 1e18L) return UINT64_MAX;
  return static_cast<std::uint64_t>(std::llround(static_cast<double>(acc)));
}

void for_each_multiset(std::size_t m, std::size_t k, const std::function<void(std::span<const std::size_t>)>& fn) {
  if (m == 0) return;
  std::vector<std::size_t> idx(k, 0);
  while (true) {
    fn(idx);
    // advance: find rightmost position that can still grow
    std::size_t pos = k;
    while (pos > 0 && idx[pos - 1] == m - 1) --pos;
    if (pos == 0) return;
    const std::size_t v = idx[pos - 1] + 1;
    for (std::size_t j = pos - 1; j < k; ++j) idx[j] = v;
  }
}

void check_evaluation_budget(std::uint64_t count, std::uint64_t cap, const char* what) {
  if (count > cap) {
    throw std::length_error(std::string(what) + " needs " + std::to_string(count) +
                            " profile evaluations, above the cap of " + std::to_string(cap) +
                            "; reduce the grid size m or the number of agents n");
  }
}

ProfileTable::ProfileTable(const WelfareSpec& spec, const Grid& grid, std::uint64_t cap)
    : n_(spec.n()), m_(grid.size()) {
  const std::uint64_t count = multiset_count(m_, n_);
  check_evaluation_budget(count, cap, "profile table");

  const std::size_t top = m_ + n_;
  binom_.assign(top + 1, std::vector<std::uint64_t>(n_ + 2, 0));
  for (std::size_t a = 0; a <= top; ++a) {
    binom_[a][0] = 1;
    for (std::size_t b = 1; b <= std::min(a, n_ + 1); ++b) {
      binom_[a][b] = binom_[a - 1][b - 1] + (b <= a - 1 ? binom_[a - 1][b] : 0);
    }
  }

  values_.assign(count, 0.0);
  std::vector<double> xs(n_);
  const auto& pts = grid.points();
  for_each_multiset(m_, n_, [&](std::span<const std::size_t> idx) {
    for (std::size_t j = 0; j < n_; ++j) xs[j] = pts[idx[j]];
    const double w = spec.evaluate_sorted(xs);
    values_[rank(idx)] = w;
    scale_ = std::max(scale_, std::abs(w));
  });
}

std::uint64_t ProfileTable::rank(std::span<const std::size_t> idx) const {
  // colex rank of the strictly increasing combination c_j = idx_j + j
  std::uint64_t r = 0;
  for (std::size_t j = 0; j < idx.size(); ++j) r += binom_[idx[j] + j][j + 1];
  return r;
}

double ProfileTable::at(std::span<const std::size_t> idx) const {
  std::size_t buf[16];
  if (idx.size() > 16) throw std::invalid_argument("profile table supports at most 16 agents");
  std::copy(idx.begin(), idx.end(), buf);
  std::sort(buf, buf + idx.size());
  return values_[rank({buf, idx.size()})];
}

}  // namespace commons
