#pragma once

#include <cstddef>
#include <vector>

#include "commons/interval.hpp"

namespace commons {

/// Uniform subdivision of the type interval merged with anchor types.
///
/// Anchors are the parameters of the guarantees under test (benchmarks c, p,
/// a, breakpoints) so that their contact profiles land exactly on the grid.
/// When an anchor falls within rounding distance of a uniform point the
/// anchor value wins.
class Grid {
 public:
  Grid(TypeInterval interval, std::size_t m, std::vector<double> anchors = {});

  const TypeInterval& interval() const { return interval_; }
  std::size_t uniform_count() const { return m_; }
  const std::vector<double>& anchors() const { return anchors_; }
  const std::vector<double>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  double operator[](std::size_t i) const { return points_[i]; }

  /// Largest gap between consecutive points ("one grid cell").
  double max_spacing() const;
  /// Index of the grid point nearest to `t`.
  std::size_t nearest(double t) const;

  /// Copy with extra anchors merged in.
  Grid with_anchors(const std::vector<double>& extra) const;

 private:
  TypeInterval interval_;
  std::size_t m_;
  std::vector<double> anchors_;
  std::vector<double> points_;
};

}  // namespace commons
