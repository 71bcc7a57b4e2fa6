#include "commons/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace commons {

Grid::Grid(TypeInterval interval, std::size_t m, std::vector<double> anchors)
    : interval_(interval), m_(m), anchors_(std::move(anchors)) {
  if (m < 2) throw std::invalid_argument("grid needs at least 2 uniform points");
  for (double& a : anchors_) a = interval_.admit(a);

  const double merge = 1e-12 * std::max(1.0, interval_.width());
  points_.reserve(m + anchors_.size());
  for (std::size_t i = 0; i < m; ++i) {
    if (i + 1 == m) {
      points_.push_back(interval_.high());
    } else {
      points_.push_back(interval_.low() + interval_.width() * static_cast<double>(i) / static_cast<double>(m - 1));
    }
  }
  for (double a : anchors_) {
    auto it = std::lower_bound(points_.begin(), points_.end(), a);
    if (it != points_.end() && std::abs(*it - a) <= merge) {
      *it = a;
    } else if (it != points_.begin() && std::abs(*(it - 1) - a) <= merge) {
      *(it - 1) = a;
    } else {
      points_.insert(it, a);
    }
  }
}

double Grid::max_spacing() const {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < points_.size(); ++i) s = std::max(s, points_[i + 1] - points_[i]);
  return s;
}

std::size_t Grid::nearest(double t) const {
  auto it = std::lower_bound(points_.begin(), points_.end(), t);
  if (it == points_.end()) return points_.size() - 1;
  const auto idx = static_cast<std::size_t>(it - points_.begin());
  if (idx > 0 && t - points_[idx - 1] < *it - t) return idx - 1;
  return idx;
}

Grid Grid::with_anchors(const std::vector<double>& extra) const {
  auto all = anchors_;
  all.insert(all.end(), extra.begin(), extra.end());
  return Grid(interval_, m_, std::move(all));
}

}  // namespace commons
