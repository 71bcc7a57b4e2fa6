#include "commons/interval.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>

namespace commons {

TypeInterval::TypeInterval(double low, double high) : low_(low), high_(high) {
  if (!std::isfinite(low) || !std::isfinite(high)) {
    throw std::invalid_argument("type interval bounds must be finite");
  }
  if (!(low < high)) {
    throw std::invalid_argument("type interval needs low < high, got [" + std::to_string(low) +
                                ", " + std::to_string(high) + "]");
  }
}

double TypeInterval::admit(double t) const {
  if (!contains(t)) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "type %.17g outside [%.17g, %.17g]", t, low_, high_);
    throw DomainError(buf);
  }
  return std::clamp(t, low_, high_);
}

std::vector<double> order_statistics(const Profile& x) {
  std::vector<double> out(x);
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

std::string format_profile(const Profile& x) {
  std::string s = "(";
  char buf[40];
  for (std::size_t i = 0; i < x.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.10g", x[i]);
    if (i) s += ", ";
    s += buf;
  }
  return s + ")";
}

}  // namespace commons
