#include "commons/families.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace commons::families {

namespace {

Function1D zero(TypeInterval iv) { return Function1D::polynomial(iv, {0.0}); }

TypeInterval sum_interval(TypeInterval iv, std::size_t n) {
  const double k = static_cast<double>(n);
  return {k * iv.low(), k * iv.high()};
}

}  // namespace

RankSeparable rank_indicator(TypeInterval interval, std::size_t n, std::initializer_list<std::size_t> ranks) {
  RankSeparable r{std::vector<Function1D>(n, zero(interval))};
  for (std::size_t k : ranks) {
    if (k < 1 || k > n) throw std::invalid_argument("rank out of range: " + std::to_string(k));
    r.w[k - 1] = Function1D::identity(interval);
  }
  return r;
}

WelfareSpec max_spec(TypeInterval interval, std::size_t n) {
  return WelfareSpec(interval, n, {rank_indicator(interval, n, {1})}, "max");
}

WelfareSpec min_spec(TypeInterval interval, std::size_t n) {
  return WelfareSpec(interval, n, {rank_indicator(interval, n, {n})}, "min");
}

WelfareSpec kth_rank_spec(TypeInterval interval, std::size_t n, std::size_t k) {
  return WelfareSpec(interval, n, {rank_indicator(interval, n, {k})}, "rank " + std::to_string(k));
}

WelfareSpec spread_spec(TypeInterval interval, std::size_t n) {
  RankSeparable r = rank_indicator(interval, n, {1});
  r.w[n - 1] = Function1D::linear(interval, -1.0, 0.0);
  return WelfareSpec(interval, n, {std::move(r)}, "spread");
}

WelfareSpec queuing_spec(TypeInterval interval, std::size_t n) {
  RankSeparable r{{}};
  for (std::size_t k = 1; k <= n; ++k) r.w.push_back(Function1D::linear(interval, static_cast<double>(k), 0.0));
  return WelfareSpec(interval, n, {std::move(r)}, "queuing");
}

WelfareSpec variance_spec(TypeInterval interval, std::size_t n) {
  const Function1D sq = Function1D::polynomial(interval, {0.0, 0.0, 1.0});
  RankSeparable r{std::vector<Function1D>(n, sq)};
  SubstituteInputs s{Function1D::polynomial(sum_interval(interval, n), {0.0, 0.0, -1.0 / static_cast<double>(n)})};
  return WelfareSpec(interval, n, {std::move(r), std::move(s)}, "variance");
}

WelfareSpec product_spec(TypeInterval interval, std::size_t n) {
  Custom c{"product", [](std::span<const double> xs) {
             double p = 1.0;
             for (double v : xs) p *= v;
             return p;
           }};
  return WelfareSpec(interval, n, {std::move(c)}, "product");
}

WelfareSpec public_bad_spec(std::size_t n, double d) {
  if (!(d > 0.0)) throw std::invalid_argument("public bad threshold d must be positive");
  const double nd = static_cast<double>(n) * d;
  const Function1D f = Function1D::piecewise({0.0, nd, 2.0 * nd}, {{0.0}, {-nd, 1.0}});
  return WelfareSpec({0.0, 2.0 * d}, n, {SubstituteInputs{f}}, "public bad");
}

WelfareSpec quota_spec(TypeInterval interval, std::size_t n, std::size_t q, const Function1D& f) {
  if (q < 1 || q > n) throw std::invalid_argument("quota must lie in [1, n]");
  RankSeparable r{std::vector<Function1D>(n, zero(interval))};
  r.w[q - 1] = f;
  return WelfareSpec(interval, n, {std::move(r)}, "quota " + std::to_string(q));
}

WelfareSpec substitute_spec(TypeInterval interval, std::size_t n, const Function1D& f) {
  return WelfareSpec(interval, n, {SubstituteInputs{f}}, "substitute " + f.name());
}

WelfareSpec exp_sum_spec(TypeInterval interval, std::size_t n) {
  return WelfareSpec(interval, n, {SubstituteInputs{Function1D::exp(sum_interval(interval, n))}}, "exp sum");
}

WelfareSpec additive_spec(TypeInterval interval, std::size_t n, const Function1D& w0) {
  return WelfareSpec(interval, n, {SeparableAdditive{w0}}, "additive");
}

WelfareSpec pairwise_product_spec(TypeInterval interval) {
  SubstituteInputs s{Function1D::polynomial(sum_interval(interval, 2), {0.0, 0.0, 0.5})};
  SeparableAdditive a{Function1D::polynomial(interval, {0.0, 0.0, -0.5})};
  return WelfareSpec(interval, 2, {std::move(s), std::move(a)}, "pairwise product");
}

}  // namespace commons::families
