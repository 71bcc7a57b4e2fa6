#pragma once

#include <cstddef>

#include "commons/function1d.hpp"
#include "commons/welfare.hpp"

// Ready-made welfare functions used throughout the examples and tests.
namespace commons::families {

WelfareSpec max_spec(TypeInterval interval, std::size_t n);
WelfareSpec min_spec(TypeInterval interval, std::size_t n);
/// W(x) = x^k, the k-th largest type (1-based).
WelfareSpec kth_rank_spec(TypeInterval interval, std::size_t n, std::size_t k);
/// W(x) = x^1 - x^n.
WelfareSpec spread_spec(TypeInterval interval, std::size_t n);
/// W(x) = x^1 + 2 x^2 + ... + n x^n.
WelfareSpec queuing_spec(TypeInterval interval, std::size_t n);
/// W(x) = sum x_i^2 - x_N^2 / n.
WelfareSpec variance_spec(TypeInterval interval, std::size_t n);
/// W(x) = prod x_i.
WelfareSpec product_spec(TypeInterval interval, std::size_t n);
/// W(x) = (x_N - n d)_+ on [0, 2d]^n.
WelfareSpec public_bad_spec(std::size_t n, double d);
/// W(x) = F(x^q).
WelfareSpec quota_spec(TypeInterval interval, std::size_t n, std::size_t q, const Function1D& f);
/// W(x) = F(x_N); F must live on [n low, n high].
WelfareSpec substitute_spec(TypeInterval interval, std::size_t n, const Function1D& f);
/// W(x) = exp(x_N).
WelfareSpec exp_sum_spec(TypeInterval interval, std::size_t n);
/// W(x) = sum w0(x_i).
WelfareSpec additive_spec(TypeInterval interval, std::size_t n, const Function1D& w0);
/// W(x1, x2) = x1 x2, written as ((x1+x2)^2 - x1^2 - x2^2)/2 so partials are exact.
WelfareSpec pairwise_product_spec(TypeInterval interval);

/// Rank weights w_k(z) = z for k in `ranks`, zero elsewhere.
RankSeparable rank_indicator(TypeInterval interval, std::size_t n, std::initializer_list<std::size_t> ranks);

}  // namespace commons::families
