#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "commons/families.hpp"
#include "commons/rules.hpp"
#include "commons/verify.hpp"
#include "oracles.hpp"

using namespace commons;

namespace {

const TypeInterval kUnit(0.0, 1.0);

double total(const Shares& s) { return std::accumulate(s.begin(), s.end(), 0.0); }

}  // namespace

TEST_CASE("serial shares for two agents on the queuing welfare") {
  const auto spec = families::queuing_spec({0.0, 2.0}, 2);
  const Shares s = serial_up(spec, {1.0, 2.0});
  CHECK(s[0] == doctest::Approx(1.5));
  CHECK(s[1] == doctest::Approx(2.5));
  CHECK(total(s) == doctest::Approx(4.0));
}

TEST_CASE("serial rules agree with the telescoping oracle") {
  std::mt19937_64 rng(11);
  for (const auto& spec : {families::queuing_spec(kUnit, 3), families::max_spec(kUnit, 4),
                           families::product_spec({1.0, 5.0}, 3), families::variance_spec(kUnit, 3)}) {
    for (int k = 0; k < 25; ++k) {
      const Profile x = random_profile(spec, rng);
      const Shares up = serial_up(spec, x);
      const Shares expected = oracle::serial_shares_ascending(spec, x);
      for (std::size_t i = 0; i < x.size(); ++i) CHECK(up[i] == doctest::Approx(expected[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("serial down on max serves the largest type first") {
  const auto mx = families::max_spec(kUnit, 3);
  const Profile x{0.2, 0.9, 0.5};
  const Shares down = serial_down(mx, x);
  CHECK(total(down) == doctest::Approx(0.9));
  // served from the top down, every level of max is worth 0.9
  CHECK(down[1] == doctest::Approx(0.3));
  CHECK(down[2] == doctest::Approx(0.3));
  CHECK(down[0] == doctest::Approx(0.3));
}

TEST_CASE("ties are handled by stable order and keep symmetry") {
  const auto spec = families::queuing_spec(kUnit, 3);
  const Shares s = serial_up(spec, {0.5, 0.5, 0.1});
  CHECK(s[0] == doctest::Approx(s[1]));
}

TEST_CASE("average returns splits output in proportion to inputs") {
  const auto f = Function1D::piecewise({0.0, 3.0, 6.0}, {{0.0}, {-3.0, 1.0}});
  const Shares s = average_returns(f, {1.0, 2.0, 3.0});
  CHECK(s[0] == doctest::Approx(0.5));
  CHECK(s[1] == doctest::Approx(1.0));
  CHECK(s[2] == doctest::Approx(1.5));
  const Shares zero = average_returns(f, {0.0, 0.0, 0.0});
  CHECK(total(zero) == doctest::Approx(0.0));
}

TEST_CASE("quadratic transport is budget balanced on the variance welfare") {
  const auto spec = families::variance_spec(kUnit, 3);
  const Profile x{0.0, 0.3, 1.0};
  const Shares s = quadratic_transport_rule(x);
  CHECK(total(s) == doctest::Approx(spec.evaluate(x)));
}

TEST_CASE("spread rule charges extremes beyond the benchmarks") {
  const Shares s = spread_rule({0.4, 0.6}, {0.1, 0.5, 0.9});
  // range 0.8: 0.3 above c_max paid by the top, 0.3 below c_min by the bottom, 0.2 split equally
  CHECK(s[0] == doctest::Approx(0.3 + 0.2 / 3.0));
  CHECK(s[1] == doctest::Approx(0.2 / 3.0));
  CHECK(s[2] == doctest::Approx(0.3 + 0.2 / 3.0));
  CHECK_THROWS_AS(spread_rule({0.4}, {0.1, 0.5, 0.9}), ShapeError);
}

TEST_CASE("moving average interpolates between two guarantees") {
  const auto spec = families::max_spec(kUnit, 3);
  const auto cls = classify_modularity(spec, Grid(kUnit, 7));
  const auto lo = unanimity_guarantee(spec, cls);
  const auto hi = high_guarantee(spec, cls);
  const Profile x{0.2, 0.9, 0.5};
  const Shares s = moving_average_rule(lo, hi, spec, x);
  CHECK(total(s) == doctest::Approx(spec.evaluate(x)));
  // W = 0.9, sum una = 1.6 / 3, sum g_H = 1
  const double lambda = (1.0 - 0.9) / (1.0 - 1.6 / 3.0);
  CHECK(s[0] == doctest::Approx(lambda * lo(0.2) + (1.0 - lambda) * hi(0.2)));
}

TEST_CASE("moving average refuses guarantees that do not bracket W") {
  const auto spec = families::max_spec(kUnit, 3);
  const auto cls = classify_modularity(spec, Grid(kUnit, 7));
  const auto una = unanimity_guarantee(spec, cls);
  CHECK_THROWS_AS(moving_average_rule(una, una, spec, {0.2, 0.9, 0.5}), std::domain_error);
}

TEST_CASE("every rule is budget balanced and symmetric") {
  std::mt19937_64 rng(21);
  const auto mx = families::max_spec(kUnit, 3);
  const auto pb = families::public_bad_spec(3, 1.0);
  const auto var = families::variance_spec(kUnit, 3);
  const auto sp = families::spread_spec(kUnit, 3);
  const std::vector<std::pair<WelfareSpec, SharingRule>> cases = {
      {mx, serial_up_rule(mx)},        {mx, serial_down_rule(mx)},     {mx, equal_split_rule(mx)},
      {mx, proportional_rule(mx)},     {pb, average_returns_rule(*pb.substitute_function())},
      {var, quadratic_transport()},    {sp, spread({0.3, 0.6})},
  };
  for (const auto& [spec, rule] : cases) {
    CHECK_MESSAGE(budget_balance_check(rule, spec, rng, 50).passed, rule.name);
    CHECK_MESSAGE(rule_symmetry_check(rule, spec, rng, 50).passed, rule.name);
  }
}

TEST_CASE("implied guarantees of equal split on max") {
  const auto spec = families::max_spec(kUnit, 3);
  const Grid grid(kUnit, 5);
  const auto implied = implied_guarantees(equal_split_rule(spec), spec, grid);
  REQUIRE(implied.lower.points.size() == grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(implied.lower.points[i].second == doctest::Approx(grid[i] / 3.0));
    CHECK(implied.upper.points[i].second == doctest::Approx(1.0 / 3.0));
  }
}
