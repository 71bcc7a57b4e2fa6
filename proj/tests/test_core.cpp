#include <doctest.h>

#include <cmath>
#include <set>
#include <stdexcept>

#include "commons/function1d.hpp"
#include "commons/grid.hpp"
#include "commons/interval.hpp"
#include "commons/profile_table.hpp"
#include "commons/families.hpp"

using namespace commons;

TEST_CASE("interval admits values within slack and rejects the rest") {
  const TypeInterval iv(0.0, 1.0);
  CHECK(iv.admit(0.5) == 0.5);
  CHECK(iv.admit(1.0 + 1e-14) == 1.0);
  CHECK(iv.admit(-1e-14) == 0.0);
  CHECK_THROWS_AS(iv.admit(1.1), DomainError);
  CHECK_THROWS_AS(TypeInterval(1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(TypeInterval(2.0, 1.0), std::invalid_argument);
}

TEST_CASE("order statistics put the largest type first") {
  const auto os = order_statistics({0.2, 0.9, 0.5});
  REQUIRE(os.size() == 3);
  CHECK(os[0] == 0.9);
  CHECK(os[1] == 0.5);
  CHECK(os[2] == 0.2);
}

TEST_CASE("piecewise function evaluates each piece and one-sided slopes") {
  // (x - 1)_+ on [0, 3]
  const auto f = Function1D::piecewise({0.0, 1.0, 3.0}, {{0.0}, {-1.0, 1.0}});
  CHECK(f(0.5) == doctest::Approx(0.0));
  CHECK(f(2.5) == doctest::Approx(1.5));
  const Slope s = f.derivative(1.0);
  CHECK(s.left == doctest::Approx(0.0));
  CHECK(s.right == doctest::Approx(1.0));
  CHECK(s.contains(0.4, 0.0));
  CHECK_FALSE(s.contains(1.2, 0.0));
  CHECK(f.interior_breakpoints() == std::vector<double>{1.0});
  CHECK(f.is_convex());
  CHECK_FALSE(f.is_concave());
  CHECK_FALSE(f.is_strictly_increasing());
}

TEST_CASE("piecewise function rejects malformed input") {
  CHECK_THROWS_AS(Function1D::piecewise({0.0, 1.0}, {{0.0}, {1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(Function1D::piecewise({0.0, 1.0, 2.0}, {{0.0}, {1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(Function1D::piecewise({0.0, 0.0, 2.0}, {{0.0}, {0.0}}), std::invalid_argument);
  CHECK_THROWS_AS(Function1D::polynomial({0.0, 1.0}, {0, 0, 0, 0, 0, 1}), std::invalid_argument);
}

TEST_CASE("piecewise outside its domain throws") {
  const auto f = Function1D::identity({0.0, 1.0});
  CHECK_THROWS_AS(f(1.5), DomainError);
}

TEST_CASE("analytic forms and their derivatives") {
  const auto e = Function1D::exp({0.0, 2.0});
  CHECK(e(1.0) == doctest::Approx(std::exp(1.0)));
  CHECK(e.derivative(1.0).mid() == doctest::Approx(std::exp(1.0)));
  CHECK(e.is_convex());
  CHECK(e.is_strictly_increasing());
  const auto l = Function1D::log({1.0, 5.0});
  CHECK(l(5.0) == doctest::Approx(std::log(5.0)));
  CHECK(l.is_concave());
}

TEST_CASE("plus and scaled combine piecewise functions on a common domain") {
  const auto a = Function1D::piecewise({0.0, 1.0, 2.0}, {{0.0, 1.0}, {2.0, -1.0}});
  const auto b = Function1D::polynomial({0.0, 2.0}, {0.0, 0.0, 1.0});
  const auto sum = a.plus(b);
  for (double x : {0.0, 0.3, 1.0, 1.7, 2.0}) CHECK(sum(x) == doctest::Approx(a(x) + b(x)));
  const auto twice = b.scaled(-2.0);
  CHECK(twice(1.5) == doctest::Approx(-4.5));
  CHECK(sum.interior_breakpoints() == std::vector<double>{1.0});
}

TEST_CASE("grid merges anchors and keeps the endpoints exact") {
  const Grid g({0.0, 1.0}, 11, {0.33, 0.5});
  CHECK(g.points().front() == 0.0);
  CHECK(g.points().back() == 1.0);
  CHECK(g.size() == 12);
  CHECK(std::is_sorted(g.points().begin(), g.points().end()));
  CHECK(g[g.nearest(0.331)] == 0.33);
  CHECK(g.max_spacing() == doctest::Approx(0.1));
  CHECK(g.with_anchors({0.77}).size() == 13);
  CHECK_THROWS_AS(Grid({0.0, 1.0}, 1), std::invalid_argument);
}

TEST_CASE("multiset count matches an explicit enumeration") {
  for (std::size_t m : {1u, 3u, 5u}) {
    for (std::size_t k : {0u, 1u, 2u, 3u}) {
      std::set<std::vector<std::size_t>> seen;
      std::size_t visits = 0;
      for_each_multiset(m, k, [&](std::span<const std::size_t> idx) {
        ++visits;
        CHECK(std::is_sorted(idx.begin(), idx.end()));
        seen.insert({idx.begin(), idx.end()});
      });
      CHECK(visits == multiset_count(m, k));
      CHECK(seen.size() == visits);
    }
  }
  CHECK(multiset_count(41, 3) == 12341);
}

TEST_CASE("evaluation budget refuses oversized scans") {
  CHECK_NOTHROW(check_evaluation_budget(10, 100, "test"));
  CHECK_THROWS_AS(check_evaluation_budget(101, 100, "test"), std::length_error);
  const auto spec = families::max_spec({0.0, 1.0}, 8);
  CHECK_THROWS_AS(ProfileTable(spec, Grid({0.0, 1.0}, 101)), std::length_error);
}

TEST_CASE("profile table values agree with direct evaluation") {
  const auto spec = families::queuing_spec({0.0, 1.0}, 3);
  const Grid grid({0.0, 1.0}, 5);
  const ProfileTable table(spec, grid);
  const std::vector<std::size_t> sorted{0, 2, 4};
  CHECK(table.at_sorted(sorted) == doctest::Approx(spec.evaluate({0.0, 0.5, 1.0})));
  const std::vector<std::size_t> shuffled{4, 0, 2};
  CHECK(table.at(shuffled) == doctest::Approx(spec.evaluate({1.0, 0.0, 0.5})));
  CHECK(table.scale() >= 1.0);
}
