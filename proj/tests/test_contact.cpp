#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "commons/contact.hpp"
#include "commons/families.hpp"
#include "oracles.hpp"

using namespace commons;

namespace {

const TypeInterval kBox(1.0, 5.0);

}  // namespace

TEST_CASE("quadrature is exact for polynomials up to degree fifteen") {
  for (int degree = 0; degree <= 15; ++degree) {
    const auto f = [degree](double t) { return std::pow(t, degree); };
    const double exact = (std::pow(2.0, degree + 1) - std::pow(-1.0, degree + 1)) / (degree + 1);
    CHECK(quadrature::integrate(f, -1.0, 2.0) == doctest::Approx(exact).epsilon(1e-13));
  }
}

TEST_CASE("quadrature splits at cuts for piecewise integrands") {
  const auto kink = [](double t) { return std::abs(t - 0.3); };
  const double exact = 0.5 * 0.3 * 0.3 + 0.5 * 0.7 * 0.7;
  CHECK(quadrature::integrate(kink, 0.0, 1.0, {0.3}) == doctest::Approx(exact).epsilon(1e-14));
  CHECK(quadrature::integrate(kink, 1.0, 0.0, {0.3}) == doctest::Approx(-exact).epsilon(1e-14));
}

TEST_CASE("antidiagonal partners") {
  const auto gamma = ContactCorrespondence::antidiagonal(kBox);
  CHECK(gamma.fixed_point() == doctest::Approx(3.0));
  for (double x : {1.0, 2.0, 3.0, 4.5, 5.0}) {
    const PartnerSet s = gamma.gamma(x);
    CHECK(s.lo == doctest::Approx(6.0 - x));
    CHECK(s.hi == doctest::Approx(6.0 - x));
  }
  CHECK(gamma.contains(2.0, 4.0));
  CHECK_FALSE(gamma.contains(2.0, 3.0, 0.1));
  CHECK(gamma.distance(2.0, 4.5) == doctest::Approx(0.25).epsilon(1e-6));
}

TEST_CASE("low edge pairs the bottom type with the whole interval") {
  const auto gamma = ContactCorrespondence::low_edge(kBox);
  const PartnerSet at_low = gamma.gamma(1.0);
  CHECK(at_low.lo == doctest::Approx(1.0));
  CHECK(at_low.hi == doctest::Approx(5.0));
  CHECK(gamma.gamma(3.0).lo == doctest::Approx(1.0));
  CHECK(gamma.gamma(3.0).hi == doctest::Approx(1.0));
}

TEST_CASE("staircase paths fill their vertical segments") {
  const auto gamma = ContactCorrespondence::from_steps(kBox, 3.0, {{2.0, 4.0}});
  // path (1,5) (1,4) (2,4) (3,4) (3,3)
  CHECK(gamma.gamma(1.5).lo == doctest::Approx(4.0));
  CHECK(gamma.gamma(1.0).hi == doctest::Approx(5.0));
  CHECK(gamma.gamma(1.0).lo == doctest::Approx(4.0));
  CHECK(gamma.gamma(2.5).lo == doctest::Approx(4.0));
  CHECK(gamma.gamma(3.0).lo == doctest::Approx(3.0));
  CHECK(gamma.gamma(3.0).hi == doctest::Approx(4.0));
  // mirrored half
  CHECK(gamma.gamma(4.5).lo == doctest::Approx(1.0));
  CHECK(gamma.gamma(4.0).lo == doctest::Approx(1.0));
  CHECK(gamma.gamma(4.0).hi == doctest::Approx(3.0));
  const auto full = gamma.full_path();
  CHECK(full.front().x == 1.0);
  CHECK(full.back().x == 5.0);
  CHECK(full.back().y == 1.0);
}

TEST_CASE("invalid correspondences are rejected") {
  CHECK_THROWS_AS(ContactCorrespondence::from_path(kBox, {{1.0, 4.0}, {3.0, 3.0}}), std::invalid_argument);
  CHECK_THROWS_AS(ContactCorrespondence::from_path(kBox, {{1.0, 5.0}, {2.0, 5.0}}), std::invalid_argument);
  CHECK_THROWS_AS(ContactCorrespondence::from_path(kBox, {{1.0, 5.0}, {2.0, 1.5}, {2.0, 2.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(ContactCorrespondence::from_path(kBox, {{1.0, 5.0}, {2.0, 4.0}, {1.5, 3.0}, {3.0, 3.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(ContactCorrespondence::from_steps(kBox, 3.0, {{3.5, 4.0}}), std::invalid_argument);
}

TEST_CASE("integrating along the low edge recovers g_L for x1 x2") {
  const auto spec = families::pairwise_product_spec(kBox);
  const auto cls = classify_modularity(spec, Grid(kBox, 9));
  const auto g = integrate_guarantee(spec, cls, ContactCorrespondence::low_edge(kBox));
  CHECK(g.side() == Side::Lower);
  for (double x : {1.0, 2.2, 3.0, 5.0}) CHECK(g(x) == doctest::Approx(x - 0.5).epsilon(1e-12));
}

TEST_CASE("integrated guarantees along random staircases are feasible and tight (brute force)") {
  const auto spec = families::pairwise_product_spec(kBox);
  const auto cls = classify_modularity(spec, Grid(kBox, 9));
  std::mt19937_64 rng(17);
  for (int k = 0; k < 5; ++k) {
    const auto gamma = ContactCorrespondence::random_staircase(kBox, 2, rng);
    const auto g = integrate_guarantee(spec, cls, gamma);
    CHECK(g(gamma.fixed_point()) == doctest::Approx(spec.unanimity_value(gamma.fixed_point())));
    const Grid grid(kBox, 21);
    CHECK(oracle::signed_gap(g, spec, grid) >= -1e-9 * 25.0);
    // contact partners from the correspondence close the inequality exactly
    for (double x : grid.points()) {
      const PartnerSet s = gamma.gamma(x);
      CHECK(g(x) + g(s.lo) == doctest::Approx(spec.evaluate({x, s.lo})).epsilon(1e-10));
    }
  }
}

TEST_CASE("contact integral preconditions") {
  const auto three = families::product_spec(kBox, 3);
  const auto gamma = ContactCorrespondence::antidiagonal(kBox);
  CHECK_THROWS_AS(integrate_guarantee(three, classify_modularity(three, Grid(kBox, 5)), gamma),
                  std::invalid_argument);
  const auto max2 = families::max_spec(kBox, 2);
  CHECK_THROWS_AS(integrate_guarantee(max2, classify_modularity(max2, Grid(kBox, 5)), gamma), std::invalid_argument);
}

TEST_CASE("submodular welfare integrates to an upper guarantee") {
  // W = -x1 x2 is strictly submodular; negating the supermodular answer is the oracle
  const WelfareSpec spec(kBox, 2, {Custom{"neg_product", [](std::span<const double> x) { return -x[0] * x[1]; }}});
  const auto cls = classify_modularity(spec, Grid(kBox, 9));
  REQUIRE(cls.tag == ModularityTag::Submodular);
  const auto g = integrate_guarantee(spec, cls, ContactCorrespondence::antidiagonal(kBox));
  CHECK(g.side() == Side::Upper);
  for (double x : {1.0, 2.5, 5.0}) CHECK(g(x) == doctest::Approx(-(6.0 * x - 0.5 * x * x - 9.0)).epsilon(1e-9));
}

TEST_CASE("recovered contact set of g_L for x1 x2") {
  const auto spec = families::pairwise_product_spec(kBox);
  const auto cls = classify_modularity(spec, Grid(kBox, 9));
  const auto g = integrate_guarantee(spec, cls, ContactCorrespondence::low_edge(kBox));
  const auto pairs = recover_contact_set(g, spec, Grid(kBox, 9), 1e-9);
  REQUIRE_FALSE(pairs.empty());
  for (const auto& [a, b] : pairs) CHECK((a == 1.0 || b == 1.0));
}
