#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "commons/families.hpp"
#include "commons/guarantees.hpp"
#include "oracles.hpp"

using namespace commons;

namespace {

const TypeInterval kUnit(0.0, 1.0);

ModularityClass classify(const WelfareSpec& spec) { return classify_modularity(spec, Grid(spec.interval(), 7)); }

void check_feasible_and_tight(const Guarantee& g, const WelfareSpec& spec, const Grid& grid) {
  const double tol = 1e-9 * std::max(1.0, std::abs(spec.evaluate(Profile(spec.n(), spec.interval().high()))));
  CHECK_MESSAGE(oracle::signed_gap(g, spec, grid) >= -tol, g.label());
  CHECK_MESSAGE(oracle::worst_contact_slack(g, spec, grid) <= tol, g.label());
}

}  // namespace

TEST_CASE("unanimity guarantee sits opposite the benchmark side") {
  const auto mx = families::max_spec(kUnit, 3);
  const auto una = unanimity_guarantee(mx, classify(mx));
  CHECK(una.side() == Side::Lower);
  CHECK(una(0.6) == doctest::Approx(0.2));
  const auto pr = families::product_spec({1.0, 5.0}, 3);
  CHECK(unanimity_guarantee(pr, classify(pr)).side() == Side::Upper);
  const auto quota = families::quota_spec(kUnit, 4, 2, Function1D::identity(kUnit));
  CHECK_THROWS_AS(unanimity_guarantee(quota, classify(quota)), std::invalid_argument);
}

TEST_CASE("additive welfare has unanimity on both sides") {
  const auto add = families::additive_spec(kUnit, 3, Function1D::polynomial(kUnit, {0.0, 1.0, 1.0}));
  const auto cls = classify(add);
  const auto lo = unanimity_guarantee(add, cls, Side::Lower);
  const auto hi = unanimity_guarantee(add, cls, Side::Upper);
  CHECK(lo.side() == Side::Lower);
  CHECK(hi.side() == Side::Upper);
  CHECK(lo(0.5) == doctest::Approx(0.75));
}

TEST_CASE("stand-alone guarantee on max has the closed form max(x, p) - 2p/3") {
  const auto spec = families::max_spec(kUnit, 3);
  const auto cls = classify(spec);
  for (double p : {0.0, 0.3, 1.0}) {
    const auto g = stand_alone_guarantee(spec, p, cls);
    CHECK(g.side() == Side::Upper);
    for (double x : {0.0, 0.2, 0.3, 0.65, 1.0}) CHECK(g(x) == doctest::Approx(std::max(x, p) - 2.0 * p / 3.0));
    check_feasible_and_tight(g, spec, Grid(kUnit, 9, {p}));
  }
  CHECK(low_guarantee(spec, cls).label() == "g_L");
  CHECK(high_guarantee(spec, cls).label() == "g_H");
}

TEST_CASE("simple guarantee hint reproduces a contact profile") {
  const auto spec = families::queuing_spec(kUnit, 3);
  const auto g = simple_guarantee(spec, {0.2, 0.8}, classify(spec));
  for (double x : {0.0, 0.5, 1.0}) {
    const auto hints = g.contact_hints(x);
    REQUIRE(hints.size() == 1);
    Profile profile{x};
    profile.insert(profile.end(), hints[0].begin(), hints[0].end());
    double total = 0.0;
    for (double v : profile) total += g(v);
    CHECK(total == doctest::Approx(spec.evaluate(profile)));
  }
}

TEST_CASE("simple guarantees on rank-separable welfare are tight (brute force)") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& spec : {families::queuing_spec(kUnit, 3), families::spread_spec(kUnit, 3)}) {
    const auto cls = classify(spec);
    for (int k = 0; k < 4; ++k) {
      const std::vector<double> c{u(rng), u(rng)};
      check_feasible_and_tight(simple_guarantee(spec, c, cls), spec, Grid(kUnit, 9, c));
    }
  }
}

TEST_CASE("g_{l,h} on the public bad") {
  const auto spec = families::public_bad_spec(3, 1.0);
  const auto g11 = lh_guarantee(spec, 1, 1);
  CHECK(g11.side() == Side::Lower);
  for (double x : {0.0, 0.5, 1.0, 1.5, 2.0}) CHECK(g11(x) == doctest::Approx(std::max(x - 1.0, 0.0) - 1.0 / 3.0));
  CHECK(lh_guarantee(spec, 2, 0)(1.3) == doctest::Approx(0.0));
  CHECK(lh_guarantee(spec, 0, 2)(1.3) == doctest::Approx(0.3));
  check_feasible_and_tight(g11, spec, Grid(spec.interval(), 9, {1.0}));
  CHECK_THROWS_AS(lh_guarantee(spec, 2, 1), std::invalid_argument);
}

TEST_CASE("g_{l,h} needs a convex or concave F") {
  const auto wiggly = Function1D::piecewise({0.0, 1.0, 2.0, 3.0}, {{0.0, 1.0}, {1.0}, {-1.0, 1.0}});
  CHECK_THROWS_AS(lh_guarantee(wiggly, 3, 1, 1, kUnit), std::invalid_argument);
  const auto concave = Function1D::polynomial({0.0, 3.0}, {0.0, 3.0, -0.5});
  CHECK(lh_guarantee(concave, 3, 1, 1, kUnit).side() == Side::Upper);
}

TEST_CASE("tangent guarantee family at the kink of the public bad") {
  const auto spec = families::public_bad_spec(3, 1.0);
  for (double lambda : {0.0, 0.5, 1.0}) {
    const auto g = tangent_guarantee(spec, 1.0, lambda);
    for (double x : {0.0, 0.4, 1.0, 1.6, 2.0}) CHECK(g(x) == doctest::Approx(lambda * (x - 1.0)));
    check_feasible_and_tight(g, spec, Grid(spec.interval(), 9, {1.0}));
  }
  CHECK_THROWS_AS(tangent_guarantee(spec, 1.0, 1.5), std::invalid_argument);
}

TEST_CASE("tangent guarantee on a smooth convex F (brute force)") {
  const auto f = Function1D::polynomial({0.0, 3.0}, {0.0, 0.0, 1.0});
  const auto spec = families::substitute_spec(kUnit, 3, f);
  for (double a : {0.1, 0.5, 0.9}) {
    const auto g = tangent_guarantee(f, 3, a, kUnit);
    CHECK(g(a) == doctest::Approx(spec.unanimity_value(a)));
    check_feasible_and_tight(g, spec, Grid(kUnit, 11, {a}));
  }
}

TEST_CASE("quota guarantees match a brute-force check for every q and p") {
  const auto f = Function1D::identity(kUnit);
  for (std::size_t q : {2u, 3u}) {
    const auto spec = families::quota_spec(kUnit, 4, q, f);
    for (double p : {0.0, 0.5, 1.0}) {
      const auto pair = quota_guarantees(f, 4, q, p, p);
      CHECK(pair.lower.side() == Side::Lower);
      CHECK(pair.upper.side() == Side::Upper);
      check_feasible_and_tight(pair.lower, spec, Grid(kUnit, 5, {p}));
      check_feasible_and_tight(pair.upper, spec, Grid(kUnit, 5, {p}));
    }
  }
  CHECK_THROWS_AS(quota_guarantees(f, 4, 1, 0.5, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(quota_guarantees(f, 4, 4, 0.5, 0.5), std::invalid_argument);
}

TEST_CASE("quota lower guarantee closed form") {
  const auto f = Function1D::identity(kUnit);
  const auto pair = quota_guarantees(f, 4, 2, 0.5, 0.5);
  // below p the loss F(x) - F(p) is spread over n - q + 1 agents
  CHECK(pair.lower(0.2) == doctest::Approx(0.125 + (0.2 - 0.5) / 3.0));
  CHECK(pair.lower(0.8) == doctest::Approx(0.125));
  // above p the gain is spread over q agents
  CHECK(pair.upper(0.8) == doctest::Approx(0.125 + 0.3 / 2.0));
  CHECK(pair.upper(0.2) == doctest::Approx(0.125));
}

TEST_CASE("transforming the exponential sum reproduces the product guarantees") {
  const TypeInterval iv(1.0, 5.0);
  const TypeInterval base(0.0, std::log(5.0));
  const auto f = Function1D::exp({0.0, 4.0 * std::log(5.0)});
  const auto g = transform_guarantee(lh_guarantee(f, 4, 1, 2, base), Function1D::log(iv));
  CHECK(g.side() == Side::Lower);
  CHECK(g(1.0) == doctest::Approx(-43.75));
  CHECK(g(5.0) == doctest::Approx(56.25));
  const auto spec = families::product_spec(iv, 4);
  const auto via_spec = lh_guarantee(WelfareSpec(iv, 4, {Transformed{std::make_shared<const WelfareSpec>(
                                                                        families::exp_sum_spec(base, 4)),
                                                                    Function1D::log(iv)}}),
                                     1, 2);
  CHECK(via_spec(3.0) == doctest::Approx(g(3.0)));
  check_feasible_and_tight(g, spec, Grid(iv, 5));
}

TEST_CASE("negate, chore, shift and mixture") {
  const auto spec = families::max_spec(kUnit, 3);
  const auto cls = classify(spec);
  const auto g0 = low_guarantee(spec, cls);
  const auto gh = high_guarantee(spec, cls);

  const auto neg = negate_guarantee(g0);
  CHECK(neg.side() == Side::Lower);
  CHECK(neg(0.4) == doctest::Approx(-g0(0.4)));

  const auto chore = chore_guarantee(g0);
  CHECK(chore.interval() == TypeInterval(-1.0, 0.0));
  CHECK(chore(-0.4) == doctest::Approx(-g0(0.4)));

  const auto shifted = shift_guarantee(g0, Function1D::polynomial(kUnit, {0.0, 0.0, 1.0}));
  CHECK(shifted(0.5) == doctest::Approx(g0(0.5) + 0.25));
  CHECK(shifted.side() == g0.side());

  const auto mix = mixture({g0, gh}, {0.25, 0.75});
  CHECK(mix(0.4) == doctest::Approx(0.25 * g0(0.4) + 0.75 * gh(0.4)));
  CHECK_THROWS_AS(mixture({g0, gh}, {0.5, 0.6}), std::invalid_argument);
  CHECK_THROWS_AS(mixture({g0, unanimity_guarantee(spec, cls)}, {0.5, 0.5}), std::invalid_argument);
}

TEST_CASE("analytic derivatives agree with finite differences") {
  const auto spec = families::public_bad_spec(3, 1.0);
  const auto g = tangent_guarantee(spec, 0.5);
  for (double x : {0.2, 0.9, 1.7}) {
    const double h = 1e-6;
    const double fd = (g(x + h) - g(x - h)) / (2.0 * h);
    CHECK(g.derivative(x).mid() == doctest::Approx(fd).epsilon(1e-5));
  }
}

TEST_CASE("guarantees reject arguments outside the interval") {
  const auto spec = families::max_spec(kUnit, 3);
  CHECK_THROWS_AS(low_guarantee(spec, classify(spec))(1.5), DomainError);
}

TEST_CASE("sample_curve and max_deviation") {
  const auto spec = families::max_spec(kUnit, 3);
  const auto cls = classify(spec);
  const Grid grid(kUnit, 11);
  const auto curve = sample_curve(high_guarantee(spec, cls), grid);
  CHECK(curve.points.size() == grid.size());
  CHECK(max_deviation(low_guarantee(spec, cls), high_guarantee(spec, cls), grid) == doctest::Approx(2.0 / 3.0));
}
