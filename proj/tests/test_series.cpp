#include <doctest.h>

#include <random>

#include <milnorkit/errors.hpp>
#include <milnorkit/parser.hpp>
#include <milnorkit/series.hpp>

#include "support.hpp"

using namespace milnorkit;

namespace
{

Series S(const std::string &text, int order)
{
    return parse_series(text, "s", order);
}

Series random_series(std::mt19937_64 &rng, int order, int min_val = 0)
{
    std::vector<Rational> c(static_cast<std::size_t>(order));
    for (int k = min_val; k < order; ++k) {
        c[static_cast<std::size_t>(k)] = mk_test::small_rational(rng, true);
    }
    if (min_val < order) {
        c[static_cast<std::size_t>(min_val)] = mk_test::small_rational(rng);
    }
    return Series(c, order);
}

} // namespace

TEST_CASE("coefficients beyond the order are unknown")
{
    const auto a = S("1 + 2*s + s^3", 5);
    CHECK(a.coefficient(3) == 1);
    CHECK(a.coefficient(4) == 0);
    CHECK_THROWS_AS(a.coefficient(5), truncation_error);
    CHECK(S("s^7", 5).is_zero_to_order());
}

TEST_CASE("valuation")
{
    const auto v = S("3*s^2 - s^4", 10).valuation();
    REQUIRE(v.is_finite());
    CHECK(*v.value == 2);
    CHECK(v.leading == 3);
    CHECK(v.certainty == Certainty::certified);
    const auto z = Series(6).valuation();
    CHECK_FALSE(z.is_finite());
    CHECK(z.lower_bound == 6);
    CHECK(z.certainty == Certainty::truncation_limited);
}

TEST_CASE("multiplication tracks the known order")
{
    // (s^2 + O(s^10)) * (1 + O(s^5)) is known to O(s^7).
    const auto p = S("s^2", 10) * S("1", 5);
    CHECK(p.order() == 7);
    CHECK(p.coefficient(2) == 1);
    const auto q = S("1 + s", 8) * S("1 - s", 8);
    CHECK(q == S("1 - s^2", 8));
}

TEST_CASE("division shifts by the divisor's valuation")
{
    const auto q = divide(S("s^2 + s^3", 10), S("s", 10));
    CHECK(q.order() == 9);
    CHECK(q.agrees_with(S("s + s^2", 9)));
    CHECK_THROWS_AS(divide(S("1", 10), S("s^2", 10)), precondition_error);
    CHECK_THROWS_AS(divide(S("1", 10), Series(10)), truncation_error);
    const auto inv = divide(S("1", 12), S("1 - s", 12));
    for (int k = 0; k < 12; ++k) {
        CHECK(inv.coefficient(k) == 1);
    }
    CHECK(series_arith(S("s", 5), S("s", 5), SeriesOp::div).agrees_with(S("1", 4)));
}

TEST_CASE("powers, derivatives and composition")
{
    const auto a = S("1 + s", 6);
    CHECK(a.pow(3).agrees_with(S("1 + 3*s + 3*s^2 + s^3", 6)));
    CHECK(a.pow(0) == S("1", 6));
    CHECK(S("s^3 + 2*s", 6).derivative() == S("3*s^2 + 2", 5));
    // (1 + t + t^2) o s^2 = 1 + s^2 + s^4, known to min(3*2, 20).
    const auto c = S("1 + s + s^2", 3).compose(S("s^2", 20));
    CHECK(c.order() == 6);
    CHECK(c == S("1 + s^2 + s^4", 6));
    CHECK_THROWS_AS(a.compose(S("1 + s", 5)), precondition_error);
}

TEST_CASE("float evaluation")
{
    CHECK(static_cast<double>(S("1 + 2*s + 3*s^2", 5).evaluate(0.5L)) == doctest::Approx(2.75));
    CHECK(to_string(S("1 - 3/2*s^2", 4)) == "1 - 3/2*s^2 + O(s^4)");
}

TEST_CASE("arcs")
{
    CHECK_THROWS_AS(Arc({S("1 + s", 5)}, {}), precondition_error);
    CHECK_THROWS_AS(Arc({}, {S("s", 5)}), precondition_error);
    const Arc g({S("s", 8), S("s^2", 6)}, {S("2*s", 7)});
    CHECK(g.order() == 6);
    CHECK(g.components().size() == 3);
    const Arc h = g.reparameterized(2);
    CHECK(h.x()[0].valuation().value == 2);
    CHECK(h.x()[1].valuation().value == 4);

    const auto ctx = make_context({"x", "y"}, {"t"});
    const auto f = parse_polynomial("x^2 - y + t*x", ctx);
    const auto along = evaluate_along_arc(f, g);
    CHECK(along.agrees_with(S("2*s^2", 6)));
}

TEST_CASE("implicit_solve on the BS equation")
{
    const auto ctx = make_context({"L", "s"});
    const auto G = parse_polynomial("-4 + L + L^15*s^35", ctx);
    const auto sol = implicit_solve(G, 4, 80);
    CHECK(sol.newton_steps <= 8);
    CHECK(sol.solution.order() >= 80);
    CHECK(sol.solution.coefficient(0) == 4);
    CHECK(sol.solution.coefficient(35) == -Rational(1073741824));
    const std::vector<Series> at{sol.solution, Series::monomial(1, 1, 80)};
    const auto res = evaluate_series(G, at).truncated(80);
    CHECK(res.is_zero_to_order());
    CHECK(res.order() >= 80);
}

TEST_CASE("implicit_solve preconditions")
{
    const auto ctx = make_context({"L", "s"});
    CHECK_THROWS_AS(implicit_solve(parse_polynomial("L - 1", ctx), 2, 10), precondition_error);
    CHECK_THROWS_AS(implicit_solve(parse_polynomial("L^2 - s", ctx), 0, 10), precondition_error);
    CHECK_THROWS_AS(implicit_solve(parse_polynomial("L", make_context({"L"})), 0, 10), context_mismatch);
}

TEST_CASE("property: implicit_solve residual on random equations")
{
    std::mt19937_64 rng(3);
    const auto ctx = make_context({"L", "s"});
    for (int i = 0; i < 25; ++i) {
        const Rational l0 = mk_test::small_rational(rng);
        auto G = mk_test::random_polynomial(rng, ctx, 4, 4);
        // G(l0, 0) = 0 and dG/dL(l0, 0) = 1 after these corrections.
        const auto g0 = G.evaluate(std::vector<Rational>{l0, 0});
        G -= Polynomial::constant(ctx, g0);
        const auto d = partial_derivative(G, 0).evaluate(std::vector<Rational>{l0, 0});
        const Rational k = 1 - d;
        G += Polynomial::variable(ctx, 0) * k - Polynomial::constant(ctx, Rational(l0 * k));
        const auto sol = implicit_solve(G, l0, 24);
        const std::vector<Series> at{sol.solution, Series::monomial(1, 1, 24)};
        CHECK(evaluate_series(G, at).truncated(24).is_zero_to_order());
        CHECK(sol.newton_steps <= 6);
    }
}

TEST_CASE("property: (a*b)/b == a and ring identities")
{
    std::mt19937_64 rng(17);
    for (int i = 0; i < 100; ++i) {
        const auto a = random_series(rng, 12);
        const auto b = random_series(rng, 12, i % 3);
        const auto c = random_series(rng, 12);
        const auto q = divide(a * b, b);
        CHECK(q.agrees_with(a));
        CHECK((a * b).agrees_with(b * a));
        CHECK((a * (b + c)).agrees_with(a * b + a * c));
        CHECK(((a * b).derivative()).agrees_with(a.derivative() * b + a * b.derivative()));
    }
}
