#include <doctest.h>

#include <random>

#include <milnorkit/errors.hpp>
#include <milnorkit/parser.hpp>
#include <milnorkit/transforms.hpp>

#include "support.hpp"

using namespace milnorkit;

namespace
{

Series S(const std::string &text, int order)
{
    return parse_series(text, "s", order);
}

struct BSFold {
    ContextPtr ctx = make_context({"x", "y", "z"}, {"t"});
    Polynomial F = parse_polynomial("z^5 + t*y^6*z + y^7*x + x^15", ctx);
    Arc arc = make_arc();
    std::vector<Series> q;
    Series u{0};
    FamilyMap phi;

    static Arc make_arc()
    {
        const int order = 90;
        const auto lctx = make_context({"L", "s"});
        const auto L = implicit_solve(parse_polynomial("-4 + L + L^15*s^35", lctx), 4, order).solution;
        return Arc({L * Series::monomial(1, 5, order), Series::monomial(1, 5, order), Series::monomial(1, 8, order)},
                   {Series::monomial(-5, 2, order)});
    }

    BSFold()
    {
        for (const auto &g : x_gradient(F)) {
            q.push_back(evaluate_along_arc(g, arc));
        }
        u = arc.x()[0] * q[0] + arc.x()[1] * q[1] + arc.x()[2] * q[2];
        phi = build_fold_transform(arc.x(), q, u, arc.t());
    }
};

bool is_one(const MixedPolynomial &m)
{
    if (m.terms().size() != 1) {
        return false;
    }
    const auto &[mono, c] = *m.terms().begin();
    return total_degree(mono) == 0 && c.agrees_with(Series::constant(1, c.order()));
}

} // namespace

TEST_CASE("mixed polynomial arithmetic")
{
    const int N = 10;
    const auto y = MixedPolynomial::variable(2, 0, N);
    const auto tau = MixedPolynomial::constant(2, S("s", N));
    const auto p = (y + tau) * (y - tau);
    CHECK(p.coefficient(Monomial{2, 0}).agrees_with(S("1", N)));
    CHECK(p.coefficient(Monomial{0, 0}).agrees_with(S("-s^2", N)));
    CHECK(p.coefficient(Monomial{1, 0}).is_zero_to_order());
    CHECK(p.degree() == 2);
    CHECK(p.derivative(0).agrees_with(y * S("2", N)));
    CHECK(p.tau_derivative().coefficient(Monomial{0, 0}).agrees_with(S("-2*s", N)));
    const std::vector<Series> at{S("2*s", N), S("0", N)};
    CHECK(p.evaluate(at).agrees_with(S("3*s^2", N)));
    CHECK((p - p).is_zero_to_order());
}

TEST_CASE("identity and parameter maps")
{
    const auto ctx = make_context({"x", "y"}, {"t"});
    const auto F = parse_polynomial("x^2 - t*y^3 + x*y", ctx);
    const auto id = identity_map(2, 1, 12);
    CHECK_NOTHROW(validate(id));
    const auto comp = compose_family(F, id);
    // y1^2 - tau*y2^3 + y1*y2
    CHECK(comp.coefficient(Monomial{2, 0}).agrees_with(S("1", 12)));
    CHECK(comp.coefficient(Monomial{0, 3}).agrees_with(S("-s", 12)));
    CHECK(is_one(jacobian_det(id)));

    const auto pm = parameter_map(2, {S("s^2", 12)});
    const auto c2 = compose_family(F, pm);
    CHECK(c2.coefficient(Monomial{0, 3}).agrees_with(S("-s^2", 12)));
}

TEST_CASE("validate rejects maps that move the origin or are singular")
{
    auto phi = identity_map(2, 1, 8);
    phi.psi[0] += MixedPolynomial::constant(2, S("s", 8));
    CHECK_THROWS_AS(validate(phi), precondition_error);
    auto sing = identity_map(2, 1, 8);
    sing.psi[1] = sing.psi[0];
    CHECK_THROWS_AS(validate(sing), precondition_error);
}

TEST_CASE("BS fold transform identities")
{
    const BSFold f;
    CHECK(f.phi.permutation.front() == 0);
    CHECK_NOTHROW(validate(f.phi));
    CHECK(is_one(jacobian_det(f.phi)));

    std::vector<Series> zero(3, Series(f.phi.order));
    const auto origin = map_point(f.phi, zero);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(origin[i].is_zero_to_order());
    }

    std::vector<Series> axis(3, Series(f.phi.order));
    axis[0] = f.arc.x()[0].truncated(f.phi.order);
    const auto image = map_point(f.phi, axis);
    const auto comps = f.arc.components();
    for (std::size_t i = 0; i < image.size(); ++i) {
        CHECK(image[i].agrees_with(comps[i]));
    }

    const auto rec = verify_transported_kink(f.F, f.phi, axis[0]);
    CHECK(rec.gradient[1].is_zero_to_order());
    CHECK(rec.gradient[2].is_zero_to_order());
    CHECK(rec.gradient[0].agrees_with(rec.u_over_p1));
    CHECK(rec.u_over_p1.valuation().value == 35);
    CHECK(rec.u_over_p1.valuation().leading == Rational(1, 2));
    REQUIRE(rec.multiplier.has_value());
    CHECK(rec.multiplier->valuation().value == 30);
    CHECK(rec.order >= 40);

    const auto chain = transported_gradient_chain_rule(f.F, f.phi, axis[0]);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(chain[i].agrees_with(rec.gradient[i]));
    }
}

TEST_CASE("fold transform needs a failing arc")
{
    // F = x^2 - y^2: u = 2(x^2 - y^2) vanishes on the zero set.
    const auto ctx = make_context({"x", "y"}, {"t"});
    const auto F = parse_polynomial("x^2 - y^2 + t*(x - y)^3", ctx);
    const Arc arc({S("s", 20), S("s", 20)}, {S("s", 20)});
    std::vector<Series> q;
    for (const auto &g : x_gradient(F)) {
        q.push_back(evaluate_along_arc(g, arc));
    }
    const Series u = arc.x()[0] * q[0] + arc.x()[1] * q[1];
    CHECK_THROWS_AS(build_fold_transform(arc.x(), q, u, arc.t()), precondition_error);
    CHECK_THROWS_AS(build_fold_transform(arc.x(), q, u, std::vector<Series>{}), precondition_error);
}

TEST_CASE("coordinates are reordered when a later component leads")
{
    // Coalescing-type family in two variables, leading component second.
    const auto ctx = make_context({"x", "y"}, {"t"});
    const auto F = parse_polynomial("y^3 - 3*t*y^2 + x^2", ctx);
    const int N = 30;
    const Arc arc({Series(N), S("3*s", N)}, {S("s", N)});
    std::vector<Series> q;
    for (const auto &g : x_gradient(F)) {
        q.push_back(evaluate_along_arc(g, arc));
    }
    const Series u = arc.x()[0] * q[0] + arc.x()[1] * q[1];
    const auto phi = build_fold_transform(arc.x(), q, u, arc.t());
    CHECK(phi.permutation.front() == 1);
    CHECK(is_one(jacobian_det(phi)));
    const auto rec = verify_transported_kink(F, phi, arc.x()[1]);
    CHECK(rec.gradient[1].is_zero_to_order());
}

TEST_CASE("Whitney verdicts are stable under the fold transform")
{
    const BSFold f;
    const int N = f.phi.order;
    std::vector<Arc> tests{Arc({f.arc.x()[0].truncated(N), Series(N), Series(N)}, {S("s", N)})};
    const auto rep = whitney_stability_check(f.F, f.phi, tests);
    REQUIRE(rep.entries.size() == 1);
    CHECK(rep.entries[0].a_agrees);
    CHECK(rep.entries[0].bprime_agrees);
    CHECK(rep.entries[0].image_bprime.verdict == Verdict::finite_nonzero);
}

TEST_CASE("property: composition commutes with evaluation")
{
    std::mt19937_64 rng(37);
    const auto ctx = make_context({"x", "y"}, {"t"});
    const int N = 12;
    for (int i = 0; i < 20; ++i) {
        const auto F = mk_test::random_polynomial(rng, ctx, 5, 3);
        // Psi = (y1 + a(tau) y2, y2 + b(tau) y1^2), lambda = tau.
        FamilyMap phi = identity_map(2, 1, N);
        phi.psi[0] += MixedPolynomial::variable(2, 1, N) * Series::constant(mk_test::small_rational(rng), N);
        Monomial sq{2, 0};
        MixedPolynomial extra(2, N);
        extra.add_term(sq, S("s", N) * mk_test::small_rational(rng));
        phi.psi[1] += extra;
        const auto comp = compose_family(F, phi);
        const std::vector<Series> y{S("s", N) * mk_test::small_rational(rng), S("s^2", N)};
        const auto lhs = comp.evaluate(y);
        const auto rhs = evaluate_series(F, map_point(phi, y));
        CHECK(lhs.agrees_with(rhs));
    }
}
