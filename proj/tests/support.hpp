#pragma once

// Generators shared by the unit tests and the acceptance binary.

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <optional>
#include <random>
#include <vector>

#include <milnorkit/polynomial.hpp>
#include <milnorkit/series.hpp>

namespace mk_test
{

using namespace milnorkit;

inline Rational small_rational(std::mt19937_64 &rng, bool allow_zero = false)
{
    std::uniform_int_distribution<int> num(-9, 9), den(1, 5);
    for (;;) {
        const int n = num(rng);
        if (n != 0 || allow_zero) {
            return make_rational(n, den(rng));
        }
    }
}

inline Polynomial random_polynomial(std::mt19937_64 &rng, const ContextPtr &ctx, int max_terms = 8, int max_exp = 6)
{
    std::uniform_int_distribution<int> nterms(0, max_terms), e(0, max_exp);
    Polynomial f(ctx);
    const int k = nterms(rng);
    for (int i = 0; i < k; ++i) {
        Monomial m(ctx->size());
        for (auto &x : m) {
            x = static_cast<std::uint32_t>(e(rng));
        }
        f.add_term(m, small_rational(rng));
    }
    return f;
}

// Every exponent vector a with sum w_i a_i = D.
inline void weighted_monomials(const std::vector<std::int64_t> &w, std::int64_t D, std::size_t i, Monomial &cur,
                               std::vector<Monomial> &out)
{
    if (i + 1 == w.size()) {
        if (D % w[i] == 0) {
            cur[i] = static_cast<std::uint32_t>(D / w[i]);
            out.push_back(cur);
        }
        return;
    }
    for (std::int64_t a = 0; a * w[i] <= D; ++a) {
        cur[i] = static_cast<std::uint32_t>(a);
        weighted_monomials(w, D - a * w[i], i + 1, cur, out);
    }
}

struct QuasiCase {
    std::vector<std::int64_t> weights;
    std::int64_t degree = 0;
    Polynomial F;  // over (x_1..x_n; t), t of weight 0
    Arc arc;       // inside F = 0
};

// Random quasihomogeneous F(x, t) of type (w; D) with an explicit arc
// x_i = c_i s^w_i (x_1 = lambda(s) s^w_1), t = s in its zero set.
inline std::optional<QuasiCase> random_quasi_case(std::mt19937_64 &rng, int order, bool equal_weights = false)
{
    std::uniform_int_distribution<int> nvars(2, 3), wdist(1, 6), coef(-5, 5), pick(0, 2);
    const std::size_t n = static_cast<std::size_t>(nvars(rng));
    std::vector<std::int64_t> w(n);
    const int common = wdist(rng);
    for (auto &x : w) {
        x = equal_weights ? common : wdist(rng);
    }
    const std::int64_t wmax = *std::max_element(w.begin(), w.end());
    std::uniform_int_distribution<std::int64_t> ddist(wmax + 1, 40);
    const std::int64_t D = ddist(rng);

    std::vector<Monomial> support;
    Monomial cur(n);
    weighted_monomials(w, D, 0, cur, support);
    if (support.empty()) {
        return std::nullopt;
    }
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) {
        names.push_back("x" + std::to_string(i + 1));
    }
    const auto ctx = make_context(names, {"t"});
    // A random subset of at most 8 monomials of the right weighted degree.
    std::shuffle(support.begin(), support.end(), rng);
    std::uniform_int_distribution<std::size_t> keep(1, std::min<std::size_t>(8, support.size()));
    support.resize(keep(rng));
    Polynomial Q(ctx);
    for (const auto &m : support) {
        Monomial full(m);
        full.push_back(static_cast<std::uint32_t>(pick(rng) == 0 ? 1 : 0));
        const int c = coef(rng);
        if (c != 0) {
            Q.add_term(full, Rational(c));
        }
    }
    if (Q.is_zero()) {
        return std::nullopt;
    }

    // A point c with F(c, 0) = 0 and dF/dx_1(c, 0) != 0.
    std::vector<Rational> c(n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        const int v = coef(rng);
        c[i] = v == 0 ? 1 : v;
    }
    c[n] = 0;
    const Rational q0 = Q.evaluate(c);
    std::optional<Monomial> fix;
    for (const auto &m : support) {
        Monomial full(m);
        full.push_back(0);
        if (Polynomial::monomial(ctx, full, 1).evaluate(c) != 0) {
            fix = full;
            break;
        }
    }
    if (!fix) {
        return std::nullopt;
    }
    const Rational mc = Polynomial::monomial(ctx, *fix, 1).evaluate(c);
    Polynomial F = Q - Polynomial::monomial(ctx, *fix, q0 / mc);
    if (F.is_zero() || partial_derivative(F, 0).evaluate(c) == 0) {
        return std::nullopt;
    }

    // G(L, s) = F(L, c_2, .., c_n, s).
    const auto lctx = make_context({"L", "s"});
    std::map<std::size_t, Polynomial> bind;
    bind.emplace(0, Polynomial::variable(lctx, 0));
    for (std::size_t i = 1; i < n; ++i) {
        bind.emplace(i, Polynomial::constant(lctx, c[i]));
    }
    bind.emplace(n, Polynomial::variable(lctx, 1));
    const Polynomial G = substitute(F, bind, lctx);
    const Series L = implicit_solve(G, c[0], order).solution;

    std::vector<Series> x;
    x.push_back(L * Series::monomial(1, static_cast<int>(w[0]), order));
    for (std::size_t i = 1; i < n; ++i) {
        x.push_back(Series::monomial(c[i], static_cast<int>(w[i]), order));
    }
    return QuasiCase{w, D, F, Arc(x, {Series::monomial(1, 1, order)})};
}

} // namespace mk_test
