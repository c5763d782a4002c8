#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <milnorkit/polynomial.hpp>
#include <milnorkit/rational.hpp>

namespace milnorkit
{

enum class Certainty { certified, truncation_limited };

// Order of vanishing of a truncated series. An absent value means the series
// is zero up to its truncation order, so the true valuation is unknown but at
// least that order.
struct Valuation {
    std::optional<int> value;
    Rational leading;
    Certainty certainty = Certainty::certified;
    // Lower bound on the true valuation: the value, or the truncation order.
    int lower_bound = 0;

    bool is_finite() const noexcept
    {
        return value.has_value();
    }
};

// Univariate power series c_0 + c_1 s + ... + c_{N-1} s^{N-1} + O(s^N).
// Coefficients at exponents >= order are unknown.
class Series
{
public:
    explicit Series(int order = 0);
    Series(std::vector<Rational> coefficients, int order);

    static Series constant(const Rational &c, int order);
    // c s^k + O(s^order).
    static Series monomial(const Rational &c, int k, int order);
    // From a univariate polynomial in the single variable of its context.
    static Series from_polynomial(const Polynomial &p, int order);

    int order() const noexcept
    {
        return order_;
    }
    // Coefficient of s^k; k must be below the order.
    const Rational &operator[](int k) const;
    Rational coefficient(int k) const;
    const std::vector<Rational> &coefficients() const noexcept
    {
        return c_;
    }

    Valuation valuation() const;
    bool is_zero_to_order() const;
    Series truncated(int order) const;

    Series &operator+=(const Series &rhs);
    Series &operator-=(const Series &rhs);
    Series &operator*=(const Rational &c);

    friend Series operator+(Series a, const Series &b)
    {
        return a += b;
    }
    friend Series operator-(Series a, const Series &b)
    {
        return a -= b;
    }
    friend Series operator*(const Series &a, const Series &b);
    friend Series operator*(Series a, const Rational &c)
    {
        return a *= c;
    }
    friend Series operator*(const Rational &c, Series a)
    {
        return a *= c;
    }
    Series operator-() const;

    Series pow(unsigned e) const;
    Series derivative() const;
    // this(inner(s)); inner must vanish at 0.
    Series compose(const Series &inner) const;

    long double evaluate(long double s) const;

    // Same coefficients below both orders.
    bool agrees_with(const Series &other) const;

    // Exact equality of coefficients and order.
    friend bool operator==(const Series &, const Series &) = default;

private:
    void trim();

    std::vector<Rational> c_; // size() == order_
    int order_;
};

enum class SeriesOp { add, sub, mul, div };

// Division shifts by the divisor's valuation and rejects results of negative
// valuation (no Laurent series).
Series divide(const Series &a, const Series &b);
Series series_arith(const Series &a, const Series &b, SeriesOp op);

Valuation valuation(const Series &a);

std::string to_string(const Series &a, const std::string &param = "s");

// gamma(s) = (x(s), t(s)) with gamma(0) = 0.
class Arc
{
public:
    Arc(std::vector<Series> x_components, std::vector<Series> t_components);

    const std::vector<Series> &x() const noexcept
    {
        return x_;
    }
    const std::vector<Series> &t() const noexcept
    {
        return t_;
    }
    int order() const noexcept
    {
        return order_;
    }
    // x-components followed by t-components.
    std::vector<Series> components() const;

    // s -> s^m.
    Arc reparameterized(unsigned m) const;

private:
    std::vector<Series> x_;
    std::vector<Series> t_;
    int order_;
};

// f(values(s)). values holds one series per context variable.
Series evaluate_series(const Polynomial &f, std::span<const Series> values);

Series evaluate_along_arc(const Polynomial &f, const Arc &arc);

struct ImplicitSolution {
    Series solution;
    int newton_steps = 0;
};

// Solves G(lambda(s), s) = 0 with lambda(0) = lambda0 by Newton iteration.
// G lives over a two-variable context ordered (lambda, s).
ImplicitSolution implicit_solve(const Polynomial &G, const Rational &lambda0, int order);

} // namespace milnorkit
