#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <milnorkit/rational.hpp>

namespace milnorkit
{

inline constexpr std::uint32_t default_degree_cap = 1'000'000;

// Ordered variable list: the x-block (space variables) followed by the
// t-block (parameters). Shared between polynomials through a pointer.
class Context
{
public:
    Context(std::vector<std::string> x_names, std::vector<std::string> t_names = {},
            std::uint32_t degree_cap = default_degree_cap);

    std::size_t size() const noexcept
    {
        return names_.size();
    }
    std::size_t n_x() const noexcept
    {
        return n_x_;
    }
    std::size_t n_t() const noexcept
    {
        return names_.size() - n_x_;
    }
    bool is_parameter(std::size_t var) const noexcept
    {
        return var >= n_x_;
    }
    const std::string &name(std::size_t var) const
    {
        return names_.at(var);
    }
    const std::vector<std::string> &names() const noexcept
    {
        return names_;
    }
    std::optional<std::size_t> index_of(const std::string &name) const;
    std::uint32_t degree_cap() const noexcept
    {
        return degree_cap_;
    }

    friend bool operator==(const Context &a, const Context &b)
    {
        return a.n_x_ == b.n_x_ && a.names_ == b.names_;
    }

private:
    std::vector<std::string> names_;
    std::size_t n_x_;
    std::uint32_t degree_cap_;
};

using ContextPtr = std::shared_ptr<const Context>;

ContextPtr make_context(std::vector<std::string> x_names, std::vector<std::string> t_names = {},
                        std::uint32_t degree_cap = default_degree_cap);

bool same_context(const ContextPtr &a, const ContextPtr &b);

using Monomial = std::vector<std::uint32_t>;

std::uint64_t total_degree(const Monomial &m);

// Graded lexicographic order on the declared variable order.
struct GrlexLess {
    bool operator()(const Monomial &a, const Monomial &b) const;
};

class Polynomial
{
public:
    using term_map = std::map<Monomial, Rational, GrlexLess>;

    explicit Polynomial(ContextPtr ctx);

    static Polynomial constant(ContextPtr ctx, const Rational &c);
    static Polynomial variable(ContextPtr ctx, std::size_t var);
    static Polynomial monomial(ContextPtr ctx, Monomial m, const Rational &c);

    const ContextPtr &context() const noexcept
    {
        return ctx_;
    }
    const term_map &terms() const noexcept
    {
        return terms_;
    }
    bool is_zero() const noexcept
    {
        return terms_.empty();
    }
    std::size_t size() const noexcept
    {
        return terms_.size();
    }
    Rational coefficient(const Monomial &m) const;
    // Coefficient of the constant monomial.
    Rational constant_term() const;
    std::uint64_t degree() const;
    // Highest exponent of one variable, 0 for the zero polynomial.
    std::uint32_t degree_in(std::size_t var) const;
    bool depends_on(std::size_t var) const;

    // Adds c*m to the polynomial, dropping the term if it cancels.
    void add_term(const Monomial &m, const Rational &c);

    Polynomial &operator+=(const Polynomial &rhs);
    Polynomial &operator-=(const Polynomial &rhs);
    Polynomial &operator*=(const Polynomial &rhs);
    Polynomial &operator*=(const Rational &c);

    friend Polynomial operator+(Polynomial a, const Polynomial &b)
    {
        return a += b;
    }
    friend Polynomial operator-(Polynomial a, const Polynomial &b)
    {
        return a -= b;
    }
    friend Polynomial operator*(const Polynomial &a, const Polynomial &b);
    friend Polynomial operator*(Polynomial a, const Rational &c)
    {
        return a *= c;
    }
    friend Polynomial operator*(const Rational &c, Polynomial a)
    {
        return a *= c;
    }
    Polynomial operator-() const;

    Polynomial pow(std::uint32_t e) const;

    Rational evaluate(std::span<const Rational> point) const;
    long double evaluate(std::span<const long double> point) const;

    friend bool operator==(const Polynomial &a, const Polynomial &b);

private:
    void check_context(const Polynomial &other) const;

    ContextPtr ctx_;
    term_map terms_;
};

enum class ArithOp { add, sub, mul };

Polynomial poly_arith(const Polynomial &lhs, const Polynomial &rhs, ArithOp op);

Polynomial partial_derivative(const Polynomial &f, std::size_t var);

// Gradient with respect to the x-block.
std::vector<Polynomial> x_gradient(const Polynomial &f);

// Replaces bound variables by polynomials over `target`. Unbound variables
// are carried over by name and must exist in `target`.
Polynomial substitute(const Polynomial &f, const std::map<std::size_t, Polynomial> &bindings,
                      const ContextPtr &target);

// Same polynomial over another context, matching variables by name.
Polynomial rebind(const Polynomial &f, const ContextPtr &target);

// Weights (w_1..w_n) for the x-variables and a weighted degree D.
class WeightSystem
{
public:
    WeightSystem(std::vector<std::int64_t> weights, std::int64_t degree);

    const std::vector<std::int64_t> &weights() const noexcept
    {
        return weights_;
    }
    std::int64_t degree() const noexcept
    {
        return degree_;
    }
    std::size_t size() const noexcept
    {
        return weights_.size();
    }

    friend bool operator==(const WeightSystem &, const WeightSystem &) = default;

private:
    std::vector<std::int64_t> weights_;
    std::int64_t degree_;
};

// Weighted degree of a monomial; parameters have weight 0.
std::int64_t weighted_degree(const Monomial &m, const WeightSystem &w, std::size_t n_x);

std::map<std::int64_t, Polynomial> weighted_decomposition(const Polynomial &f, const WeightSystem &w);

// sum_i w_i x_i df/dx_i - D f.
Polynomial euler_defect(const Polynomial &f, const WeightSystem &w);

bool is_quasihomogeneous(const Polynomial &f, const WeightSystem &w);

} // namespace milnorkit
