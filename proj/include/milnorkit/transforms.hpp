#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <milnorkit/polynomial.hpp>
#include <milnorkit/series.hpp>
#include <milnorkit/whitney.hpp>

namespace milnorkit
{

// Polynomial in y_1..y_n whose coefficients are truncated series in tau.
class MixedPolynomial
{
public:
    using term_map = std::map<Monomial, Series, GrlexLess>;

    MixedPolynomial(std::size_t n, int order);

    static MixedPolynomial constant(std::size_t n, const Series &c);
    static MixedPolynomial variable(std::size_t n, std::size_t var, int order);

    std::size_t arity() const noexcept
    {
        return n_;
    }
    // Tightest truncation order over all coefficients.
    int order() const noexcept
    {
        return order_;
    }
    const term_map &terms() const noexcept
    {
        return terms_;
    }
    Series coefficient(const Monomial &m) const;
    std::uint64_t degree() const;
    bool is_zero_to_order() const
    {
        return terms_.empty();
    }

    void add_term(const Monomial &m, const Series &c);

    MixedPolynomial &operator+=(const MixedPolynomial &rhs);
    MixedPolynomial &operator-=(const MixedPolynomial &rhs);
    friend MixedPolynomial operator+(MixedPolynomial a, const MixedPolynomial &b)
    {
        return a += b;
    }
    friend MixedPolynomial operator-(MixedPolynomial a, const MixedPolynomial &b)
    {
        return a -= b;
    }
    friend MixedPolynomial operator*(const MixedPolynomial &a, const MixedPolynomial &b);
    friend MixedPolynomial operator*(const MixedPolynomial &a, const Series &c);

    MixedPolynomial derivative(std::size_t var) const;
    // Derivative of every coefficient in tau.
    MixedPolynomial tau_derivative() const;

    // Substitutes series in tau for the y-variables.
    Series evaluate(std::span<const Series> y) const;
    // Substitutes y = y(s) and tau = tau(s) for a reparameterised arc.
    Series evaluate_along(std::span<const Series> y, const Series &tau) const;

    // Same coefficients below the common order.
    bool agrees_with(const MixedPolynomial &other) const;

private:
    std::size_t n_;
    int order_;
    term_map terms_;
};

// Phi(y, tau) = (Psi(y, tau), lambda(tau)).
struct FamilyMap {
    std::vector<MixedPolynomial> psi;
    std::vector<Series> lambda;
    int order = 0;
    // Leading-first coordinate order: permutation[0] indexes the component
    // of minimal valuation. x and y share this indexing, so the kink axis is
    // y_(permutation[0]). Identity unless build_fold_transform reordered.
    std::vector<std::size_t> permutation;

    std::size_t n() const noexcept
    {
        return psi.size();
    }
};

FamilyMap identity_map(std::size_t n, std::size_t p, int order);
// (y, lambda(tau)).
FamilyMap parameter_map(std::size_t n, std::vector<Series> lambda);

// Checks Psi(0, tau) = 0 and an invertible linear part at y = 0.
void validate(const FamilyMap &phi);

// F(Psi(y, tau), lambda(tau)).
MixedPolynomial compose_family(const Polynomial &F, const FamilyMap &phi);

// The change of variables carrying the arc (p(tau), lambda(tau)) to the y_1
// axis. q is d_x F along the arc and u = <p, q>; the arc must witness a
// failure of (b'), i.e. v(u) = min v(p_i) + min v(q_i).
FamilyMap build_fold_transform(std::span<const Series> p, std::span<const Series> q, const Series &u,
                               std::span<const Series> lambda);

// det(dPsi/dy).
MixedPolynomial jacobian_det(const FamilyMap &phi);

// Phi(y(tau), tau) as an arc in x-t space.
std::vector<Series> map_point(const FamilyMap &phi, std::span<const Series> y);

struct TransportedKinkRecord {
    // d(F o Phi)/dy at the kink axis point, leading coordinate first.
    std::vector<Series> gradient;
    Series u;
    Series u_over_p1;
    // u / p_1^2, absent when it has a pole.
    std::optional<Series> multiplier;
    std::vector<std::size_t> permutation;
    int order = 0;
};

// Confirms that F o Phi has the kink (p_1, 0, ..., 0): the y_i-derivatives
// vanish for i >= 2 and the first equals u / p_1. Throws on failure.
TransportedKinkRecord verify_transported_kink(const Polynomial &F, const FamilyMap &phi, const Series &p1);

// Same gradient by the chain rule d_x F(Phi) * dPsi/dy, without composing.
std::vector<Series> transported_gradient_chain_rule(const Polynomial &F, const FamilyMap &phi, const Series &p1);

struct StabilityEntry {
    // Conditions for F o Phi along the test arc in (y, tau) space.
    std::vector<LimitResult> composed_a;
    LimitResult composed_bprime;
    // Conditions for F along the image arc Phi(test arc).
    std::vector<LimitResult> image_a;
    LimitResult image_bprime;
    bool a_agrees = false;
    bool bprime_agrees = false;
};

struct StabilityReport {
    std::vector<StabilityEntry> entries;
};

// Test arcs live in (y, tau) space and must lie in the zero set of F o Phi.
StabilityReport whitney_stability_check(const Polynomial &F, const FamilyMap &phi, std::span<const Arc> test_arcs);

} // namespace milnorkit
