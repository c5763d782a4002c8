#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <milnorkit/polynomial.hpp>
#include <milnorkit/rational.hpp>
#include <milnorkit/series.hpp>

namespace milnorkit
{

enum class Verdict { zero, finite_nonzero, infinite, undetermined };

const char *to_string(Verdict v);

// c / sqrt(d1 * d2), exactly, plus a float approximation.
struct LimitValue {
    Rational c;
    Rational d1;
    Rational d2;
    double approx = 0.0;
};

// Limit of num / sqrt(den_1 * ... ) along an arc, decided on valuations of
// the numerator and of the squared denominators so all data stay rational.
struct LimitResult {
    Verdict verdict = Verdict::undetermined;
    Valuation numerator;
    std::vector<Valuation> denominators_sq;
    std::optional<LimitValue> limit;
    // Series behind the verdict, kept for numeric cross-checks and reports.
    Series numerator_series;
    std::vector<Series> denominator_series;
};

// Verdict for num / sqrt(prod den_i) from the series num and den_i; the
// denominators are the squared quantities.
LimitResult decide_limit(Series numerator, std::vector<Series> denominators_sq, bool absolute);

// Condition (a), one result per parameter t_j: (dF/dt_j) / |d_x F|. The
// quotient is taken in absolute value.
std::vector<LimitResult> condition_a_along_arc(const Polynomial &F, const Arc &arc);

// Condition (b'): sum x_i dF/dx_i / (|x| |d_x F|).
LimitResult condition_bprime_along_arc(const Polynomial &F, const Arc &arc);

// sum w_i x_i dF/dx_i along the arc; unit weights give the (b') numerator.
Series radial_numerator(const Polynomial &F, const Arc &arc, std::span<const std::int64_t> weights = {});

// Direct floating evaluation of the quotients at the point gamma(s),
// independent of the valuation route.
long double numeric_condition_a(const Polynomial &F, const Arc &arc, std::size_t parameter, long double s);
long double numeric_bprime(const Polynomial &F, const Arc &arc, long double s);

struct KinkCheck {
    bool is_kink = false;
    bool minors_vanish = false;
    // d_x f = lambda d_x rho; only defined for a single equation.
    std::optional<Rational> multiplier;
};

// Kink test at a point of the zero set of f_1..f_k. The point lists one
// value per context variable; derivatives are taken in the x-block.
KinkCheck kink_test_point(std::span<const Polynomial> f, const Polynomial &rho, std::span<const Rational> point);

enum class FoldCondition {
    none,
    origin,      // gamma(0) = 0
    nonzero,     // |x(s)| > 0 and |t(s)| > 0 for small s > 0
    zero_set,    // F(gamma(s)) = 0
    nonsingular, // the fibre is smooth along the arc
    kink,        // d_x f and d_x rho dependent along the arc
};

const char *to_string(FoldCondition c);

struct FoldVerdict {
    bool is_fold = false;
    bool determined = true;
    FoldCondition failing = FoldCondition::none;
    std::optional<Series> kink_multiplier;
    std::string detail;
};

// Decides whether the arc is a rho-vanishing fold of the family f_1..f_k.
FoldVerdict vanishing_fold_test(std::span<const Polynomial> F, const Polynomial &rho, const Arc &arc);
FoldVerdict vanishing_fold_test(const Polynomial &F, const Polynomial &rho, const Arc &arc);

struct KinkCandidate {
    std::vector<double> point;
    double rho = 0.0;
    // |f|^2 + sum of squared minors at the point.
    double residual = 0.0;
};

struct RadiusSearchOptions {
    double epsilon = 1.0;
    int budget = 200;
    std::uint64_t seed = 0;
    double tolerance = 1e-8;
};

struct RadiusSearchResult {
    // Smallest rho first.
    std::vector<KinkCandidate> candidates;
    int starts = 0;
    // Always false: multistart minimisation proves nothing.
    bool certified = false;
    std::string note;
};

// Multistart search for kinks of {f = 0} inside {rho < epsilon}. The
// polynomials must not depend on parameters.
RadiusSearchResult radius_search(std::span<const Polynomial> f, const Polynomial &rho,
                                 const RadiusSearchOptions &options = {});

} // namespace milnorkit
