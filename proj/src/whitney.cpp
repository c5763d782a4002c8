#include <milnorkit/whitney.hpp>

#include <cmath>

#include <milnorkit/errors.hpp>
#include <milnorkit/linalg.hpp>

namespace milnorkit
{

const char *to_string(Verdict v)
{
    switch (v) {
        case Verdict::zero:
            return "zero";
        case Verdict::finite_nonzero:
            return "finite_nonzero";
        case Verdict::infinite:
            return "infinite";
        case Verdict::undetermined:
            return "undetermined";
    }
    return "?";
}

const char *to_string(FoldCondition c)
{
    switch (c) {
        case FoldCondition::none:
            return "none";
        case FoldCondition::origin:
            return "path-origin";
        case FoldCondition::nonzero:
            return "path-nonzero";
        case FoldCondition::zero_set:
            return "path-zero-set";
        case FoldCondition::nonsingular:
            return "nonsingular";
        case FoldCondition::kink:
            return "kink";
    }
    return "?";
}

namespace
{

void check_arc(const Polynomial &F, const Arc &arc)
{
    const auto &ctx = *F.context();
    if (arc.x().size() != ctx.n_x() || arc.t().size() != ctx.n_t()) {
        throw context_mismatch("arc dimensions do not match the polynomial's context");
    }
    if (!evaluate_along_arc(F, arc).is_zero_to_order()) {
        throw precondition_error("arc is not in the zero set of F");
    }
    bool off_axis = false;
    for (const auto &c : arc.x()) {
        off_axis = off_axis || !c.is_zero_to_order();
    }
    if (!off_axis) {
        throw precondition_error("arc lies in the parameter axis to truncation order");
    }
}

Series sum_of_squares(const std::vector<Series> &v)
{
    std::optional<Series> sum;
    for (const auto &c : v) {
        const Series sq = c * c;
        sum = sum ? *sum + sq : sq;
    }
    return *sum;
}

} // namespace

LimitResult decide_limit(Series numerator, std::vector<Series> denominators, bool absolute)
{
    LimitResult r;
    r.numerator = numerator.valuation();
    int den_sum = 0;
    bool den_known = true;
    for (const auto &d : denominators) {
        r.denominators_sq.push_back(d.valuation());
        if (r.denominators_sq.back().is_finite()) {
            den_sum += *r.denominators_sq.back().value;
        } else {
            den_known = false;
        }
    }
    if (!den_known) {
        r.verdict = Verdict::undetermined;
    } else if (r.numerator.is_finite()) {
        const int twice = 2 * *r.numerator.value;
        if (twice > den_sum) {
            r.verdict = Verdict::zero;
        } else if (twice < den_sum) {
            r.verdict = Verdict::infinite;
        } else {
            r.verdict = Verdict::finite_nonzero;
            LimitValue lv;
            lv.c = absolute ? Rational(abs(r.numerator.leading)) : r.numerator.leading;
            lv.d1 = r.denominators_sq[0].leading;
            lv.d2 = r.denominators_sq.size() > 1 ? r.denominators_sq[1].leading : Rational(1);
            lv.approx = lv.c.get_d() / std::sqrt(lv.d1.get_d() * lv.d2.get_d());
            r.limit = lv;
        }
    } else {
        // Zero to order N means valuation >= N.
        r.verdict = 2 * r.numerator.lower_bound > den_sum ? Verdict::zero : Verdict::undetermined;
    }
    r.numerator_series = std::move(numerator);
    r.denominator_series = std::move(denominators);
    return r;
}

namespace
{

std::vector<long double> point_at(const Arc &arc, long double s)
{
    std::vector<long double> p;
    for (const auto &c : arc.components()) {
        p.push_back(c.evaluate(s));
    }
    return p;
}

} // namespace

std::vector<LimitResult> condition_a_along_arc(const Polynomial &F, const Arc &arc)
{
    check_arc(F, arc);
    std::vector<Series> grad;
    for (const auto &g : x_gradient(F)) {
        grad.push_back(evaluate_along_arc(g, arc));
    }
    const Series den = sum_of_squares(grad);
    std::vector<LimitResult> out;
    const auto &ctx = *F.context();
    for (std::size_t j = 0; j < ctx.n_t(); ++j) {
        const Series num = evaluate_along_arc(partial_derivative(F, ctx.n_x() + j), arc);
        out.push_back(decide_limit(num, {den}, true));
    }
    return out;
}

Series radial_numerator(const Polynomial &F, const Arc &arc, std::span<const std::int64_t> weights)
{
    const auto n = F.context()->n_x();
    if (!weights.empty() && weights.size() != n) {
        throw precondition_error("one weight per x-variable is required");
    }
    std::optional<Series> sum;
    for (std::size_t i = 0; i < n; ++i) {
        Series term = arc.x()[i] * evaluate_along_arc(partial_derivative(F, i), arc);
        if (!weights.empty()) {
            term *= Rational(weights[i]);
        }
        sum = sum ? *sum + term : term;
    }
    return sum->truncated(arc.order());
}

LimitResult condition_bprime_along_arc(const Polynomial &F, const Arc &arc)
{
    check_arc(F, arc);
    std::vector<Series> grad;
    for (const auto &g : x_gradient(F)) {
        grad.push_back(evaluate_along_arc(g, arc));
    }
    return decide_limit(radial_numerator(F, arc), {sum_of_squares(arc.x()), sum_of_squares(grad)}, false);
}

long double numeric_condition_a(const Polynomial &F, const Arc &arc, std::size_t parameter, long double s)
{
    const auto p = point_at(arc, s);
    const std::span<const long double> at(p);
    long double grad_sq = 0.0L;
    for (const auto &g : x_gradient(F)) {
        const long double v = g.evaluate(at);
        grad_sq += v * v;
    }
    const long double num = partial_derivative(F, F.context()->n_x() + parameter).evaluate(at);
    return std::fabs(num) / std::sqrt(grad_sq);
}

long double numeric_bprime(const Polynomial &F, const Arc &arc, long double s)
{
    const auto p = point_at(arc, s);
    const std::span<const long double> at(p);
    long double num = 0.0L, x_sq = 0.0L, grad_sq = 0.0L;
    const auto grad = x_gradient(F);
    for (std::size_t i = 0; i < grad.size(); ++i) {
        const long double q = grad[i].evaluate(at);
        num += p[i] * q;
        x_sq += p[i] * p[i];
        grad_sq += q * q;
    }
    return num / (std::sqrt(x_sq) * std::sqrt(grad_sq));
}

KinkCheck kink_test_point(std::span<const Polynomial> f, const Polynomial &rho, std::span<const Rational> point)
{
    if (f.empty()) {
        throw precondition_error("kink test needs at least one equation");
    }
    const auto &ctx_ptr = f.front().context();
    const auto &ctx = *ctx_ptr;
    if (point.size() != ctx.size()) {
        throw context_mismatch("point dimension does not match the context");
    }
    const Polynomial r = rebind(rho, ctx_ptr);
    bool nonzero = false;
    for (std::size_t i = 0; i < ctx.n_x(); ++i) {
        nonzero = nonzero || point[i] != 0;
    }
    if (!nonzero) {
        throw precondition_error("kinks are only defined away from the origin");
    }

    Matrix<Rational> rows;
    for (const auto &fi : f) {
        if (!same_context(fi.context(), ctx_ptr)) {
            throw context_mismatch("equations live over different contexts");
        }
        if (fi.evaluate(point) != 0) {
            throw precondition_error("point is not in the zero set");
        }
        std::vector<Rational> row;
        for (const auto &g : x_gradient(fi)) {
            row.push_back(g.evaluate(point));
        }
        rows.push_back(std::move(row));
    }
    if (rank(rows) < f.size()) {
        throw precondition_error("point is singular for f; kinks are undefined there");
    }
    std::vector<Rational> drho;
    bool rho_regular = false;
    for (const auto &g : x_gradient(r)) {
        drho.push_back(g.evaluate(point));
        rho_regular = rho_regular || drho.back() != 0;
    }
    if (!rho_regular) {
        throw precondition_error("rho is critical at the point");
    }
    rows.push_back(drho);

    KinkCheck out;
    out.minors_vanish = true;
    for (const auto &m : maximal_minors(rows)) {
        out.minors_vanish = out.minors_vanish && m == 0;
    }
    out.is_kink = out.minors_vanish;
    if (out.is_kink && f.size() == 1) {
        for (std::size_t i = 0; i < drho.size(); ++i) {
            if (drho[i] != 0) {
                out.multiplier = rows[0][i] / drho[i];
                break;
            }
        }
    }
    return out;
}

FoldVerdict vanishing_fold_test(std::span<const Polynomial> F, const Polynomial &rho, const Arc &arc)
{
    if (F.empty()) {
        throw precondition_error("fold test needs at least one equation");
    }
    const auto &ctx_ptr = F.front().context();
    const auto &ctx = *ctx_ptr;
    if (arc.x().size() != ctx.n_x() || arc.t().size() != ctx.n_t()) {
        throw context_mismatch("arc dimensions do not match the family's context");
    }
    const Polynomial r = rebind(rho, ctx_ptr);
    FoldVerdict v;
    auto fail = [&](FoldCondition c, std::string why) {
        v.is_fold = false;
        v.failing = c;
        v.detail = std::move(why);
        return v;
    };
    auto undetermined = [&](FoldCondition c, std::string why) {
        v.determined = false;
        return fail(c, std::move(why));
    };

    for (const auto &c : arc.components()) {
        if (c[0] != 0) {
            return fail(FoldCondition::origin, "gamma(0) is not the origin");
        }
    }
    auto any_nonzero = [](const std::vector<Series> &block) {
        for (const auto &c : block) {
            if (!c.is_zero_to_order()) {
                return true;
            }
        }
        return false;
    };
    if (!any_nonzero(arc.x())) {
        return undetermined(FoldCondition::nonzero, "x(s) vanishes to truncation order");
    }
    if (ctx.n_t() > 0 && !any_nonzero(arc.t())) {
        return undetermined(FoldCondition::nonzero, "t(s) vanishes to truncation order");
    }
    for (const auto &f : F) {
        if (!same_context(f.context(), ctx_ptr)) {
            throw context_mismatch("equations live over different contexts");
        }
        const auto val = evaluate_along_arc(f, arc).valuation();
        if (val.is_finite()) {
            return fail(FoldCondition::zero_set, "F(gamma(s)) has valuation " + std::to_string(*val.value));
        }
    }

    Matrix<Series> rows;
    for (const auto &f : F) {
        std::vector<Series> row;
        for (const auto &g : x_gradient(f)) {
            row.push_back(evaluate_along_arc(g, arc));
        }
        rows.push_back(std::move(row));
    }
    bool smooth = false;
    for (const auto &m : maximal_minors(rows)) {
        smooth = smooth || !m.is_zero_to_order();
    }
    if (!smooth) {
        return undetermined(FoldCondition::nonsingular, "d_x F has deficient rank to truncation order along the arc");
    }
    std::vector<Series> drho;
    for (const auto &g : x_gradient(r)) {
        drho.push_back(evaluate_along_arc(g, arc));
    }
    rows.push_back(drho);
    for (const auto &m : maximal_minors(rows)) {
        if (!m.is_zero_to_order()) {
            return fail(FoldCondition::kink, "a minor of (d_x F, d_x rho) has valuation " +
                                                 std::to_string(*m.valuation().value));
        }
    }

    if (F.size() == 1) {
        // d_x f = lambda d_x rho: divide along the component of d_x rho with
        // the smallest valuation.
        std::optional<std::size_t> best;
        for (std::size_t i = 0; i < drho.size(); ++i) {
            const auto vi = drho[i].valuation();
            if (vi.is_finite() && (!best || *vi.value < *drho[*best].valuation().value)) {
                best = i;
            }
        }
        if (!best) {
            return undetermined(FoldCondition::kink, "d_x rho vanishes to truncation order along the arc");
        }
        try {
            Series lambda = divide(rows[0][*best], drho[*best]);
            if (lambda.is_zero_to_order()) {
                return undetermined(FoldCondition::kink, "kink multiplier vanishes to truncation order");
            }
            v.kink_multiplier = std::move(lambda);
        } catch (const precondition_error &) {
            v.detail = "kink multiplier has a pole at s = 0";
        }
    }
    v.is_fold = true;
    v.failing = FoldCondition::none;
    return v;
}

FoldVerdict vanishing_fold_test(const Polynomial &F, const Polynomial &rho, const Arc &arc)
{
    return vanishing_fold_test(std::span<const Polynomial>(&F, 1), rho, arc);
}

} // namespace milnorkit
