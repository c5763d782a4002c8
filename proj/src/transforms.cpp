#include <milnorkit/transforms.hpp>

#include <algorithm>
#include <limits>

#include <milnorkit/errors.hpp>
#include <milnorkit/linalg.hpp>

namespace milnorkit
{

MixedPolynomial::MixedPolynomial(std::size_t n, int order) : n_(n), order_(order) {}

MixedPolynomial MixedPolynomial::constant(std::size_t n, const Series &c)
{
    MixedPolynomial p(n, c.order());
    p.add_term(Monomial(n, 0), c);
    return p;
}

MixedPolynomial MixedPolynomial::variable(std::size_t n, std::size_t var, int order)
{
    if (var >= n) {
        throw precondition_error("variable index out of range");
    }
    MixedPolynomial p(n, order);
    Monomial m(n, 0);
    m[var] = 1;
    p.add_term(m, Series::constant(Rational(1), order));
    return p;
}

Series MixedPolynomial::coefficient(const Monomial &m) const
{
    const auto it = terms_.find(m);
    return it == terms_.end() ? Series(order_) : it->second.truncated(order_);
}

std::uint64_t MixedPolynomial::degree() const
{
    return terms_.empty() ? 0 : total_degree(terms_.rbegin()->first);
}

void MixedPolynomial::add_term(const Monomial &m, const Series &c)
{
    if (m.size() != n_) {
        throw context_mismatch("monomial length does not match the arity");
    }
    order_ = std::min(order_, c.order());
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        if (!c.is_zero_to_order()) {
            terms_.emplace(m, c);
        }
    } else {
        it->second += c;
        if (it->second.is_zero_to_order()) {
            terms_.erase(it);
        }
    }
}

MixedPolynomial &MixedPolynomial::operator+=(const MixedPolynomial &rhs)
{
    if (rhs.n_ != n_) {
        throw context_mismatch("mixed polynomials of different arity");
    }
    order_ = std::min(order_, rhs.order_);
    for (const auto &[m, c] : rhs.terms_) {
        add_term(m, c);
    }
    return *this;
}

MixedPolynomial &MixedPolynomial::operator-=(const MixedPolynomial &rhs)
{
    if (rhs.n_ != n_) {
        throw context_mismatch("mixed polynomials of different arity");
    }
    order_ = std::min(order_, rhs.order_);
    for (const auto &[m, c] : rhs.terms_) {
        add_term(m, -c);
    }
    return *this;
}

MixedPolynomial operator*(const MixedPolynomial &a, const MixedPolynomial &b)
{
    if (a.n_ != b.n_) {
        throw context_mismatch("mixed polynomials of different arity");
    }
    // A product of coefficients is known at least to the smaller order.
    MixedPolynomial out(a.n_, std::min(a.order_, b.order_));
    Monomial m(a.n_);
    for (const auto &[ma, ca] : a.terms_) {
        for (const auto &[mb, cb] : b.terms_) {
            for (std::size_t i = 0; i < m.size(); ++i) {
                m[i] = ma[i] + mb[i];
            }
            out.add_term(m, (ca * cb).truncated(out.order_));
        }
    }
    return out;
}

MixedPolynomial operator*(const MixedPolynomial &a, const Series &c)
{
    MixedPolynomial out(a.n_, std::min(a.order_, c.order()));
    for (const auto &[m, ca] : a.terms_) {
        out.add_term(m, (ca * c).truncated(out.order_));
    }
    return out;
}

MixedPolynomial MixedPolynomial::derivative(std::size_t var) const
{
    if (var >= n_) {
        throw precondition_error("variable index out of range");
    }
    MixedPolynomial out(n_, order_);
    for (const auto &[m, c] : terms_) {
        if (m[var] == 0) {
            continue;
        }
        Monomial d = m;
        --d[var];
        out.add_term(d, c * Rational(m[var]));
    }
    return out;
}

MixedPolynomial MixedPolynomial::tau_derivative() const
{
    MixedPolynomial out(n_, order_ - 1);
    for (const auto &[m, c] : terms_) {
        out.add_term(m, c.derivative());
    }
    return out;
}

Series MixedPolynomial::evaluate(std::span<const Series> y) const
{
    if (y.size() != n_) {
        throw context_mismatch("one series per y-variable is required");
    }
    Series sum(order_);
    for (const auto &[m, c] : terms_) {
        Series term = c;
        for (std::size_t i = 0; i < n_; ++i) {
            if (m[i] != 0) {
                term = term * y[i].pow(m[i]);
            }
        }
        sum += term;
    }
    return sum;
}

Series MixedPolynomial::evaluate_along(std::span<const Series> y, const Series &tau) const
{
    if (y.size() != n_) {
        throw context_mismatch("one series per y-variable is required");
    }
    std::optional<Series> sum;
    for (const auto &[m, c] : terms_) {
        Series term = c.compose(tau);
        for (std::size_t i = 0; i < n_; ++i) {
            if (m[i] != 0) {
                term = term * y[i].pow(m[i]);
            }
        }
        sum = sum ? *sum + term : term;
    }
    if (!sum) {
        return Series(Series(order_).compose(tau).order());
    }
    return *sum;
}

bool MixedPolynomial::agrees_with(const MixedPolynomial &other) const
{
    const int n = std::min(order_, other.order_);
    for (const auto *side : {&terms_, &other.terms_}) {
        for (const auto &[m, c] : *side) {
            if (!coefficient(m).truncated(n).agrees_with(other.coefficient(m).truncated(n))) {
                return false;
            }
        }
    }
    return true;
}

FamilyMap identity_map(std::size_t n, std::size_t p, int order)
{
    std::vector<Series> lambda;
    for (std::size_t j = 0; j < p; ++j) {
        lambda.push_back(Series::monomial(Rational(1), 1, order));
    }
    return parameter_map(n, std::move(lambda));
}

FamilyMap parameter_map(std::size_t n, std::vector<Series> lambda)
{
    FamilyMap phi;
    phi.order = std::numeric_limits<int>::max();
    for (const auto &l : lambda) {
        phi.order = std::min(phi.order, l.order());
    }
    if (lambda.empty()) {
        throw precondition_error("a family map needs a parameter component");
    }
    for (std::size_t i = 0; i < n; ++i) {
        phi.psi.push_back(MixedPolynomial::variable(n, i, phi.order));
        phi.permutation.push_back(i);
    }
    phi.lambda = std::move(lambda);
    return phi;
}

void validate(const FamilyMap &phi)
{
    const std::size_t n = phi.n();
    Matrix<Series> linear(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (phi.psi[i].arity() != n) {
            throw precondition_error("Psi components must take n arguments");
        }
        if (!phi.psi[i].coefficient(Monomial(n, 0)).is_zero_to_order()) {
            throw precondition_error("Psi(0, tau) must vanish");
        }
        for (std::size_t j = 0; j < n; ++j) {
            Monomial m(n, 0);
            m[j] = 1;
            linear[i].push_back(phi.psi[i].coefficient(m));
        }
    }
    const auto det = determinant(linear).valuation();
    if (!det.is_finite() || *det.value != 0) {
        throw precondition_error("dPsi/dy at y = 0 is not invertible for small tau");
    }
    for (const auto &l : phi.lambda) {
        if (l.order() > 0 && l[0] != 0) {
            throw precondition_error("lambda(0) must vanish");
        }
    }
}

MixedPolynomial compose_family(const Polynomial &F, const FamilyMap &phi)
{
    const auto &ctx = *F.context();
    if (ctx.n_x() != phi.n() || ctx.n_t() != phi.lambda.size()) {
        throw context_mismatch("family map arity does not match F");
    }
    const std::size_t n = phi.n();
    const int order = phi.order;

    std::vector<std::vector<MixedPolynomial>> psi_powers(n);
    auto psi_power = [&](std::size_t i, std::uint32_t e) -> const MixedPolynomial & {
        auto &cache = psi_powers[i];
        if (cache.empty()) {
            cache.push_back(MixedPolynomial::constant(n, Series::constant(Rational(1), order)));
        }
        while (cache.size() <= e) {
            cache.push_back(cache.back() * phi.psi[i]);
        }
        return cache[e];
    };

    MixedPolynomial out(n, order);
    for (const auto &[m, c] : F.terms()) {
        Series coeff = Series::constant(c, order);
        for (std::size_t j = 0; j < phi.lambda.size(); ++j) {
            if (m[n + j] != 0) {
                coeff = (coeff * phi.lambda[j].pow(m[n + j])).truncated(order);
            }
        }
        MixedPolynomial term = MixedPolynomial::constant(n, coeff);
        for (std::size_t i = 0; i < n; ++i) {
            if (m[i] != 0) {
                term = term * psi_power(i, m[i]);
            }
        }
        out += term;
    }
    return out;
}

namespace
{

std::optional<std::size_t> first_min_valuation(std::span<const Series> v)
{
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const auto val = v[i].valuation();
        if (val.is_finite() && (!best || *val.value < *v[*best].valuation().value)) {
            best = i;
        }
    }
    return best;
}

Series quotient(const Series &a, const Series &b)
{
    try {
        return divide(a, b);
    } catch (const precondition_error &) {
        throw precondition_error("arc does not witness Whitney failure: a coefficient of Psi is not analytic");
    }
}

} // namespace

FamilyMap build_fold_transform(std::span<const Series> p, std::span<const Series> q, const Series &u,
                               std::span<const Series> lambda)
{
    const std::size_t n = p.size();
    if (n == 0 || q.size() != n) {
        throw precondition_error("p and q must have one component per x-variable");
    }
    if (lambda.size() != 1) {
        throw precondition_error("the fold transform is built for a single parameter");
    }
    const auto lead = first_min_valuation(p);
    if (!lead) {
        throw truncation_error("the arc's x-components vanish to truncation order");
    }
    const auto qmin = first_min_valuation(q);
    if (!qmin) {
        throw truncation_error("d_x F vanishes along the arc to truncation order");
    }
    const int vp = *p[*lead].valuation().value;
    const int vq = *q[*qmin].valuation().value;
    const auto vu = u.valuation();
    if (!vu.is_finite()) {
        if (vu.lower_bound <= vp + vq) {
            throw truncation_error("u vanishes to truncation order before v(p) + v(q)");
        }
        throw precondition_error("arc does not witness Whitney failure: v(u) > v(p) + v(q)");
    }
    if (*vu.value != vp + vq) {
        throw precondition_error("arc does not witness Whitney failure: v(u) = " + std::to_string(*vu.value) +
                                 " but v(p) + v(q) = " + std::to_string(vp + vq));
    }

    // Coordinate order with the minimal-valuation component first.
    std::vector<std::size_t> perm{*lead};
    for (std::size_t i = 0; i < n; ++i) {
        if (i != *lead) {
            perm.push_back(i);
        }
    }
    std::vector<Series> P, Q;
    for (auto i : perm) {
        P.push_back(p[i]);
        Q.push_back(q[i]);
    }

    int order = lambda[0].order();
    std::vector<MixedPolynomial> psi_new;
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<Series> coeffs(n);
        if (j == 0) {
            coeffs[0] = Series::constant(Rational(1), u.order());
        } else {
            coeffs[0] = quotient(P[j], P[0]);
        }
        for (std::size_t i = 1; i < n; ++i) {
            // -(p_j q_i / u), formed as one quotient so it stays analytic.
            Series c = -quotient(P[j] * Q[i], u);
            if (i == j) {
                c += Series::constant(Rational(1), c.order());
            }
            coeffs[i] = std::move(c);
        }
        for (const auto &c : coeffs) {
            order = std::min(order, c.order());
        }
        // y is permuted like x, so det(dPsi/dy) carries no sign.
        MixedPolynomial comp(n, order);
        for (std::size_t i = 0; i < n; ++i) {
            Monomial m(n, 0);
            m[perm[i]] = 1;
            comp.add_term(m, coeffs[i]);
        }
        psi_new.push_back(std::move(comp));
    }

    FamilyMap phi;
    phi.order = order;
    phi.psi.assign(n, MixedPolynomial(n, order));
    for (std::size_t j = 0; j < n; ++j) {
        MixedPolynomial comp(n, order);
        comp += psi_new[j];
        phi.psi[perm[j]] = comp;
    }
    phi.lambda = {lambda[0].truncated(order)};
    phi.permutation = perm;
    return phi;
}

namespace
{

MixedPolynomial mixed_determinant(const Matrix<MixedPolynomial> &m)
{
    const std::size_t n = m.size();
    if (n == 1) {
        return m[0][0];
    }
    std::optional<MixedPolynomial> sum;
    for (std::size_t j = 0; j < n; ++j) {
        Matrix<MixedPolynomial> minor(n - 1);
        for (std::size_t r = 1; r < n; ++r) {
            for (std::size_t c = 0; c < n; ++c) {
                if (c != j) {
                    minor[r - 1].push_back(m[r][c]);
                }
            }
        }
        MixedPolynomial term = m[0][j] * mixed_determinant(minor);
        if (j % 2 == 1) {
            sum = sum ? *sum - term : MixedPolynomial(term.arity(), term.order()) - term;
        } else {
            sum = sum ? *sum + term : term;
        }
    }
    return *sum;
}

} // namespace

MixedPolynomial jacobian_det(const FamilyMap &phi)
{
    const std::size_t n = phi.n();
    if (n == 0) {
        throw precondition_error("empty family map");
    }
    Matrix<MixedPolynomial> jac(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            jac[i].push_back(phi.psi[i].derivative(j));
        }
    }
    return mixed_determinant(jac);
}

std::vector<Series> map_point(const FamilyMap &phi, std::span<const Series> y)
{
    std::vector<Series> out;
    for (const auto &c : phi.psi) {
        out.push_back(c.evaluate(y));
    }
    for (const auto &l : phi.lambda) {
        out.push_back(l);
    }
    return out;
}

namespace
{

// y-index of the i-th coordinate in leading-first order.
std::size_t coordinate(const FamilyMap &phi, std::size_t i)
{
    return phi.permutation.empty() ? i : phi.permutation[i];
}

std::vector<Series> axis_point(const FamilyMap &phi, const Series &p1)
{
    std::vector<Series> y(phi.n(), Series(p1.order()));
    y[phi.permutation.empty() ? 0 : phi.permutation.front()] = p1;
    return y;
}

} // namespace

std::vector<Series> transported_gradient_chain_rule(const Polynomial &F, const FamilyMap &phi, const Series &p1)
{
    const auto image = map_point(phi, axis_point(phi, p1));
    std::vector<Series> q;
    for (const auto &g : x_gradient(F)) {
        q.push_back(evaluate_series(g, image));
    }
    const std::size_t n = phi.n();
    std::vector<Series> out;
    const auto y = axis_point(phi, p1);
    for (std::size_t i = 0; i < n; ++i) {
        std::optional<Series> sum;
        for (std::size_t j = 0; j < n; ++j) {
            const Series term = q[j] * phi.psi[j].derivative(coordinate(phi, i)).evaluate(y);
            sum = sum ? *sum + term : term;
        }
        out.push_back(*sum);
    }
    return out;
}

TransportedKinkRecord verify_transported_kink(const Polynomial &F, const FamilyMap &phi, const Series &p1)
{
    const std::size_t n = phi.n();
    const auto &ctx = *F.context();
    if (ctx.n_x() != n || ctx.n_t() != phi.lambda.size()) {
        throw context_mismatch("family map arity does not match F");
    }
    const auto y = axis_point(phi, p1);
    const auto image = map_point(phi, y);
    if (!evaluate_series(F, image).is_zero_to_order()) {
        throw error("transported arc is not in the zero set of F");
    }

    TransportedKinkRecord rec;
    rec.permutation = phi.permutation;
    const MixedPolynomial composed = compose_family(F, phi);
    for (std::size_t i = 0; i < n; ++i) {
        rec.gradient.push_back(composed.derivative(coordinate(phi, i)).evaluate(y));
    }

    std::optional<Series> u;
    for (std::size_t i = 0; i < n; ++i) {
        const Series term = image[i] * evaluate_series(partial_derivative(F, i), image);
        u = u ? *u + term : term;
    }
    rec.u = *u;
    if (rec.u.is_zero_to_order()) {
        throw truncation_error("u vanishes to truncation order; raise the order");
    }
    rec.u_over_p1 = divide(rec.u, p1);
    try {
        rec.multiplier = divide(rec.u, p1 * p1);
    } catch (const precondition_error &) {
        rec.multiplier.reset();
    }

    rec.order = rec.u_over_p1.order();
    for (std::size_t i = 1; i < n; ++i) {
        rec.order = std::min(rec.order, rec.gradient[i].order());
        if (!rec.gradient[i].is_zero_to_order()) {
            throw error("d(F o Phi)/dy_" + std::to_string(i + 1) + " does not vanish along the transported arc");
        }
    }
    if (rec.gradient[0].is_zero_to_order() || !rec.gradient[0].agrees_with(rec.u_over_p1)) {
        throw error("d(F o Phi)/dy_1 differs from u / p_1 along the transported arc");
    }
    rec.order = std::min(rec.order, rec.gradient[0].order());
    return rec;
}

StabilityReport whitney_stability_check(const Polynomial &F, const FamilyMap &phi, std::span<const Arc> test_arcs)
{
    const std::size_t n = phi.n();
    if (phi.lambda.size() != 1) {
        throw precondition_error("stability check expects a single parameter");
    }
    const MixedPolynomial composed = compose_family(F, phi);
    std::vector<MixedPolynomial> dy;
    for (std::size_t i = 0; i < n; ++i) {
        dy.push_back(composed.derivative(i));
    }
    const MixedPolynomial dtau = composed.tau_derivative();

    StabilityReport report;
    for (const auto &arc : test_arcs) {
        if (arc.x().size() != n || arc.t().size() != 1) {
            throw context_mismatch("test arcs live in (y, tau) space");
        }
        const auto &ys = arc.x();
        const Series &tau = arc.t()[0];
        if (!composed.evaluate_along(ys, tau).truncated(arc.order()).is_zero_to_order()) {
            throw precondition_error("test arc is not in the zero set of F o Phi");
        }
        StabilityEntry e;
        std::vector<Series> grad;
        std::optional<Series> grad_sq, y_sq, radial;
        for (std::size_t i = 0; i < n; ++i) {
            grad.push_back(dy[i].evaluate_along(ys, tau).truncated(arc.order()));
            const Series g2 = grad[i] * grad[i];
            const Series y2 = ys[i] * ys[i];
            const Series r = ys[i] * grad[i];
            grad_sq = grad_sq ? *grad_sq + g2 : g2;
            y_sq = y_sq ? *y_sq + y2 : y2;
            radial = radial ? *radial + r : r;
        }
        e.composed_a.push_back(decide_limit(dtau.evaluate_along(ys, tau).truncated(arc.order()), {*grad_sq}, true));
        e.composed_bprime = decide_limit(radial->truncated(arc.order()), {*y_sq, *grad_sq}, false);

        // Image arc Phi(y(s), tau(s)).
        std::vector<Series> xs;
        for (const auto &c : phi.psi) {
            xs.push_back(c.evaluate_along(ys, tau).truncated(arc.order()));
        }
        const Arc image(xs, {phi.lambda[0].compose(tau).truncated(arc.order())});
        e.image_a = condition_a_along_arc(F, image);
        e.image_bprime = condition_bprime_along_arc(F, image);

        e.a_agrees = e.composed_a.size() == e.image_a.size();
        for (std::size_t j = 0; j < e.image_a.size() && e.a_agrees; ++j) {
            e.a_agrees = e.composed_a[j].verdict == e.image_a[j].verdict;
        }
        e.bprime_agrees = e.composed_bprime.verdict == e.image_bprime.verdict;
        report.entries.push_back(std::move(e));
    }
    return report;
}

} // namespace milnorkit
