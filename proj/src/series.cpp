#include <milnorkit/series.hpp>

#include <algorithm>
#include <sstream>

#include <milnorkit/errors.hpp>

namespace milnorkit
{

namespace
{

// Lower bound on the valuation: first nonzero exponent, else the order.
int valuation_bound(const Series &a)
{
    const auto &c = a.coefficients();
    for (int k = 0; k < a.order(); ++k) {
        if (c[k] != 0) {
            return k;
        }
    }
    return a.order();
}

} // namespace

Series::Series(int order) : c_(static_cast<std::size_t>(std::max(order, 0))), order_(std::max(order, 0)) {}

Series::Series(std::vector<Rational> coefficients, int order) : c_(std::move(coefficients)), order_(std::max(order, 0))
{
    c_.resize(static_cast<std::size_t>(order_));
}

Series Series::constant(const Rational &c, int order)
{
    Series out(order);
    if (order > 0) {
        out.c_[0] = c;
    }
    return out;
}

Series Series::monomial(const Rational &c, int k, int order)
{
    if (k < 0) {
        throw precondition_error("negative exponent in a power series");
    }
    Series out(order);
    if (k < order) {
        out.c_[k] = c;
    }
    return out;
}

Series Series::from_polynomial(const Polynomial &p, int order)
{
    if (p.context()->size() != 1) {
        throw context_mismatch("series text must be univariate");
    }
    Series out(order);
    for (const auto &[m, c] : p.terms()) {
        if (m[0] < static_cast<std::uint32_t>(order)) {
            out.c_[m[0]] = c;
        }
    }
    return out;
}

const Rational &Series::operator[](int k) const
{
    return c_.at(static_cast<std::size_t>(k));
}

Rational Series::coefficient(int k) const
{
    if (k < 0 || k >= order_) {
        throw truncation_error("coefficient of s^" + std::to_string(k) + " is beyond the truncation order");
    }
    return c_[k];
}

Valuation Series::valuation() const
{
    Valuation v;
    const int k = valuation_bound(*this);
    v.lower_bound = k;
    if (k < order_) {
        v.value = k;
        v.leading = c_[k];
        v.certainty = Certainty::certified;
    } else {
        v.certainty = Certainty::truncation_limited;
    }
    return v;
}

bool Series::is_zero_to_order() const
{
    return valuation_bound(*this) == order_;
}

Series Series::truncated(int order) const
{
    return Series(c_, std::min(order, order_));
}

Series &Series::operator+=(const Series &rhs)
{
    order_ = std::min(order_, rhs.order_);
    c_.resize(static_cast<std::size_t>(order_));
    for (int k = 0; k < order_; ++k) {
        c_[k] += rhs.c_[k];
    }
    return *this;
}

Series &Series::operator-=(const Series &rhs)
{
    order_ = std::min(order_, rhs.order_);
    c_.resize(static_cast<std::size_t>(order_));
    for (int k = 0; k < order_; ++k) {
        c_[k] -= rhs.c_[k];
    }
    return *this;
}

Series &Series::operator*=(const Rational &c)
{
    for (auto &x : c_) {
        x *= c;
    }
    return *this;
}

Series operator*(const Series &a, const Series &b)
{
    const int va = valuation_bound(a);
    const int vb = valuation_bound(b);
    // a = A + O(s^Na) with v(A) >= va, likewise b, so ab is known to
    // min(Na + vb, Nb + va).
    const int order = std::min(a.order_ + vb, b.order_ + va);
    Series out(order);
    for (int i = va; i < a.order_ && i < order; ++i) {
        if (a.c_[i] == 0) {
            continue;
        }
        for (int j = vb; j < b.order_ && i + j < order; ++j) {
            if (b.c_[j] != 0) {
                out.c_[i + j] += a.c_[i] * b.c_[j];
            }
        }
    }
    return out;
}

Series Series::operator-() const
{
    Series out(*this);
    for (auto &x : out.c_) {
        x = -x;
    }
    return out;
}

Series Series::pow(unsigned e) const
{
    Series result = constant(Rational(1), std::max(order_, 1) + static_cast<int>(e) * valuation_bound(*this));
    Series base = *this;
    while (e != 0) {
        if (e & 1U) {
            result = result * base;
        }
        e >>= 1U;
        if (e != 0) {
            base = base * base;
        }
    }
    return result;
}

Series Series::derivative() const
{
    Series out(order_ - 1);
    for (int k = 1; k < order_; ++k) {
        out.c_[k - 1] = c_[k] * k;
    }
    return out;
}

Series Series::compose(const Series &inner) const
{
    const int vin = valuation_bound(inner);
    if (vin == 0) {
        throw precondition_error("inner series of a composition must vanish at 0");
    }
    // this = P + O(t^N) gives P(inner) + O(s^(N*vin)); inner itself is only
    // known to its own order.
    const int order = std::min(order_ * vin, inner.order());
    Series out = constant(order_ > 0 ? c_[0] : Rational(0), order);
    Series power = constant(Rational(1), order);
    for (int k = 1; k < order_ && k * vin < order; ++k) {
        power = (power * inner).truncated(order);
        if (c_[k] != 0) {
            out += power * c_[k];
        }
    }
    return out.truncated(order);
}

long double Series::evaluate(long double s) const
{
    long double sum = 0.0L;
    for (int k = order_ - 1; k >= 0; --k) {
        sum = sum * s + to_long_double(c_[k]);
    }
    return sum;
}

bool Series::agrees_with(const Series &other) const
{
    const int n = std::min(order_, other.order_);
    for (int k = 0; k < n; ++k) {
        if (c_[k] != other.c_[k]) {
            return false;
        }
    }
    return true;
}

Series divide(const Series &a, const Series &b)
{
    const auto vb = b.valuation();
    if (!vb.is_finite()) {
        throw truncation_error("division by a series that is zero to its truncation order");
    }
    const int shift = *vb.value;
    const int va = valuation_bound(a);
    if (va < shift) {
        if (va < a.order()) {
            throw precondition_error("quotient would have negative valuation");
        }
        throw truncation_error("dividend is zero only to an order below the divisor's valuation");
    }
    // a / b = s^-shift * a * (b / s^shift)^-1, with the inverse known to
    // order Nb - shift.
    const int inv_order = b.order() - shift;
    std::vector<Rational> inv(static_cast<std::size_t>(inv_order));
    const Rational &b0 = b[shift];
    inv[0] = 1 / b0;
    for (int k = 1; k < inv_order; ++k) {
        Rational acc = 0;
        for (int j = 1; j <= k; ++j) {
            const Rational &bj = b[shift + j];
            if (bj != 0 && inv[k - j] != 0) {
                acc += bj * inv[k - j];
            }
        }
        inv[k] = -acc / b0;
    }
    const Series product = a * Series(std::move(inv), inv_order);
    Series out(product.order() - shift);
    std::vector<Rational> c(static_cast<std::size_t>(out.order()));
    for (int k = 0; k < out.order(); ++k) {
        c[k] = product[k + shift];
    }
    return Series(std::move(c), out.order());
}

Series series_arith(const Series &a, const Series &b, SeriesOp op)
{
    switch (op) {
        case SeriesOp::add:
            return a + b;
        case SeriesOp::sub:
            return a - b;
        case SeriesOp::mul:
            return a * b;
        case SeriesOp::div:
            return divide(a, b);
    }
    throw precondition_error("unknown series operation");
}

Valuation valuation(const Series &a)
{
    return a.valuation();
}

std::string to_string(const Series &a, const std::string &param)
{
    std::ostringstream os;
    bool first = true;
    for (int k = 0; k < a.order(); ++k) {
        const auto &c = a[k];
        if (c == 0) {
            continue;
        }
        if (!first) {
            os << (c < 0 ? " - " : " + ");
        } else if (c < 0) {
            os << "-";
        }
        first = false;
        const Rational mag = abs(c);
        if (k == 0) {
            os << to_string(mag);
        } else {
            if (mag != 1) {
                os << to_string(mag) << "*";
            }
            os << param;
            if (k > 1) {
                os << "^" << k;
            }
        }
    }
    if (first) {
        os << "0";
    }
    os << " + O(" << param << "^" << a.order() << ")";
    return os.str();
}

Arc::Arc(std::vector<Series> x_components, std::vector<Series> t_components)
    : x_(std::move(x_components)), t_(std::move(t_components))
{
    if (x_.empty()) {
        throw precondition_error("arc needs at least one x-component");
    }
    order_ = x_.front().order();
    for (const auto *block : {&x_, &t_}) {
        for (const auto &c : *block) {
            order_ = std::min(order_, c.order());
        }
    }
    if (order_ < 1) {
        throw truncation_error("arc components must be known at least to order 1");
    }
    for (auto *block : {&x_, &t_}) {
        for (auto &c : *block) {
            c = c.truncated(order_);
            if (c[0] != 0) {
                throw precondition_error("arc components must vanish at s = 0");
            }
        }
    }
}

std::vector<Series> Arc::components() const
{
    std::vector<Series> all = x_;
    all.insert(all.end(), t_.begin(), t_.end());
    return all;
}

Arc Arc::reparameterized(unsigned m) const
{
    if (m == 0) {
        throw precondition_error("reparameterization exponent must be positive");
    }
    const int order = order_ * static_cast<int>(m);
    auto stretch = [&](const Series &c) {
        Series out(order);
        std::vector<Rational> coeffs(static_cast<std::size_t>(order));
        for (int k = 0; k < c.order(); ++k) {
            coeffs[static_cast<std::size_t>(k) * m] = c[k];
        }
        return Series(std::move(coeffs), order);
    };
    std::vector<Series> x, t;
    for (const auto &c : x_) {
        x.push_back(stretch(c));
    }
    for (const auto &c : t_) {
        t.push_back(stretch(c));
    }
    return Arc(std::move(x), std::move(t));
}

Series evaluate_series(const Polynomial &f, std::span<const Series> values)
{
    const auto n = f.context()->size();
    if (values.size() != n) {
        throw context_mismatch("one series per context variable is required");
    }
    int base = 0;
    for (std::size_t i = 0; i < n; ++i) {
        base = i == 0 ? values[i].order() : std::min(base, values[i].order());
    }
    if (n == 0) {
        return Series::constant(f.constant_term(), 1);
    }

    std::vector<std::vector<Series>> powers(n);
    auto power = [&](std::size_t var, std::uint32_t e) -> const Series & {
        auto &cache = powers[var];
        if (cache.empty()) {
            cache.push_back(Series::constant(Rational(1), 2 * base));
            cache.push_back(values[var]);
        }
        while (cache.size() <= e) {
            cache.push_back(cache.back() * values[var]);
        }
        return cache[e];
    };

    // The constant monomial contributes with the widest order any nonconstant
    // term could reach; the sum then settles on the tightest bound.
    std::optional<Series> sum;
    for (const auto &[m, c] : f.terms()) {
        std::optional<Series> term;
        for (std::size_t i = 0; i < n; ++i) {
            if (m[i] == 0) {
                continue;
            }
            term = term ? *term * power(i, m[i]) : power(i, m[i]);
        }
        Series t = term ? *term * c : Series::constant(c, 2 * base);
        sum = sum ? *sum + t : t;
    }
    if (!sum) {
        // Zero polynomial: exactly zero, reported to the inputs' order.
        return Series(base);
    }
    return *sum;
}

Series evaluate_along_arc(const Polynomial &f, const Arc &arc)
{
    const auto &ctx = *f.context();
    if (arc.x().size() != ctx.n_x() || arc.t().size() != ctx.n_t()) {
        throw context_mismatch("arc dimensions do not match the polynomial's context");
    }
    const auto values = arc.components();
    const Series out = evaluate_series(f, values);
    return out.truncated(arc.order());
}

ImplicitSolution implicit_solve(const Polynomial &G, const Rational &lambda0, int order)
{
    if (G.context()->size() != 2) {
        throw context_mismatch("implicit_solve expects G over (lambda, s)");
    }
    if (order < 1) {
        throw precondition_error("requested order must be positive");
    }
    const std::vector<Rational> base_point{lambda0, Rational(0)};
    if (G.evaluate(std::span<const Rational>(base_point)) != 0) {
        throw precondition_error("G(lambda0, 0) must vanish");
    }
    const Polynomial dG = partial_derivative(G, 0);
    if (dG.evaluate(std::span<const Rational>(base_point)) == 0) {
        throw precondition_error("dG/dlambda(lambda0, 0) must be nonzero");
    }

    ImplicitSolution out;
    std::vector<Rational> coeffs{lambda0};
    int precision = 1;
    while (precision < order) {
        const int target = std::min(2 * precision, order);
        // The current iterate is an exact polynomial; only its agreement with
        // the true solution is limited, so it is promoted to the new order.
        const Series lam(coeffs, target);
        const std::vector<Series> at{lam, Series::monomial(Rational(1), 1, target)};
        const Series residual = evaluate_series(G, at);
        const Series slope = evaluate_series(dG, at);
        const Series next = lam - divide(residual.truncated(target), slope.truncated(target));
        coeffs = next.truncated(target).coefficients();
        precision = target;
        ++out.newton_steps;
    }
    out.solution = Series(coeffs, order);

    const std::vector<Series> at{out.solution, Series::monomial(Rational(1), 1, order)};
    if (!evaluate_series(G, at).truncated(order).is_zero_to_order()) {
        throw error("internal error: Newton iteration did not reach the requested order");
    }
    return out;
}

} // namespace milnorkit
