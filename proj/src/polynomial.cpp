#include <milnorkit/polynomial.hpp>

#include <algorithm>
#include <set>
#include <utility>

#include <milnorkit/errors.hpp>

namespace milnorkit
{

Context::Context(std::vector<std::string> x_names, std::vector<std::string> t_names, std::uint32_t degree_cap)
    : n_x_(x_names.size()), degree_cap_(degree_cap)
{
    names_ = std::move(x_names);
    names_.insert(names_.end(), std::make_move_iterator(t_names.begin()), std::make_move_iterator(t_names.end()));
    std::set<std::string> seen;
    for (const auto &n : names_) {
        if (n.empty()) {
            throw precondition_error("empty variable name");
        }
        if (!seen.insert(n).second) {
            throw precondition_error("duplicate variable name '" + n + "'");
        }
    }
}

std::optional<std::size_t> Context::index_of(const std::string &name) const
{
    const auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - names_.begin());
}

ContextPtr make_context(std::vector<std::string> x_names, std::vector<std::string> t_names, std::uint32_t degree_cap)
{
    return std::make_shared<const Context>(std::move(x_names), std::move(t_names), degree_cap);
}

bool same_context(const ContextPtr &a, const ContextPtr &b)
{
    return a == b || (a && b && *a == *b);
}

std::uint64_t total_degree(const Monomial &m)
{
    std::uint64_t d = 0;
    for (auto e : m) {
        d += e;
    }
    return d;
}

bool GrlexLess::operator()(const Monomial &a, const Monomial &b) const
{
    const auto da = total_degree(a);
    const auto db = total_degree(b);
    if (da != db) {
        return da < db;
    }
    // Among equal degrees, a larger exponent of an earlier variable ranks higher.
    return a < b;
}

Polynomial::Polynomial(ContextPtr ctx) : ctx_(std::move(ctx))
{
    if (!ctx_) {
        throw precondition_error("polynomial without a context");
    }
}

Polynomial Polynomial::constant(ContextPtr ctx, const Rational &c)
{
    Polynomial p(std::move(ctx));
    p.add_term(Monomial(p.ctx_->size(), 0), c);
    return p;
}

Polynomial Polynomial::variable(ContextPtr ctx, std::size_t var)
{
    Polynomial p(std::move(ctx));
    if (var >= p.ctx_->size()) {
        throw precondition_error("variable index out of range");
    }
    Monomial m(p.ctx_->size(), 0);
    m[var] = 1;
    p.add_term(m, Rational(1));
    return p;
}

Polynomial Polynomial::monomial(ContextPtr ctx, Monomial m, const Rational &c)
{
    Polynomial p(std::move(ctx));
    if (m.size() != p.ctx_->size()) {
        throw context_mismatch("monomial length does not match the context");
    }
    p.add_term(m, c);
    return p;
}

Rational Polynomial::coefficient(const Monomial &m) const
{
    const auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
}

Rational Polynomial::constant_term() const
{
    return coefficient(Monomial(ctx_->size(), 0));
}

std::uint64_t Polynomial::degree() const
{
    // The map is graded, so the last key has the largest degree.
    return terms_.empty() ? 0 : total_degree(terms_.rbegin()->first);
}

std::uint32_t Polynomial::degree_in(std::size_t var) const
{
    std::uint32_t d = 0;
    for (const auto &[m, c] : terms_) {
        d = std::max(d, m.at(var));
    }
    return d;
}

bool Polynomial::depends_on(std::size_t var) const
{
    return degree_in(var) > 0;
}

void Polynomial::add_term(const Monomial &m, const Rational &c)
{
    if (c == 0) {
        return;
    }
    if (m.size() != ctx_->size()) {
        throw context_mismatch("monomial length does not match the context");
    }
    if (total_degree(m) > ctx_->degree_cap()) {
        throw overflow_error("monomial degree exceeds the degree cap");
    }
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) {
            terms_.erase(it);
        }
    }
}

void Polynomial::check_context(const Polynomial &other) const
{
    if (!same_context(ctx_, other.ctx_)) {
        throw context_mismatch("polynomials live over different variable contexts");
    }
}

Polynomial &Polynomial::operator+=(const Polynomial &rhs)
{
    check_context(rhs);
    for (const auto &[m, c] : rhs.terms_) {
        add_term(m, c);
    }
    return *this;
}

Polynomial &Polynomial::operator-=(const Polynomial &rhs)
{
    check_context(rhs);
    for (const auto &[m, c] : rhs.terms_) {
        add_term(m, -c);
    }
    return *this;
}

Polynomial operator*(const Polynomial &a, const Polynomial &b)
{
    a.check_context(b);
    Polynomial out(a.ctx_);
    const auto cap = a.ctx_->degree_cap();
    Monomial m(a.ctx_->size());
    for (const auto &[ma, ca] : a.terms_) {
        for (const auto &[mb, cb] : b.terms_) {
            for (std::size_t i = 0; i < m.size(); ++i) {
                const std::uint64_t e = std::uint64_t(ma[i]) + mb[i];
                if (e > cap) {
                    throw overflow_error("exponent exceeds the degree cap");
                }
                m[i] = static_cast<std::uint32_t>(e);
            }
            out.add_term(m, ca * cb);
        }
    }
    return out;
}

Polynomial &Polynomial::operator*=(const Polynomial &rhs)
{
    *this = *this * rhs;
    return *this;
}

Polynomial &Polynomial::operator*=(const Rational &c)
{
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto &[m, coeff] : terms_) {
        coeff *= c;
    }
    return *this;
}

Polynomial Polynomial::operator-() const
{
    Polynomial out(*this);
    for (auto &[m, c] : out.terms_) {
        c = -c;
    }
    return out;
}

Polynomial Polynomial::pow(std::uint32_t e) const
{
    if (std::uint64_t(e) * degree() > ctx_->degree_cap()) {
        throw overflow_error("power exceeds the degree cap");
    }
    Polynomial result = constant(ctx_, Rational(1));
    Polynomial base = *this;
    while (e != 0) {
        if (e & 1U) {
            result *= base;
        }
        e >>= 1U;
        if (e != 0) {
            base *= base;
        }
    }
    return result;
}

namespace
{

template <typename T>
T evaluate_impl(const Polynomial::term_map &terms, std::span<const T> point, std::size_t n, T (*convert)(const Rational &))
{
    if (point.size() != n) {
        throw context_mismatch("point dimension does not match the context");
    }
    T sum = T(0);
    for (const auto &[m, c] : terms) {
        T value = convert(c);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::uint32_t k = 0; k < m[i]; ++k) {
                value *= point[i];
            }
        }
        sum += value;
    }
    return sum;
}

Rational identity(const Rational &r)
{
    return r;
}

} // namespace

Rational Polynomial::evaluate(std::span<const Rational> point) const
{
    return evaluate_impl<Rational>(terms_, point, ctx_->size(), &identity);
}

long double Polynomial::evaluate(std::span<const long double> point) const
{
    return evaluate_impl<long double>(terms_, point, ctx_->size(), &to_long_double);
}

bool operator==(const Polynomial &a, const Polynomial &b)
{
    return same_context(a.ctx_, b.ctx_) && a.terms_ == b.terms_;
}

Polynomial poly_arith(const Polynomial &lhs, const Polynomial &rhs, ArithOp op)
{
    switch (op) {
        case ArithOp::add:
            return lhs + rhs;
        case ArithOp::sub:
            return lhs - rhs;
        case ArithOp::mul:
            return lhs * rhs;
    }
    throw precondition_error("unknown arithmetic operation");
}

Polynomial partial_derivative(const Polynomial &f, std::size_t var)
{
    if (var >= f.context()->size()) {
        throw precondition_error("variable index out of range");
    }
    Polynomial out(f.context());
    for (const auto &[m, c] : f.terms()) {
        if (m[var] == 0) {
            continue;
        }
        Monomial d = m;
        --d[var];
        out.add_term(d, c * m[var]);
    }
    return out;
}

std::vector<Polynomial> x_gradient(const Polynomial &f)
{
    std::vector<Polynomial> grad;
    grad.reserve(f.context()->n_x());
    for (std::size_t i = 0; i < f.context()->n_x(); ++i) {
        grad.push_back(partial_derivative(f, i));
    }
    return grad;
}

Polynomial substitute(const Polynomial &f, const std::map<std::size_t, Polynomial> &bindings, const ContextPtr &target)
{
    const auto &src = *f.context();
    // Image of every source variable over the target context.
    std::vector<Polynomial> images;
    images.reserve(src.size());
    for (std::size_t i = 0; i < src.size(); ++i) {
        if (const auto it = bindings.find(i); it != bindings.end()) {
            if (!same_context(it->second.context(), target)) {
                throw context_mismatch("substituted polynomial is not over the target context");
            }
            images.push_back(it->second);
        } else {
            const auto j = target->index_of(src.name(i));
            if (!j) {
                throw context_mismatch("unbound variable '" + src.name(i) + "' is missing from the target context");
            }
            images.push_back(Polynomial::variable(target, *j));
        }
    }

    // Powers are cached per variable since the same exponents recur.
    std::vector<std::vector<Polynomial>> powers(src.size());
    auto power = [&](std::size_t var, std::uint32_t e) -> const Polynomial & {
        auto &cache = powers[var];
        if (cache.empty()) {
            cache.push_back(Polynomial::constant(target, Rational(1)));
        }
        while (cache.size() <= e) {
            cache.push_back(cache.back() * images[var]);
        }
        return cache[e];
    };

    Polynomial out(target);
    for (const auto &[m, c] : f.terms()) {
        Polynomial term = Polynomial::constant(target, c);
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (m[i] != 0) {
                term *= power(i, m[i]);
            }
        }
        out += term;
    }
    return out;
}

Polynomial rebind(const Polynomial &f, const ContextPtr &target)
{
    if (same_context(f.context(), target)) {
        return f;
    }
    const auto &src = *f.context();
    std::vector<std::size_t> map(src.size());
    for (std::size_t i = 0; i < src.size(); ++i) {
        const auto j = target->index_of(src.name(i));
        if (!j) {
            if (f.depends_on(i)) {
                throw context_mismatch("variable '" + src.name(i) + "' is missing from the target context");
            }
            map[i] = target->size();
        } else {
            map[i] = *j;
        }
    }
    Polynomial out(target);
    for (const auto &[m, c] : f.terms()) {
        Monomial t(target->size(), 0);
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (m[i] != 0) {
                t[map[i]] = m[i];
            }
        }
        out.add_term(t, c);
    }
    return out;
}

WeightSystem::WeightSystem(std::vector<std::int64_t> weights, std::int64_t degree)
    : weights_(std::move(weights)), degree_(degree)
{
    if (weights_.empty()) {
        throw precondition_error("weight system needs at least one weight");
    }
    for (auto w : weights_) {
        if (w < 1) {
            throw precondition_error("weights must be positive");
        }
    }
    if (degree_ < *std::max_element(weights_.begin(), weights_.end())) {
        throw precondition_error("weighted degree must be at least the largest weight");
    }
}

std::int64_t weighted_degree(const Monomial &m, const WeightSystem &w, std::size_t n_x)
{
    std::int64_t d = 0;
    for (std::size_t i = 0; i < n_x; ++i) {
        d += w.weights()[i] * static_cast<std::int64_t>(m[i]);
    }
    return d;
}

namespace
{

void check_weights(const Polynomial &f, const WeightSystem &w)
{
    if (w.size() != f.context()->n_x()) {
        throw precondition_error("weight system must cover exactly the x-variables");
    }
}

} // namespace

std::map<std::int64_t, Polynomial> weighted_decomposition(const Polynomial &f, const WeightSystem &w)
{
    check_weights(f, w);
    std::map<std::int64_t, Polynomial> parts;
    const auto n_x = f.context()->n_x();
    for (const auto &[m, c] : f.terms()) {
        auto [it, _] = parts.try_emplace(weighted_degree(m, w, n_x), f.context());
        it->second.add_term(m, c);
    }
    return parts;
}

Polynomial euler_defect(const Polynomial &f, const WeightSystem &w)
{
    check_weights(f, w);
    const auto n_x = f.context()->n_x();
    // Each monomial is an eigenvector of the Euler operator, so the defect is
    // computed termwise: (wdeg(m) - D) c m.
    Polynomial out(f.context());
    for (const auto &[m, c] : f.terms()) {
        out.add_term(m, c * Rational(weighted_degree(m, w, n_x) - w.degree()));
    }
    return out;
}

bool is_quasihomogeneous(const Polynomial &f, const WeightSystem &w)
{
    return euler_defect(f, w).is_zero();
}

} // namespace milnorkit
