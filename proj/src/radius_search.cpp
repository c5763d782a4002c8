#include <milnorkit/whitney.hpp>

#include <algorithm>
#include <cmath>
#include <future>
#include <random>
#include <thread>

#include <milnorkit/errors.hpp>
#include <milnorkit/linalg.hpp>

namespace milnorkit
{

namespace
{

// Polynomial flattened for fast double evaluation.
class NumericPoly
{
public:
    explicit NumericPoly(const Polynomial &p)
    {
        for (const auto &[m, c] : p.terms()) {
            terms_.push_back({c.get_d(), m});
        }
    }

    double operator()(const std::vector<double> &x) const
    {
        double sum = 0.0;
        for (const auto &t : terms_) {
            double v = t.coeff;
            for (std::size_t i = 0; i < x.size(); ++i) {
                for (std::uint32_t k = 0; k < t.exps[i]; ++k) {
                    v *= x[i];
                }
            }
            sum += v;
        }
        return sum;
    }

private:
    struct Term {
        double coeff;
        Monomial exps;
    };
    std::vector<Term> terms_;
};

double det(std::vector<std::vector<double>> a)
{
    const std::size_t n = a.size();
    double d = 1.0;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < n; ++r) {
            if (std::fabs(a[r][c]) > std::fabs(a[p][c])) {
                p = r;
            }
        }
        if (a[p][c] == 0.0) {
            return 0.0;
        }
        if (p != c) {
            std::swap(a[p], a[c]);
            d = -d;
        }
        d *= a[c][c];
        for (std::size_t r = c + 1; r < n; ++r) {
            const double f = a[r][c] / a[c][c];
            for (std::size_t j = c; j < n; ++j) {
                a[r][j] -= f * a[c][j];
            }
        }
    }
    return d;
}

// Solves a small dense system in place; false when singular.
bool solve(std::vector<std::vector<double>> a, std::vector<double> &b)
{
    const std::size_t n = b.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < n; ++r) {
            if (std::fabs(a[r][c]) > std::fabs(a[p][c])) {
                p = r;
            }
        }
        if (std::fabs(a[p][c]) < 1e-300) {
            return false;
        }
        std::swap(a[p], a[c]);
        std::swap(b[p], b[c]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c) {
                continue;
            }
            const double f = a[r][c] / a[c][c];
            for (std::size_t j = c; j < n; ++j) {
                a[r][j] -= f * a[c][j];
            }
            b[r] -= f * b[c];
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        b[i] /= a[i][i];
    }
    return true;
}

class KinkSystem
{
public:
    KinkSystem(std::span<const Polynomial> f, const Polynomial &rho) : rho_(rho)
    {
        for (const auto &fi : f) {
            f_.emplace_back(fi);
            std::vector<NumericPoly> g;
            for (const auto &d : x_gradient(fi)) {
                g.emplace_back(d);
            }
            grad_f_.push_back(std::move(g));
        }
        for (const auto &d : x_gradient(rho)) {
            grad_rho_.emplace_back(d);
        }
        n_ = f.front().context()->n_x();
        column_sets_ = combinations(n_, f.size() + 1);
    }

    std::size_t dimension() const
    {
        return n_;
    }
    double rho(const std::vector<double> &x) const
    {
        return rho_(x);
    }

    struct Eval {
        std::vector<double> scaled; // residual minimised by the search
        double raw = 0.0;           // |f|^2 + sum minors^2
        double min_grad = 0.0;      // smallest |d_x f_i|
    };

    Eval evaluate(const std::vector<double> &x) const
    {
        Eval e;
        std::vector<std::vector<double>> rows;
        std::vector<double> norms;
        e.min_grad = INFINITY;
        for (std::size_t i = 0; i < f_.size(); ++i) {
            rows.push_back(gradient(grad_f_[i], x));
            norms.push_back(norm(rows.back()));
            e.min_grad = std::min(e.min_grad, norms.back());
        }
        rows.push_back(gradient(grad_rho_, x));
        norms.push_back(norm(rows.back()));
        const double r = std::sqrt(std::max(rho_(x), 1e-300));
        // Dividing by the gradient norms and sqrt(rho) makes the residual
        // blind to scaling, so the singular origin does not look like a root.
        for (std::size_t i = 0; i < f_.size(); ++i) {
            const double v = f_[i](x);
            e.raw += v * v;
            e.scaled.push_back(v / (std::max(norms[i], 1e-300) * r));
        }
        double norm_product = 1.0;
        for (double nv : norms) {
            norm_product *= std::max(nv, 1e-300);
        }
        for (const auto &cols : column_sets_) {
            std::vector<std::vector<double>> sub(rows.size());
            for (std::size_t a = 0; a < rows.size(); ++a) {
                for (auto c : cols) {
                    sub[a].push_back(rows[a][c]);
                }
            }
            const double m = det(sub);
            e.raw += m * m;
            e.scaled.push_back(m / norm_product);
        }
        return e;
    }

private:
    static double norm(const std::vector<double> &v)
    {
        double s = 0.0;
        for (double x : v) {
            s += x * x;
        }
        return std::sqrt(s);
    }
    std::vector<double> gradient(const std::vector<NumericPoly> &g, const std::vector<double> &x) const
    {
        std::vector<double> out;
        for (const auto &p : g) {
            out.push_back(p(x));
        }
        return out;
    }

    std::vector<NumericPoly> f_;
    std::vector<std::vector<NumericPoly>> grad_f_;
    NumericPoly rho_;
    std::vector<NumericPoly> grad_rho_;
    std::size_t n_ = 0;
    std::vector<std::vector<std::size_t>> column_sets_;
};

double squared(const std::vector<double> &v)
{
    double s = 0.0;
    for (double x : v) {
        s += x * x;
    }
    return s;
}

// Levenberg-Marquardt on the scaled residual with a central-difference
// Jacobian.
std::vector<double> minimise(const KinkSystem &sys, std::vector<double> x)
{
    const std::size_t n = x.size();
    double mu = 1e-3;
    auto current = sys.evaluate(x);
    double cost = squared(current.scaled);
    for (int iter = 0; iter < 300 && cost > 1e-30; ++iter) {
        const std::size_t m = current.scaled.size();
        std::vector<std::vector<double>> J(m, std::vector<double>(n));
        for (std::size_t j = 0; j < n; ++j) {
            const double h = 1e-7 * std::max(1.0, std::fabs(x[j]));
            auto xp = x, xm = x;
            xp[j] += h;
            xm[j] -= h;
            const auto ep = sys.evaluate(xp).scaled;
            const auto em = sys.evaluate(xm).scaled;
            for (std::size_t i = 0; i < m; ++i) {
                J[i][j] = (ep[i] - em[i]) / (2 * h);
            }
        }
        std::vector<std::vector<double>> JtJ(n, std::vector<double>(n, 0.0));
        std::vector<double> Jtr(n, 0.0);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t a = 0; a < n; ++a) {
                Jtr[a] -= J[i][a] * current.scaled[i];
                for (std::size_t b = 0; b < n; ++b) {
                    JtJ[a][b] += J[i][a] * J[i][b];
                }
            }
        }
        bool improved = false;
        for (int tries = 0; tries < 12 && !improved; ++tries) {
            auto A = JtJ;
            for (std::size_t a = 0; a < n; ++a) {
                A[a][a] += mu * (1.0 + JtJ[a][a]);
            }
            auto step = Jtr;
            if (!solve(A, step)) {
                mu *= 10;
                continue;
            }
            auto trial = x;
            for (std::size_t a = 0; a < n; ++a) {
                trial[a] += step[a];
            }
            const auto e = sys.evaluate(trial);
            const double c = squared(e.scaled);
            if (std::isfinite(c) && c < cost) {
                x = std::move(trial);
                current = e;
                cost = c;
                mu = std::max(mu / 10, 1e-12);
                improved = true;
            } else {
                mu *= 10;
            }
        }
        if (!improved) {
            break;
        }
    }
    return x;
}

} // namespace

RadiusSearchResult radius_search(std::span<const Polynomial> f, const Polynomial &rho, const RadiusSearchOptions &options)
{
    if (f.empty()) {
        throw precondition_error("radius search needs at least one equation");
    }
    const auto &ctx = f.front().context();
    for (const auto &fi : f) {
        if (!same_context(fi.context(), ctx)) {
            throw context_mismatch("equations live over different contexts");
        }
        for (std::size_t v = ctx->n_x(); v < ctx->size(); ++v) {
            if (fi.depends_on(v)) {
                throw precondition_error("radius search needs the parameters fixed first");
            }
        }
    }
    if (ctx->n_t() != 0) {
        throw precondition_error("radius search expects polynomials over the x-variables only");
    }
    if (!(options.epsilon > 0) || options.budget < 1) {
        throw precondition_error("radius search needs epsilon > 0 and a positive budget");
    }
    const KinkSystem sys(f, rebind(rho, ctx));
    const std::size_t n = sys.dimension();
    const double box = std::sqrt(options.epsilon);

    auto run = [&](int index) -> std::optional<KinkCandidate> {
        // Each start depends only on (seed, index), so results do not depend
        // on scheduling.
        std::mt19937_64 rng(options.seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(index));
        std::uniform_real_distribution<double> dist(-box, box);
        std::vector<double> x(n);
        for (auto &xi : x) {
            xi = dist(rng);
        }
        x = minimise(sys, std::move(x));
        const auto e = sys.evaluate(x);
        const double r = sys.rho(x);
        if (!std::isfinite(r) || r >= options.epsilon || r < 1e-12 || e.min_grad < 1e-9) {
            return std::nullopt;
        }
        if (e.raw >= options.tolerance || squared(e.scaled) >= options.tolerance) {
            return std::nullopt;
        }
        return KinkCandidate{x, r, e.raw};
    };

    const int workers = std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
    std::vector<std::optional<KinkCandidate>> found(static_cast<std::size_t>(options.budget));
    std::vector<std::future<void>> jobs;
    for (int w = 0; w < workers; ++w) {
        jobs.push_back(std::async(std::launch::async, [&, w] {
            for (int i = w; i < options.budget; i += workers) {
                found[static_cast<std::size_t>(i)] = run(i);
            }
        }));
    }
    for (auto &j : jobs) {
        j.get();
    }

    RadiusSearchResult out;
    out.starts = options.budget;
    for (auto &c : found) {
        if (!c) {
            continue;
        }
        const bool duplicate = std::any_of(out.candidates.begin(), out.candidates.end(), [&](const KinkCandidate &k) {
            double d = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                d += (k.point[i] - c->point[i]) * (k.point[i] - c->point[i]);
            }
            return std::sqrt(d) < 1e-6 * std::max(1.0, box);
        });
        if (!duplicate) {
            out.candidates.push_back(std::move(*c));
        }
    }
    std::stable_sort(out.candidates.begin(), out.candidates.end(),
                     [](const KinkCandidate &a, const KinkCandidate &b) { return a.rho < b.rho; });
    out.note = out.candidates.empty() ? "no kink found - not a proof" : "numeric candidates, not certified";
    return out;
}

} // namespace milnorkit
