#include <milnorkit/milnor.hpp>

#include <algorithm>
#include <future>
#include <map>
#include <sstream>
#include <utility>

#include <milnorkit/errors.hpp>

namespace milnorkit
{

const char *to_string(MilnorMethod m)
{
    return m == MilnorMethod::weighted_formula ? "weighted-formula" : "local-algebra";
}

std::uint64_t milnor_weighted(const WeightSystem &w)
{
    Rational mu(1);
    for (auto wi : w.weights()) {
        if (w.degree() <= wi) {
            throw precondition_error("weighted degree must exceed every weight");
        }
        mu *= Rational(w.degree() - wi, wi);
    }
    mu.canonicalize();
    if (mu.get_den() != 1) {
        throw precondition_error("weight data give a non-integer Milnor number " + mu.get_str());
    }
    return mu.get_num().get_ui();
}

int default_milnor_cap(std::optional<std::uint64_t> expected)
{
    return expected ? static_cast<int>(2 * *expected + 4) : 50;
}

namespace
{

using SparseRow = std::vector<std::pair<std::size_t, Rational>>;

// Monomials in n variables of total degree <= max_degree, indexed in
// ascending graded order so low columns are low degree.
class MonomialIndex
{
public:
    MonomialIndex(std::size_t n, int max_degree) : n_(n)
    {
        for (int d = 0; d <= max_degree; ++d) {
            degree_start_.push_back(monos_.size());
            Monomial m(n, 0);
            append_degree(m, 0, d);
        }
        degree_start_.push_back(monos_.size());
        for (std::size_t i = 0; i < monos_.size(); ++i) {
            index_.emplace(monos_[i], i);
        }
    }

    std::size_t size() const
    {
        return monos_.size();
    }
    std::size_t degree_begin(int d) const
    {
        return degree_start_[d];
    }
    std::size_t degree_end(int d) const
    {
        return degree_start_[d + 1];
    }
    int degree_of(std::size_t col) const
    {
        return static_cast<int>(total_degree(monos_[col]));
    }
    const Monomial &monomial(std::size_t col) const
    {
        return monos_[col];
    }
    std::optional<std::size_t> find(const Monomial &m) const
    {
        const auto it = index_.find(m);
        if (it == index_.end()) {
            return std::nullopt;
        }
        return it->second;
    }

private:
    void append_degree(Monomial &m, std::size_t var, int remaining)
    {
        if (var + 1 == n_) {
            m[var] = static_cast<std::uint32_t>(remaining);
            monos_.push_back(m);
            return;
        }
        for (int e = remaining; e >= 0; --e) {
            m[var] = static_cast<std::uint32_t>(e);
            append_degree(m, var + 1, remaining - e);
        }
        m[var] = 0;
    }

    std::size_t n_;
    std::vector<Monomial> monos_;
    std::vector<std::size_t> degree_start_;
    std::map<Monomial, std::size_t> index_;
};

// Echelon basis whose rows are keyed by their lowest column.
class LowestTermEchelon
{
public:
    explicit LowestTermEchelon(std::size_t cols) : pivots_(cols) {}

    void insert(SparseRow row)
    {
        while (!row.empty()) {
            const std::size_t lead = row.front().first;
            auto &pivot = pivots_[lead];
            if (!pivot) {
                const Rational inv = 1 / row.front().second;
                for (auto &[c, v] : row) {
                    v *= inv;
                }
                pivot = std::move(row);
                return;
            }
            row = subtract_multiple(row, row.front().second, *pivot);
        }
    }

    bool is_pivot(std::size_t col) const
    {
        return pivots_[col].has_value();
    }

private:
    // row - factor * pivot, both sorted by column.
    static SparseRow subtract_multiple(const SparseRow &row, const Rational &factor, const SparseRow &pivot)
    {
        SparseRow out;
        out.reserve(row.size() + pivot.size());
        std::size_t i = 0, j = 0;
        while (i < row.size() || j < pivot.size()) {
            if (j == pivot.size() || (i < row.size() && row[i].first < pivot[j].first)) {
                out.push_back(row[i++]);
            } else if (i == row.size() || pivot[j].first < row[i].first) {
                out.emplace_back(pivot[j].first, -factor * pivot[j].second);
                ++j;
            } else {
                Rational v = row[i].second - factor * pivot[j].second;
                if (v != 0) {
                    out.emplace_back(row[i].first, std::move(v));
                }
                ++i;
                ++j;
            }
        }
        return out;
    }

    std::vector<std::optional<SparseRow>> pivots_;
};

struct Attempt {
    std::optional<int> certified_degree;
    std::uint64_t mu = 0;
    // Non-pivot monomials per degree, for diagnosing a failed certificate.
    std::vector<std::size_t> staircase;
};

// Elimination of x^b * df/dx_i truncated at total degree K.
Attempt attempt_at(const std::vector<Polynomial> &partials, std::size_t n, int K)
{
    const MonomialIndex index(n, K);
    LowestTermEchelon echelon(index.size());

    struct Generator {
        int low;
        SparseRow row;
    };
    std::vector<Generator> gens;
    for (const auto &g : partials) {
        if (g.is_zero()) {
            continue;
        }
        const int low = static_cast<int>(total_degree(g.terms().begin()->first));
        if (low > K) {
            continue;
        }
        for (std::size_t col = 0; col < index.degree_end(K - low); ++col) {
            const Monomial &beta = index.monomial(col);
            SparseRow row;
            for (const auto &[m, c] : g.terms()) {
                if (static_cast<int>(total_degree(m) + total_degree(beta)) > K) {
                    break; // terms are graded ascending
                }
                Monomial prod(n);
                for (std::size_t v = 0; v < n; ++v) {
                    prod[v] = m[v] + beta[v];
                }
                row.emplace_back(*index.find(prod), c);
            }
            std::sort(row.begin(), row.end(), [](const auto &a, const auto &b) { return a.first < b.first; });
            gens.push_back({row.empty() ? K + 1 : index.degree_of(row.front().first), std::move(row)});
        }
    }
    std::stable_sort(gens.begin(), gens.end(), [](const Generator &a, const Generator &b) { return a.low < b.low; });
    for (auto &g : gens) {
        echelon.insert(std::move(g.row));
    }

    Attempt out;
    std::uint64_t standard_below = 0;
    for (int d = 0; d <= K; ++d) {
        std::size_t free_count = 0;
        for (std::size_t col = index.degree_begin(d); col < index.degree_end(d); ++col) {
            if (!echelon.is_pivot(col)) {
                ++free_count;
            }
        }
        out.staircase.push_back(free_count);
        if (free_count == 0 && !out.certified_degree) {
            out.certified_degree = d;
            out.mu = standard_below;
        }
        standard_below += free_count;
    }
    return out;
}

} // namespace

MilnorResult milnor_local(const Polynomial &f, int degree_cap)
{
    const auto &ctx = *f.context();
    for (std::size_t v = ctx.n_x(); v < ctx.size(); ++v) {
        if (f.depends_on(v)) {
            throw precondition_error("milnor_local needs the parameters fixed first");
        }
    }
    if (f.constant_term() != 0) {
        throw precondition_error("germ must vanish at the origin");
    }
    if (degree_cap < 0) {
        throw precondition_error("degree cap must be nonnegative");
    }
    const std::size_t n = ctx.n_x();
    if (n == 0) {
        throw precondition_error("germ has no variables");
    }

    // Work over the x-block only.
    std::vector<std::string> xs(ctx.names().begin(), ctx.names().begin() + static_cast<long>(n));
    const auto xctx = make_context(xs, {}, ctx.degree_cap());
    const Polynomial g = rebind(f, xctx);
    const auto partials = x_gradient(g);

    // Once m^M is inside J + m^(M+1) it stays so for larger M, so the
    // truncation degree only has to grow until some degree saturates.
    int K = std::min(degree_cap, std::max(4, 2 * static_cast<int>(g.degree())));
    Attempt last;
    while (true) {
        last = attempt_at(partials, n, K);
        if (last.certified_degree) {
            MilnorResult r;
            r.value = last.mu;
            r.method = MilnorMethod::local_algebra;
            r.certificate = last.certified_degree;
            r.truncation_degree = K;
            return r;
        }
        if (K >= degree_cap) {
            break;
        }
        K = std::min(degree_cap, K + K / 2 + 2);
    }

    std::ostringstream os;
    os << "no Nakayama certificate up to degree " << degree_cap << "; standard monomials per degree:";
    const std::size_t from = last.staircase.size() > 6 ? last.staircase.size() - 6 : 0;
    for (std::size_t d = from; d < last.staircase.size(); ++d) {
        os << " " << d << ":" << last.staircase[d];
    }
    const bool growing = last.staircase.size() >= 2 &&
                         last.staircase.back() >= last.staircase[last.staircase.size() - 2] && last.staircase.back() > 0;
    os << (growing ? " (not decreasing: singularity looks non-isolated)" : " (decreasing: raise the cap)");
    throw certificate_error(os.str());
}

Polynomial specialize(const Polynomial &family, std::span<const Rational> parameter_values)
{
    const auto &ctx = *family.context();
    if (parameter_values.size() != ctx.n_t()) {
        throw precondition_error("one value per parameter is required");
    }
    std::vector<std::string> xs(ctx.names().begin(), ctx.names().begin() + static_cast<long>(ctx.n_x()));
    const auto target = make_context(xs, {}, ctx.degree_cap());
    std::map<std::size_t, Polynomial> bindings;
    for (std::size_t j = 0; j < ctx.n_t(); ++j) {
        bindings.emplace(ctx.n_x() + j, Polynomial::constant(target, parameter_values[j]));
    }
    return substitute(family, bindings, target);
}

MuProfile mu_profile(const Polynomial &family, std::span<const Rational> samples, int degree_cap)
{
    if (family.context()->n_t() != 1) {
        throw precondition_error("mu_profile expects exactly one parameter");
    }
    MuProfile out;
    out.samples.assign(samples.begin(), samples.end());

    std::vector<std::future<MilnorResult>> jobs;
    for (const auto &t : samples) {
        jobs.push_back(std::async(std::launch::async, [&family, t, degree_cap] {
            const std::vector<Rational> value{t};
            return milnor_local(specialize(family, value), degree_cap);
        }));
    }
    for (auto &j : jobs) {
        out.results.push_back(j.get());
    }

    out.constant = std::all_of(out.results.begin(), out.results.end(),
                               [&](const MilnorResult &r) { return r.value == out.results.front().value; });
    std::optional<std::uint64_t> generic;
    bool generic_consistent = true;
    std::optional<std::uint64_t> special;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (samples[i] == 0) {
            special = out.results[i].value;
        } else if (!generic) {
            generic = out.results[i].value;
        } else if (*generic != out.results[i].value) {
            generic_consistent = false;
        }
    }
    out.jump_at_zero = special && generic && generic_consistent && *special != *generic;
    return out;
}

} // namespace milnorkit
