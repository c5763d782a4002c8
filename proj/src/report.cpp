#include <milnorkit/report.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <sstream>

#include <milnorkit/errors.hpp>
#include <milnorkit/milnor.hpp>
#include <milnorkit/parser.hpp>
#include <milnorkit/transforms.hpp>
#include <milnorkit/whitney.hpp>

namespace milnorkit
{

using json = nlohmann::ordered_json;

const char *to_string(TaskStatus s)
{
    switch (s) {
    case TaskStatus::ok:
        return "ok";
    case TaskStatus::undetermined:
        return "undetermined";
    case TaskStatus::error:
        return "error";
    }
    return "?";
}

std::string format_float(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

namespace
{

// Float rounded to 12 significant digits, so the JSON dump stays short.
json jfloat(double x)
{
    if (!std::isfinite(x)) {
        return format_float(x);
    }
    return std::strtod(format_float(x).c_str(), nullptr);
}

std::string opt(const TaskSpec &task, const std::string &key, const std::string &fallback = "")
{
    const auto it = task.options.find(key);
    return it == task.options.end() ? fallback : it->second;
}

std::vector<std::string> split(const std::string &s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) {
        out.push_back(cur);
    }
    return out;
}

Rational rational_of(const std::string &s)
{
    const auto ctx = make_context({"_"});
    const Polynomial p = parse_polynomial(s, ctx);
    if (p.degree() != 0) {
        throw precondition_error("'" + s + "' is not a constant");
    }
    return p.constant_term();
}

std::vector<Rational> rational_list(const std::string &s)
{
    std::vector<Rational> out;
    for (const auto &part : split(s, ',')) {
        out.push_back(rational_of(part));
    }
    return out;
}

int int_of(const std::string &s)
{
    const Rational r = rational_of(s);
    if (r.get_den() != 1) {
        throw precondition_error("'" + s + "' is not an integer");
    }
    return static_cast<int>(r.get_num().get_si());
}

std::string cite(const TaskResult &r)
{
    return "task " + std::to_string(r.index) + " (line " + std::to_string(r.line) + ": " + r.text + ")";
}

json valuation_json(const Valuation &v)
{
    json j;
    if (v.is_finite()) {
        j["value"] = *v.value;
        j["leading"] = to_string(v.leading);
        j["certainty"] = "certified";
    } else {
        j["value"] = nullptr;
        j["at_least"] = v.lower_bound;
        j["certainty"] = "truncation-limited";
    }
    return j;
}

std::string valuation_text(const Valuation &v)
{
    return v.is_finite() ? std::to_string(*v.value) : ">= " + std::to_string(v.lower_bound);
}

// First few nonzero terms and the truncation order.
std::string series_head(const Series &a, const std::string &param, int terms = 4)
{
    int seen = 0;
    int last = -1;
    std::vector<Rational> c(static_cast<std::size_t>(a.order()));
    for (int k = 0; k < a.order() && seen < terms; ++k) {
        if (a[k] != 0) {
            c[static_cast<std::size_t>(k)] = a[k];
            ++seen;
            last = k;
        }
    }
    std::string body = to_string(Series(c, a.order()), param);
    bool more = false;
    for (int k = last + 1; k < a.order(); ++k) {
        more = more || a[k] != 0;
    }
    if (more) {
        body.insert(body.rfind(" + O("), " + ...");
    }
    return body;
}

json limit_json(const LimitResult &r)
{
    json j;
    j["verdict"] = to_string(r.verdict);
    j["method"] = "valuation";
    j["certainty"] = r.verdict == Verdict::undetermined ? "truncation-limited" : "certified";
    j["numerator_valuation"] = valuation_json(r.numerator);
    json dens = json::array();
    for (const auto &d : r.denominators_sq) {
        dens.push_back(valuation_json(d));
    }
    j["denominator_sq_valuations"] = dens;
    if (r.limit) {
        json l;
        l["c"] = to_string(r.limit->c);
        l["d1"] = to_string(r.limit->d1);
        l["d2"] = to_string(r.limit->d2);
        l["exact"] = to_string(r.limit->c) + "/sqrt(" + to_string(r.limit->d1) + "*" + to_string(r.limit->d2) + ")";
        l["float"] = jfloat(r.limit->approx);
        j["limit"] = l;
    }
    return j;
}

std::string limit_text(const LimitResult &r)
{
    std::string den;
    for (const auto &d : r.denominators_sq) {
        den += (den.empty() ? "" : " + ") + valuation_text(d);
    }
    std::string s = std::string(to_string(r.verdict)) + " (2*v(num) = ";
    s += r.numerator.is_finite() ? std::to_string(2 * *r.numerator.value) : ">= " + std::to_string(2 * r.numerator.lower_bound);
    s += " vs v(den^2) = " + den + ")";
    if (r.limit) {
        s += ", limit " + to_string(r.limit->c) + "/sqrt(" + to_string(r.limit->d1) + "*" + to_string(r.limit->d2) +
             ") = " + format_float(r.limit->approx);
    }
    return s;
}

struct Env {
    const FamilySpec &spec;
    const ReportOptions &options;
    ContextPtr ctx;
    Polynomial F;
    Polynomial rho;
    int order;
    int cap;
};

std::vector<Rational> parameter_values(const Env &env, const TaskSpec &task)
{
    const std::string t = opt(task, "t");
    if (env.ctx->n_t() == 0) {
        if (!t.empty()) {
            throw precondition_error("family has no parameters");
        }
        return {};
    }
    if (t.empty()) {
        throw precondition_error("option t=... is required for a family with parameters");
    }
    const auto values = rational_list(t);
    if (values.size() != env.ctx->n_t()) {
        throw precondition_error("one t value per parameter is required");
    }
    return values;
}

json mu_json(const MilnorResult &m)
{
    json j;
    j["value"] = m.value;
    j["method"] = to_string(m.method);
    j["certainty"] = "certified";
    if (m.certificate) {
        j["nakayama_degree"] = *m.certificate;
        j["truncation_degree"] = m.truncation_degree;
    }
    return j;
}

void check_expect(TaskResult &r, const TaskSpec &task, const std::vector<std::uint64_t> &got)
{
    const std::string e = opt(task, "expect");
    if (e.empty()) {
        return;
    }
    const auto parts = split(e, ',');
    json cmp = json::array();
    for (std::size_t i = 0; i < parts.size() && i < got.size(); ++i) {
        const auto want = static_cast<std::uint64_t>(int_of(parts[i]));
        cmp.push_back({{"stated", want}, {"computed", got[i]}, {"match", want == got[i]}});
        if (want != got[i]) {
            r.notes.push_back(cite(r) + ": stated value " + std::to_string(want) + " differs from computed " +
                              std::to_string(got[i]));
        }
    }
    r.data["stated"] = cmp;
}

void task_euler(const Env &env, const TaskSpec &, TaskResult &r)
{
    if (!env.spec.weights) {
        throw precondition_error("euler needs weights and degree");
    }
    const auto &w = *env.spec.weights;
    const Polynomial defect = euler_defect(env.F, w);
    const bool qh = defect.is_zero();
    r.data["quasihomogeneous"] = qh;
    r.data["defect"] = format_polynomial(defect);
    r.data["method"] = "exact";
    r.lines.push_back(std::string("sum w_i x_i dF/dx_i - D*F = ") + format_polynomial(defect) +
                      (qh ? " (quasihomogeneous)" : " (not quasihomogeneous)"));
}

void task_mu_weighted(const Env &env, const TaskSpec &task, TaskResult &r)
{
    if (!env.spec.weights) {
        throw precondition_error("mu-weighted needs weights and degree");
    }
    const auto &w = *env.spec.weights;
    const auto mu = milnor_weighted(w);
    r.data["mu"] = mu_json(MilnorResult{mu, MilnorMethod::weighted_formula, std::nullopt, 0});
    r.data["quasihomogeneous"] = is_quasihomogeneous(env.F, w);
    std::string ws;
    for (auto x : w.weights()) {
        ws += (ws.empty() ? "" : ",") + std::to_string(x);
    }
    r.lines.push_back("mu = " + std::to_string(mu) + " (weighted-formula, weights " + ws + "; degree " +
                      std::to_string(w.degree()) + ")");
    check_expect(r, task, {mu});
}

void task_mu_local(const Env &env, const TaskSpec &task, TaskResult &r)
{
    const auto values = parameter_values(env, task);
    const Polynomial f = specialize(env.F, values);
    r.data["germ"] = format_polynomial(f);
    try {
        const auto m = milnor_local(f, env.cap);
        r.data["mu"] = mu_json(m);
        std::string line = "mu = " + std::to_string(m.value) + " (local-algebra, m^" +
                           std::to_string(*m.certificate) + " in J + m^" + std::to_string(*m.certificate + 1) + ")";
        if (env.spec.weights) {
            const auto &ws = env.spec.weights->weights();
            const WeightSystem wx(std::vector<std::int64_t>(ws.begin(), ws.end()), env.spec.weights->degree());
            if (is_quasihomogeneous(f, wx)) {
                const auto mw = milnor_weighted(wx);
                r.data["weighted_formula"] = mw;
                r.data["methods_agree"] = mw == m.value;
                line += mw == m.value ? ", agrees with weighted-formula" : ", DIFFERS from weighted-formula";
            }
        }
        r.lines.push_back(line);
        check_expect(r, task, {m.value});
    } catch (const certificate_error &e) {
        r.status = TaskStatus::undetermined;
        r.data["mu"] = nullptr;
        r.data["reason"] = e.what();
        r.lines.push_back(std::string("undetermined: ") + e.what());
    }
}

void profile_into(const Polynomial &family, const std::vector<Rational> &samples, int cap, TaskResult &r,
                  const std::string &label)
{
    try {
        const auto prof = mu_profile(family, samples, cap);
        json rows = json::array();
        std::string line = label;
        for (std::size_t i = 0; i < prof.samples.size(); ++i) {
            json row;
            row["t"] = to_string(prof.samples[i]);
            row["mu"] = mu_json(prof.results[i]);
            rows.push_back(row);
            line += (i ? ", " : "") + std::string("mu(t=") + to_string(prof.samples[i]) +
                    ") = " + std::to_string(prof.results[i].value);
        }
        r.data["samples"] = rows;
        r.data["constant"] = prof.constant;
        r.data["jump_at_zero"] = prof.jump_at_zero;
        r.lines.push_back(line);
        r.lines.push_back(prof.constant ? "mu constant over the samples"
                                        : (prof.jump_at_zero ? "mu jumps at t = 0" : "mu varies"));
    } catch (const certificate_error &e) {
        r.status = TaskStatus::undetermined;
        r.data["reason"] = e.what();
        r.lines.push_back(std::string("undetermined: ") + e.what());
    }
}

void task_mu_profile(const Env &env, const TaskSpec &task, TaskResult &r)
{
    const std::string t = opt(task, "t");
    if (t.empty()) {
        throw precondition_error("mu-profile needs t=v1,v2,...");
    }
    profile_into(env.F, rational_list(t), env.cap, r, "");
    std::vector<std::uint64_t> got;
    for (const auto &s : r.data.value("samples", json::array())) {
        got.push_back(s["mu"]["value"].get<std::uint64_t>());
    }
    check_expect(r, task, got);
}

// swap=a,b exchanges two x-variables, substitute=v:expr eliminates v.
void task_section(const Env &env, const TaskSpec &task, TaskResult &r)
{
    Polynomial g = env.F;
    const std::string swap = opt(task, "swap");
    if (!swap.empty()) {
        const auto names = split(swap, ',');
        if (names.size() != 2) {
            throw precondition_error("swap needs two variable names");
        }
        const auto a = env.ctx->index_of(names[0]);
        const auto b = env.ctx->index_of(names[1]);
        if (!a || !b) {
            throw precondition_error("swap names an unknown variable");
        }
        g = substitute(g, {{*a, Polynomial::variable(env.ctx, *b)}, {*b, Polynomial::variable(env.ctx, *a)}},
                       env.ctx);
    }
    const std::string sub = opt(task, "substitute");
    const auto colon = sub.find(':');
    if (colon == std::string::npos) {
        throw precondition_error("section needs substitute=var:expression");
    }
    const std::string var = sub.substr(0, colon);
    const auto vi = env.ctx->index_of(var);
    if (!vi || *vi >= env.ctx->n_x()) {
        throw precondition_error("substitute must name an x-variable");
    }
    const Polynomial by = parse_polynomial(sub.substr(colon + 1), env.ctx);
    if (by.depends_on(*vi)) {
        throw precondition_error("substitution is circular");
    }
    g = substitute(g, {{*vi, by}}, env.ctx);
    std::vector<std::string> xs;
    for (const auto &n : env.spec.x_vars) {
        if (n != var) {
            xs.push_back(n);
        }
    }
    const auto sctx = make_context(xs, env.spec.t_vars);
    g = rebind(g, sctx);
    r.data["section"] = format_polynomial(g);
    r.lines.push_back("section g = " + format_polynomial(g));

    for (const char *key : {"generic", "special"}) {
        const std::string w = opt(task, key);
        if (w.empty()) {
            continue;
        }
        const auto c = w.find(':');
        if (c == std::string::npos) {
            throw precondition_error(std::string(key) + " needs w1,w2,...:D");
        }
        std::vector<std::int64_t> ws;
        for (const auto &p : split(w.substr(0, c), ',')) {
            ws.push_back(int_of(p));
        }
        const auto mu = milnor_weighted(WeightSystem(ws, int_of(w.substr(c + 1))));
        r.data[std::string(key) + "_weighted_formula"] = {{"weights", w}, {"mu", mu}};
        r.lines.push_back(std::string(key) + " weights " + w + ": weighted-formula mu = " + std::to_string(mu));
    }

    const std::string t = opt(task, "t");
    if (t.empty()) {
        throw precondition_error("section needs t=v1,v2,...");
    }
    profile_into(g, rational_list(t), env.cap, r, "local-algebra: ");
    std::vector<std::uint64_t> got;
    for (const auto &s : r.data.value("samples", json::array())) {
        got.push_back(s["mu"]["value"].get<std::uint64_t>());
    }
    check_expect(r, task, got);
    if (!swap.empty()) {
        r.notes.push_back(cite(r) + ": coordinates " + swap + " exchanged before the substitution, so the section "
                                    "matches the stated section polynomial rather than the literal hyperplane");
    }
}

Arc task_arc(const Env &env, const TaskSpec &task)
{
    if (task.positional.empty()) {
        if (env.spec.arcs.size() != 1) {
            throw precondition_error("name an arc");
        }
        return build_arc(env.spec, env.spec.arcs.front(), env.F, env.order);
    }
    return build_arc(env.spec, find_arc(env.spec, task.positional.front()), env.F, env.order);
}

void task_whitney(const Env &env, const TaskSpec &task, TaskResult &r)
{
    const Arc arc = task_arc(env, task);
    r.data["order"] = arc.order();
    const auto a = condition_a_along_arc(env.F, arc);
    const auto b = condition_bprime_along_arc(env.F, arc);
    bool undetermined = b.verdict == Verdict::undetermined;
    json ja = json::array();
    for (std::size_t j = 0; j < a.size(); ++j) {
        ja.push_back(limit_json(a[j]));
        undetermined = undetermined || a[j].verdict == Verdict::undetermined;
        r.lines.push_back("(a) d/d" + env.ctx->name(env.ctx->n_x() + j) + ": " + limit_text(a[j]));
    }
    r.data["condition_a"] = ja;
    r.data["condition_bprime"] = limit_json(b);
    r.lines.push_back("(b') " + limit_text(b));
    r.lines.push_back("(b') numerator " + series_head(b.numerator_series, "s", 3));
    const bool fails = b.verdict == Verdict::finite_nonzero || b.verdict == Verdict::infinite;
    r.data["bprime_fails"] = fails;

    const std::string ns = opt(task, "numeric-s", "1/10000");
    const double s = rational_of(ns).get_d();
    json num;
    num["s"] = jfloat(s);
    num["method"] = "long-double evaluation";
    num["certainty"] = "uncertified";
    const long double nb = numeric_bprime(env.F, arc, s);
    num["bprime"] = jfloat(static_cast<double>(nb));
    if (b.limit) {
        const double rel = std::fabs(static_cast<double>(nb) - b.limit->approx) / std::fabs(b.limit->approx);
        num["bprime_relative_error"] = jfloat(rel);
    }
    json na = json::array();
    for (std::size_t j = 0; j < a.size(); ++j) {
        na.push_back(jfloat(static_cast<double>(numeric_condition_a(env.F, arc, j, s))));
    }
    num["condition_a"] = na;
    r.data["numeric"] = num;
    r.lines.push_back("numeric at s = " + format_float(s) + ": (b') " + format_float(static_cast<double>(nb)));

    const std::string claim = opt(task, "claimed-bprime-numerator");
    if (!claim.empty() && b.numerator.is_finite()) {
        const std::string at = opt(task, "claimed-at");
        const auto c = at.find(':');
        if (c == std::string::npos) {
            throw precondition_error("claimed-at needs var:value");
        }
        const auto cctx = make_context({at.substr(0, c)});
        const Rational stated = parse_polynomial(claim, cctx).evaluate(std::vector<Rational>{rational_of(at.substr(c + 1))});
        r.data["claimed_numerator"] = {{"expression", claim},
                                       {"at", at},
                                       {"stated", to_string(stated)},
                                       {"computed", to_string(b.numerator.leading)},
                                       {"match", stated == b.numerator.leading}};
        if (stated != b.numerator.leading) {
            r.notes.push_back(cite(r) + ": stated (b') numerator constant " + claim + " = " + to_string(stated) +
                              " at " + at + "; exact leading coefficient is " + to_string(b.numerator.leading) +
                              " (verdict unaffected)");
        }
    }
    if (undetermined) {
        r.status = TaskStatus::undetermined;
    }
}

void task_fold(const Env &env, const TaskSpec &task, TaskResult &r)
{
    const Arc arc = task_arc(env, task);
    const auto v = vanishing_fold_test(env.F, env.rho, arc);
    r.data["is_fold"] = v.is_fold;
    r.data["determined"] = v.determined;
    r.data["failing"] = to_string(v.failing);
    r.data["method"] = "series";
    r.data["certainty"] = v.determined ? "certified" : "truncation-limited";
    if (!v.detail.empty()) {
        r.data["detail"] = v.detail;
    }
    std::string line = v.determined ? (v.is_fold ? "vanishing fold" : "not a vanishing fold") : "undetermined";
    if (!v.is_fold) {
        line += std::string(" (") + to_string(v.failing) + ": " + v.detail + ")";
    }
    r.lines.push_back(line);
    if (v.kink_multiplier) {
        r.data["kink_multiplier"] = series_head(*v.kink_multiplier, "s");
        r.data["kink_multiplier_valuation"] = valuation_json(v.kink_multiplier->valuation());
        r.lines.push_back("d_x F = lambda d_x rho with lambda = " + series_head(*v.kink_multiplier, "s"));
    }
    if (!v.determined) {
        r.status = TaskStatus::undetermined;
    }
}

void task_transform(const Env &env, const TaskSpec &task, TaskResult &r)
{
    const Arc arc = task_arc(env, task);
    const auto &p = arc.x();
    std::vector<Series> q;
    for (const auto &g : x_gradient(env.F)) {
        q.push_back(evaluate_along_arc(g, arc));
    }
    std::optional<Series> u;
    for (std::size_t i = 0; i < p.size(); ++i) {
        u = u ? *u + p[i] * q[i] : p[i] * q[i];
    }
    const FamilyMap phi = build_fold_transform(p, q, *u, arc.t());
    validate(phi);
    const std::size_t lead = phi.permutation.front();
    r.data["leading_coordinate"] = env.ctx->name(lead);
    r.data["order"] = phi.order;

    const auto det = jacobian_det(phi);
    bool det_one = true;
    for (const auto &[m, c] : det.terms()) {
        const bool constant = total_degree(m) == 0;
        det_one = det_one && (constant ? c.agrees_with(Series::constant(Rational(1), c.order())) : false);
    }
    det_one = det_one && !det.is_zero_to_order();
    r.data["det_is_one"] = det_one;

    std::vector<Series> axis(phi.n(), Series(phi.order));
    axis[lead] = p[lead].truncated(phi.order);
    const auto image = map_point(phi, axis);
    bool image_ok = true;
    const auto comps = arc.components();
    for (std::size_t i = 0; i < image.size(); ++i) {
        image_ok = image_ok && image[i].agrees_with(comps[i]);
    }
    r.data["image_is_arc"] = image_ok;

    const auto rec = verify_transported_kink(env.F, phi, axis[lead]);
    const auto chain = transported_gradient_chain_rule(env.F, phi, axis[lead]);
    bool chain_ok = true;
    for (std::size_t i = 0; i < chain.size(); ++i) {
        chain_ok = chain_ok && chain[i].agrees_with(rec.gradient[i]);
    }
    r.data["transported_kink"] = true;
    r.data["chain_rule_agrees"] = chain_ok;
    r.data["u_over_p1"] = series_head(rec.u_over_p1, "s", 2);
    r.data["multiplier"] = rec.multiplier ? json(series_head(*rec.multiplier, "s", 2)) : json(nullptr);
    r.data["verified_to_order"] = rec.order;
    r.data["method"] = "exact series";
    r.data["certainty"] = "certified to truncation order";

    r.lines.push_back("Phi built with " + env.ctx->name(lead) + " as leading coordinate, order " +
                      std::to_string(phi.order));
    r.lines.push_back(std::string("det(dPsi/dy) = 1: ") + (det_one ? "yes" : "NO"));
    r.lines.push_back(std::string("Phi(p_1, 0, ..., 0, tau) = gamma(tau): ") + (image_ok ? "yes" : "NO"));
    r.lines.push_back("d(F o Phi)/dy_i = 0 for i >= 2 and d(F o Phi)/dy_1 = u/p_1 = " +
                      series_head(rec.u_over_p1, "s", 2) + (chain_ok ? " (chain rule agrees)" : " (CHAIN RULE DIFFERS)"));
    if (!det_one || !image_ok || !chain_ok) {
        throw error("fold transform identities failed");
    }
}

void task_radius(const Env &env, const TaskSpec &task, TaskResult &r)
{
    const auto values = parameter_values(env, task);
    const Polynomial f = specialize(env.F, values);
    const Polynomial rho = specialize(env.rho, values);
    RadiusSearchOptions o;
    const std::string eps = opt(task, "epsilon");
    o.epsilon = env.options.epsilon.value_or(eps.empty() ? o.epsilon : rational_of(eps).get_d());
    const std::string budget = opt(task, "budget");
    o.budget = env.options.budget.value_or(budget.empty() ? o.budget : int_of(budget));
    const std::string seed = opt(task, "seed");
    o.seed = env.options.seed.value_or(seed.empty() ? o.seed : static_cast<std::uint64_t>(int_of(seed)));
    const auto res = radius_search(std::span<const Polynomial>(&f, 1), rho, o);
    r.data["epsilon"] = jfloat(o.epsilon);
    r.data["budget"] = o.budget;
    r.data["seed"] = o.seed;
    r.data["starts"] = res.starts;
    r.data["method"] = "multistart least squares";
    r.data["certainty"] = "uncertified";
    r.data["note"] = res.note;
    json cands = json::array();
    for (const auto &c : res.candidates) {
        json pt = json::array();
        std::string ps;
        for (double x : c.point) {
            pt.push_back(jfloat(x));
            ps += (ps.empty() ? "" : ", ") + format_float(x);
        }
        cands.push_back({{"point", pt}, {"rho", jfloat(c.rho)}, {"residual", jfloat(c.residual)}});
        r.lines.push_back("kink candidate (" + ps + ") rho = " + format_float(c.rho));
    }
    r.data["candidates"] = cands;
    if (res.candidates.empty()) {
        r.lines.push_back("no kink inside rho < " + format_float(o.epsilon));
    } else {
        r.data["radius_estimate"] = jfloat(res.candidates.front().rho);
    }
    r.lines.push_back(res.note);
}

} // namespace

TaskResult run_task(const FamilySpec &spec, const TaskSpec &task, std::size_t index, const ReportOptions &options)
{
    TaskResult r;
    r.index = index;
    r.line = task.line;
    r.kind = task.kind;
    r.text = task.text;
    try {
        const auto ctx = spec_context(spec);
        Env env{spec,
                options,
                ctx,
                spec_family(spec, ctx),
                spec_rho(spec, ctx),
                options.order.value_or(spec.order),
                options.cap.value_or(spec.cap.value_or(default_milnor_cap()))};
        const std::string cap = opt(task, "cap");
        if (!cap.empty() && !options.cap) {
            env.cap = int_of(cap);
        }
        if (task.kind == "euler") {
            task_euler(env, task, r);
        } else if (task.kind == "mu-weighted") {
            task_mu_weighted(env, task, r);
        } else if (task.kind == "mu-local") {
            task_mu_local(env, task, r);
        } else if (task.kind == "mu-profile") {
            task_mu_profile(env, task, r);
        } else if (task.kind == "section") {
            task_section(env, task, r);
        } else if (task.kind == "whitney") {
            task_whitney(env, task, r);
        } else if (task.kind == "fold") {
            task_fold(env, task, r);
        } else if (task.kind == "transform") {
            task_transform(env, task, r);
        } else if (task.kind == "radius") {
            task_radius(env, task, r);
        } else {
            throw precondition_error("unknown task kind '" + task.kind + "'");
        }
    } catch (const truncation_error &e) {
        r.status = TaskStatus::undetermined;
        r.data["reason"] = e.what();
        r.lines.push_back(std::string("undetermined: ") + e.what());
    } catch (const std::exception &e) {
        r.status = TaskStatus::error;
        r.data["error"] = e.what();
        r.lines.push_back(std::string("error: ") + e.what());
    }
    return r;
}

Report run_report(const FamilySpec &spec, const ReportOptions &options)
{
    std::vector<std::future<TaskResult>> jobs;
    for (std::size_t i = 0; i < spec.tasks.size(); ++i) {
        jobs.push_back(std::async(std::launch::async, [&spec, &options, i] {
            return run_task(spec, spec.tasks[i], i + 1, options);
        }));
    }
    Report rep;
    rep.family = spec.name;
    for (auto &j : jobs) {
        rep.tasks.push_back(j.get());
    }
    return rep;
}

int exit_code(const TaskResult &r)
{
    switch (r.status) {
    case TaskStatus::ok:
        return 0;
    case TaskStatus::undetermined:
        return 2;
    case TaskStatus::error:
        return 1;
    }
    return 1;
}

int exit_code(const Report &r)
{
    int code = 0;
    for (const auto &t : r.tasks) {
        const int c = exit_code(t);
        if (c == 1) {
            return 1;
        }
        code = std::max(code, c);
    }
    return code;
}

std::string render_text(const Report &r)
{
    std::ostringstream os;
    os << report_header << "\n";
    os << "family: " << r.family << "\n";
    std::vector<std::string> notes;
    for (const auto &t : r.tasks) {
        os << "\ntask " << t.index << (t.line ? " [line " + std::to_string(t.line) + "] " : std::string(" ")) << t.text << ": " << to_string(t.status) << "\n";
        for (const auto &l : t.lines) {
            os << "  " << l << "\n";
        }
        notes.insert(notes.end(), t.notes.begin(), t.notes.end());
    }
    if (!notes.empty()) {
        os << "\nnotes:\n";
        for (const auto &n : notes) {
            os << "  - " << n << "\n";
        }
    }
    os << "\nexit: " << exit_code(r) << "\n";
    return os.str();
}

std::string render_json(const Report &r)
{
    json j;
    j["format"] = report_header;
    j["family"] = r.family;
    json tasks = json::array();
    for (const auto &t : r.tasks) {
        json jt;
        jt["index"] = t.index;
        jt["line"] = t.line;
        jt["task"] = t.text;
        jt["kind"] = t.kind;
        jt["status"] = to_string(t.status);
        jt["result"] = t.data;
        jt["notes"] = t.notes;
        tasks.push_back(jt);
    }
    j["tasks"] = tasks;
    j["exit_code"] = exit_code(r);
    return j.dump(2) + "\n";
}

FamilySpec load_spec(const std::string &name_or_path)
{
    const auto &bundled = bundled_specs();
    if (const auto it = bundled.find(name_or_path); it != bundled.end()) {
        return parse_spec(it->second);
    }
    std::ifstream in(name_or_path, std::ios::binary);
    if (!in) {
        throw error("no bundled spec or readable file named '" + name_or_path + "'");
    }
    std::ostringstream os;
    os << in.rdbuf();
    return parse_spec(os.str());
}

} // namespace milnorkit
