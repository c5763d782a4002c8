#include <milnorkit/specfile.hpp>

#include <algorithm>
#include <limits>
#include <set>
#include <sstream>

#include <milnorkit/errors.hpp>
#include <milnorkit/parser.hpp>

namespace milnorkit
{

namespace
{

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_words(const std::string &s)
{
    std::istringstream is(s);
    std::vector<std::string> out;
    for (std::string w; is >> w;) {
        out.push_back(w);
    }
    return out;
}

int parse_int(const std::string &s, std::size_t line, const char *what)
{
    try {
        std::size_t used = 0;
        const long v = std::stol(s, &used);
        if (used != s.size()) {
            throw std::invalid_argument(s);
        }
        return static_cast<int>(v);
    } catch (const std::exception &) {
        throw parse_error(line, std::string("expected an integer for ") + what);
    }
}

Rational parse_rational(const std::string &s, std::size_t line)
{
    try {
        const auto ctx = make_context({"_"});
        const Polynomial p = parse_polynomial(s, ctx);
        if (p.degree() != 0) {
            throw parse_error(0, "not a constant");
        }
        return p.constant_term();
    } catch (const parse_error &) {
        throw parse_error(line, "expected a rational constant, got '" + s + "'");
    }
}

} // namespace

FamilySpec parse_spec(std::string_view text)
{
    FamilySpec spec;
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t line_no = 0;
    bool seen_header = false;
    enum class Section { none, family, arc, tasks } section = Section::none;
    std::optional<std::vector<std::int64_t>> weights;
    std::optional<std::int64_t> degree;
    std::set<std::string> arc_names;

    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) {
            continue;
        }
        if (!seen_header) {
            if (line != spec_header) {
                throw parse_error(line_no, "first line must be '" + std::string(spec_header) + "'");
            }
            seen_header = true;
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw parse_error(line_no, "unterminated section header");
            }
            const auto words = split_words(line.substr(1, line.size() - 2));
            if (words.size() == 1 && words[0] == "family") {
                section = Section::family;
            } else if (words.size() == 1 && words[0] == "tasks") {
                section = Section::tasks;
            } else if (words.size() == 2 && words[0] == "arc") {
                if (!arc_names.insert(words[1]).second) {
                    throw parse_error(line_no, "duplicate arc '" + words[1] + "'");
                }
                section = Section::arc;
                spec.arcs.push_back(ArcSpec{words[1], "s", {}, std::nullopt});
            } else {
                throw parse_error(line_no, "unknown section '" + line + "'");
            }
            continue;
        }

        if (section == Section::tasks) {
            TaskSpec task;
            task.text = line;
            task.line = line_no;
            const auto words = split_words(line);
            task.kind = words.front();
            for (std::size_t i = 1; i < words.size(); ++i) {
                const auto eq = words[i].find('=');
                if (eq == std::string::npos) {
                    task.positional.push_back(words[i]);
                } else {
                    task.options[words[i].substr(0, eq)] = words[i].substr(eq + 1);
                }
            }
            spec.tasks.push_back(std::move(task));
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw parse_error(line_no, "expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section == Section::family) {
            if (key == "name") {
                spec.name = value;
            } else if (key == "x") {
                spec.x_vars = split_words(value);
            } else if (key == "t") {
                spec.t_vars = split_words(value);
            } else if (key == "F") {
                spec.polynomial = value;
            } else if (key == "rho") {
                spec.rho = value;
            } else if (key == "weights") {
                weights.emplace();
                for (const auto &w : split_words(value)) {
                    weights->push_back(parse_int(w, line_no, "a weight"));
                }
            } else if (key == "degree") {
                degree = parse_int(value, line_no, "degree");
            } else if (key == "order") {
                spec.order = parse_int(value, line_no, "order");
            } else if (key == "cap") {
                spec.cap = parse_int(value, line_no, "cap");
            } else {
                throw parse_error(line_no, "unknown family key '" + key + "'");
            }
        } else if (section == Section::arc) {
            auto &arc = spec.arcs.back();
            if (key == "param") {
                arc.param = value;
                continue;
            }
            const auto words = split_words(value);
            if (!words.empty() && words[0] == "solve") {
                // solve <template> for <unknown> from <start>
                const auto for_at = std::find(words.begin(), words.end(), "for");
                if (for_at == words.end() || words.end() - for_at != 4 || *(for_at + 2) != "from") {
                    throw parse_error(line_no, "expected 'solve <template> for <unknown> from <start>'");
                }
                if (arc.implicit) {
                    throw parse_error(line_no, "an arc may have only one implicit component");
                }
                std::string templ;
                for (auto it = words.begin() + 1; it != for_at; ++it) {
                    templ += (templ.empty() ? "" : " ") + *it;
                }
                arc.implicit = ImplicitComponent{key, *(for_at + 1), templ, parse_rational(*(for_at + 3), line_no)};
                arc.components[key] = "";
            } else {
                arc.components[key] = value;
            }
        } else {
            throw parse_error(line_no, "key outside of a section");
        }
    }
    if (!seen_header) {
        throw parse_error(0, "empty spec");
    }

    if (spec.x_vars.empty()) {
        throw parse_error(0, "family declares no x-variables");
    }
    if (spec.polynomial.empty()) {
        throw parse_error(0, "family has no polynomial F");
    }
    if (weights.has_value() != degree.has_value()) {
        throw parse_error(0, "weights and degree must be given together");
    }
    if (weights) {
        if (weights->size() != spec.x_vars.size()) {
            throw parse_error(0, "one weight per x-variable is required");
        }
        spec.weights = WeightSystem(*weights, *degree);
    }
    std::set<std::string> declared(spec.x_vars.begin(), spec.x_vars.end());
    declared.insert(spec.t_vars.begin(), spec.t_vars.end());
    if (declared.size() != spec.x_vars.size() + spec.t_vars.size()) {
        throw parse_error(0, "variable names must be distinct");
    }
    for (const auto &arc : spec.arcs) {
        if (declared.count(arc.param)) {
            throw parse_error(0, "arc '" + arc.name + "' parameter clashes with a variable");
        }
        for (const auto &[var, text] : arc.components) {
            if (!declared.count(var)) {
                throw parse_error(0, "arc '" + arc.name + "' references undeclared variable '" + var + "'");
            }
        }
        for (const auto &var : declared) {
            if (!arc.components.count(var)) {
                throw parse_error(0, "arc '" + arc.name + "' has no component for '" + var + "'");
            }
        }
    }
    if (spec.order < 1) {
        throw parse_error(0, "order must be positive");
    }
    // Fail early on bad polynomial text.
    const auto ctx = spec_context(spec);
    spec_family(spec, ctx);
    spec_rho(spec, ctx);
    return spec;
}

ContextPtr spec_context(const FamilySpec &spec)
{
    return make_context(spec.x_vars, spec.t_vars);
}

Polynomial spec_family(const FamilySpec &spec, const ContextPtr &ctx)
{
    return parse_polynomial(spec.polynomial, ctx);
}

Polynomial spec_rho(const FamilySpec &spec, const ContextPtr &ctx)
{
    if (spec.rho) {
        return parse_polynomial(*spec.rho, ctx);
    }
    Polynomial rho(ctx);
    for (std::size_t i = 0; i < ctx->n_x(); ++i) {
        rho += Polynomial::variable(ctx, i).pow(2);
    }
    // Positive definite: its quadratic part is the identity form.
    for (std::size_t i = 0; i < ctx->n_x(); ++i) {
        Monomial m(ctx->size(), 0);
        m[i] = 2;
        if (rho.coefficient(m) <= 0) {
            throw precondition_error("default rho is not positive definite");
        }
    }
    return rho;
}

const ArcSpec &find_arc(const FamilySpec &spec, const std::string &name)
{
    for (const auto &a : spec.arcs) {
        if (a.name == name) {
            return a;
        }
    }
    throw precondition_error("no arc named '" + name + "'");
}

Arc build_arc(const FamilySpec &spec, const ArcSpec &arc, const Polynomial &F, int order)
{
    const auto &ctx = *F.context();
    const auto sctx = make_context({arc.param});
    std::vector<Series> comps(ctx.size());
    for (std::size_t v = 0; v < ctx.size(); ++v) {
        const auto &name = ctx.name(v);
        if (arc.implicit && arc.implicit->variable == name) {
            continue;
        }
        comps[v] = Series::from_polynomial(parse_polynomial(arc.components.at(name), sctx), order);
    }

    if (arc.implicit) {
        const auto &imp = *arc.implicit;
        const auto lctx = make_context({imp.unknown, arc.param});
        const Polynomial templ = parse_polynomial(imp.template_text, lctx);
        std::map<std::size_t, Polynomial> bindings;
        for (std::size_t v = 0; v < ctx.size(); ++v) {
            const auto &name = ctx.name(v);
            if (name == imp.variable) {
                bindings.emplace(v, templ);
            } else {
                bindings.emplace(v, rebind(parse_polynomial(arc.components.at(name), sctx), lctx));
            }
        }
        // F(gamma) as a polynomial in (L, s), with the common power of s
        // factored out.
        const Polynomial H = substitute(F, bindings, lctx);
        if (H.is_zero()) {
            throw precondition_error("arc template makes F vanish identically; nothing to solve");
        }
        std::uint32_t common = std::numeric_limits<std::uint32_t>::max();
        for (const auto &[m, c] : H.terms()) {
            common = std::min(common, m[1]);
        }
        Polynomial G(lctx);
        for (const auto &[m, c] : H.terms()) {
            G.add_term(Monomial{m[0], m[1] - common}, c);
        }
        const Series L = implicit_solve(G, imp.start, order).solution;
        const std::vector<Series> at{L, Series::monomial(Rational(1), 1, order)};
        const auto idx = *ctx.index_of(imp.variable);
        comps[idx] = evaluate_series(templ, at).truncated(order);
    }
    (void)spec;

    std::vector<Series> x(comps.begin(), comps.begin() + static_cast<long>(ctx.n_x()));
    std::vector<Series> t(comps.begin() + static_cast<long>(ctx.n_x()), comps.end());
    return Arc(std::move(x), std::move(t));
}

} // namespace milnorkit
