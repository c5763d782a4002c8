#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <milnorkit/polynomial.hpp>
#include <milnorkit/series.hpp>

namespace milnorkit
{

inline constexpr std::string_view spec_header = "milnorkit-spec 1";

// x(s) = template(L, s) where L(s) solves F(gamma(s)) = 0 with L(0) = start.
struct ImplicitComponent {
    std::string variable;
    std::string unknown;
    std::string template_text;
    Rational start;
};

struct ArcSpec {
    std::string name;
    std::string param = "s";
    // Declared variable name -> series text in `param`.
    std::map<std::string, std::string> components;
    std::optional<ImplicitComponent> implicit;
};

struct TaskSpec {
    std::string kind;
    std::vector<std::string> positional;
    std::map<std::string, std::string> options;
    std::string text;
    std::size_t line = 0;
};

struct FamilySpec {
    std::string name;
    std::vector<std::string> x_vars;
    std::vector<std::string> t_vars;
    std::string polynomial;
    std::optional<std::string> rho;
    std::optional<WeightSystem> weights;
    std::vector<ArcSpec> arcs;
    int order = 40;
    std::optional<int> cap;
    std::vector<TaskSpec> tasks;
};

// Reads the line-oriented format described in the README. Throws
// parse_error with the line number as position.
FamilySpec parse_spec(std::string_view text);

ContextPtr spec_context(const FamilySpec &spec);
Polynomial spec_family(const FamilySpec &spec, const ContextPtr &ctx);
// The declared rho, or the sum of squares of the x-variables.
Polynomial spec_rho(const FamilySpec &spec, const ContextPtr &ctx);
const ArcSpec &find_arc(const FamilySpec &spec, const std::string &name);
// Builds the arc to `order`, solving the implicit component if present.
Arc build_arc(const FamilySpec &spec, const ArcSpec &arc, const Polynomial &F, int order);

// Bundled specs compiled into the library, keyed by name.
const std::map<std::string, std::string> &bundled_specs();

} // namespace milnorkit
