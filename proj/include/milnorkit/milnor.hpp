#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <milnorkit/polynomial.hpp>
#include <milnorkit/rational.hpp>

namespace milnorkit
{

enum class MilnorMethod { weighted_formula, local_algebra };

const char *to_string(MilnorMethod m);

struct MilnorResult {
    std::uint64_t value = 0;
    MilnorMethod method = MilnorMethod::weighted_formula;
    // Degree M with m^M contained in J + m^(M+1); local-algebra results only.
    std::optional<int> certificate;
    // Truncation degree of the final elimination.
    int truncation_degree = 0;
};

// prod (D - w_i) / w_i for a quasihomogeneous germ of type (w; D).
std::uint64_t milnor_weighted(const WeightSystem &w);

// dim O_n / J(f) by degreewise elimination, certified by Nakayama.
MilnorResult milnor_local(const Polynomial &f, int degree_cap);

// 2 * expected + 4 when an estimate exists, otherwise 50.
int default_milnor_cap(std::optional<std::uint64_t> expected = std::nullopt);

struct MuProfile {
    std::vector<Rational> samples;
    std::vector<MilnorResult> results;
    bool constant = false;
    // Set when t = 0 is sampled and its value differs from the common value
    // at the nonzero samples.
    bool jump_at_zero = false;
};

// Milnor numbers of a one-parameter family at the given parameter values.
MuProfile mu_profile(const Polynomial &family, std::span<const Rational> samples, int degree_cap);

// f with every parameter fixed to the given values, over the x-only context.
Polynomial specialize(const Polynomial &family, std::span<const Rational> parameter_values);

} // namespace milnorkit
