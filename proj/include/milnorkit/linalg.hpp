#pragma once

#include <cstddef>
#include <vector>

#include <milnorkit/rational.hpp>
#include <milnorkit/series.hpp>

namespace milnorkit
{

template <typename T>
using Matrix = std::vector<std::vector<T>>;

std::size_t rank(Matrix<Rational> m);

Rational determinant(Matrix<Rational> m);

// Cofactor expansion; entries are truncated series, so no division is used.
Series determinant(const Matrix<Series> &m);

// All increasing index tuples of length k drawn from [0, n).
std::vector<std::vector<std::size_t>> combinations(std::size_t n, std::size_t k);

// Every maximal minor of a rows x cols matrix with rows <= cols, taken over
// column subsets in lexicographic order. Empty when rows > cols.
template <typename T>
std::vector<T> maximal_minors(const Matrix<T> &m)
{
    std::vector<T> out;
    if (m.empty() || m.size() > m.front().size()) {
        return out;
    }
    for (const auto &cols : combinations(m.front().size(), m.size())) {
        Matrix<T> sub(m.size());
        for (std::size_t r = 0; r < m.size(); ++r) {
            for (auto c : cols) {
                sub[r].push_back(m[r][c]);
            }
        }
        out.push_back(determinant(sub));
    }
    return out;
}

} // namespace milnorkit
