#include <milnorkit/linalg.hpp>

#include <utility>

#include <milnorkit/errors.hpp>

namespace milnorkit
{

namespace
{

// In-place elimination; returns rank and accumulates the determinant sign
// and pivots when the matrix is square.
std::size_t eliminate(Matrix<Rational> &m, Rational *det)
{
    const std::size_t rows = m.size();
    const std::size_t cols = rows == 0 ? 0 : m.front().size();
    std::size_t r = 0;
    if (det) {
        *det = 1;
    }
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t pivot = r;
        while (pivot < rows && m[pivot][c] == 0) {
            ++pivot;
        }
        if (pivot == rows) {
            if (det) {
                *det = 0;
            }
            continue;
        }
        if (pivot != r) {
            std::swap(m[pivot], m[r]);
            if (det) {
                *det = -*det;
            }
        }
        if (det) {
            *det *= m[r][c];
        }
        for (std::size_t i = r + 1; i < rows; ++i) {
            if (m[i][c] == 0) {
                continue;
            }
            const Rational factor = m[i][c] / m[r][c];
            for (std::size_t j = c; j < cols; ++j) {
                m[i][j] -= factor * m[r][j];
            }
        }
        ++r;
    }
    return r;
}

} // namespace

std::size_t rank(Matrix<Rational> m)
{
    return eliminate(m, nullptr);
}

Rational determinant(Matrix<Rational> m)
{
    if (m.empty()) {
        return Rational(1);
    }
    if (m.size() != m.front().size()) {
        throw precondition_error("determinant of a non-square matrix");
    }
    Rational det;
    if (eliminate(m, &det) < m.size()) {
        return Rational(0);
    }
    return det;
}

Series determinant(const Matrix<Series> &m)
{
    const std::size_t n = m.size();
    if (n == 0) {
        throw precondition_error("determinant of an empty series matrix");
    }
    if (m.front().size() != n) {
        throw precondition_error("determinant of a non-square matrix");
    }
    if (n == 1) {
        return m[0][0];
    }
    std::optional<Series> sum;
    for (std::size_t j = 0; j < n; ++j) {
        Matrix<Series> minor(n - 1);
        for (std::size_t r = 1; r < n; ++r) {
            for (std::size_t c = 0; c < n; ++c) {
                if (c != j) {
                    minor[r - 1].push_back(m[r][c]);
                }
            }
        }
        Series term = m[0][j] * determinant(minor);
        if (j % 2 == 1) {
            term = -term;
        }
        sum = sum ? *sum + term : term;
    }
    return *sum;
}

std::vector<std::vector<std::size_t>> combinations(std::size_t n, std::size_t k)
{
    std::vector<std::vector<std::size_t>> out;
    if (k > n) {
        return out;
    }
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) {
        idx[i] = i;
    }
    while (true) {
        out.push_back(idx);
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + i - 1) {
            --i;
        }
        if (i == 0) {
            break;
        }
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) {
            idx[j] = idx[j - 1] + 1;
        }
    }
    return out;
}

} // namespace milnorkit
