#pragma once

#include <string>

#include <gmpxx.h>

namespace milnorkit
{

using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1)
{
    Rational r(num, den);
    r.canonicalize();
    return r;
}

// "p" or "p/q" in lowest terms.
inline std::string to_string(const Rational &r)
{
    return r.get_str();
}

inline long double to_long_double(const Rational &r)
{
    // mpq get_d loses range for huge numerators; split instead.
    const long double num = mpz_get_d(r.get_num_mpz_t());
    const long double den = mpz_get_d(r.get_den_mpz_t());
    return num / den;
}

} // namespace milnorkit
