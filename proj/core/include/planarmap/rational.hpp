#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

namespace planarmap {

// Exact arithmetic layer. cpp_rational keeps values normalized: gcd(num, den) = 1
// and the denominator is strictly positive, so equality is plain comparison.
using BigInt   = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.template convert_to<double>(); }

inline std::string to_string(const Rational& r) {
    const BigInt num = boost::multiprecision::numerator(r);
    const BigInt den = boost::multiprecision::denominator(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

inline bool is_integer(const Rational& r) {
    return boost::multiprecision::denominator(r) == 1;
}

} // namespace planarmap
