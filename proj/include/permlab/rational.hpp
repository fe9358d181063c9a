#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

#include "permlab/errors.hpp"

namespace permlab {

/// Arbitrary-precision integer.  Weights, counts and constants routinely
/// overflow 64 bits, so everything quantitative goes through this type.
using Int = boost::multiprecision::cpp_int;

/// Exact rational, always in lowest terms with positive denominator.
/// All distances and densities are rationals; no floating point anywhere
/// in the computation paths.
using Rational = boost::multiprecision::cpp_rational;

inline Int rat_num(const Rational& r) { return boost::multiprecision::numerator(r); }
inline Int rat_den(const Rational& r) { return boost::multiprecision::denominator(r); }

/// Ceiling of a rational as an integer.
inline Int ceil_rat(const Rational& r) {
    Int n = rat_num(r), d = rat_den(r);
    Int q = n / d;
    if (n % d != 0 && n > 0) ++q;
    return q;
}

/// Floor of a rational as an integer.
inline Int floor_rat(const Rational& r) {
    Int n = rat_num(r), d = rat_den(r);
    Int q = n / d;
    if (n % d != 0 && n < 0) --q;
    return q;
}

/// Canonical text form "num/den"; integral values print without "/1".
inline std::string format_rational(const Rational& r) {
    if (rat_den(r) == 1) return rat_num(r).str();
    return rat_num(r).str() + "/" + rat_den(r).str();
}

/// Parses "num/den" or a bare integer.
inline Rational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(Int(s));
        Int num(s.substr(0, slash));
        Int den(s.substr(slash + 1));
        if (den == 0) throw Error("rational with zero denominator: " + s);
        return Rational(num, den);
    } catch (const std::runtime_error&) {
        throw Error("malformed rational: " + s);
    }
}

}  // namespace permlab
