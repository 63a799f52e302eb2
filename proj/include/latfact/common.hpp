#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace latfact {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;
using Real = boost::multiprecision::cpp_bin_float_50;

using IVec = std::vector<Int>;
using RVec = std::vector<Rat>;

inline Int dot(const IVec& a, const IVec& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("dot: dimension mismatch");
    Int s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline Int norm_sq(const IVec& v) { return dot(v, v); }

inline int sgn(const Int& x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }

// Nearest integer to num/den (den > 0), halves rounded away from zero.
inline Int nearest_div(const Int& num, const Int& den) {
    if (den <= 0) throw std::invalid_argument("nearest_div: den must be positive");
    Int a = abs(num);
    Int q = (2 * a + den) / (2 * den);
    return num < 0 ? Int(-q) : q;
}

// round(x) with halves away from zero, e.g. 2.5 -> 3, -2.5 -> -3.
inline Int round_half_away(const Rat& x) {
    return nearest_div(Int(numerator(x)), Int(denominator(x)));
}

inline double to_double(const Rat& x) { return x.convert_to<double>(); }
inline double to_double(const Int& x) { return x.convert_to<double>(); }

// SplitMix64 step; used to derive independent per-trial seeds from a master
// seed so results do not depend on scheduling.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

using Rng = std::mt19937_64;

}  // namespace latfact
