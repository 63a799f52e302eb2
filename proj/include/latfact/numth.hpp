#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "common.hpp"

namespace latfact {

// First M primes, increasing. Growing sieve; M is tiny at desk scale.
inline std::vector<Int> gen_primes(std::size_t M) {
    if (M < 1) throw std::invalid_argument("gen_primes: M must be >= 1");
    // p_M < M (ln M + ln ln M) for M >= 6; pad generously for small M.
    std::size_t bound = 64;
    if (M >= 6) {
        double d = static_cast<double>(M);
        bound = static_cast<std::size_t>(d * (std::log(d) + std::log(std::log(d)))) + 16;
    }
    std::vector<Int> primes;
    for (;;) {
        std::vector<char> sieve(bound + 1, 1);
        sieve[0] = sieve[1] = 0;
        for (std::size_t i = 2; i * i <= bound; ++i)
            if (sieve[i])
                for (std::size_t j = i * i; j <= bound; j += i) sieve[j] = 0;
        primes.clear();
        for (std::size_t i = 2; i <= bound && primes.size() < M; ++i)
            if (sieve[i]) primes.emplace_back(i);
        if (primes.size() == M) return primes;
        bound *= 2;
    }
}

// The first M primes plus the convention that exponent vectors carry a sign
// coordinate for p_0 = -1.
struct FactorBase {
    std::vector<Int> primes;
    bool includes_sign = true;

    explicit FactorBase(std::size_t M) : primes(gen_primes(M)) {}
    explicit FactorBase(std::vector<Int> ps) : primes(std::move(ps)) {
        if (primes.empty()) throw std::invalid_argument("FactorBase: empty prime list");
    }

    std::size_t size() const { return primes.size(); }
    const Int& largest() const { return primes.back(); }
};

// (-1)^sign_bit * prod p_j^exps[j].
struct ExponentVector {
    int sign_bit = 0;
    std::vector<unsigned> exps;

    Int reconstruct(const FactorBase& base) const {
        if (exps.size() > base.size())
            throw std::invalid_argument("ExponentVector: longer than base");
        Int r = sign_bit ? -1 : 1;
        for (std::size_t j = 0; j < exps.size(); ++j)
            if (exps[j]) r *= pow(base.primes[j], exps[j]);
        return r;
    }
};

inline Int gcd(const Int& a, const Int& b) {
    if (a == 0 && b == 0)
        throw std::invalid_argument("gcd: both arguments zero");
    return boost::multiprecision::gcd(a, b);
}

// Trial division over the base; empty iff |s| has a factor beyond p_M.
inline std::optional<ExponentVector> smooth_factor(const Int& s, const FactorBase& base) {
    if (s == 0) throw std::invalid_argument("smooth_factor: s must be non-zero");
    ExponentVector ev;
    ev.sign_bit = s < 0 ? 1 : 0;
    ev.exps.assign(base.size(), 0);
    Int a = abs(s);
    for (std::size_t j = 0; j < base.size() && a > 1; ++j) {
        const Int& p = base.primes[j];
        while (a % p == 0) {
            a /= p;
            ++ev.exps[j];
        }
    }
    if (a != 1) return std::nullopt;
    return ev;
}

inline unsigned bit_length(const Int& n) {
    if (n == 0) return 0;
    return static_cast<unsigned>(boost::multiprecision::msb(abs(n))) + 1;
}

namespace detail {

inline bool miller_rabin_witness(const Int& n, const Int& a, const Int& d, unsigned r) {
    Int x = boost::multiprecision::powm(a % n, d, n);
    if (x == 1 || x == n - 1) return false;  // not a witness
    for (unsigned i = 1; i < r; ++i) {
        x = (x * x) % n;
        if (x == n - 1) return false;
    }
    return true;  // composite witnessed
}

}  // namespace detail

// Miller-Rabin. The fixed witness set below is deterministic for
// n < 3.317e24; beyond that extra pseudo-random rounds top it up to `rounds`.
inline bool is_prime(const Int& n, int rounds = 40) {
    if (n < 2) return false;
    for (int p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    Int d = n - 1;
    unsigned r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    for (int a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37})
        if (detail::miller_rabin_witness(n, a, d, r)) return false;
    if (bit_length(n) > 81) {  // above the deterministic range
        Rng rng(0x6d725f657874ULL);
        int extra = rounds - 12;
        for (int i = 0; i < extra; ++i) {
            Int a = 2 + Int(rng()) % (n - 3);
            if (detail::miller_rabin_witness(n, a, d, r)) return false;
        }
    }
    return true;
}

namespace detail {

// Random odd integer with exactly `bits` bits.
inline Int random_odd(unsigned bits, Rng& rng) {
    Int x = 0;
    for (unsigned b = 0; b < bits; b += 32) {
        x <<= 32;
        x |= static_cast<std::uint32_t>(rng());
    }
    x &= (Int(1) << bits) - 1;
    bit_set(x, bits - 1);
    bit_set(x, 0);
    return x;
}

inline Int random_prime(unsigned bits, Rng& rng) {
    if (bits < 2) throw std::invalid_argument("random_prime: bits must be >= 2");
    for (;;) {
        Int cand = random_odd(bits, rng);
        if (bits == 2) cand = 3;
        if (is_prime(cand)) return cand;
    }
}

}  // namespace detail

// p*q with p, q distinct primes of roughly bits/2 each and bit_length(p*q)
// exactly `bits`. Deterministic per seed.
inline Int random_semiprime(unsigned bits, std::uint64_t rng_seed) {
    if (bits < 6) throw std::invalid_argument("random_semiprime: bits must be >= 6");
    Rng rng(rng_seed);
    unsigned b1 = (bits + 1) / 2;
    unsigned b2 = bits + 1 - b1;
    for (;;) {
        Int p = detail::random_prime(b1, rng);
        Int q = detail::random_prime(b2, rng);
        if (p == q) continue;
        Int n = p * q;
        if (bit_length(n) == bits) return n;
    }
}

// Exact k-th root via binary search; returns floor(n^(1/k)).
inline Int iroot(const Int& n, unsigned k) {
    if (n < 0 || k == 0) throw std::invalid_argument("iroot: bad arguments");
    if (n <= 1 || k == 1) return n;
    Int lo = 1, hi = Int(1) << (bit_length(n) / k + 1);
    while (lo < hi) {  // invariant: lo^k <= n < (hi+1)^k
        Int mid = (lo + hi + 1) / 2;
        if (pow(mid, k) <= n)
            lo = mid;
        else
            hi = mid - 1;
    }
    return lo;
}

// True iff n = p^k for some prime p and k >= 2.
inline bool is_prime_power(const Int& n) {
    if (n < 4) return false;
    unsigned bits = bit_length(n);
    for (unsigned k = 2; k <= bits; ++k) {
        Int r = iroot(n, k);
        if (r < 2) break;
        if (pow(r, k) == n && is_prime(r)) return true;
    }
    return false;
}

}  // namespace latfact
