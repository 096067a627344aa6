#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <limits>
#include <string>

#include "qprism/error.hpp"

namespace qprism {

/// Exact integers for every computation that must not truncate.
using Integer = boost::multiprecision::cpp_int;

inline bool is_prime(std::uint64_t p) {
    if (p < 2) return false;
    for (std::uint64_t d = 2; d * d <= p; ++d) {
        if (p % d == 0) return false;
    }
    return true;
}

/// b^e, throwing when the result leaves the 62-bit range used for moduli.
inline std::uint64_t checked_pow(std::uint64_t b, int e) {
    std::uint64_t r = 1;
    for (int i = 0; i < e; ++i) {
        if (b != 0 && r > (std::uint64_t{1} << 62) / b) {
            throw Error(ErrorKind::InvalidArgs, "modulus " + std::to_string(b) + "^" +
                                                    std::to_string(e) + " exceeds 2^62");
        }
        r *= b;
    }
    return r;
}

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    if (m <= (std::uint64_t{1} << 32)) return (a * b) % m;
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline std::uint64_t add_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    std::uint64_t s = a + b;
    return s >= m ? s - m : s;
}

inline std::uint64_t sub_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return a >= b ? a - b : a + m - b;
}

inline std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    b %= m;
    while (e > 0) {
        if (e & 1U) r = mul_mod(r, b, m);
        b = mul_mod(b, b, m);
        e >>= 1U;
    }
    return r;
}

/// Inverse of a modulo m; a must be coprime to m.
inline std::uint64_t inv_mod(std::uint64_t a, std::uint64_t m) {
    __int128 old_r = static_cast<__int128>(a % m), r = static_cast<__int128>(m);
    __int128 old_s = 1, s = 0;
    while (r != 0) {
        __int128 qt = old_r / r;
        __int128 tmp = old_r - qt * r;
        old_r = r;
        r = tmp;
        tmp = old_s - qt * s;
        old_s = s;
        s = tmp;
    }
    if (old_r != 1) throw Error(ErrorKind::NotAUnit, "element is not invertible modulo " + std::to_string(m));
    __int128 res = old_s % static_cast<__int128>(m);
    if (res < 0) res += m;
    return static_cast<std::uint64_t>(res);
}

/// Canonical residue of an exact integer in [0, m).
inline std::uint64_t reduce_integer(const Integer& v, std::uint64_t m) {
    Integer r = v % m;
    if (r < 0) r += m;
    return r.convert_to<std::uint64_t>();
}

inline Integer binomial(const Integer& n, unsigned k) {
    if (n < 0 || n < k) return 0;
    Integer r = 1;
    for (unsigned i = 0; i < k; ++i) {
        r *= (n - i);
        r /= (i + 1);
    }
    return r;
}

/// p-adic valuation of a nonzero integer.
inline int valuation(Integer v, std::uint64_t p) {
    if (v == 0) return std::numeric_limits<int>::max();
    int e = 0;
    while (v % p == 0) {
        v /= p;
        ++e;
    }
    return e;
}

}  // namespace qprism
