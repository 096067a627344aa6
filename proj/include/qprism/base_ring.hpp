#pragma once

// Arithmetic in W(p, N, M) = Z[q] / (p^N, (q-1)^M) and q-analogs.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qprism/error.hpp"
#include "qprism/modular.hpp"
#include "qprism/mpoly.hpp"

namespace qprism {

struct RingContext {
    std::uint64_t p = 2;
    int n_prec = 1;
    int m_prec = 1;
    std::uint64_t modulus = 2;  // p^n_prec

    static RingContext make(std::uint64_t p, int n_prec, int m_prec) {
        if (p < 2 || p > 97 || !is_prime(p)) {
            throw Error(ErrorKind::InvalidArgs, "p must be a prime in [2, 97], got " + std::to_string(p), "p");
        }
        if (n_prec < 1) throw Error(ErrorKind::InvalidArgs, "n_prec must be >= 1", "n_prec");
        if (m_prec < 1) throw Error(ErrorKind::InvalidArgs, "m_prec must be >= 1", "m_prec");
        return RingContext{p, n_prec, m_prec, checked_pow(p, n_prec)};
    }

    /// Same p, different truncation.
    [[nodiscard]] RingContext with_precision(int n, int m) const { return make(p, n, m); }

    friend bool operator==(const RingContext& a, const RingContext& b) {
        return a.p == b.p && a.n_prec == b.n_prec && a.m_prec == b.m_prec;
    }
};

/// Element of W stored by its coefficients in the basis t^i, t = q - 1.
class WScalar {
public:
    WScalar() = default;
    explicit WScalar(const RingContext& ctx) : ctx_(ctx), c_(static_cast<std::size_t>(ctx.m_prec), 0) {}

    static WScalar zero(const RingContext& ctx) { return WScalar(ctx); }

    static WScalar constant(const RingContext& ctx, const Integer& v) {
        WScalar r(ctx);
        r.c_[0] = reduce_integer(v, ctx.modulus);
        return r;
    }
    static WScalar one(const RingContext& ctx) { return constant(ctx, 1); }

    static WScalar t(const RingContext& ctx) {
        WScalar r(ctx);
        if (ctx.m_prec > 1) r.c_[1] = 1 % ctx.modulus;
        return r;
    }
    static WScalar q(const RingContext& ctx) { return one(ctx) + t(ctx); }

    static WScalar from_t_coeffs(const RingContext& ctx, const std::vector<std::uint64_t>& coeffs) {
        WScalar r(ctx);
        for (std::size_t i = 0; i < coeffs.size() && i < r.c_.size(); ++i) r.c_[i] = coeffs[i] % ctx.modulus;
        return r;
    }

    /// Reduction of a polynomial in q alone.
    static WScalar from_poly(const RingContext& ctx, const MPoly& f) {
        if (!f.only_q()) throw Error(ErrorKind::InvalidArgs, "scalar literal may only involve q: " + f.to_string());
        WScalar r(ctx);
        const WScalar qq = q(ctx);
        for (const auto& [mono, coeff] : f.terms()) {
            const unsigned e = mono.empty() ? 0 : mono[0];
            r += qq.pow(e) * constant(ctx, coeff);
        }
        return r;
    }

    static WScalar parse(const RingContext& ctx, std::string_view text) { return from_poly(ctx, MPoly::parse(text)); }

    [[nodiscard]] const RingContext& context() const noexcept { return ctx_; }
    [[nodiscard]] const std::vector<std::uint64_t>& t_coeffs() const noexcept { return c_; }
    [[nodiscard]] std::uint64_t operator[](std::size_t i) const { return c_[i]; }

    [[nodiscard]] bool is_zero() const {
        for (auto v : c_) {
            if (v != 0) return false;
        }
        return true;
    }
    [[nodiscard]] bool is_one() const { return *this == one(ctx_); }

    /// Image in F_p after setting q = 1.
    [[nodiscard]] std::uint64_t residue() const { return c_.empty() ? 0 : c_[0] % ctx_.p; }
    [[nodiscard]] bool is_unit() const { return residue() != 0; }

    WScalar& operator+=(const WScalar& o) {
        for (std::size_t i = 0; i < c_.size(); ++i) c_[i] = add_mod(c_[i], o.c_[i], ctx_.modulus);
        return *this;
    }
    WScalar& operator-=(const WScalar& o) {
        for (std::size_t i = 0; i < c_.size(); ++i) c_[i] = sub_mod(c_[i], o.c_[i], ctx_.modulus);
        return *this;
    }
    friend WScalar operator+(WScalar a, const WScalar& b) { return a += b; }
    friend WScalar operator-(WScalar a, const WScalar& b) { return a -= b; }
    friend WScalar operator-(const WScalar& a) { return zero(a.ctx_) - a; }

    friend WScalar operator*(const WScalar& a, const WScalar& b) {
        WScalar r(a.ctx_);
        const std::size_t m = a.c_.size();
        const std::uint64_t mod = a.ctx_.modulus;
        for (std::size_t i = 0; i < m; ++i) {
            if (a.c_[i] == 0) continue;
            for (std::size_t j = 0; i + j < m; ++j) {
                if (b.c_[j] == 0) continue;
                r.c_[i + j] = add_mod(r.c_[i + j], mul_mod(a.c_[i], b.c_[j], mod), mod);
            }
        }
        return r;
    }
    WScalar& operator*=(const WScalar& o) { return *this = *this * o; }

    [[nodiscard]] WScalar scaled(std::uint64_t s) const {
        WScalar r(ctx_);
        s %= ctx_.modulus;
        for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = mul_mod(c_[i], s, ctx_.modulus);
        return r;
    }

    friend bool operator==(const WScalar& a, const WScalar& b) { return a.ctx_ == b.ctx_ && a.c_ == b.c_; }
    friend bool operator!=(const WScalar& a, const WScalar& b) { return !(a == b); }
    friend bool operator<(const WScalar& a, const WScalar& b) { return a.c_ < b.c_; }

    [[nodiscard]] WScalar pow(std::uint64_t e) const {
        WScalar result = one(ctx_);
        WScalar base = *this;
        while (e > 0) {
            if (e & 1U) result *= base;
            e >>= 1U;
            if (e > 0) base *= base;
        }
        return result;
    }

    /// Ring endomorphism of W determined by q -> image.
    [[nodiscard]] WScalar substitute_q(const WScalar& image) const {
        const WScalar shift = image - one(ctx_);
        WScalar r(ctx_);
        WScalar power = one(ctx_);
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (c_[i] != 0) r += power.scaled(c_[i]);
            power *= shift;
        }
        return r;
    }

    /// q -> q^p.
    [[nodiscard]] WScalar frobenius() const { return substitute_q(q(ctx_).pow(ctx_.p)); }

    /// Image under the projection to a coarser truncation of the same p.
    [[nodiscard]] WScalar reduce_to(const RingContext& target) const {
        if (target.p != ctx_.p || target.n_prec > ctx_.n_prec || target.m_prec > ctx_.m_prec) {
            throw Error(ErrorKind::InvalidArgs, "reduce_to needs a coarser context with the same p");
        }
        WScalar r(target);
        for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = c_[i] % target.modulus;
        return r;
    }

    /// Canonical integer lift sum c_i (q-1)^i with c_i in [0, p^N).
    [[nodiscard]] MPoly lift() const {
        MPoly r;
        const MPoly tt = MPoly::q() - MPoly::constant(1);
        MPoly power = MPoly::constant(1);
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (c_[i] != 0) r += Integer(c_[i]) * power;
            power *= tt;
        }
        return r;
    }

    /// Coefficients in the basis 1, q, ..., q^{M-1}, reduced into [0, p^N).
    [[nodiscard]] std::vector<std::uint64_t> q_coeffs() const {
        const std::uint64_t mod = ctx_.modulus;
        std::vector<std::uint64_t> out(c_.size(), 0);
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (c_[i] == 0) continue;
            // (q-1)^i = sum_j C(i,j) (-1)^{i-j} q^j
            for (std::size_t j = 0; j <= i; ++j) {
                const std::uint64_t b = reduce_integer(binomial(Integer(i), static_cast<unsigned>(j)), mod);
                const std::uint64_t term = mul_mod(b, c_[i], mod);
                out[j] = ((i - j) % 2 == 0) ? add_mod(out[j], term, mod) : sub_mod(out[j], term, mod);
            }
        }
        return out;
    }

    [[nodiscard]] std::string to_string() const {
        const auto qc = q_coeffs();
        MPoly f;
        for (std::size_t j = 0; j < qc.size(); ++j) {
            if (qc[j] != 0) f += Integer(qc[j]) * MPoly::variable(var::q, static_cast<std::uint32_t>(j));
        }
        return f.to_string();
    }

private:
    RingContext ctx_{};
    std::vector<std::uint64_t> c_;
};

/// Inverse of a unit of W: invert the constant term, then sum the geometric series of the nilpotent rest.
inline WScalar w_invert(const WScalar& a) {
    const RingContext& ctx = a.context();
    if (!a.is_unit()) throw Error(ErrorKind::NotAUnit, a.to_string() + " lies in the maximal ideal (p, q-1)");
    const std::uint64_t c0_inv = inv_mod(a[0], ctx.modulus);
    // a = c0 (1 + u) with u in (t)
    WScalar u = a.scaled(c0_inv) - WScalar::one(ctx);
    WScalar sum = WScalar::one(ctx);
    WScalar term = WScalar::one(ctx);
    for (int i = 1; i < ctx.m_prec; ++i) {
        term = -(term * u);
        sum += term;
    }
    return sum.scaled(c0_inv);
}

/// (n)_{q^r} = 1 + q^r + ... + q^{r(n-1)}.
inline WScalar q_int(std::uint64_t n, std::uint64_t r, const RingContext& ctx) {
    const WScalar step = WScalar::q(ctx).pow(r);
    WScalar sum = WScalar::zero(ctx);
    WScalar power = WScalar::one(ctx);
    for (std::uint64_t i = 0; i < n; ++i) {
        sum += power;
        power *= step;
    }
    return sum;
}

/// Dense exact polynomials in q, index = exponent.
using ZPoly = std::vector<Integer>;

inline void zpoly_trim(ZPoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

inline ZPoly q_int_exact(std::uint64_t n, std::uint64_t r = 1) {
    if (n == 0) return {};
    ZPoly f(r * (n - 1) + 1, 0);
    for (std::uint64_t i = 0; i < n; ++i) f[r * i] = 1;
    return f;
}

/// Gaussian binomial in base q^r via C(n,k) = C(n-1,k-1) + q^{rk} C(n-1,k).
inline ZPoly q_binomial_exact(int n, int k, std::uint64_t r = 1) {
    if (k < 0 || k > n) {
        throw Error(ErrorKind::InvalidArgs,
                    "q_binomial needs 0 <= k <= n, got n=" + std::to_string(n) + " k=" + std::to_string(k));
    }
    std::vector<ZPoly> row{ZPoly{1}};
    for (int m = 1; m <= n; ++m) {
        std::vector<ZPoly> next(static_cast<std::size_t>(m) + 1);
        next[0] = ZPoly{1};
        next[static_cast<std::size_t>(m)] = ZPoly{1};
        for (int j = 1; j < m; ++j) {
            const ZPoly& a = row[static_cast<std::size_t>(j) - 1];
            const ZPoly& b = row[static_cast<std::size_t>(j)];
            const std::size_t shift = r * static_cast<std::uint64_t>(j);
            ZPoly c(std::max(a.size(), b.size() + shift), 0);
            for (std::size_t i = 0; i < a.size(); ++i) c[i] += a[i];
            for (std::size_t i = 0; i < b.size(); ++i) c[i + shift] += b[i];
            zpoly_trim(c);
            next[static_cast<std::size_t>(j)] = std::move(c);
        }
        row = std::move(next);
    }
    return row[static_cast<std::size_t>(k)];
}

inline MPoly to_mpoly(const ZPoly& f) {
    MPoly r;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i] != 0) r += f[i] * MPoly::variable(var::q, static_cast<std::uint32_t>(i));
    }
    return r;
}

inline WScalar to_w(const ZPoly& f, const RingContext& ctx) {
    WScalar r = WScalar::zero(ctx);
    const WScalar qq = WScalar::q(ctx);
    WScalar power = WScalar::one(ctx);
    for (const auto& c : f) {
        if (c != 0) r += power * WScalar::constant(ctx, c);
        power *= qq;
    }
    return r;
}

inline WScalar q_binomial(int n, int k, std::uint64_t r, const RingContext& ctx) {
    return to_w(q_binomial_exact(n, k, r), ctx);
}

}  // namespace qprism
