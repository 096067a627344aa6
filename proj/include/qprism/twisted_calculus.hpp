#pragma once

// A = W[x] with sigma(x) = q x, the twisted derivations of levels 0 and -1,
// and twisted connections on finite free A-modules.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qprism/base_ring.hpp"
#include "qprism/error.hpp"
#include "qprism/homology.hpp"
#include "qprism/mpoly.hpp"

namespace qprism {

enum class Level { Zero = 0, MinusOne = -1 };

inline int to_int(Level l) { return static_cast<int>(l); }

inline Level level_from_int(int v) {
    if (v == 0) return Level::Zero;
    if (v == -1) return Level::MinusOne;
    throw Error(ErrorKind::InvalidArgs, "level must be 0 or -1, got " + std::to_string(v), "level");
}

/// Element of W[x], optionally taken modulo x^{window+1}.
class QPolynomial {
public:
    QPolynomial() = default;
    explicit QPolynomial(const RingContext& ctx, std::optional<int> window = std::nullopt)
        : ctx_(ctx), window_(window) {}

    static QPolynomial constant(const WScalar& c, std::optional<int> window = std::nullopt) {
        return monomial(c, 0, window);
    }

    static QPolynomial monomial(const WScalar& c, int degree, std::optional<int> window = std::nullopt) {
        QPolynomial r(c.context(), window);
        r.set(degree, c);
        return r;
    }

    static QPolynomial x(const RingContext& ctx, std::optional<int> window = std::nullopt) {
        return monomial(WScalar::one(ctx), 1, window);
    }

    /// Reduction of a polynomial in q and x (x' is read as x).
    static QPolynomial from_poly(const RingContext& ctx, const MPoly& f, std::optional<int> window = std::nullopt) {
        if (f.variable_count() > 2) {
            throw Error(ErrorKind::InvalidArgs, "polynomial over A may only involve q and x: " + f.to_string());
        }
        QPolynomial r(ctx, window);
        const WScalar qq = WScalar::q(ctx);
        for (const auto& [mono, coeff] : f.terms()) {
            const unsigned eq = mono.size() > 0 ? mono[0] : 0;
            const int ex = mono.size() > 1 ? static_cast<int>(mono[1]) : 0;
            r.add_at(ex, qq.pow(eq) * WScalar::constant(ctx, coeff));
        }
        return r;
    }

    static QPolynomial parse(const RingContext& ctx, std::string_view text, std::optional<int> window = std::nullopt) {
        return from_poly(ctx, MPoly::parse(text), window);
    }

    [[nodiscard]] const RingContext& context() const noexcept { return ctx_; }
    [[nodiscard]] std::optional<int> window() const noexcept { return window_; }
    [[nodiscard]] QPolynomial with_window(std::optional<int> w) const {
        QPolynomial r(ctx_, w);
        for (int n = 0; n <= degree(); ++n) r.set(n, coefficient(n));
        return r;
    }

    /// -1 for the zero polynomial.
    [[nodiscard]] int degree() const { return static_cast<int>(c_.size()) - 1; }
    [[nodiscard]] bool is_zero() const { return c_.empty(); }

    [[nodiscard]] WScalar coefficient(int n) const {
        if (n < 0 || n > degree()) return WScalar::zero(ctx_);
        return c_[static_cast<std::size_t>(n)];
    }

    void set(int n, const WScalar& v) {
        if (n < 0 || (window_ && n > *window_)) return;
        if (static_cast<std::size_t>(n) >= c_.size()) {
            if (v.is_zero()) return;
            c_.resize(static_cast<std::size_t>(n) + 1, WScalar::zero(ctx_));
        }
        c_[static_cast<std::size_t>(n)] = v;
        trim();
    }

    void add_at(int n, const WScalar& v) {
        if (v.is_zero()) return;
        set(n, coefficient(n) + v);
    }

    QPolynomial& operator+=(const QPolynomial& o) {
        window_ = merge(window_, o.window_);
        for (int n = 0; n <= o.degree(); ++n) add_at(n, o.c_[static_cast<std::size_t>(n)]);
        truncate();
        return *this;
    }
    QPolynomial& operator-=(const QPolynomial& o) {
        window_ = merge(window_, o.window_);
        for (int n = 0; n <= o.degree(); ++n) add_at(n, -o.c_[static_cast<std::size_t>(n)]);
        truncate();
        return *this;
    }
    friend QPolynomial operator+(QPolynomial a, const QPolynomial& b) { return a += b; }
    friend QPolynomial operator-(QPolynomial a, const QPolynomial& b) { return a -= b; }
    friend QPolynomial operator-(const QPolynomial& a) { return QPolynomial(a.ctx_, a.window_) - a; }

    friend QPolynomial operator*(const QPolynomial& a, const QPolynomial& b) {
        QPolynomial r(a.ctx_, merge(a.window_, b.window_));
        for (int i = 0; i <= a.degree(); ++i) {
            if (a.c_[static_cast<std::size_t>(i)].is_zero()) continue;
            for (int j = 0; j <= b.degree(); ++j) {
                if (r.window_ && i + j > *r.window_) break;
                r.add_at(i + j, a.c_[static_cast<std::size_t>(i)] * b.c_[static_cast<std::size_t>(j)]);
            }
        }
        return r;
    }
    QPolynomial& operator*=(const QPolynomial& o) { return *this = *this * o; }

    friend QPolynomial operator*(const WScalar& s, const QPolynomial& a) {
        QPolynomial r(a.ctx_, a.window_);
        for (int n = 0; n <= a.degree(); ++n) r.set(n, s * a.c_[static_cast<std::size_t>(n)]);
        return r;
    }

    friend bool operator==(const QPolynomial& a, const QPolynomial& b) { return a.c_ == b.c_; }
    friend bool operator!=(const QPolynomial& a, const QPolynomial& b) { return !(a == b); }

    /// Multiplication by x^k.
    [[nodiscard]] QPolynomial shift(int k) const {
        QPolynomial r(ctx_, window_);
        for (int n = 0; n <= degree(); ++n) r.set(n + k, c_[static_cast<std::size_t>(n)]);
        return r;
    }

    /// sigma^r: x -> q^r x.
    [[nodiscard]] QPolynomial sigma(std::uint64_t r = 1) const {
        QPolynomial out(ctx_, window_);
        const WScalar step = WScalar::q(ctx_).pow(r);
        WScalar power = WScalar::one(ctx_);
        for (int n = 0; n <= degree(); ++n) {
            out.set(n, power * c_[static_cast<std::size_t>(n)]);
            power *= step;
        }
        return out;
    }

    /// x -> x^e with coefficients untouched; the new window is supplied by the caller.
    [[nodiscard]] QPolynomial substitute_x_power(int e, std::optional<int> new_window) const {
        QPolynomial r(ctx_, new_window);
        for (int n = 0; n <= degree(); ++n) r.set(n * e, c_[static_cast<std::size_t>(n)]);
        return r;
    }

    /// Frobenius lift of A: q -> q^p on coefficients and x -> x^p.
    [[nodiscard]] QPolynomial frobenius(std::optional<int> new_window) const {
        QPolynomial r(ctx_, new_window);
        const int p = static_cast<int>(ctx_.p);
        for (int n = 0; n <= degree(); ++n) r.set(n * p, c_[static_cast<std::size_t>(n)].frobenius());
        return r;
    }

    [[nodiscard]] std::string to_string(const std::string& var_name = "x") const {
        if (is_zero()) return "0";
        std::string out;
        for (int n = 0; n <= degree(); ++n) {
            const WScalar& c = c_[static_cast<std::size_t>(n)];
            if (c.is_zero()) continue;
            if (!out.empty()) out += " + ";
            std::string mono = n == 0 ? "" : (n == 1 ? var_name : var_name + "^" + std::to_string(n));
            if (mono.empty()) {
                out += "(" + c.to_string() + ")";
            } else if (c.is_one()) {
                out += mono;
            } else {
                out += "(" + c.to_string() + ")*" + mono;
            }
        }
        return out;
    }

private:
    static std::optional<int> merge(std::optional<int> a, std::optional<int> b) {
        if (!a) return b;
        if (!b) return a;
        return std::min(*a, *b);
    }

    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }

    void truncate() {
        if (window_ && degree() > *window_) c_.resize(static_cast<std::size_t>(*window_) + 1);
        trim();
    }

    RingContext ctx_{};
    std::optional<int> window_;
    std::vector<WScalar> c_;
};

/// Raw twisted derivation: level 0 sends x^n to (n)_q x^{n-1}, level -1 to (n)_{q^p} x^{n-1}.
inline QPolynomial twisted_derive(const QPolynomial& f, Level level) {
    const RingContext& ctx = f.context();
    const std::uint64_t r = level == Level::Zero ? 1 : ctx.p;
    QPolynomial out(ctx, f.window());
    for (int n = 1; n <= f.degree(); ++n) {
        out.set(n - 1, q_int(static_cast<std::uint64_t>(n), r, ctx) * f.coefficient(n));
    }
    return out;
}

/// Scalar c(n) with theta(x^n) = c(n) x^{n-1} on the trivial module: (n)_q at level 0, (pn)_q at level -1.
inline WScalar degree_factor(int n, Level level, const RingContext& ctx) {
    const std::uint64_t m = level == Level::Zero ? static_cast<std::uint64_t>(n) : ctx.p * static_cast<std::uint64_t>(n);
    return q_int(m, 1, ctx);
}

/// Least D* >= requested for which x^{D*+1} W[x] is stable under theta, i.e. c(D*+1) = 0 in W.
inline int stable_window(int requested, Level level, const RingContext& ctx, int search_cap = 1 << 16) {
    if (requested < 0) throw Error(ErrorKind::InvalidArgs, "degree window must be >= 0", "degree_window");
    for (int d = requested; d <= search_cap; ++d) {
        if (degree_factor(d + 1, level, ctx).is_zero()) return d;
    }
    throw Error(ErrorKind::WindowUnstable, "no theta-stable degree window below " + std::to_string(search_cap));
}

using Section = std::vector<QPolynomial>;

inline Section zero_section(const RingContext& ctx, std::size_t rank, std::optional<int> window) {
    return Section(rank, QPolynomial(ctx, window));
}

/// Free A-module with basis e_1..e_r and twisted connection theta(e_j) = sum_i Theta_ij e_i.
struct ConnectionModule {
    RingContext ctx;
    std::size_t rank = 1;
    Level level = Level::Zero;
    std::vector<std::vector<QPolynomial>> theta;  // theta[i][j] = Theta_ij
    std::optional<int> degree_window;

    static ConnectionModule trivial(const RingContext& ctx, std::size_t rank, Level level,
                                    std::optional<int> window = std::nullopt) {
        ConnectionModule m{ctx, rank, level, {}, window};
        m.theta.assign(rank, std::vector<QPolynomial>(rank, QPolynomial(ctx, window)));
        return m;
    }

    [[nodiscard]] ConnectionModule with_window(std::optional<int> w) const {
        ConnectionModule m = *this;
        m.degree_window = w;
        for (auto& row : m.theta) {
            for (auto& e : row) e = e.with_window(w);
        }
        return m;
    }

    [[nodiscard]] Section basis_vector(std::size_t j) const {
        Section s = zero_section(ctx, rank, degree_window);
        s[j] = QPolynomial::constant(WScalar::one(ctx), degree_window);
        return s;
    }
};

/// Coefficient of the basis form: theta(f e_j) = D(f) e_j + tau(f) Theta e_j,
/// with (D, tau) = (d_q, sigma) at level 0 and ((p)_q d_{q^p}, sigma^p) at level -1.
inline Section connection_apply(const ConnectionModule& m, const Section& s) {
    if (s.size() != m.rank) {
        throw Error(ErrorKind::RankMismatch,
                    "section has " + std::to_string(s.size()) + " entries, module rank is " + std::to_string(m.rank));
    }
    const RingContext& ctx = m.ctx;
    const bool level0 = m.level == Level::Zero;
    const WScalar scale = level0 ? WScalar::one(ctx) : q_int(ctx.p, 1, ctx);
    const std::uint64_t twist = level0 ? 1 : ctx.p;
    Section out = zero_section(ctx, m.rank, m.degree_window);
    for (std::size_t j = 0; j < m.rank; ++j) {
        if (s[j].is_zero()) continue;
        const QPolynomial f = s[j].with_window(m.degree_window);
        out[j] += scale * twisted_derive(f, m.level);
        const QPolynomial tf = f.sigma(twist);
        for (std::size_t i = 0; i < m.rank; ++i) {
            if (!m.theta[i][j].is_zero()) out[i] += tf * m.theta[i][j];
        }
    }
    return out;
}

struct NilpotenceReport {
    bool nilpotent = true;
    std::vector<std::optional<int>> witness;  // least k with theta^k(e_i) = 0
    int effective_window = 0;
};

/// Iterates theta on each basis vector inside the theta-stable window.
inline NilpotenceReport quasi_nilpotence_check(const ConnectionModule& m, int iterate_cap) {
    NilpotenceReport report;
    const int requested = m.degree_window.value_or(0);
    report.effective_window = stable_window(requested, m.level, m.ctx);
    const ConnectionModule w = m.with_window(report.effective_window);
    for (std::size_t i = 0; i < m.rank; ++i) {
        Section v = w.basis_vector(i);
        std::optional<int> found;
        for (int k = 1; k <= iterate_cap; ++k) {
            v = connection_apply(w, v);
            if (std::all_of(v.begin(), v.end(), [](const QPolynomial& f) { return f.is_zero(); })) {
                found = k;
                break;
            }
        }
        report.witness.push_back(found);
        if (!found) report.nilpotent = false;
    }
    return report;
}

// Flattening of windowed sections to coordinate vectors over Z/p^N:
// component j, degree n, t-power b sits at index (j*(D+1) + n)*M + b.

inline std::size_t flat_dimension(std::size_t rank, int window, const RingContext& ctx) {
    return rank * static_cast<std::size_t>(window + 1) * static_cast<std::size_t>(ctx.m_prec);
}

inline std::vector<std::uint64_t> flatten(const Section& s, int window, const RingContext& ctx) {
    const std::size_t m = static_cast<std::size_t>(ctx.m_prec);
    std::vector<std::uint64_t> v(flat_dimension(s.size(), window, ctx), 0);
    for (std::size_t j = 0; j < s.size(); ++j) {
        for (int n = 0; n <= std::min(window, s[j].degree()); ++n) {
            const WScalar c = s[j].coefficient(n);
            for (std::size_t b = 0; b < m; ++b) v[(j * static_cast<std::size_t>(window + 1) + static_cast<std::size_t>(n)) * m + b] = c[b];
        }
    }
    return v;
}

inline Section unflatten(const std::vector<std::uint64_t>& v, std::size_t rank, int window, const RingContext& ctx) {
    const std::size_t m = static_cast<std::size_t>(ctx.m_prec);
    Section s = zero_section(ctx, rank, window);
    std::vector<std::uint64_t> coeffs(m);
    for (std::size_t j = 0; j < rank; ++j) {
        for (int n = 0; n <= window; ++n) {
            const std::size_t base = (j * static_cast<std::size_t>(window + 1) + static_cast<std::size_t>(n)) * m;
            for (std::size_t b = 0; b < m; ++b) coeffs[b] = v[base + b];
            s[j].set(n, WScalar::from_t_coeffs(ctx, coeffs));
        }
    }
    return s;
}

/// Matrix (rows = target coordinates) of a W-linear map between windowed free modules.
inline ModMatrix flatten_operator(std::size_t src_rank, int src_window, std::size_t dst_rank, int dst_window,
                                  const RingContext& ctx, const std::function<Section(const Section&)>& op) {
    const ZModPk ring = ZModPk::make(ctx.p, ctx.n_prec);
    const std::size_t m = static_cast<std::size_t>(ctx.m_prec);
    const std::size_t cols = flat_dimension(src_rank, src_window, ctx);
    ModMatrix out(flat_dimension(dst_rank, dst_window, ctx), cols, ring);
    for (std::size_t j = 0; j < src_rank; ++j) {
        for (int n = 0; n <= src_window; ++n) {
            for (std::size_t b = 0; b < m; ++b) {
                Section s = zero_section(ctx, src_rank, src_window);
                std::vector<std::uint64_t> tc(m, 0);
                tc[b] = 1;
                s[j] = QPolynomial::monomial(WScalar::from_t_coeffs(ctx, tc), n, src_window);
                const auto image = flatten(op(s), dst_window, ctx);
                const std::size_t col = (j * static_cast<std::size_t>(src_window + 1) + static_cast<std::size_t>(n)) * m + b;
                for (std::size_t r = 0; r < image.size(); ++r) out(r, col) = image[r];
            }
        }
    }
    return out;
}

/// The de Rham differential of a connection on the given window.
inline ModMatrix de_rham_matrix(const ConnectionModule& m, int window) {
    const ConnectionModule w = m.with_window(window);
    return flatten_operator(m.rank, window, m.rank, window, m.ctx,
                            [&](const Section& s) { return connection_apply(w, s); });
}

}  // namespace qprism
