#pragma once

#include <cctype>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qprism/error.hpp"
#include "qprism/modular.hpp"

namespace qprism {

/// Exponent vector over the variables (q, x, w0, w1, ...); trailing zeros are trimmed.
using Monomial = std::vector<std::uint32_t>;

namespace var {
inline constexpr std::size_t q = 0;
inline constexpr std::size_t x = 1;
inline constexpr std::size_t omega(std::size_t k) { return 2 + k; }
}  // namespace var

inline std::string variable_name(std::size_t index) {
    if (index == var::q) return "q";
    if (index == var::x) return "x";
    return "w" + std::to_string(index - 2);
}

/// Exact polynomial with integer coefficients in q, x and the free delta generators w_k.
class MPoly {
public:
    using Terms = std::map<Monomial, Integer>;

    MPoly() = default;

    static MPoly constant(const Integer& c) {
        MPoly r;
        if (c != 0) r.terms_[Monomial{}] = c;
        return r;
    }

    static MPoly variable(std::size_t index, std::uint32_t power = 1) {
        MPoly r;
        Monomial m(index + 1, 0);
        m[index] = power;
        r.terms_[trim(std::move(m))] = 1;
        return r;
    }

    static MPoly q() { return variable(var::q); }
    static MPoly x() { return variable(var::x); }
    static MPoly omega(std::size_t k) { return variable(var::omega(k)); }

    /// Parses the shared literal grammar; see README for the EBNF.
    static MPoly parse(std::string_view text);

    [[nodiscard]] const Terms& terms() const noexcept { return terms_; }
    [[nodiscard]] bool is_zero() const noexcept { return terms_.empty(); }
    [[nodiscard]] std::size_t size() const noexcept { return terms_.size(); }

    [[nodiscard]] Integer coefficient(const Monomial& m) const {
        auto it = terms_.find(trim(m));
        return it == terms_.end() ? Integer{0} : it->second;
    }

    /// Number of variable slots used (1 + largest variable index present).
    [[nodiscard]] std::size_t variable_count() const {
        std::size_t n = 0;
        for (const auto& [m, c] : terms_) n = std::max(n, m.size());
        return n;
    }

    /// Largest k with w_k present, or -1.
    [[nodiscard]] int omega_order() const {
        const std::size_t n = variable_count();
        return n <= 2 ? -1 : static_cast<int>(n) - 3;
    }

    [[nodiscard]] bool only_q() const { return variable_count() <= 1; }

    [[nodiscard]] std::uint32_t degree_in(std::size_t index) const {
        std::uint32_t d = 0;
        for (const auto& [m, c] : terms_) {
            if (index < m.size()) d = std::max(d, m[index]);
        }
        return d;
    }

    MPoly& operator+=(const MPoly& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    MPoly& operator-=(const MPoly& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    friend MPoly operator+(MPoly a, const MPoly& b) { return a += b; }
    friend MPoly operator-(MPoly a, const MPoly& b) { return a -= b; }
    friend MPoly operator-(const MPoly& a) { return MPoly{} - a; }

    friend MPoly operator*(const MPoly& a, const MPoly& b) {
        MPoly r;
        for (const auto& [ma, ca] : a.terms_) {
            for (const auto& [mb, cb] : b.terms_) r.add_term(multiply(ma, mb), ca * cb);
        }
        return r;
    }
    MPoly& operator*=(const MPoly& o) { return *this = *this * o; }

    friend MPoly operator*(const Integer& s, const MPoly& a) {
        MPoly r;
        if (s == 0) return r;
        for (const auto& [m, c] : a.terms_) r.terms_[m] = c * s;
        return r;
    }

    friend bool operator==(const MPoly& a, const MPoly& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const MPoly& a, const MPoly& b) { return !(a == b); }

    [[nodiscard]] MPoly pow(unsigned e) const {
        MPoly result = constant(1);
        MPoly base = *this;
        while (e > 0) {
            if (e & 1U) result *= base;
            e >>= 1U;
            if (e > 0) base *= base;
        }
        return result;
    }

    /// Exact division of every coefficient by an integer; throws if some coefficient is not divisible.
    [[nodiscard]] MPoly exact_divide(const Integer& d) const {
        MPoly r;
        for (const auto& [m, c] : terms_) {
            if (c % d != 0) throw Error(ErrorKind::InvalidArgs, "inexact integer division by " + d.str());
            r.terms_[m] = c / d;
        }
        return r;
    }

    /// Coefficients reduced into [0, modulus).
    [[nodiscard]] MPoly reduce_coefficients(const Integer& modulus) const {
        MPoly r;
        for (const auto& [m, c] : terms_) {
            Integer v = c % modulus;
            if (v < 0) v += modulus;
            if (v != 0) r.terms_[m] = v;
        }
        return r;
    }

    /// Ring substitution of every variable by a polynomial; powers are cached per variable.
    [[nodiscard]] MPoly substitute(const std::function<MPoly(std::size_t)>& image) const {
        std::map<std::pair<std::size_t, std::uint32_t>, MPoly> cache;
        auto power_of = [&](std::size_t v, std::uint32_t e) -> const MPoly& {
            auto key = std::make_pair(v, e);
            auto it = cache.find(key);
            if (it != cache.end()) return it->second;
            return cache.emplace(key, image(v).pow(e)).first->second;
        };
        MPoly r;
        for (const auto& [m, c] : terms_) {
            MPoly t = constant(c);
            for (std::size_t v = 0; v < m.size(); ++v) {
                if (m[v] != 0) t *= power_of(v, m[v]);
            }
            r += t;
        }
        return r;
    }

    /// Evaluates q = 1, leaving the other variables.
    [[nodiscard]] MPoly at_q_equals_one() const {
        return substitute([](std::size_t v) { return v == var::q ? constant(1) : variable(v); });
    }

    [[nodiscard]] std::string to_string() const {
        if (terms_.empty()) return "0";
        std::string out;
        bool first = true;
        for (const auto& [m, c] : terms_) {
            Integer a = c < 0 ? Integer(-c) : c;
            if (c < 0) {
                out += "-";
            } else if (!first) {
                out += "+";
            }
            first = false;
            std::string mono;
            for (std::size_t v = 0; v < m.size(); ++v) {
                if (m[v] == 0) continue;
                if (!mono.empty()) mono += "*";
                mono += variable_name(v);
                if (m[v] > 1) mono += "^" + std::to_string(m[v]);
            }
            if (mono.empty()) {
                out += a.str();
            } else if (a == 1) {
                out += mono;
            } else {
                out += a.str() + "*" + mono;
            }
        }
        return out;
    }

private:
    static Monomial trim(Monomial m) {
        while (!m.empty() && m.back() == 0) m.pop_back();
        return m;
    }

    static Monomial multiply(const Monomial& a, const Monomial& b) {
        Monomial r(std::max(a.size(), b.size()), 0);
        for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
        for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
        return r;
    }

    void add_term(const Monomial& m, const Integer& c) {
        if (c == 0) return;
        auto [it, inserted] = terms_.try_emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    Terms terms_;
};

namespace detail {

class PolyParser {
public:
    explicit PolyParser(std::string_view s) : s_(s) {}

    MPoly parse_all() {
        MPoly r = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
        return r;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw Error(ErrorKind::ParseError,
                    what + " at position " + std::to_string(pos_) + " in \"" + std::string(s_) + "\"");
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool peek(char c) {
        skip();
        return pos_ < s_.size() && s_[pos_] == c;
    }

    bool starts_factor() {
        skip();
        if (pos_ >= s_.size()) return false;
        const char c = s_[pos_];
        return std::isdigit(static_cast<unsigned char>(c)) || c == 'q' || c == 'x' || c == 'w' || c == 't' ||
               c == '(';
    }

    Integer integer() {
        skip();
        const std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail("expected integer");
        return Integer(std::string(s_.substr(start, pos_ - start)));
    }

    unsigned exponent() {
        Integer e = integer();
        if (e > 100000) fail("exponent too large");
        return e.convert_to<unsigned>();
    }

    MPoly expr() {
        skip();
        MPoly r;
        bool negative = false;
        if (peek('+')) {
            ++pos_;
        } else if (peek('-')) {
            ++pos_;
            negative = true;
        }
        MPoly t = term();
        r = negative ? -t : t;
        while (true) {
            if (peek('+')) {
                ++pos_;
                r += term();
            } else if (peek('-')) {
                ++pos_;
                r -= term();
            } else {
                break;
            }
        }
        return r;
    }

    MPoly term() {
        if (!starts_factor()) fail("expected term");
        MPoly r = factor();
        while (true) {
            if (peek('*')) {
                ++pos_;
                r *= factor();
            } else if (starts_factor()) {
                r *= factor();
            } else {
                break;
            }
        }
        return r;
    }

    MPoly factor() {
        skip();
        if (pos_ >= s_.size()) fail("expected factor");
        const char c = s_[pos_];
        MPoly base;
        if (std::isdigit(static_cast<unsigned char>(c))) {
            return MPoly::constant(integer());
        }
        if (c == '(') {
            ++pos_;
            base = expr();
            if (!peek(')')) fail("expected ')'");
            ++pos_;
        } else if (c == 'q') {
            ++pos_;
            base = MPoly::q();
        } else if (c == 't') {
            ++pos_;
            base = MPoly::q() - MPoly::constant(1);
        } else if (c == 'x') {
            ++pos_;
            if (pos_ < s_.size() && s_[pos_] == '\'') ++pos_;
            base = MPoly::x();
        } else if (c == 'w') {
            ++pos_;
            std::size_t k = 0;
            if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                k = integer().convert_to<std::size_t>();
            }
            base = MPoly::omega(k);
        } else {
            fail("unknown symbol '" + std::string(1, c) + "'");
        }
        if (peek('^')) {
            ++pos_;
            base = base.pow(exponent());
        }
        return base;
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline MPoly MPoly::parse(std::string_view text) { return detail::PolyParser(text).parse_all(); }

}  // namespace qprism
