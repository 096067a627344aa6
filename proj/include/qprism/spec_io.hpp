#pragma once

// JSON spec files: connections for the cohomology and cartier commands, module presentations for adic.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qprism/adic.hpp"
#include "qprism/base_ring.hpp"
#include "qprism/error.hpp"
#include "qprism/twisted_calculus.hpp"

namespace qprism {

using Json = nlohmann::json;

inline constexpr std::size_t kDefaultMaxDim = 4096;

/// Flattened-dimension cap, read from QPRISM_MAX_DIM.
inline std::size_t max_flat_dimension() {
    const char* env = std::getenv("QPRISM_MAX_DIM");
    if (env == nullptr || *env == '\0') return kDefaultMaxDim;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (*end != '\0' || v == 0) {
        throw Error(ErrorKind::SpecError, "QPRISM_MAX_DIM must be a positive integer", "QPRISM_MAX_DIM");
    }
    return static_cast<std::size_t>(v);
}

inline void require_dimension(std::size_t dim, const std::string& field) {
    const std::size_t cap = max_flat_dimension();
    if (dim > cap) {
        throw Error(ErrorKind::DimensionCap,
                    "flattened dimension " + std::to_string(dim) + " exceeds cap " + std::to_string(cap), field);
    }
}

inline Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path, "spec");
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw Error(ErrorKind::ParseError, path + ": " + e.what(), "spec");
    }
}

namespace spec_detail {

inline const Json& field(const Json& j, const char* name) {
    if (!j.is_object()) throw Error(ErrorKind::SpecError, "spec must be a JSON object", "spec");
    if (!j.contains(name)) throw Error(ErrorKind::SpecError, std::string("missing field ") + name, name);
    return j.at(name);
}

inline std::int64_t integer(const Json& j, const char* name) {
    const Json& v = field(j, name);
    if (!v.is_number_integer()) throw Error(ErrorKind::SpecError, std::string(name) + " must be an integer", name);
    return v.get<std::int64_t>();
}

inline std::int64_t integer_or(const Json& j, const char* name, std::int64_t fallback) {
    return j.contains(name) ? integer(j, name) : fallback;
}

inline std::string text(const Json& j, const char* name) {
    const Json& v = field(j, name);
    if (!v.is_string()) throw Error(ErrorKind::SpecError, std::string(name) + " must be a string", name);
    return v.get<std::string>();
}

/// Re-raises any parse failure as a SpecError naming the field.
template <class F>
auto within_field(const std::string& name, F&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const Error& e) {
        if (!e.field().empty() && e.kind() == ErrorKind::SpecError) throw;
        throw Error(ErrorKind::SpecError, e.what(), name);
    }
}

inline std::vector<std::vector<std::string>> string_matrix(const Json& j, const char* name) {
    const Json& v = field(j, name);
    if (!v.is_array()) throw Error(ErrorKind::SpecError, std::string(name) + " must be an array of arrays", name);
    std::vector<std::vector<std::string>> out;
    for (const auto& row : v) {
        if (!row.is_array()) throw Error(ErrorKind::SpecError, std::string(name) + " rows must be arrays", name);
        std::vector<std::string> r;
        for (const auto& e : row) {
            if (!e.is_string()) throw Error(ErrorKind::SpecError, std::string(name) + " entries must be strings", name);
            r.push_back(e.get<std::string>());
        }
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace spec_detail

struct ConnectionSpec {
    RingContext ctx;
    Level level = Level::MinusOne;
    std::size_t rank = 1;
    int degree_window = 4;
    int dp_cap = 4;
    std::optional<std::uint64_t> seed;
    std::vector<std::vector<std::string>> theta_text;  // as given, or as drawn from the seed
    ConnectionModule module;
};

/// Entries p*a(x) + (q-1)*b(x) with a, b of x-degree <= 1, redrawn until theta is nilpotent on the window.
inline std::vector<std::vector<QPolynomial>> random_nilpotent_theta(const RingContext& ctx, std::size_t rank, Level level,
                                                                    int window, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint64_t> digit(0, ctx.p - 1);
    const WScalar pw = WScalar::constant(ctx, Integer(ctx.p));
    const WScalar t = WScalar::t(ctx);
    for (int attempt = 0; attempt < 64; ++attempt) {
        ConnectionModule m = ConnectionModule::trivial(ctx, rank, level, window);
        for (std::size_t i = 0; i < rank; ++i) {
            for (std::size_t j = 0; j < rank; ++j) {
                QPolynomial e(ctx, window);
                for (int n = 0; n <= 1; ++n) {
                    const WScalar c = pw.scaled(digit(rng)) + t.scaled(digit(rng));
                    e.set(n, c);
                }
                m.theta[i][j] = e;
            }
        }
        if (quasi_nilpotence_check(m, 64).nilpotent) return m.theta;
    }
    throw Error(ErrorKind::SpecError, "no nilpotent connection drawn from seed " + std::to_string(seed), "seed");
}

inline ConnectionSpec parse_connection_spec(const Json& j) {
    using namespace spec_detail;
    ConnectionSpec s;
    const std::int64_t p = integer(j, "p");
    const std::int64_t n = integer(j, "n_prec");
    const std::int64_t m = integer(j, "m_prec");
    if (p < 2) throw Error(ErrorKind::SpecError, "p must be a prime >= 2", "p");
    if (n < 1) throw Error(ErrorKind::SpecError, "n_prec must be >= 1", "n_prec");
    if (m < 1) throw Error(ErrorKind::SpecError, "m_prec must be >= 1", "m_prec");
    s.ctx = within_field("p", [&] {
        return RingContext::make(static_cast<std::uint64_t>(p), static_cast<int>(n), static_cast<int>(m));
    });
    const std::int64_t level = integer(j, "level");
    if (level != 0 && level != -1) throw Error(ErrorKind::SpecError, "level must be 0 or -1", "level");
    s.level = level_from_int(static_cast<int>(level));
    const std::int64_t rank = integer(j, "rank");
    if (rank < 1 || rank > 64) throw Error(ErrorKind::SpecError, "rank must lie in [1, 64]", "rank");
    s.rank = static_cast<std::size_t>(rank);
    const std::int64_t window = integer(j, "degree_window");
    if (window < 0 || window > 4096) throw Error(ErrorKind::SpecError, "degree_window must lie in [0, 4096]", "degree_window");
    s.degree_window = static_cast<int>(window);
    const std::int64_t dp_cap = integer_or(j, "dp_cap", std::max<std::int64_t>(4, p));
    if (dp_cap < 1 || dp_cap > 256) throw Error(ErrorKind::SpecError, "dp_cap must lie in [1, 256]", "dp_cap");
    s.dp_cap = static_cast<int>(dp_cap);
    if (j.contains("seed")) {
        const Json& v = j.at("seed");
        if (!v.is_number_unsigned() && !v.is_number_integer()) {
            throw Error(ErrorKind::SpecError, "seed must be a non-negative integer", "seed");
        }
        if (v.is_number_integer() && v.get<std::int64_t>() < 0) {
            throw Error(ErrorKind::SpecError, "seed must be a non-negative integer", "seed");
        }
        s.seed = v.get<std::uint64_t>();
    }

    s.module = ConnectionModule::trivial(s.ctx, s.rank, s.level, s.degree_window);
    if (j.contains("theta_matrix")) {
        s.theta_text = string_matrix(j, "theta_matrix");
        if (s.theta_text.size() != s.rank) {
            throw Error(ErrorKind::SpecError,
                        "theta_matrix has " + std::to_string(s.theta_text.size()) + " rows, rank is " +
                            std::to_string(s.rank),
                        "rank");
        }
        for (std::size_t i = 0; i < s.rank; ++i) {
            if (s.theta_text[i].size() != s.rank) {
                throw Error(ErrorKind::SpecError,
                            "theta_matrix row " + std::to_string(i) + " has " + std::to_string(s.theta_text[i].size()) +
                                " entries, rank is " + std::to_string(s.rank),
                            "rank");
            }
            for (std::size_t k = 0; k < s.rank; ++k) {
                s.module.theta[i][k] = within_field("theta_matrix", [&] {
                    return QPolynomial::parse(s.ctx, s.theta_text[i][k], s.degree_window);
                });
            }
        }
    } else if (s.seed) {
        s.module.theta = random_nilpotent_theta(s.ctx, s.rank, s.level, s.degree_window, *s.seed);
        for (const auto& row : s.module.theta) {
            std::vector<std::string> r;
            for (const auto& e : row) r.push_back(e.to_string());
            s.theta_text.push_back(std::move(r));
        }
    } else {
        throw Error(ErrorKind::SpecError, "missing field theta_matrix (or a seed to draw one)", "theta_matrix");
    }
    return s;
}

struct AdicSpec {
    ModulePresentation module;
    MPoly f;
    MPoly g;
    int cap = 8;
    int n_max = 3;
    int formal_window = 3;
};

inline AdicSpec parse_adic_spec(const Json& j) {
    using namespace spec_detail;
    AdicSpec s;
    ModulePresentation& mp = s.module;
    mp.base = base_from_string(text(j, "base"));
    const std::int64_t p = integer(j, "p");
    if (p < 2 || p > 97 || !is_prime(static_cast<std::uint64_t>(p))) {
        throw Error(ErrorKind::SpecError, "p must be a prime in [2, 97]", "p");
    }
    mp.p = static_cast<std::uint64_t>(p);
    const std::int64_t n = integer_or(j, "n", 1);
    const std::int64_t m = integer_or(j, "m", 1);
    if (n < 1 || n > 16) throw Error(ErrorKind::SpecError, "n must lie in [1, 16]", "n");
    if (m < 1 || m > 16) throw Error(ErrorKind::SpecError, "m must lie in [1, 16]", "m");
    mp.n = static_cast<int>(n);
    mp.m = static_cast<int>(m);
    if (mp.base == BaseKind::Zpn || mp.base == BaseKind::W) {
        within_field("n", [&] { return checked_pow(mp.p, mp.n); });
    }
    const std::int64_t window = integer_or(j, "window", 12);
    if (window < 0 || window > 256) throw Error(ErrorKind::SpecError, "window must lie in [0, 256]", "window");
    mp.zq_window = static_cast<int>(window);

    const auto rel_text = j.contains("relations") ? string_matrix(j, "relations") : std::vector<std::vector<std::string>>{};
    if (j.contains("generators")) {
        const std::int64_t g = integer(j, "generators");
        if (g < 0 || g > 256) throw Error(ErrorKind::SpecError, "generators must lie in [0, 256]", "generators");
        mp.generators = static_cast<std::size_t>(g);
    } else if (!rel_text.empty()) {
        mp.generators = rel_text[0].size();
    } else {
        throw Error(ErrorKind::SpecError, "missing field generators (or relations to infer it)", "generators");
    }
    for (const auto& row : rel_text) {
        if (row.size() != mp.generators) {
            throw Error(ErrorKind::SpecError,
                        "relation row has " + std::to_string(row.size()) + " entries, expected " +
                            std::to_string(mp.generators),
                        "relations");
        }
        std::vector<MPoly> r;
        for (const auto& e : row) {
            MPoly a = within_field("relations", [&] { return MPoly::parse(e); });
            if (!a.only_q()) throw Error(ErrorKind::SpecError, "relation entries must be polynomials in q", "relations");
            r.push_back(std::move(a));
        }
        mp.relations.push_back(std::move(r));
    }
    auto element = [&](const char* name, const MPoly& fallback) {
        if (!j.contains(name)) return fallback;
        MPoly a = within_field(name, [&] { return MPoly::parse(text(j, name)); });
        if (!a.only_q()) throw Error(ErrorKind::SpecError, std::string(name) + " must be a polynomial in q", name);
        return a;
    };
    s.f = element("f", default_f(mp));
    s.g = element("g", default_g(mp));
    const std::int64_t cap = integer_or(j, "cap", 8);
    if (cap < 0 || cap > 64) throw Error(ErrorKind::SpecError, "cap must lie in [0, 64]", "cap");
    s.cap = static_cast<int>(cap);
    const std::int64_t n_max = integer_or(j, "n_max", 3);
    if (n_max < 1 || n_max > 16) throw Error(ErrorKind::SpecError, "n_max must lie in [1, 16]", "n_max");
    s.n_max = static_cast<int>(n_max);
    const std::int64_t fw = integer_or(j, "formal_window", 3);
    if (fw < 1 || fw > 16) throw Error(ErrorKind::SpecError, "formal_window must lie in [1, 16]", "formal_window");
    s.formal_window = static_cast<int>(fw);
    return s;
}

}  // namespace qprism
