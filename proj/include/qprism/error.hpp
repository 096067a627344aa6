#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace qprism {

enum class ErrorKind {
    NotAUnit,
    InvalidArgs,
    PrecisionExhausted,
    OrderOverflow,
    WindowTooSmall,
    RankMismatch,
    CapExceeded,
    WrongLevel,
    NotAChainMap,
    WindowUnstable,
    NotBounded,
    ParseError,
    SpecError,
    DimensionCap,
};

inline const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::NotAUnit: return "NotAUnit";
        case ErrorKind::InvalidArgs: return "InvalidArgs";
        case ErrorKind::PrecisionExhausted: return "PrecisionExhausted";
        case ErrorKind::OrderOverflow: return "OrderOverflow";
        case ErrorKind::WindowTooSmall: return "WindowTooSmall";
        case ErrorKind::RankMismatch: return "RankMismatch";
        case ErrorKind::CapExceeded: return "CapExceeded";
        case ErrorKind::WrongLevel: return "WrongLevel";
        case ErrorKind::NotAChainMap: return "NotAChainMap";
        case ErrorKind::WindowUnstable: return "WindowUnstable";
        case ErrorKind::NotBounded: return "NotBounded";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::SpecError: return "SpecError";
        case ErrorKind::DimensionCap: return "DimensionCap";
    }
    return "Unknown";
}

/// Every failure raised by the library carries a kind, and spec-file errors
/// additionally name the offending field.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message, std::string field = {})
        : std::runtime_error(std::string(to_string(kind)) + ": " + message),
          kind_(kind),
          field_(std::move(field)) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }
    [[nodiscard]] const std::string& field() const noexcept { return field_; }

private:
    ErrorKind kind_;
    std::string field_;
};

}  // namespace qprism
