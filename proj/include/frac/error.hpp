#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace frac {

enum class ErrorKind {
    Domain,           // argument outside the mathematical domain
    Parameter,        // argument violates an operation's hypothesis
    Resource,         // configured cap exceeded
    Unsupported,      // function lacks the required structure (e.g. no g-side)
    Divergence,       // series does not converge (alpha >= 1)
    InsufficientData, // too few usable samples
    CatalogMiss,      // no catalogued exponent for the function
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg)
        : std::runtime_error(msg), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] void raise(ErrorKind kind, const std::string& msg);

} // namespace frac
