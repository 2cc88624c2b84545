#pragma once

#include <string>
#include <variant>

#include "frac/rational.hpp"

namespace frac {

/// Either an exact rational or a double, depending on the function's value
/// kind. Exact values never silently degrade to floating point.
class Value {
public:
    Value() : v_(Rational(0)) {}
    Value(Rational q) : v_(std::move(q)) {}
    Value(double d) : v_(d) {}

    static Value integer(long n) { return Value(Rational(BigInt(n))); }

    bool is_exact() const { return std::holds_alternative<Rational>(v_); }

    /// Throws ErrorKind::Domain if the value is not exact.
    const Rational& exact() const;

    double to_double() const;

    /// Exact values as "p/q", reals as the shortest round-trip decimal.
    std::string to_string() const;

    friend bool operator==(const Value& a, const Value& b);

private:
    std::variant<Rational, double> v_;
};

/// Shortest decimal that round-trips to the same double.
std::string format_double(double d);

} // namespace frac
