#pragma once

namespace frac::detail {

struct ZetaPair {
    long double value;      // zeta(s)
    long double derivative; // zeta'(s)
};

/// zeta(s) and zeta'(s) for real s >= 1.5 by Euler-Maclaurin summation.
ZetaPair zeta_with_derivative(long double s);

inline long double zeta(long double s) { return zeta_with_derivative(s).value; }

} // namespace frac::detail
