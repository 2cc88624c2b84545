#include "zeta.hpp"

#include <cmath>

#include "frac/error.hpp"

namespace frac::detail {

namespace {

// B_{2k} / (2k)! for k = 1..10.
constexpr long double kBernoulliOverFactorial[] = {
    1.0L / 6.0L / 2.0L,
    -1.0L / 30.0L / 24.0L,
    1.0L / 42.0L / 720.0L,
    -1.0L / 30.0L / 40320.0L,
    5.0L / 66.0L / 3628800.0L,
    -691.0L / 2730.0L / 479001600.0L,
    7.0L / 6.0L / 87178291200.0L,
    -3617.0L / 510.0L / 20922789888000.0L,
    43867.0L / 798.0L / 6402373705728000.0L,
    -174611.0L / 330.0L / 2432902008176640000.0L,
};

constexpr int kCutoff = 16;

} // namespace

ZetaPair zeta_with_derivative(long double s) {
    if (!(s >= 1.5L)) raise(ErrorKind::Domain, "zeta evaluation needs s >= 1.5");

    long double z = 0.0L, dz = 0.0L;
    for (int n = 1; n < kCutoff; ++n) {
        const long double term = std::pow(static_cast<long double>(n), -s);
        z += term;
        dz -= std::log(static_cast<long double>(n)) * term;
    }

    const long double N = kCutoff;
    const long double logN = std::log(N);
    const long double Ns = std::pow(N, -s);

    // integral tail N^{1-s}/(s-1)
    z += N * Ns / (s - 1.0L);
    dz += -N * Ns * logN / (s - 1.0L) - N * Ns / ((s - 1.0L) * (s - 1.0L));

    // endpoint N^{-s}/2
    z += Ns / 2.0L;
    dz -= logN * Ns / 2.0L;

    // B_{2k}/(2k)! * s(s+1)...(s+2k-2) * N^{-s-2k+1}
    long double rising = s;          // s(s+1)...(s+2k-2)
    long double rising_log_d = 1.0L / s; // sum of 1/(s+i)
    long double power = Ns / N;      // N^{-s-2k+1}
    for (int k = 1; k <= 10; ++k) {
        const long double c = kBernoulliOverFactorial[k - 1];
        const long double term = c * rising * power;
        z += term;
        dz += term * (rising_log_d - logN);

        const long double a = s + 2 * k - 1, b = s + 2 * k;
        rising *= a * b;
        rising_log_d += 1.0L / a + 1.0L / b;
        power /= N * N;
    }
    return {z, dz};
}

} // namespace frac::detail
