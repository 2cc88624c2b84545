#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "frac/rational.hpp"

namespace frac::expsum {

/// sum over D < n <= 2D of tau(n) e(h x / (n + delta)), with e(t) = exp(2 pi i t).
struct ExpSumQuery {
    std::int64_t x = 0;
    std::int64_t h = 0;
    std::int64_t D = 2;
    int delta = 0;
};

inline constexpr std::int64_t kMaxD = 1'000'000;
inline constexpr std::int64_t kBordellesCap = 2'000'000; // on x / N

/// Direct evaluation. The phase h x mod (n + delta) is reduced in integer
/// arithmetic first, so h x may be as large as 10^18.
std::complex<double> exp_sum_tau(const ExpSumQuery& q);

/// Same sum with a signed frequency; h < 0 gives the conjugate of -h.
std::complex<double> exp_sum_tau_signed(std::int64_t x, std::int64_t h, std::int64_t D, int delta);

struct JutilaCheck {
    ExpSumQuery query;
    double F = 0;           // h x / D
    bool admissible = false; // D^{3/4} <= F <= D^{3/2}, decided exactly
    double sum_modulus = 0;
    double bound_value = 0; // D^{1/2} F^{1/3}
    double ratio = 0;       // sum_modulus / bound_value
};

/// D^7 <= (h x)^4 and (h x)^2 <= D^5, in exact integer arithmetic.
bool jutila_admissible(std::int64_t x, std::int64_t h, std::int64_t D);

/// Requires h >= 1.
JutilaCheck jutila_check(const ExpSumQuery& q);

/// Smallest and largest h with (x, h, D) admissible; empty (first > second) if none.
std::pair<std::int64_t, std::int64_t> jutila_h_range(std::int64_t x, std::int64_t D);

/// Up to `count` distinct h values spread geometrically over [lo, hi], endpoints included.
std::vector<std::int64_t> sample_h(std::int64_t lo, std::int64_t hi, int count);

/// jutila_check over every (x, D, sampled admissible h, delta), ordered by
/// (x, D, h, delta). Pairs (x, D) with no admissible h contribute nothing.
std::vector<JutilaCheck> jutila_grid(const std::vector<std::int64_t>& xs, const std::vector<std::int64_t>& Ds,
                                     int h_samples);

struct BordellesTerm {
    std::int64_t D = 0;
    int delta = 0;
    double D_over_H = 0;
    std::vector<double> h_terms; // (1/h) |sum|, h = 1..H
    double bracket = 0;          // D/H + sum of h_terms
};

struct BordellesResult {
    std::int64_t x = 0, N = 0, H = 0;
    double max_bracket = 0;           // 0 when no dyadic D fits in (N, x/N]
    double rhs = 0;                   // N + max_bracket; the x^eps factors are left to the caller
    double largest_h_term = 0;
    std::vector<BordellesTerm> terms; // ordered by (D, delta)
};

/// Right-hand side of the truncated-Fourier error bound for S_tau with
/// eps = 0, maximised over dyadic D = N 2^j in (N, x/N] and delta in {0, 1}.
/// Requires x^{1/3} <= N < x^{1/2}, x / N <= 2 10^6 and H >= 1.
BordellesResult bordelles_rhs(std::int64_t x, std::int64_t N, std::int64_t H);

struct Params511 {
    std::int64_t x = 0;
    double N = 0; // x^{5/11}
    double H = 0; // x^{3/8} N^{-5/8} = x^{1/11}
    Rational x_over_N_exponent;  // 6/11
    Rational D_limit_exponent;   // 4/7
    bool D_condition = false;    // 6/11 < 4/7
    Rational H_exponent;         // 1/11
    Rational H_limit_exponent;   // (5/2)(5/11) - 1 = 3/22, worst case D = N
    bool H_condition = false;    // 1/11 <= 3/22
};

Params511 params_511(std::int64_t x);

} // namespace frac::expsum
