#pragma once

#include <cstdint>
#include <string>

#include "frac/arithfn.hpp"
#include "frac/rational.hpp"
#include "frac/value.hpp"

namespace frac::fracsum {

using arithfn::ArithmeticFunction;
using arithfn::FunctionTable;

/// Centered sawtooth psi(t) = t - floor(t) - 1/2, in [-1/2, 1/2).
struct PsiValue {
    Rational value;
    double float_view;
};

PsiValue psi(std::int64_t num, std::int64_t den);

inline constexpr std::int64_t kNaiveCap = 10'000'000;
inline constexpr std::int64_t kBlockedDefaultCap = 1'000'000'000;
inline constexpr std::int64_t kBlockedHardCap = 1'000'000'000'000;
inline constexpr std::int64_t kDecomposeCap = 1'000'000;

/// S_f(x) = sum_{n<=x} f(floor(x/n)) by direct summation, x <= 10^7.
Value naive_sum(const ArithmeticFunction& f, std::int64_t x);

/// Same, reading f from a caller-provided table (table.limit() >= x). Lets a
/// batch of naive sums share one sieve.
Value naive_sum(const FunctionTable& table, std::int64_t x);

struct BlockedOptions {
    std::int64_t cap = kBlockedDefaultCap;
};

/// S_f(x) in O(sqrt x): the first floor(sqrt x) terms by point evaluation,
/// the rest grouped by the value m = floor(x/n) with multiplicity
/// floor(x/m) - floor(x/(m+1)).
Value blocked_sum(const ArithmeticFunction& f, std::int64_t x, BlockedOptions opts = {});

/// Terms of the exact split of S_f(x) at integer A <= B <= floor(sqrt x).
///
/// With T'_d = sum_{n<=x/B} f(n) psi(x/(n+d)) the identity
///   S_f(x) = head + M + T'_1 - T'_0
/// holds exactly; `residual` is the defect and is zero for exact kinds.
/// T'_d splits as t_head[d] (n <= A) plus t_tail[d] (A < n <= x/B).
struct DecompositionReport {
    std::string f;
    std::int64_t x = 0;
    std::int64_t A = 0;
    std::int64_t B = 0;
    Value head;        // sum_{n<B} f(floor(x/n))
    Value M;           // x sum_{n<=x/B} f(n)/(n(n+1))
    Value T[2];        // T_d(A,B), the tail ranges
    Value T_full[2];   // T'_d, the full ranges used in the identity
    Value T_head[2];   // sum_{n<=A} f(n) psi(x/(n+d))
    Value E1;          // sum_{n<=A} |f(n)|
    Value E2;          // sum_{n<B} |f(floor(x/n))|
    Value S_exact;
    Value residual;
    bool exact = true;
};

DecompositionReport decompose(const ArithmeticFunction& f, std::int64_t x, std::int64_t A, std::int64_t B);

/// Mean-value constant C_f = sum f(n)/(n(n+1)).
struct CfResult {
    std::string f;
    double value = 0.0;
    /// Length of the explicitly summed head.
    std::int64_t truncation_N = 0;
    /// Bound on |C_f - value|: analytic remainder plus a rounding allowance.
    double tail_bound = 0.0;
};

/// C_f to within `tol`. Sums n <= N directly and evaluates the tail
/// sum_{n>N} f(n)/(n(n+1)) = sum_{j>=2} (-1)^j sum_{n>N} f(n) n^{-j}
/// through the Dirichlet series of f at the integers j.
CfResult compute_cf(const ArithmeticFunction& f, double tol);

/// As compute_cf, but a tolerance below the attainable floor yields the
/// floor-accuracy result (see tail_bound) instead of an error.
CfResult compute_cf_clamped(const ArithmeticFunction& f, double tol);

/// Plain truncated sum sum_{n<=N} f(n)/(n(n+1)) (compensated), with the
/// elementary tail envelope K N^{a-1} (log N)^t.
CfResult cf_partial_sum(const ArithmeticFunction& f, std::int64_t N);

/// Elementary bound on |sum_{n>N} f(n)/(n(n+1))|.
double cf_tail_envelope(const ArithmeticFunction& f, std::int64_t N);

/// x^{(1+alpha)/2} (log x)^theta.
double hyperbola_error_bound(const ArithmeticFunction& f, std::int64_t x);
double hyperbola_error_bound(double alpha, double theta, std::int64_t x);

} // namespace frac::fracsum
