#pragma once

#include <string>

#include "frac/rational.hpp"

namespace frac::exppairs {

/// Exponent pair (k, l) with the word of processes that produced it from
/// (1/2, 1/2), e.g. "AAB(1/2,1/2)". Pairs are applied right to left.
struct ExponentPair {
    Rational k;
    Rational l;
    std::string provenance;

    /// The starting pair (1/2, 1/2).
    static ExponentPair base();

    friend bool operator==(const ExponentPair& a, const ExponentPair& b) { return a.k == b.k && a.l == b.l; }
};

inline constexpr int kMaxIndex = 64;

/// (k/(2k+2), (k+l+1)/(2k+2)).
ExponentPair a_process(const ExponentPair& p);

/// (l - 1/2, k + 1/2); an involution.
ExponentPair b_process(const ExponentPair& p);

/// n-fold A process applied to (1/2, 1/2), in closed form. 0 <= n <= 64.
ExponentPair lemma4_pair(int n);

/// l / (k + 1).
Rational theta_ratio(const ExponentPair& p);

/// Left endpoint of I_n, i.e. the ratio of the pair with index n - 1. The
/// pair below index 0 is the sentinel (1, 0), which is not an exponent pair
/// and never leaves this module.
Rational interval_left(int n);
/// Right endpoint of I_n.
Rational interval_right(int n);

/// The n with alpha in I_n = [interval_left(n), interval_right(n)).
int interval_index(const Rational& alpha);

/// Exponent of A below which E_1 <= E_2.
Rational b1(int n);

/// Exponent of A above which E_1 <= E_3; alpha must lie in I_n.
Rational b2(int n, const Rational& alpha);

/// alpha-free upper bound for b2(n, .) on I_n.
Rational b2_sup(int n);

/// (1 + alpha) / (3 - alpha).
Rational theorem2_exponent(const Rational& alpha);

/// (1 - alpha) / (3 - alpha).
Rational optimal_a_exponent(const Rational& alpha);

struct TermExponents {
    Rational e1, e2, e3;
    /// Set when a_exp = 1/2, the closed endpoint admitted only for balancing.
    bool boundary = false;
};

/// x-exponents of E_1, E_2, E_3 for A = x^a_exp. Log factors are not tracked.
TermExponents term_exponents(const Rational& alpha, int n, const Rational& a_exp);

} // namespace frac::exppairs
