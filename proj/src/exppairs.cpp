#include "frac/exppairs.hpp"

#include "frac/error.hpp"

namespace frac::exppairs {

namespace {

void check_index(int n) {
    if (n < 0 || n > kMaxIndex)
        raise(ErrorKind::Parameter, "index n must lie in [0, " + std::to_string(kMaxIndex) + "], got " + std::to_string(n));
}

void check_alpha(const Rational& alpha) {
    if (alpha < 0 || alpha >= 1) raise(ErrorKind::Domain, "alpha must lie in [0, 1), got " + to_string(alpha));
}

Rational q(const BigInt& num, const BigInt& den) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

} // namespace

ExponentPair ExponentPair::base() { return {Rational(1, 2), Rational(1, 2), "(1/2,1/2)"}; }

ExponentPair a_process(const ExponentPair& p) {
    const Rational d = 2 * p.k + 2;
    return {p.k / d, (p.k + p.l + 1) / d, "A" + p.provenance};
}

ExponentPair b_process(const ExponentPair& p) {
    return {p.l - Rational(1, 2), p.k + Rational(1, 2), "B" + p.provenance};
}

ExponentPair lemma4_pair(int n) {
    check_index(n);
    const BigInt t = pow2(static_cast<unsigned>(n + 2));
    return {q(1, t - 2), q(t - n - 3, t - 2), std::string(static_cast<std::size_t>(n), 'A') + "(1/2,1/2)"};
}

Rational theta_ratio(const ExponentPair& p) { return p.l / (p.k + 1); }

Rational interval_left(int n) {
    if (n == 0) return 0; // sentinel (1, 0): 0 / (1 + 1)
    return interval_right(n - 1);
}

Rational interval_right(int n) {
    check_index(n);
    const BigInt t = pow2(static_cast<unsigned>(n + 2));
    return 1 - q(BigInt(n + 2), t - 1);
}

int interval_index(const Rational& alpha) {
    check_alpha(alpha);
    for (int n = 0; n <= kMaxIndex; ++n)
        if (alpha < interval_right(n)) return n;
    raise(ErrorKind::Parameter, "alpha " + to_string(alpha) + " lies beyond I_" + std::to_string(kMaxIndex));
}

Rational b1(int n) {
    check_index(n);
    const BigInt t = pow2(static_cast<unsigned>(n + 2));
    return q(BigInt(n + 2), n + t + 2);
}

Rational b2(int n, const Rational& alpha) {
    check_index(n);
    check_alpha(alpha);
    if (alpha < interval_left(n) || alpha >= interval_right(n))
        raise(ErrorKind::Parameter, "alpha " + to_string(alpha) + " is not in I_" + std::to_string(n));
    const auto p = lemma4_pair(n);
    const Rational gap = theta_ratio(p) - alpha;
    return gap / (gap + 1 / (p.k + 1));
}

Rational b2_sup(int n) {
    check_index(n);
    const Rational h(BigInt(1), pow2(static_cast<unsigned>(n + 1))); // 2^{-n-1}
    const Rational t(pow2(static_cast<unsigned>(n + 2)));
    return (n + h) / (n + t + 3 * h - 4);
}

Rational theorem2_exponent(const Rational& alpha) {
    check_alpha(alpha);
    return (1 + alpha) / (3 - alpha);
}

Rational optimal_a_exponent(const Rational& alpha) {
    check_alpha(alpha);
    return (1 - alpha) / (3 - alpha);
}

TermExponents term_exponents(const Rational& alpha, int n, const Rational& a_exp) {
    check_index(n);
    check_alpha(alpha);
    if (alpha < interval_left(n) || alpha >= interval_right(n))
        raise(ErrorKind::Parameter, "alpha " + to_string(alpha) + " is not in I_" + std::to_string(n));
    if (a_exp < 0 || a_exp > Rational(1, 2))
        raise(ErrorKind::Parameter, "a_exp must lie in [0, 1/2], got " + to_string(a_exp));
    const auto p = lemma4_pair(n);
    TermExponents out;
    out.e1 = theta_ratio(p) + a_exp * (p.k - p.l) / (p.k + 1);
    out.e2 = 1 - 2 * a_exp;
    out.e3 = alpha + a_exp * (1 - alpha);
    out.boundary = a_exp == Rational(1, 2);
    return out;
}

} // namespace frac::exppairs
