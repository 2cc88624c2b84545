#include "frac/expsum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "frac/arithfn.hpp"
#include "frac/error.hpp"
#include "numeric.hpp"

namespace frac::expsum {

namespace {

using arithfn::ArithmeticFunction;

void check_query(std::int64_t x, std::int64_t D, int delta) {
    if (x < 1) raise(ErrorKind::Domain, "x must be >= 1");
    if (D < 2) raise(ErrorKind::Parameter, "D must be >= 2");
    if (D > kMaxD) raise(ErrorKind::Resource, "D exceeds the direct-evaluation cap 10^6");
    if (delta != 0 && delta != 1) raise(ErrorKind::Parameter, "delta must be 0 or 1");
}

/// (h x mod m) / m in [0, 1) from exact integer reduction.
long double reduced_phase(std::int64_t x, std::int64_t h, std::int64_t m) {
    const __int128 hm = h % m, xm = x % m;
    __int128 r = (hm * xm) % m;
    if (r < 0) r += m;
    return static_cast<long double>(static_cast<std::int64_t>(r)) / static_cast<long double>(m);
}

std::complex<double> sum_with_table(const arithfn::FunctionTable& tau, std::int64_t x, std::int64_t h,
                                    std::int64_t D, int delta) {
    constexpr long double two_pi = 2.0L * std::numbers::pi_v<long double>;
    detail::ComplexSum s;
    for (std::int64_t n = D + 1; n <= 2 * D; ++n) {
        const long double t = two_pi * reduced_phase(x, h, n + delta);
        const auto w = static_cast<long double>(tau.integer_at(n));
        s.add({static_cast<double>(w * std::cos(t)), static_cast<double>(w * std::sin(t))});
    }
    return s.value();
}

BigInt big(std::int64_t v) { return BigInt(static_cast<long>(v)); }

} // namespace

std::complex<double> exp_sum_tau_signed(std::int64_t x, std::int64_t h, std::int64_t D, int delta) {
    check_query(x, D, delta);
    const auto tau = arithfn::sieve_range(ArithmeticFunction::tau(), 2 * D);
    return sum_with_table(tau, x, h, D, delta);
}

std::complex<double> exp_sum_tau(const ExpSumQuery& q) {
    if (q.h < 0) raise(ErrorKind::Parameter, "h must be >= 0");
    return exp_sum_tau_signed(q.x, q.h, q.D, q.delta);
}

bool jutila_admissible(std::int64_t x, std::int64_t h, std::int64_t D) {
    if (h < 1 || x < 1 || D < 1) return false;
    const BigInt B = big(h) * big(x);
    BigInt d7, d5, b4, b2;
    mpz_pow_ui(d7.get_mpz_t(), big(D).get_mpz_t(), 7);
    mpz_pow_ui(d5.get_mpz_t(), big(D).get_mpz_t(), 5);
    mpz_pow_ui(b4.get_mpz_t(), B.get_mpz_t(), 4);
    mpz_pow_ui(b2.get_mpz_t(), B.get_mpz_t(), 2);
    return d7 <= b4 && b2 <= d5;
}

std::pair<std::int64_t, std::int64_t> jutila_h_range(std::int64_t x, std::int64_t D) {
    if (x < 1 || D < 1) raise(ErrorKind::Domain, "x and D must be positive");
    // hx <= D^{5/2}: h_max = floor(sqrt(D^5) / x); D^{7/4} <= hx: h_min = ceil(root4(D^7) / x)
    BigInt d5, d7, s, r4;
    mpz_pow_ui(d5.get_mpz_t(), big(D).get_mpz_t(), 5);
    mpz_pow_ui(d7.get_mpz_t(), big(D).get_mpz_t(), 7);
    mpz_sqrt(s.get_mpz_t(), d5.get_mpz_t());
    BigInt hi = s / big(x);
    mpz_root(r4.get_mpz_t(), d7.get_mpz_t(), 4);
    BigInt lo = (r4 + big(x) - 1) / big(x);
    if (lo < 1) lo = 1;
    // nudge onto the exact predicate (root and sqrt are floors)
    while (lo > 1 && jutila_admissible(x, BigInt(lo - 1).get_si(), D)) --lo;
    while (lo <= hi && !jutila_admissible(x, lo.get_si(), D)) ++lo;
    if (!hi.fits_slong_p()) hi = BigInt(std::numeric_limits<long>::max());
    return {lo.get_si(), hi.get_si()};
}

JutilaCheck jutila_check(const ExpSumQuery& q) {
    if (q.h < 1) raise(ErrorKind::Parameter, "jutila_check needs h >= 1 (F = 0 violates D^{3/4} <= F)");
    JutilaCheck out;
    out.query = q;
    const auto d = static_cast<double>(q.D);
    out.F = static_cast<double>(static_cast<long double>(q.h) * q.x / q.D);
    out.admissible = jutila_admissible(q.x, q.h, q.D);
    out.sum_modulus = std::abs(exp_sum_tau(q));
    out.bound_value = std::sqrt(d) * std::cbrt(out.F);
    out.ratio = out.sum_modulus / out.bound_value;
    return out;
}

std::vector<std::int64_t> sample_h(std::int64_t lo, std::int64_t hi, int count) {
    std::vector<std::int64_t> out;
    if (lo > hi || count < 1) return out;
    if (count == 1 || lo == hi) return {lo};
    const double ratio = std::log(static_cast<double>(hi) / static_cast<double>(lo));
    for (int i = 0; i < count; ++i) {
        auto h = static_cast<std::int64_t>(std::llround(static_cast<double>(lo) * std::exp(ratio * i / (count - 1))));
        h = std::clamp(h, lo, hi);
        if (out.empty() || h > out.back()) out.push_back(h);
    }
    if (out.back() != hi) out.push_back(hi);
    return out;
}

std::vector<JutilaCheck> jutila_grid(const std::vector<std::int64_t>& xs, const std::vector<std::int64_t>& Ds,
                                     int h_samples) {
    std::vector<JutilaCheck> out;
    for (std::int64_t x : xs) {
        for (std::int64_t D : Ds) {
            const auto [lo, hi] = jutila_h_range(x, D);
            const auto tau = arithfn::sieve_range(ArithmeticFunction::tau(), 2 * D);
            for (std::int64_t h : sample_h(lo, hi, h_samples)) {
                for (int delta = 0; delta <= 1; ++delta) {
                    JutilaCheck c;
                    c.query = {x, h, D, delta};
                    c.F = static_cast<double>(static_cast<long double>(h) * x / D);
                    c.admissible = jutila_admissible(x, h, D);
                    c.sum_modulus = std::abs(sum_with_table(tau, x, h, D, delta));
                    c.bound_value = std::sqrt(static_cast<double>(D)) * std::cbrt(c.F);
                    c.ratio = c.sum_modulus / c.bound_value;
                    out.push_back(c);
                }
            }
        }
    }
    return out;
}

BordellesResult bordelles_rhs(std::int64_t x, std::int64_t N, std::int64_t H) {
    if (x < 1) raise(ErrorKind::Domain, "x must be >= 1");
    if (H < 1) raise(ErrorKind::Parameter, "H must be >= 1");
    const __int128 n = N;
    if (N < 1 || n * n * n < x || n * n >= x)
        raise(ErrorKind::Parameter, "N must satisfy N in [x^{1/3}, x^{1/2}); got N = " + std::to_string(N) +
                                        " for x = " + std::to_string(x));
    if (x / N > kBordellesCap) raise(ErrorKind::Resource, "x / N exceeds the cap 2*10^6");

    BordellesResult out{x, N, H, 0.0, 0.0, 0.0, {}};
    std::vector<std::int64_t> Ds;
    for (std::int64_t D = 2 * N; static_cast<__int128>(D) * N <= x; D *= 2) Ds.push_back(D);
    if (!Ds.empty()) {
        const auto tau = arithfn::sieve_range(ArithmeticFunction::tau(), 2 * Ds.back() + 1);
        for (std::int64_t D : Ds) {
            for (int delta = 0; delta <= 1; ++delta) {
                BordellesTerm t;
                t.D = D;
                t.delta = delta;
                t.D_over_H = static_cast<double>(D) / static_cast<double>(H);
                detail::NeumaierSum b;
                b.add(t.D_over_H);
                for (std::int64_t h = 1; h <= H; ++h) {
                    const double term = std::abs(sum_with_table(tau, x, h, D, delta)) / static_cast<double>(h);
                    t.h_terms.push_back(term);
                    b.add(term);
                    out.largest_h_term = std::max(out.largest_h_term, term);
                }
                t.bracket = b.value();
                out.max_bracket = std::max(out.max_bracket, t.bracket);
                out.terms.push_back(std::move(t));
            }
        }
    }
    out.rhs = static_cast<double>(N) + out.max_bracket;
    return out;
}

Params511 params_511(std::int64_t x) {
    if (x < 2) raise(ErrorKind::Domain, "x must be >= 2");
    Params511 p;
    p.x = x;
    const auto lx = std::log(static_cast<long double>(x));
    p.N = static_cast<double>(std::exp(lx * 5 / 11));
    p.H = static_cast<double>(std::exp(lx * 3 / 8 - lx * 5 / 11 * 5 / 8));
    const Rational n_exp(5, 11);
    p.x_over_N_exponent = 1 - n_exp;
    p.D_limit_exponent = Rational(4, 7);
    p.D_condition = p.x_over_N_exponent < p.D_limit_exponent;
    p.H_exponent = Rational(3, 8) - n_exp * Rational(5, 8);
    p.H_limit_exponent = Rational(5, 2) * n_exp - 1;
    p.H_condition = p.H_exponent <= p.H_limit_exponent;
    return p;
}

} // namespace frac::expsum
