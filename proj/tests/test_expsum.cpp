#include "doctest.h"

#include <cmath>
#include <numbers>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "fixture.hpp"
#include "frac/error.hpp"
#include "frac/expsum.hpp"
#include "frac/fracsum.hpp"
#include "oracles.hpp"

using namespace frac;
using namespace frac::expsum;

namespace {

using big_float = boost::multiprecision::cpp_bin_float_50;

/// The same sum in 50-digit floating point, with the phase taken straight
/// from h x / (n + delta) (no integer reduction) and tau by trial division.
std::complex<double> reference_sum(std::int64_t x, std::int64_t h, std::int64_t D, int delta) {
    const big_float two_pi = 2 * boost::math::constants::pi<big_float>();
    big_float re = 0, im = 0;
    for (std::int64_t n = D + 1; n <= 2 * D; ++n) {
        const big_float t = big_float(h) * big_float(x) / big_float(n + delta);
        const big_float frac_part = t - floor(t);
        const big_float w = oracle::tau(n);
        re += w * cos(two_pi * frac_part);
        im += w * sin(two_pi * frac_part);
    }
    return {static_cast<double>(re), static_cast<double>(im)};
}

double tau_mass(std::int64_t D) {
    double s = 0;
    for (std::int64_t n = D + 1; n <= 2 * D; ++n) s += static_cast<double>(oracle::tau(n));
    return s;
}

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an error");
    return ErrorKind::Domain;
}

} // namespace

TEST_CASE("exp_sum_tau examples") {
    const auto zero = exp_sum_tau({123456, 0, 2, 0});
    CHECK(zero.real() == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(std::fabs(zero.imag()) < 1e-15);

    const double c = std::cos(2 * std::numbers::pi / 3), s = std::sin(2 * std::numbers::pi / 3);
    const auto one = exp_sum_tau({100, 1, 2, 0});
    CHECK(one.real() == doctest::Approx(2 * c + 3).epsilon(1e-14));
    CHECK(one.imag() == doctest::Approx(2 * s).epsilon(1e-14));

    const auto got = exp_sum_tau({100'000, 2, 50, 1});
    const auto want = reference_sum(100'000, 2, 50, 1);
    CHECK(std::abs(got - want) <= 1e-9 * std::abs(want));

    CHECK(kind_of([] { exp_sum_tau({100, 1, 2'000'000, 0}); }) == ErrorKind::Resource);
    CHECK(kind_of([] { exp_sum_tau({100, 1, 1, 0}); }) == ErrorKind::Parameter);
    CHECK(kind_of([] { exp_sum_tau({100, 1, 10, 2}); }) == ErrorKind::Parameter);
    CHECK(kind_of([] { exp_sum_tau({100, -1, 10, 0}); }) == ErrorKind::Parameter);
}

TEST_CASE("exp_sum_tau against extended precision") {
    struct Q {
        std::int64_t x, h, D;
        int delta;
    };
    for (const auto& q : {Q{1'000'000, 1, 1000, 0}, Q{10'000'000, 17, 700, 1}, Q{999'999'937, 12345, 300, 0},
                          Q{1'000'000'000'000, 999'999, 200, 1}, Q{1'000'000'000'000'000'000, 1, 150, 0}}) {
        CAPTURE(q.x);
        CAPTURE(q.h);
        const auto got = exp_sum_tau({q.x, q.h, q.D, q.delta});
        const auto want = reference_sum(q.x, q.h, q.D, q.delta);
        CHECK(std::abs(got - want) <= 1e-9 * tau_mass(q.D));
    }
}

TEST_CASE("triangle inequality, conjugate symmetry and zero frequency") {
    for (std::int64_t D : {2, 10, 97, 1000, 5000}) {
        CAPTURE(D);
        const double mass = tau_mass(D);
        for (std::int64_t h : {1, 3, 40, 12345}) {
            for (int delta = 0; delta <= 1; ++delta) {
                const auto z = exp_sum_tau({1'000'003, h, D, delta});
                CHECK(std::abs(z) <= mass * (1 + 1e-12));
                const auto w = exp_sum_tau_signed(1'000'003, -h, D, delta);
                CHECK(std::abs(w - std::conj(z)) <= 1e-12 * mass);
            }
        }
        const auto zero = exp_sum_tau({1'000'003, 0, D, 1});
        CHECK(std::fabs(zero.real() - mass) <= 1e-9 * mass);
        CHECK(zero.imag() == 0.0);
    }
}

TEST_CASE("jutila admissibility") {
    auto a = jutila_check({1'000'000, 1, 1000, 0});
    CHECK(a.F == doctest::Approx(1000.0));
    CHECK(a.admissible);
    CHECK(a.bound_value == doctest::Approx(std::sqrt(1000.0) * 10.0));
    CHECK(a.ratio == doctest::Approx(a.sum_modulus / a.bound_value));

    auto b = jutila_check({1'000'000, 40'000, 1000, 0});
    CHECK(b.F == doctest::Approx(4e7));
    CHECK_FALSE(b.admissible);
    CHECK(kind_of([] { jutila_check({1'000'000, 0, 1000, 0}); }) == ErrorKind::Parameter);

    // boundary cases of D^{3/4} <= F <= D^{3/2}, with D = 16: F in [8, 64], i.e. hx in [128, 1024]
    CHECK(jutila_admissible(128, 1, 16));
    CHECK_FALSE(jutila_admissible(127, 1, 16));
    CHECK(jutila_admissible(1024, 1, 16));
    CHECK_FALSE(jutila_admissible(1025, 1, 16));
    CHECK(jutila_admissible(512, 2, 16));

    for (std::int64_t x : {100'000, 1'000'000, 10'000'000}) {
        for (std::int64_t D : {100, 1000, 10'000}) {
            const auto [lo, hi] = jutila_h_range(x, D);
            CAPTURE(x);
            CAPTURE(D);
            if (lo > hi) {
                CHECK_FALSE(jutila_admissible(x, 1, D));
                continue;
            }
            CHECK(jutila_admissible(x, lo, D));
            CHECK(jutila_admissible(x, hi, D));
            CHECK_FALSE(jutila_admissible(x, hi + 1, D));
            if (lo > 1) CHECK_FALSE(jutila_admissible(x, lo - 1, D));
        }
    }
}

TEST_CASE("sample_h") {
    CHECK(sample_h(1, 1, 5) == std::vector<std::int64_t>{1});
    CHECK(sample_h(5, 4, 5).empty());
    const auto s = sample_h(1, 100'000, 8);
    CHECK(s.front() == 1);
    CHECK(s.back() == 100'000);
    CHECK(std::is_sorted(s.begin(), s.end()));
    CHECK(sample_h(3, 5, 8) == std::vector<std::int64_t>{3, 4, 5});
}

TEST_CASE("jutila ratio stays bounded over the admissible grid") {
    const auto grid = jutila_grid({100'000, 1'000'000, 10'000'000}, {100, 1000, 10'000}, 8);
    REQUIRE(!grid.empty());
    double worst = 0;
    for (const auto& c : grid) {
        CHECK(c.admissible);
        worst = std::max(worst, c.ratio);
    }
    MESSAGE("max ratio over " << grid.size() << " admissible queries: " << worst);
    CHECK(fixture::stable("jutila_ratio_max", worst));
}

TEST_CASE("bordelles_rhs examples") {
    auto r1 = bordelles_rhs(10'000, 22, 1);
    CHECK(r1.max_bracket > 0);
    CHECK(std::isfinite(r1.rhs));
    CHECK(r1.rhs == doctest::Approx(22 + r1.max_bracket));
    REQUIRE(r1.terms.size() == 8); // D = 44, 88, 176, 352; delta = 0, 1
    CHECK(r1.terms.front().D == 44);
    CHECK(r1.terms.back().D == 352);

    auto r2 = bordelles_rhs(10'000, 22, 2);
    double h2 = 0;
    for (const auto& t : r2.terms) h2 = std::max(h2, t.h_terms[1]);
    CHECK(r2.max_bracket <= r1.max_bracket + h2);

    // each bracket is D/H + sum (1/h) |S_h|, against an independent re-summation
    for (const auto& t : r2.terms) {
        double expected = static_cast<double>(t.D) / 2;
        for (std::int64_t h = 1; h <= 2; ++h) expected += std::abs(reference_sum(10'000, h, t.D, t.delta)) / h;
        CHECK(t.bracket == doctest::Approx(expected).epsilon(1e-10));
    }

    CHECK(kind_of([] { bordelles_rhs(10'000, 10, 1); }) == ErrorKind::Parameter);
    CHECK(kind_of([] { bordelles_rhs(10'000, 100, 1); }) == ErrorKind::Parameter);
    CHECK(kind_of([] { bordelles_rhs(10'000, 22, 0); }) == ErrorKind::Parameter);
    CHECK(kind_of([] { bordelles_rhs(100'000'000'000'000, 50'000, 1); }) == ErrorKind::Resource);
    try {
        bordelles_rhs(10'000, 10, 1);
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("N in [x^{1/3}, x^{1/2})") != std::string::npos);
    }
    // x^{1/3} <= N exactly at a cube
    CHECK_NOTHROW(bordelles_rhs(1'000'000, 100, 1));
}

TEST_CASE("bordelles_rhs is nearly monotone in H") {
    for (std::int64_t H : {1, 2, 4, 8}) {
        const auto a = bordelles_rhs(100'000, 50, H), b = bordelles_rhs(100'000, 50, 2 * H);
        // every new h-term with H < h <= 2H, at its worst (D, delta)
        double added = 0;
        for (std::size_t h = static_cast<std::size_t>(H); h < static_cast<std::size_t>(2 * H); ++h) {
            double worst = 0;
            for (const auto& t : b.terms) worst = std::max(worst, t.h_terms[h]);
            added += worst;
        }
        CAPTURE(H);
        CHECK(b.max_bracket <= a.max_bracket + added + 1e-9 * a.max_bracket);
        if (H == 1) CHECK(b.max_bracket <= a.max_bracket + b.largest_h_term);
    }
}

TEST_CASE("bordelles_rhs tracks the true error of S_tau") {
    const std::int64_t x = 1'000'000, N = 100;
    const auto r = bordelles_rhs(x, N, 4);
    const double S = fracsum::blocked_sum(arithfn::ArithmeticFunction::tau(), x).to_double();
    const double C = fracsum::compute_cf(arithfn::ArithmeticFunction::tau(), 1e-12).value;
    const double err = std::fabs(S - C * static_cast<double>(x));
    const double c = err / (static_cast<double>(N) + r.max_bracket);
    MESSAGE("|S - C x| = " << err << ", N + v = " << N + r.max_bracket << ", c = " << c);
    CHECK(c < 1.0);
    CHECK(fixture::stable("bordelles_c_x1e6_N100_H4", c));
}

TEST_CASE("params_511") {
    auto p = params_511(100'000'000'000);
    CHECK(p.N == doctest::Approx(1e5).epsilon(1e-12));
    CHECK(p.H == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(p.x_over_N_exponent == Rational(6, 11));
    CHECK(p.D_limit_exponent == Rational(4, 7));
    CHECK(p.D_condition);
    CHECK(p.H_exponent == Rational(1, 11));
    CHECK(p.H_limit_exponent == Rational(3, 22));
    CHECK(p.H_condition);
    CHECK(kind_of([] { params_511(1); }) == ErrorKind::Domain);
    // H <= D^{5/2} / x at the worst case D = N, numerically
    for (std::int64_t x : {std::int64_t{1000}, std::int64_t{1'000'000}, std::int64_t{1'000'000'000'000}}) {
        const auto q = params_511(x);
        CHECK(q.H <= std::pow(q.N, 2.5) / static_cast<double>(x));
    }
}
