#include <cmath>
#include <random>
#include <sstream>

#include "frac/arithfn.hpp"
#include "frac/cli.hpp"
#include "frac/exppairs.hpp"
#include "frac/fracsum.hpp"

namespace frac::cli {

namespace {

using arithfn::ArithmeticFunction;

class Suite {
public:
    Suite(int id, std::string name) { r_.id = id, r_.name = std::move(name); }

    void check(bool ok, const auto& describe) {
        ++r_.checks;
        if (ok) return;
        if (r_.failures++ == 0) {
            std::ostringstream s;
            describe(s);
            r_.first_failure = s.str();
        }
    }

    SuiteResult finish() {
        r_.passed = r_.failures == 0 && r_.checks > 0;
        return r_;
    }

private:
    SuiteResult r_;
};

std::vector<ArithmeticFunction> exact_catalog() {
    std::vector<ArithmeticFunction> out;
    for (const auto& f : {ArithmeticFunction::one(), ArithmeticFunction::id(), ArithmeticFunction::tau(),
                          ArithmeticFunction::phi_over_n(), ArithmeticFunction::sigma_beta_norm(1),
                          ArithmeticFunction::squarefree(), ArithmeticFunction::kfree(3), ArithmeticFunction::mobius()})
        if (f.is_exact()) out.push_back(f);
    return out;
}

SuiteResult oracle_equivalence() {
    Suite s(1, "blocked_sum equals naive_sum");
    std::mt19937_64 rng(20240101);
    std::uniform_int_distribution<std::int64_t> dist(1, 10'000'000);
    std::vector<std::int64_t> random_x(100);
    for (auto& x : random_x) x = dist(rng);

    for (const auto& f : exact_catalog()) {
        {
            const auto table = arithfn::sieve_range(f, 10'000);
            for (std::int64_t x = 1; x <= 10'000; ++x)
                s.check(fracsum::naive_sum(table, x) == fracsum::blocked_sum(f, x),
                        [&](auto& o) { o << f.name() << " x=" << x; });
        }
        const auto table = arithfn::sieve_range(f, 10'000'000);
        for (std::int64_t x : random_x)
            s.check(fracsum::naive_sum(table, x) == fracsum::blocked_sum(f, x),
                    [&](auto& o) { o << f.name() << " x=" << x; });
    }
    return s.finish();
}

SuiteResult decomposition_residual() {
    Suite s(2, "decomposition residual vanishes");
    for (const auto& f : exact_catalog()) {
        for (std::int64_t x : {1000, 10'000, 100'000}) {
            const std::int64_t cube = arithfn::integer_root(x, 3), root = arithfn::integer_root(x, 2);
            for (std::int64_t B : {std::int64_t{2}, cube, root}) {
                const auto r = fracsum::decompose(f, x, 1, B);
                s.check(r.residual.is_exact() && r.residual.exact() == 0,
                        [&](auto& o) { o << f.name() << " x=" << x << " B=" << B; });
            }
        }
    }
    return s.finish();
}

SuiteResult exponent_pairs() {
    using namespace exppairs;
    Suite s(3, "exponent-pair algebra");
    auto p = ExponentPair::base();
    for (int n = 0; n <= 20; ++n) {
        s.check(p == lemma4_pair(n), [&](auto& o) { o << "iterated A != closed form at n=" << n; });
        Rational gap(BigInt(n + 2), pow2(static_cast<unsigned>(n + 2)) - 1);
        gap.canonicalize();
        const Rational expected = 1 - gap;
        s.check(theta_ratio(lemma4_pair(n)) == expected, [&](auto& o) { o << "theta_ratio at n=" << n; });
        s.check(theta_ratio(lemma4_pair(n)) < theta_ratio(lemma4_pair(n + 1)),
                [&](auto& o) { o << "theta_ratio not increasing at n=" << n; });
        const Rational mid = (interval_left(n) + interval_right(n)) / 2;
        const auto t1 = term_exponents(mid, n, b1(n));
        s.check(t1.e1 == t1.e2, [&](auto& o) { o << "e1 != e2 at b1, n=" << n; });
        const auto t2 = term_exponents(mid, n, b2(n, mid));
        s.check(t2.e1 == t2.e3, [&](auto& o) { o << "e1 != e3 at b2, n=" << n; });
        p = a_process(p);
    }
    for (int n = 0; n <= 50; ++n) s.check(b2_sup(n) <= b1(n), [&](auto& o) { o << "b2_sup > b1 at n=" << n; });
    return s.finish();
}

SuiteResult exponent_table() {
    using exppairs::theorem2_exponent;
    Suite s(4, "convolution exponent table");
    s.check(theorem2_exponent(0) == Rational(1, 3), [](auto& o) { o << "alpha=0"; });
    s.check(theorem2_exponent(Rational(1, 2)) == Rational(3, 5), [](auto& o) { o << "alpha=1/2"; });
    s.check(theorem2_exponent(Rational(1, 3)) == Rational(1, 2), [](auto& o) { o << "alpha=1/3"; });
    for (int k = 2; k <= 10; ++k) {
        const Rational kk(k);
        s.check(theorem2_exponent(1 / kk) == (1 + 1 / kk) / (3 - 1 / kk), [&](auto& o) { o << "k=" << k; });
    }
    return s.finish();
}

SuiteResult constants() {
    Suite s(5, "mean-value constants");
    const auto one = fracsum::compute_cf(ArithmeticFunction::one(), 1e-12);
    s.check(one.value == 1.0, [&](auto& o) { o << "C_one = " << one.value; });

    const auto tau = fracsum::compute_cf(ArithmeticFunction::tau(), 1e-8);
    const auto direct = fracsum::cf_partial_sum(ArithmeticFunction::tau(), 100'000'000);
    s.check(std::fabs(tau.value - direct.value) <= 1e-6,
            [&](auto& o) { o << "C_tau " << tau.value << " vs direct " << direct.value; });

    for (const auto& f : {ArithmeticFunction::tau(), ArithmeticFunction::phi_over_n(), ArithmeticFunction::sigma_beta_norm(1),
                          ArithmeticFunction::sigma_beta_norm(Rational(1, 2)), ArithmeticFunction::lambda(),
                          ArithmeticFunction::squarefree(), ArithmeticFunction::kfree(3), ArithmeticFunction::mobius()}) {
        for (double tol : {1e-4, 1e-6, 1e-8, 1e-10, 1e-12}) {
            const double a = fracsum::compute_cf(f, tol).value, b = fracsum::compute_cf(f, tol / 10).value;
            s.check(std::fabs(a - b) <= tol, [&](auto& o) { o << f.name() << " tol=" << tol; });
        }
    }
    return s.finish();
}

} // namespace

std::vector<SuiteResult> run_verify() {
    return {oracle_equivalence(), decomposition_residual(), exponent_pairs(), exponent_table(), constants()};
}

} // namespace frac::cli
