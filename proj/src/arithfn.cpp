#include "frac/arithfn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "frac/error.hpp"
#include "numeric.hpp"

namespace frac::arithfn {

std::string_view to_string(FunctionId id) {
    switch (id) {
    case FunctionId::One: return "one";
    case FunctionId::Id: return "id";
    case FunctionId::Tau: return "tau";
    case FunctionId::PhiOverN: return "phi_over_n";
    case FunctionId::SigmaBetaNorm: return "sigma_beta_norm";
    case FunctionId::Lambda: return "lambda";
    case FunctionId::Squarefree: return "squarefree";
    case FunctionId::KFree: return "kfree";
    case FunctionId::Mobius: return "mobius";
    }
    return "?";
}

std::string_view to_string(ValueKind kind) {
    switch (kind) {
    case ValueKind::Integer: return "integer";
    case ValueKind::ExactRational: return "exact_rational";
    case ValueKind::Real: return "real";
    }
    return "?";
}

ArithmeticFunction ArithmeticFunction::one() { return {FunctionId::One, Rational(0), 0}; }
ArithmeticFunction ArithmeticFunction::id() { return {FunctionId::Id, Rational(0), 0}; }
ArithmeticFunction ArithmeticFunction::tau() { return {FunctionId::Tau, Rational(0), 0}; }
ArithmeticFunction ArithmeticFunction::phi_over_n() { return {FunctionId::PhiOverN, Rational(0), 0}; }
ArithmeticFunction ArithmeticFunction::lambda() { return {FunctionId::Lambda, Rational(0), 0}; }
ArithmeticFunction ArithmeticFunction::squarefree() { return {FunctionId::Squarefree, Rational(0), 2}; }
ArithmeticFunction ArithmeticFunction::mobius() { return {FunctionId::Mobius, Rational(0), 0}; }

ArithmeticFunction ArithmeticFunction::sigma_beta_norm(const Rational& beta) {
    if (beta <= 0 || beta > 1)
        raise(ErrorKind::Domain, "sigma_beta_norm needs beta in (0, 1], got " + frac::to_string(beta));
    return {FunctionId::SigmaBetaNorm, beta, 0};
}

ArithmeticFunction ArithmeticFunction::kfree(int k) {
    if (k < 2) raise(ErrorKind::Domain, "kfree needs k >= 2, got " + std::to_string(k));
    return {FunctionId::KFree, Rational(0), k};
}

ArithmeticFunction ArithmeticFunction::from_name(std::string_view name, const Rational& beta, int k) {
    if (name == "one") return one();
    if (name == "id") return id();
    if (name == "tau") return tau();
    if (name == "phi_over_n" || name == "phi") return phi_over_n();
    if (name == "sigma_beta_norm" || name == "sigma") return sigma_beta_norm(beta);
    if (name == "lambda") return lambda();
    if (name == "squarefree") return squarefree();
    if (name == "kfree") return kfree(k);
    if (name == "mobius" || name == "mu") return mobius();
    raise(ErrorKind::Domain, "unknown function '" + std::string(name) + "'");
}

Growth ArithmeticFunction::growth() const {
    switch (id_) {
    case FunctionId::Id: return {Rational(1), Rational(0)};
    case FunctionId::Lambda: return {Rational(0), Rational(1)};
    // tau and sigma_beta_norm are << n^eps; catalogued with alpha = 0.
    default: return {Rational(0), Rational(0)};
    }
}

bool ArithmeticFunction::has_g_side() const {
    switch (id_) {
    case FunctionId::One:
    case FunctionId::PhiOverN:
    case FunctionId::SigmaBetaNorm:
    case FunctionId::Squarefree:
    case FunctionId::KFree: return true;
    default: return false;
    }
}

Growth ArithmeticFunction::g_growth() const {
    switch (id_) {
    case FunctionId::One: return {Rational(0), Rational(0)};
    case FunctionId::PhiOverN: return {Rational(0), Rational(1)};
    case FunctionId::SigmaBetaNorm: return {Rational(1) - beta_, beta_ == 1 ? Rational(1) : Rational(0)};
    case FunctionId::Squarefree:
    case FunctionId::KFree: return {Rational(1, k_), Rational(0)};
    default: raise(ErrorKind::Unsupported, name() + " has no g-side (f = 1 * g) in the catalog");
    }
}

ValueKind ArithmeticFunction::value_kind() const {
    switch (id_) {
    case FunctionId::One:
    case FunctionId::Id:
    case FunctionId::Tau:
    case FunctionId::Squarefree:
    case FunctionId::KFree: return ValueKind::Integer;
    case FunctionId::PhiOverN:
    case FunctionId::Mobius: return ValueKind::ExactRational;
    case FunctionId::SigmaBetaNorm: return beta_ == 1 ? ValueKind::ExactRational : ValueKind::Real;
    case FunctionId::Lambda: return ValueKind::Real;
    }
    return ValueKind::Real;
}

std::string ArithmeticFunction::name() const {
    std::string base(to_string(id_));
    if (id_ == FunctionId::SigmaBetaNorm) return base + "(" + frac::to_string(beta_) + ")";
    if (id_ == FunctionId::KFree) return base + "(" + std::to_string(k_) + ")";
    return base;
}

// ---------------------------------------------------------------------------
// Local factors f(p^e). Shared by the sieve recurrence and point evaluation.

namespace {

std::int64_t local_integer(const ArithmeticFunction& f, std::uint64_t p, int e) {
    switch (f.id_kind()) {
    case FunctionId::One: return 1;
    case FunctionId::Id: return static_cast<std::int64_t>(detail::ipow(p, e));
    case FunctionId::Tau: return e + 1;
    case FunctionId::Squarefree:
    case FunctionId::KFree: return e >= f.k() ? 0 : 1;
    default: break;
    }
    raise(ErrorKind::Domain, "not an integer-valued function");
}

SmallRational local_rational(const ArithmeticFunction& f, std::uint64_t p, int e) {
    const auto sp = static_cast<std::int64_t>(p);
    switch (f.id_kind()) {
    case FunctionId::PhiOverN: return {sp - 1, sp};
    case FunctionId::Mobius: return {e >= 2 ? 0 : -1, 1};
    case FunctionId::SigmaBetaNorm: {
        // (1 + p + ... + p^e) / p^e
        std::int64_t pe = 1, sum = 1;
        for (int i = 0; i < e; ++i) {
            pe *= sp;
            sum += pe;
        }
        return {sum, pe};
    }
    default: break;
    }
    raise(ErrorKind::Domain, "not a rational-valued function");
}

double local_real(const ArithmeticFunction& f, std::uint64_t p, int e) {
    // sum_{i<=e} p^{-i beta}
    const double beta = f.beta().get_d();
    const double r = std::pow(static_cast<double>(p), -beta);
    double term = 1.0, sum = 1.0;
    for (int i = 0; i < e; ++i) {
        term *= r;
        sum += term;
    }
    return sum;
}

SmallRational mul(SmallRational a, SmallRational b) {
    if (a.num == 0 || b.num == 0) return {0, 1};
    std::int64_t g1 = std::gcd(a.num, b.den), g2 = std::gcd(b.num, a.den);
    return {(a.num / g1) * (b.num / g2), (a.den / g2) * (b.den / g1)};
}

} // namespace

// ---------------------------------------------------------------------------
// Sieves

std::vector<std::uint32_t> smallest_prime_factors(std::int64_t limit) {
    std::vector<std::uint32_t> spf(static_cast<std::size_t>(limit) + 1, 0);
    std::vector<std::uint32_t> primes;
    for (std::int64_t i = 2; i <= limit; ++i) {
        if (spf[i] == 0) {
            spf[i] = static_cast<std::uint32_t>(i);
            primes.push_back(static_cast<std::uint32_t>(i));
        }
        for (std::uint32_t p : primes) {
            const std::int64_t m = static_cast<std::int64_t>(p) * i;
            if (p > spf[i] || m > limit) break;
            spf[m] = p;
        }
    }
    return spf;
}

std::vector<std::uint32_t> primes_up_to(std::int64_t limit) {
    std::vector<std::uint32_t> primes;
    if (limit < 2) return primes;
    std::vector<bool> composite(static_cast<std::size_t>(limit) + 1, false);
    for (std::int64_t i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        primes.push_back(static_cast<std::uint32_t>(i));
        for (std::int64_t j = i * i; j <= limit; j += i) composite[j] = true;
    }
    return primes;
}

Value FunctionTable::at(std::int64_t n) const {
    if (n < 1 || n > limit_) raise(ErrorKind::Domain, "table index out of range");
    switch (kind()) {
    case ValueKind::Integer: return Rational(BigInt(static_cast<long>(integer_at(n))));
    case ValueKind::ExactRational: {
        auto q = rational_at(n);
        return make_rational(q.num, q.den);
    }
    case ValueKind::Real: return real_at(n);
    }
    return {};
}

FunctionTable sieve_range(const ArithmeticFunction& f, std::int64_t limit) {
    return sieve_range(f, limit, kDefaultSieveCap);
}

FunctionTable sieve_range(const ArithmeticFunction& f, std::int64_t limit, std::int64_t cap) {
    if (limit < 1) raise(ErrorKind::Domain, "sieve limit must be >= 1");
    if (limit > cap)
        raise(ErrorKind::Resource,
              "sieve limit " + std::to_string(limit) + " exceeds the memory cap of " + std::to_string(cap) + " entries");

    FunctionTable table(f, limit);
    const auto size = static_cast<std::size_t>(limit) + 1;

    if (f.id_kind() == FunctionId::One) {
        table.values_ = std::vector<std::int64_t>(size, 1);
        return table;
    }
    if (f.id_kind() == FunctionId::Id) {
        std::vector<std::int64_t> v(size);
        std::iota(v.begin(), v.end(), std::int64_t{0});
        table.values_ = std::move(v);
        return table;
    }

    const auto spf = smallest_prime_factors(limit);

    // n = p^e * m with p = spf[n], gcd(m, p) = 1.
    auto split = [&](std::int64_t n, std::uint64_t& p, int& e) {
        p = spf[n];
        e = 0;
        std::int64_t m = n;
        while (m % static_cast<std::int64_t>(p) == 0) {
            m /= static_cast<std::int64_t>(p);
            ++e;
        }
        return m;
    };

    switch (f.value_kind()) {
    case ValueKind::Integer: {
        std::vector<std::int64_t> v(size, 0);
        v[1] = 1;
        for (std::int64_t n = 2; n <= limit; ++n) {
            std::uint64_t p;
            int e;
            const std::int64_t m = split(n, p, e);
            v[n] = v[m] * local_integer(f, p, e);
        }
        table.values_ = std::move(v);
        break;
    }
    case ValueKind::ExactRational: {
        std::vector<SmallRational> v(size);
        v[1] = {1, 1};
        for (std::int64_t n = 2; n <= limit; ++n) {
            std::uint64_t p;
            int e;
            const std::int64_t m = split(n, p, e);
            v[n] = mul(v[m], local_rational(f, p, e));
        }
        table.values_ = std::move(v);
        break;
    }
    case ValueKind::Real: {
        std::vector<double> v(size, 0.0);
        if (f.id_kind() == FunctionId::Lambda) {
            for (std::int64_t n = 2; n <= limit; ++n) {
                std::uint64_t p;
                int e;
                if (split(n, p, e) == 1) v[n] = std::log(static_cast<double>(p));
            }
        } else {
            v[1] = 1.0;
            for (std::int64_t n = 2; n <= limit; ++n) {
                std::uint64_t p;
                int e;
                const std::int64_t m = split(n, p, e);
                v[n] = v[m] * local_real(f, p, e);
            }
        }
        table.values_ = std::move(v);
        break;
    }
    }
    return table;
}

// ---------------------------------------------------------------------------
// Point evaluation

namespace {

const std::vector<std::uint32_t>& trial_primes() {
    static const std::vector<std::uint32_t> primes = primes_up_to(1'000'000);
    return primes;
}

void check_point(std::int64_t n) {
    if (n < 1 || n > kMaxPointArgument)
        raise(ErrorKind::Domain, "point evaluation needs 1 <= n <= 10^12, got " + std::to_string(n));
}

} // namespace

Factorization factorize(std::int64_t n) {
    check_point(n);
    Factorization out;
    auto m = static_cast<std::uint64_t>(n);
    for (std::uint64_t p : trial_primes()) {
        if (p * p > m) break;
        if (m % p != 0) continue;
        int e = 0;
        while (m % p == 0) {
            m /= p;
            ++e;
        }
        out.emplace_back(p, e);
    }
    if (m > 1) out.emplace_back(m, 1);
    return out;
}

std::int64_t eval_integer(const ArithmeticFunction& f, std::int64_t n) {
    check_point(n);
    if (f.id_kind() == FunctionId::One) return 1;
    if (f.id_kind() == FunctionId::Id) return n;
    std::int64_t v = 1;
    for (auto [p, e] : factorize(n)) {
        v *= local_integer(f, p, e);
        if (v == 0) break;
    }
    return v;
}

SmallRational eval_rational(const ArithmeticFunction& f, std::int64_t n) {
    check_point(n);
    SmallRational v{1, 1};
    for (auto [p, e] : factorize(n)) v = mul(v, local_rational(f, p, e));
    return v;
}

double eval_real(const ArithmeticFunction& f, std::int64_t n) {
    check_point(n);
    const auto fac = factorize(n);
    if (f.id_kind() == FunctionId::Lambda)
        return fac.size() == 1 ? std::log(static_cast<double>(fac[0].first)) : 0.0;
    double v = 1.0;
    for (auto [p, e] : fac) v *= local_real(f, p, e);
    return v;
}

Value eval_point(const ArithmeticFunction& f, std::int64_t n) {
    switch (f.value_kind()) {
    case ValueKind::Integer: return Rational(BigInt(static_cast<long>(eval_integer(f, n))));
    case ValueKind::ExactRational: {
        auto q = eval_rational(f, n);
        return make_rational(q.num, q.den);
    }
    case ValueKind::Real: return eval_real(f, n);
    }
    return {};
}

// ---------------------------------------------------------------------------
// g-side

std::int64_t integer_root(std::int64_t n, int k) {
    if (n < 0 || k < 1) raise(ErrorKind::Domain, "integer_root needs n >= 0, k >= 1");
    if (k == 1 || n < 2) return n;
    auto r = static_cast<std::int64_t>(std::pow(static_cast<double>(n), 1.0 / k));
    auto fits = [&](std::int64_t c) {
        unsigned __int128 acc = 1;
        for (int i = 0; i < k; ++i) {
            acc *= static_cast<unsigned __int128>(c);
            if (acc > static_cast<unsigned __int128>(n)) return false;
        }
        return true;
    };
    while (r > 0 && !fits(r)) --r;
    while (fits(r + 1)) ++r;
    return r;
}

namespace {

int mobius_of(std::int64_t n) {
    int mu = 1;
    for (auto [p, e] : factorize(n)) {
        if (e >= 2) return 0;
        mu = -mu;
    }
    return mu;
}

void require_g_side(const ArithmeticFunction& f) {
    if (!f.has_g_side()) raise(ErrorKind::Unsupported, f.name() + " has no g-side (f = 1 * g) in the catalog");
}

} // namespace

Value g_value(const ArithmeticFunction& f, std::int64_t d) {
    require_g_side(f);
    check_point(d);
    switch (f.id_kind()) {
    case FunctionId::One: return Value::integer(d == 1 ? 1 : 0);
    case FunctionId::PhiOverN: return make_rational(mobius_of(d), d);
    case FunctionId::SigmaBetaNorm:
        if (f.beta() == 1) return make_rational(1, d);
        return std::pow(static_cast<double>(d), -f.beta().get_d());
    case FunctionId::Squarefree:
    case FunctionId::KFree: {
        const std::int64_t l = integer_root(d, f.k());
        if (detail::ipow(static_cast<std::uint64_t>(l), f.k()) != static_cast<std::uint64_t>(d)) return Value::integer(0);
        return Value::integer(mobius_of(l));
    }
    default: break;
    }
    raise(ErrorKind::Unsupported, f.name() + " has no g-side");
}

Value g_partial_sum(const ArithmeticFunction& f, std::int64_t x, bool absolute) {
    require_g_side(f);
    if (x < 1) raise(ErrorKind::Domain, "g_partial_sum needs x >= 1");
    switch (f.id_kind()) {
    case FunctionId::One: return Value::integer(1);
    case FunctionId::PhiOverN: {
        const auto mu = sieve_range(ArithmeticFunction::mobius(), x);
        ExactAccumulator acc;
        for (std::int64_t d = 1; d <= x; ++d) {
            const std::int64_t m = mu.rational_at(d).num;
            if (m != 0) acc.add(absolute ? 1 : m, static_cast<std::uint64_t>(d));
        }
        return acc.total();
    }
    case FunctionId::SigmaBetaNorm: {
        if (f.beta() == 1) {
            ExactAccumulator acc;
            for (std::int64_t d = 1; d <= x; ++d) acc.add(1, static_cast<std::uint64_t>(d));
            return acc.total();
        }
        const double beta = f.beta().get_d();
        detail::NeumaierSum s;
        for (std::int64_t d = 1; d <= x; ++d) s.add(std::pow(static_cast<double>(d), -beta));
        return s.value();
    }
    case FunctionId::Squarefree:
    case FunctionId::KFree: {
        const std::int64_t root = integer_root(x, f.k());
        const auto mu = sieve_range(ArithmeticFunction::mobius(), std::max<std::int64_t>(root, 1));
        std::int64_t s = 0;
        for (std::int64_t l = 1; l <= root; ++l) {
            const std::int64_t m = mu.rational_at(l).num;
            s += absolute ? m * m : m;
        }
        return Value::integer(s);
    }
    default: break;
    }
    raise(ErrorKind::Unsupported, f.name() + " has no g-side");
}

Value dirichlet_reconstruct(const ArithmeticFunction& f, std::int64_t n) {
    require_g_side(f);
    check_point(n);
    std::vector<std::int64_t> divisors{1};
    for (auto [p, e] : factorize(n)) {
        const std::size_t base = divisors.size();
        std::int64_t pk = 1;
        for (int i = 1; i <= e; ++i) {
            pk *= static_cast<std::int64_t>(p);
            for (std::size_t j = 0; j < base; ++j) divisors.push_back(divisors[j] * pk);
        }
    }
    std::sort(divisors.begin(), divisors.end());
    if (f.is_exact()) {
        Rational s = 0;
        for (std::int64_t d : divisors) s += g_value(f, d).exact();
        return s;
    }
    detail::NeumaierSum s;
    for (std::int64_t d : divisors) s.add(g_value(f, d).to_double());
    return s.value();
}

} // namespace frac::arithfn
