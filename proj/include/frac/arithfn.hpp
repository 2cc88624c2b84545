#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "frac/rational.hpp"
#include "frac/value.hpp"

namespace frac::arithfn {

enum class FunctionId { One, Id, Tau, PhiOverN, SigmaBetaNorm, Lambda, Squarefree, KFree, Mobius };

enum class ValueKind { Integer, ExactRational, Real };

std::string_view to_string(FunctionId id);
std::string_view to_string(ValueKind kind);

/// Growth exponents of a bound x^alpha (log x)^theta.
struct Growth {
    Rational alpha;
    Rational theta;
};

/// Descriptor of a catalogued arithmetic function.
///
/// PhiOverN is n -> phi(n)/n (not phi itself: C_phi diverges, while phi(n)/n
/// has a summable mean-value constant and the g-side mu(d)/d).
class ArithmeticFunction {
public:
    static ArithmeticFunction one();
    static ArithmeticFunction id();
    static ArithmeticFunction tau();
    static ArithmeticFunction phi_over_n();
    /// sigma_beta(n) / n^beta for beta in (0, 1].
    static ArithmeticFunction sigma_beta_norm(const Rational& beta);
    static ArithmeticFunction lambda();
    static ArithmeticFunction squarefree();
    /// Indicator of k-free numbers, k >= 2.
    static ArithmeticFunction kfree(int k);
    static ArithmeticFunction mobius();

    /// Parses "tau", "phi_over_n", "sigma_beta_norm" etc. `beta` and `k` are
    /// consulted only by the parameterised families.
    static ArithmeticFunction from_name(std::string_view name, const Rational& beta = Rational(1, 2), int k = 2);

    FunctionId id_kind() const { return id_; }
    const Rational& beta() const { return beta_; }
    int k() const { return k_; }

    /// f(n) << n^alpha (log n)^theta.
    Growth growth() const;
    /// sum_{d<=x} |g(d)| << x^alpha_g (log x)^theta_g; requires has_g_side().
    Growth g_growth() const;

    bool has_g_side() const;
    ValueKind value_kind() const;
    bool is_exact() const { return value_kind() != ValueKind::Real; }

    /// Id is catalogued only for the divisor-problem identity; sums that need
    /// alpha < 1 reject it.
    bool asymptotic() const { return growth().alpha < 1; }

    /// e.g. "tau", "sigma_beta_norm(1/2)", "kfree(3)".
    std::string name() const;

    friend bool operator==(const ArithmeticFunction&, const ArithmeticFunction&) = default;

private:
    ArithmeticFunction(FunctionId id, Rational beta, int k) : id_(id), beta_(std::move(beta)), k_(k) {}

    FunctionId id_;
    Rational beta_;
    int k_;
};

/// f(n) with both parts in int64; denominators are positive.
struct SmallRational {
    std::int64_t num = 0;
    std::int64_t den = 1;
    friend bool operator==(const SmallRational&, const SmallRational&) = default;
};

/// Values of f on 1..limit. Index 0 is unused.
class FunctionTable {
public:
    const ArithmeticFunction& function() const { return f_; }
    std::int64_t limit() const { return limit_; }

    ValueKind kind() const { return f_.value_kind(); }

    std::int64_t integer_at(std::int64_t n) const { return std::get<std::vector<std::int64_t>>(values_)[n]; }
    SmallRational rational_at(std::int64_t n) const { return std::get<std::vector<SmallRational>>(values_)[n]; }
    double real_at(std::int64_t n) const { return std::get<std::vector<double>>(values_)[n]; }

    Value at(std::int64_t n) const;

private:
    friend FunctionTable sieve_range(const ArithmeticFunction& f, std::int64_t limit, std::int64_t cap);

    FunctionTable(ArithmeticFunction f, std::int64_t limit) : f_(std::move(f)), limit_(limit) {}

    ArithmeticFunction f_;
    std::int64_t limit_;
    std::variant<std::vector<std::int64_t>, std::vector<SmallRational>, std::vector<double>> values_;
};

inline constexpr std::int64_t kDefaultSieveCap = 100'000'000;
inline constexpr std::int64_t kMaxPointArgument = 1'000'000'000'000;

/// Smallest prime factor of every n <= limit (linear sieve); spf[0] = spf[1] = 0.
std::vector<std::uint32_t> smallest_prime_factors(std::int64_t limit);

/// Primes <= limit.
std::vector<std::uint32_t> primes_up_to(std::int64_t limit);

/// f(1..limit) from one smallest-prime-factor sieve. Throws Resource above the cap.
FunctionTable sieve_range(const ArithmeticFunction& f, std::int64_t limit);
FunctionTable sieve_range(const ArithmeticFunction& f, std::int64_t limit, std::int64_t cap);

using Factorization = std::vector<std::pair<std::uint64_t, int>>;

/// Trial division, n <= 10^12.
Factorization factorize(std::int64_t n);

Value eval_point(const ArithmeticFunction& f, std::int64_t n);

// Typed point evaluation for hot loops; the kind must match.
std::int64_t eval_integer(const ArithmeticFunction& f, std::int64_t n);
SmallRational eval_rational(const ArithmeticFunction& f, std::int64_t n);
double eval_real(const ArithmeticFunction& f, std::int64_t n);

/// g(d) where f = 1 * g.
Value g_value(const ArithmeticFunction& f, std::int64_t d);

/// sum_{d<=x} g(d), or sum |g(d)| when `absolute`.
Value g_partial_sum(const ArithmeticFunction& f, std::int64_t x, bool absolute);

/// sum_{d|n} g(d); equals eval_point(f, n).
Value dirichlet_reconstruct(const ArithmeticFunction& f, std::int64_t n);

/// floor(n^(1/k)).
std::int64_t integer_root(std::int64_t n, int k);

} // namespace frac::arithfn
