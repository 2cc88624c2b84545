#include "frac/fracsum.hpp"

#include <cfloat>
#include <cmath>
#include <numeric>

#include "frac/error.hpp"
#include "numeric.hpp"
#include "zeta.hpp"

namespace frac::fracsum {

using arithfn::FunctionId;
using arithfn::SmallRational;
using arithfn::ValueKind;

PsiValue psi(std::int64_t num, std::int64_t den) {
    if (den < 1) raise(ErrorKind::Domain, "psi needs a positive denominator");
    std::int64_t r = num % den;
    if (r < 0) r += den;
    // r/den - 1/2 = (2r - den) / (2 den)
    Rational q = make_rational(2 * r - den, 2 * den);
    const double d = q.get_d();
    return {std::move(q), d};
}

namespace {

/// Sum of f-values in the arithmetic appropriate to the value kind.
class KindSum {
public:
    explicit KindSum(ValueKind kind) : kind_(kind) {}

    void add_integer(std::int64_t v, std::int64_t mult = 1) {
        const __int128 term = static_cast<__int128>(v) * mult;
        if (__builtin_add_overflow(int_, term, &int_))
            raise(ErrorKind::Resource, "128-bit accumulator overflow");
    }

    void add_rational(SmallRational q, std::int64_t mult = 1) {
        if (q.num == 0) return;
        rat_.add(static_cast<__int128>(q.num) * mult, static_cast<std::uint64_t>(q.den));
    }

    void add_real(double v, std::int64_t mult = 1) { real_.add(v * static_cast<double>(mult)); }

    Value value() const {
        switch (kind_) {
        case ValueKind::Integer: {
            const bool neg = int_ < 0;
            unsigned __int128 u = neg ? -static_cast<unsigned __int128>(int_) : static_cast<unsigned __int128>(int_);
            BigInt r = (BigInt(static_cast<unsigned long>(static_cast<std::uint64_t>(u >> 64))) << 64) +
                       BigInt(static_cast<unsigned long>(static_cast<std::uint64_t>(u)));
            return Rational(neg ? BigInt(-r) : r);
        }
        case ValueKind::ExactRational: return rat_.total();
        case ValueKind::Real: return real_.value();
        }
        return {};
    }

private:
    ValueKind kind_;
    __int128 int_ = 0;
    ExactAccumulator rat_;
    detail::NeumaierSum real_;
};

void check_integer_x(std::int64_t x) {
    if (x < 1) raise(ErrorKind::Domain, "x must be a positive integer, got " + std::to_string(x));
}

} // namespace

Value naive_sum(const ArithmeticFunction& f, std::int64_t x) {
    check_integer_x(x);
    if (x > kNaiveCap)
        raise(ErrorKind::Resource,
              "naive_sum is an oracle limited to x <= 10^7 (got " + std::to_string(x) + "); use blocked_sum");
    return naive_sum(arithfn::sieve_range(f, x), x);
}

Value naive_sum(const FunctionTable& table, std::int64_t x) {
    check_integer_x(x);
    if (x > table.limit()) raise(ErrorKind::Parameter, "table is shorter than x");
    KindSum sum(table.kind());
    switch (table.kind()) {
    case ValueKind::Integer:
        for (std::int64_t n = 1; n <= x; ++n) sum.add_integer(table.integer_at(x / n));
        break;
    case ValueKind::ExactRational: {
        // Equal consecutive addends are coalesced before the exact add.
        SmallRational run = table.rational_at(x);
        std::int64_t count = 0;
        for (std::int64_t n = 1; n <= x; ++n) {
            const SmallRational v = table.rational_at(x / n);
            if (v == run) {
                ++count;
            } else {
                sum.add_rational(run, count);
                run = v;
                count = 1;
            }
        }
        sum.add_rational(run, count);
        break;
    }
    case ValueKind::Real:
        for (std::int64_t n = 1; n <= x; ++n) sum.add_real(table.real_at(x / n));
        break;
    }
    return sum.value();
}

Value blocked_sum(const ArithmeticFunction& f, std::int64_t x, BlockedOptions opts) {
    check_integer_x(x);
    if (opts.cap > kBlockedHardCap) opts.cap = kBlockedHardCap;
    if (x > opts.cap)
        raise(ErrorKind::Resource,
              "blocked_sum argument " + std::to_string(x) + " exceeds the configured cap " + std::to_string(opts.cap));

    const std::int64_t s = detail::isqrt(x);
    const std::int64_t B = s + 1;
    const std::int64_t L = x / B;
    const auto table = arithfn::sieve_range(f, std::max<std::int64_t>(L, 1));
    const ValueKind kind = f.value_kind();
    KindSum sum(kind);

    // n < B: floor(x/n) >= s, point-evaluated.
    for (std::int64_t n = 1; n < B; ++n) {
        const std::int64_t m = x / n;
        switch (kind) {
        case ValueKind::Integer: sum.add_integer(arithfn::eval_integer(f, m)); break;
        case ValueKind::ExactRational: sum.add_rational(arithfn::eval_rational(f, m)); break;
        case ValueKind::Real: sum.add_real(arithfn::eval_real(f, m)); break;
        }
    }
    // n >= B: floor(x/n) = m <= L, each m hit floor(x/m) - floor(x/(m+1)) times.
    for (std::int64_t m = 1; m <= L; ++m) {
        const std::int64_t count = x / m - x / (m + 1);
        switch (kind) {
        case ValueKind::Integer: sum.add_integer(table.integer_at(m), count); break;
        case ValueKind::ExactRational: sum.add_rational(table.rational_at(m), count); break;
        case ValueKind::Real: sum.add_real(table.real_at(m), count); break;
        }
    }
    return sum.value();
}

// ---------------------------------------------------------------------------

namespace {

/// Reduces num/den and adds it to `acc`.
void add_reduced(ExactAccumulator& acc, __int128 num, std::uint64_t den) {
    if (num == 0) return;
    const unsigned __int128 absn = num < 0 ? -static_cast<unsigned __int128>(num) : static_cast<unsigned __int128>(num);
    std::uint64_t g = std::gcd(static_cast<std::uint64_t>(absn % den), den);
    if (g == 0) g = den;
    acc.add(num / static_cast<__int128>(g), den / g);
}

} // namespace

DecompositionReport decompose(const ArithmeticFunction& f, std::int64_t x, std::int64_t A, std::int64_t B) {
    check_integer_x(x);
    if (x > kDecomposeCap)
        raise(ErrorKind::Resource, "decompose is exact-rational and limited to x <= 10^6");
    const std::int64_t s = detail::isqrt(x);
    if (B > s)
        raise(ErrorKind::Parameter, "B = " + std::to_string(B) + " > sqrt(x): the decomposition needs A, B in [1, x^{1/2})"
                                    " and, for an exact identity, integer B <= floor(sqrt x)");
    if (A < 1 || A > B) raise(ErrorKind::Parameter, "need 1 <= A <= B, got A = " + std::to_string(A));

    const auto table = arithfn::sieve_range(f, x);
    const std::int64_t K = x / B; // n <= x/B  <=>  n <= floor(x/B)

    DecompositionReport r;
    r.f = f.name();
    r.x = x;
    r.A = A;
    r.B = B;
    r.exact = f.is_exact();

    if (r.exact) {
        // Exact-kind values as num/den with den >= 1.
        auto value_at = [&](std::int64_t n) -> SmallRational {
            if (table.kind() == ValueKind::Integer) return {table.integer_at(n), 1};
            return table.rational_at(n);
        };

        ExactAccumulator head, e2, e1, m_sum, t_head[2], t_tail[2];
        for (std::int64_t n = 1; n < B; ++n) {
            const SmallRational v = value_at(x / n);
            add_reduced(head, v.num, v.den);
            add_reduced(e2, v.num < 0 ? -v.num : v.num, v.den);
        }
        for (std::int64_t n = 1; n <= A; ++n) {
            const SmallRational v = value_at(n);
            add_reduced(e1, v.num < 0 ? -v.num : v.num, v.den);
        }
        for (std::int64_t n = 1; n <= K; ++n) {
            const SmallRational v = value_at(n);
            if (v.num == 0) continue;
            const auto den = static_cast<std::uint64_t>(v.den);
            add_reduced(m_sum, static_cast<__int128>(v.num) * x, den * static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n + 1));
            for (int d = 0; d < 2; ++d) {
                const std::int64_t q = n + d;
                const std::int64_t rem = x % q;
                // f(n) * (2 rem - q) / (2 q)
                auto& acc = n <= A ? t_head[d] : t_tail[d];
                add_reduced(acc, static_cast<__int128>(v.num) * (2 * rem - q), den * 2 * static_cast<std::uint64_t>(q));
            }
        }

        Rational th[2], tt[2], tf[2];
        for (int d = 0; d < 2; ++d) {
            th[d] = t_head[d].total();
            tt[d] = t_tail[d].total();
            tf[d] = th[d] + tt[d];
            r.T_head[d] = th[d];
            r.T[d] = tt[d];
            r.T_full[d] = tf[d];
        }
        const Rational hd = head.total();
        const Rational M = m_sum.total();
        const Rational S = naive_sum(table, x).exact();
        r.head = hd;
        r.M = M;
        r.E1 = e1.total();
        r.E2 = e2.total();
        r.S_exact = S;
        r.residual = Rational(S - (hd + M + tf[1] - tf[0]));
        return r;
    }

    detail::NeumaierSum head, e2, e1, m_sum, t_head[2], t_tail[2];
    const auto xd = static_cast<double>(x);
    for (std::int64_t n = 1; n < B; ++n) {
        const double v = table.real_at(x / n);
        head.add(v);
        e2.add(std::fabs(v));
    }
    for (std::int64_t n = 1; n <= A; ++n) e1.add(std::fabs(table.real_at(n)));
    for (std::int64_t n = 1; n <= K; ++n) {
        const double v = table.real_at(n);
        if (v == 0.0) continue;
        m_sum.add(xd * v / (static_cast<double>(n) * static_cast<double>(n + 1)));
        for (int d = 0; d < 2; ++d) {
            const std::int64_t q = n + d;
            const double p = static_cast<double>(2 * (x % q) - q) / static_cast<double>(2 * q);
            (n <= A ? t_head[d] : t_tail[d]).add(v * p);
        }
    }
    double tf[2];
    for (int d = 0; d < 2; ++d) {
        r.T_head[d] = t_head[d].value();
        r.T[d] = t_tail[d].value();
        tf[d] = t_head[d].value() + t_tail[d].value();
        r.T_full[d] = tf[d];
    }
    const double S = naive_sum(table, x).to_double();
    r.head = head.value();
    r.M = m_sum.value();
    r.E1 = e1.value();
    r.E2 = e2.value();
    r.S_exact = S;
    r.residual = S - (head.value() + m_sum.value() + tf[1] - tf[0]);
    return r;
}

// ---------------------------------------------------------------------------
// Mean-value constants

namespace {

void require_convergent(const ArithmeticFunction& f) {
    if (!f.asymptotic())
        raise(ErrorKind::Divergence, "C_f diverges for " + f.name() + ": the mean-value constant needs alpha < 1");
}

/// |f(n)| <= scale * n^power for all n >= 1.
struct PointwiseBound {
    long double scale;
    long double power;
};

PointwiseBound pointwise_bound(const ArithmeticFunction& f) {
    switch (f.id_kind()) {
    case FunctionId::Tau:
    case FunctionId::SigmaBetaNorm: return {2.0L, 0.5L}; // <= tau(n) <= 2 sqrt(n)
    case FunctionId::Lambda: return {1.0L, 0.5L};        // log n <= sqrt(n)
    default: return {1.0L, 0.0L};
    }
}

/// Dirichlet series sum f(n) n^{-s} at real s >= 2.
long double dirichlet_series(const ArithmeticFunction& f, long double s) {
    using detail::zeta;
    switch (f.id_kind()) {
    case FunctionId::One: return zeta(s);
    case FunctionId::Tau: {
        const long double z = zeta(s);
        return z * z;
    }
    case FunctionId::PhiOverN: return zeta(s) / zeta(s + 1.0L);
    case FunctionId::SigmaBetaNorm: return zeta(s) * zeta(s + static_cast<long double>(f.beta().get_d()));
    case FunctionId::Lambda: {
        const auto zp = detail::zeta_with_derivative(s);
        return -zp.derivative / zp.value;
    }
    case FunctionId::Squarefree:
    case FunctionId::KFree: return zeta(s) / zeta(f.k() * s);
    case FunctionId::Mobius: return 1.0L / zeta(s);
    case FunctionId::Id: break;
    }
    raise(ErrorKind::Divergence, "no convergent Dirichlet series for " + f.name());
}

long double to_long_double(const arithfn::FunctionTable& t, std::int64_t n) {
    switch (t.kind()) {
    case ValueKind::Integer: return static_cast<long double>(t.integer_at(n));
    case ValueKind::ExactRational: {
        auto q = t.rational_at(n);
        return static_cast<long double>(q.num) / static_cast<long double>(q.den);
    }
    case ValueKind::Real: return t.real_at(n);
    }
    return 0.0L;
}

constexpr std::int64_t kCfHead = 1000;
constexpr int kCfMaxTerms = 60;

} // namespace

namespace {

CfResult cf_impl(const ArithmeticFunction& f, double tol, bool clamp) {
    require_convergent(f);
    if (!(tol > 0.0)) raise(ErrorKind::Domain, "tolerance must be positive");

    CfResult out;
    out.f = f.name();
    if (f.id_kind() == FunctionId::One) {
        // sum 1/(n(n+1)) telescopes to 1.
        out.value = 1.0;
        return out;
    }

    const std::int64_t N = kCfHead;
    const auto table = arithfn::sieve_range(f, N);
    const auto bound = pointwise_bound(f);

    // Head sum_{n<=N} f(n)/(n(n+1)), pairwise-compensated in long double.
    long double head = 0.0L, head_c = 0.0L, magnitude = 0.0L;
    for (std::int64_t n = 1; n <= N; ++n) {
        const long double term = to_long_double(table, n) / (static_cast<long double>(n) * (n + 1));
        const long double t = head + term;
        head_c += std::fabs(head) >= std::fabs(term) ? (head - t) + term : (term - t) + head;
        head = t;
        magnitude += std::fabs(term);
    }
    head += head_c;

    const long double rounding_unit = static_cast<long double>(DBL_EPSILON);
    const long double Nl = static_cast<long double>(N);

    // Remainder after the j = J term:
    //   sum_{j>J} sum_{n>N} |f(n)| n^{-j} <= scale N^{power-J} / ((1 - 1/N)(J - power)).
    auto remainder = [&](int J) {
        return bound.scale * std::pow(Nl, bound.power - J) / ((1.0L - 1.0L / Nl) * (J - bound.power));
    };

    long double tail = 0.0L;
    int J = 1;
    long double bound_total = 0.0L;
    for (int j = 2; j <= kCfMaxTerms; ++j) {
        const long double sj = j;
        long double partial = 0.0L;
        for (std::int64_t n = N; n >= 1; --n) partial += to_long_double(table, n) * std::pow(static_cast<long double>(n), -sj);
        const long double Fj = dirichlet_series(f, sj);
        tail += ((j % 2 == 0) ? 1.0L : -1.0L) * (Fj - partial);
        magnitude += std::fabs(Fj) + std::fabs(partial);
        J = j;
        const long double rounding = 16.0L * rounding_unit * (1.0L + magnitude);
        bound_total = remainder(J) + rounding;
        if (bound_total <= tol) break;
    }
    if (bound_total > tol && !clamp)
        raise(ErrorKind::Parameter, "tolerance " + format_double(tol) + " is below the attainable floor " +
                                        format_double(static_cast<double>(bound_total)) + " for " + f.name());

    out.value = static_cast<double>(head + tail);
    out.truncation_N = N;
    out.tail_bound = static_cast<double>(bound_total);
    return out;
}

} // namespace

CfResult compute_cf(const ArithmeticFunction& f, double tol) { return cf_impl(f, tol, false); }

CfResult compute_cf_clamped(const ArithmeticFunction& f, double tol) { return cf_impl(f, tol, true); }

double cf_tail_envelope(const ArithmeticFunction& f, std::int64_t N) {
    require_convergent(f);
    if (N < 8) raise(ErrorKind::Domain, "tail envelope needs N >= 8");
    const auto n = static_cast<double>(N);
    switch (f.id_kind()) {
    case FunctionId::Tau: return 2.0 * (std::log(n) + 2.0) / n;        // D(t) <= t (log t + 1)
    case FunctionId::SigmaBetaNorm: return 2.0 * (1.0 + 1.0 / f.beta().get_d()) / n; // A(t) <= t zeta(1+beta)
    case FunctionId::Lambda: return 2.0 * 1.03883 / n;                  // psi(t) <= 1.03883 t
    default: return 1.0 / (n + 1.0);                                    // |f| <= 1
    }
}

CfResult cf_partial_sum(const ArithmeticFunction& f, std::int64_t N) {
    require_convergent(f);
    if (N < 1) raise(ErrorKind::Domain, "N must be >= 1");
    detail::NeumaierSum s;
    double magnitude = 0.0;
    if (f.id_kind() == FunctionId::Tau) {
        // tau(n) = #{(d, m) : dm = n}: walk the pairs instead of holding a table of size N
        for (std::int64_t d = 1; d <= N; ++d) {
            detail::NeumaierSum row;
            for (std::int64_t n = d; n <= N; n += d) row.add(1.0 / (static_cast<double>(n) * static_cast<double>(n + 1)));
            s.add(row.value());
        }
        magnitude = s.value();
        const double rounding = 8.0 * DBL_EPSILON * magnitude;
        return {f.name(), s.value(), N, (N >= 8 ? cf_tail_envelope(f, N) : 1.0) + rounding};
    }
    const auto table = arithfn::sieve_range(f, N);
    for (std::int64_t n = 1; n <= N; ++n) {
        const double v = static_cast<double>(to_long_double(table, n));
        const double term = v / (static_cast<double>(n) * static_cast<double>(n + 1));
        s.add(term);
        magnitude += std::fabs(term);
    }
    // a few ulps per term (value, product, quotient) plus the compensated sum itself
    const double rounding = 8.0 * DBL_EPSILON * magnitude;
    return {f.name(), s.value(), N, (N >= 8 ? cf_tail_envelope(f, N) : 1.0) + rounding};
}

double hyperbola_error_bound(double alpha, double theta, std::int64_t x) {
    if (!(alpha < 1.0)) raise(ErrorKind::Divergence, "the hyperbola bound needs alpha < 1");
    check_integer_x(x);
    const auto xd = static_cast<double>(x);
    const double logs = theta == 0.0 ? 1.0 : std::pow(std::log(xd), theta);
    return std::pow(xd, (1.0 + alpha) / 2.0) * logs;
}

double hyperbola_error_bound(const ArithmeticFunction& f, std::int64_t x) {
    require_convergent(f);
    const auto g = f.growth();
    return hyperbola_error_bound(g.alpha.get_d(), g.theta.get_d(), x);
}

} // namespace frac::fracsum
