#include "frac/rational.hpp"

#include <charconv>
#include <cmath>

#include "frac/error.hpp"
#include "frac/value.hpp"

namespace frac {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Parameter: return "parameter";
    case ErrorKind::Resource: return "resource";
    case ErrorKind::Unsupported: return "unsupported";
    case ErrorKind::Divergence: return "divergence";
    case ErrorKind::InsufficientData: return "insufficient-data";
    case ErrorKind::CatalogMiss: return "catalog-miss";
    }
    return "unknown";
}

void raise(ErrorKind kind, const std::string& msg) { throw Error(kind, msg); }

namespace {

BigInt from_i128(__int128 v) {
    const bool neg = v < 0;
    unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
    BigInt hi(static_cast<unsigned long>(static_cast<std::uint64_t>(u >> 64)));
    BigInt lo(static_cast<unsigned long>(static_cast<std::uint64_t>(u)));
    BigInt r = (hi << 64) + lo;
    return neg ? BigInt(-r) : r;
}

} // namespace

Rational make_rational(std::int64_t num, std::int64_t den) {
    if (den == 0) raise(ErrorKind::Domain, "zero denominator");
    Rational q(BigInt(static_cast<long>(num)), BigInt(static_cast<long>(den)));
    q.canonicalize();
    return q;
}

std::string to_string(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational parse_rational(std::string_view text) {
    auto bad = [&] { raise(ErrorKind::Domain, "malformed rational '" + std::string(text) + "'"); };
    if (text.empty()) bad();

    auto parse_int = [&](std::string_view s) {
        std::string_view digits = s;
        if (!digits.empty() && (digits[0] == '-' || digits[0] == '+')) digits.remove_prefix(1);
        if (digits.empty()) bad();
        for (char c : digits)
            if (c < '0' || c > '9') bad();
        std::string str(s[0] == '+' ? s.substr(1) : s);
        return BigInt(str, 10);
    };

    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        BigInt num = parse_int(text.substr(0, slash));
        BigInt den = parse_int(text.substr(slash + 1));
        if (den == 0) raise(ErrorKind::Domain, "zero denominator in '" + std::string(text) + "'");
        Rational q(num, den);
        q.canonicalize();
        return q;
    }
    if (auto dot = text.find('.'); dot != std::string_view::npos) {
        std::string_view frac_part = text.substr(dot + 1);
        if (frac_part.empty()) bad();
        for (char c : frac_part)
            if (c < '0' || c > '9') bad();
        std::string_view int_part = text.substr(0, dot);
        const bool neg = !int_part.empty() && int_part[0] == '-';
        if (int_part == "-" || int_part == "+" || int_part.empty()) int_part = "0";
        BigInt whole = parse_int(int_part);
        if (whole < 0) whole = -whole;
        BigInt scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac_part.size());
        BigInt num = whole * scale + BigInt(std::string(frac_part), 10);
        Rational q(neg ? BigInt(-num) : num, scale);
        q.canonicalize();
        return q;
    }
    return Rational(parse_int(text));
}

BigInt pow2(unsigned n) {
    BigInt r = 1;
    r <<= n;
    return r;
}

void ExactAccumulator::add(__int128 num, std::uint64_t den) {
    if (den == 0) raise(ErrorKind::Domain, "zero denominator");
    if (num == 0) return;
    __int128& slot = buckets_[den];
    __int128 sum;
    if (__builtin_add_overflow(slot, num, &sum)) {
        big_ += Rational(from_i128(slot), BigInt(static_cast<unsigned long>(den)));
        big_.canonicalize();
        slot = num;
    } else {
        slot = sum;
    }
}

void ExactAccumulator::add(const Rational& q) {
    big_ += q;
}

Rational ExactAccumulator::total() const {
    std::vector<Rational> terms;
    terms.reserve(buckets_.size() + 1);
    for (const auto& [den, num] : buckets_) {
        if (num == 0) continue;
        Rational q(from_i128(num), BigInt(static_cast<unsigned long>(den)));
        q.canonicalize();
        terms.push_back(std::move(q));
    }
    if (big_ != 0) terms.push_back(big_);
    return tree_sum(std::move(terms));
}

Rational tree_sum(std::vector<Rational> terms) {
    if (terms.empty()) return Rational(0);
    while (terms.size() > 1) {
        std::size_t out = 0;
        for (std::size_t i = 0; i + 1 < terms.size(); i += 2) {
            terms[out] = terms[i] + terms[i + 1];
            ++out;
        }
        if (terms.size() % 2 == 1) terms[out++] = std::move(terms.back());
        terms.resize(out);
    }
    return terms.front();
}

// Value

const Rational& Value::exact() const {
    if (auto* q = std::get_if<Rational>(&v_)) return *q;
    raise(ErrorKind::Domain, "value is not exact");
}

double Value::to_double() const {
    if (auto* q = std::get_if<Rational>(&v_)) return q->get_d();
    return std::get<double>(v_);
}

std::string Value::to_string() const {
    if (auto* q = std::get_if<Rational>(&v_)) return frac::to_string(*q);
    return format_double(std::get<double>(v_));
}

bool operator==(const Value& a, const Value& b) {
    if (a.is_exact() != b.is_exact()) return false;
    if (a.is_exact()) return a.exact() == b.exact();
    return std::get<double>(a.v_) == std::get<double>(b.v_);
}

std::string format_double(double d) {
    if (std::isnan(d)) return "nan";
    if (std::isinf(d)) return d > 0 ? "inf" : "-inf";
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, d);
    return std::string(buf, end);
}

} // namespace frac
