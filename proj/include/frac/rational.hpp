#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace frac {

/// Arbitrary-precision rational, always canonical (lowest terms, positive
/// denominator).
using Rational = mpq_class;
using BigInt = mpz_class;

Rational make_rational(std::int64_t num, std::int64_t den = 1);

/// "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& q);

/// Parses "p", "p/q", "-p/q" or a finite decimal like "0.25". Throws
/// ErrorKind::Domain on malformed input or a zero denominator.
Rational parse_rational(std::string_view text);

BigInt pow2(unsigned n);

/// Exact sum of many fractions with machine-sized parts.
///
/// Terms are bucketed by denominator with 128-bit numerators, so repeated
/// denominators cost one integer add. The buckets are folded by a balanced
/// pairwise reduction, which keeps intermediate denominators small until the
/// top of the tree. Result is independent of insertion order.
class ExactAccumulator {
public:
    void add(__int128 num, std::uint64_t den = 1);
    void add(const Rational& q);

    Rational total() const;

    bool empty() const { return buckets_.empty() && big_ == 0; }

private:
    std::map<std::uint64_t, __int128> buckets_;
    Rational big_;
};

/// Pairwise (balanced tree) sum; input is consumed.
Rational tree_sum(std::vector<Rational> terms);

} // namespace frac
