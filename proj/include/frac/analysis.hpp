#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "frac/arithfn.hpp"
#include "frac/value.hpp"

namespace frac::analysis {

using arithfn::ArithmeticFunction;

struct ErrorSample {
    std::int64_t x = 0;
    Value s_value;    // S_f(x)
    double cf_x = 0;  // C_f x
    double error = 0; // S_f(x) - C_f x
};

struct ErrorSeries {
    ArithmeticFunction f;
    std::vector<ErrorSample> samples; // strictly increasing x
    double cf = 0;
    double cf_tol = 0; // tolerance requested from compute_cf
};

struct CatalogEntry {
    Rational exponent;
    std::string source;
};

/// Known error exponents: tau, phi(n)/n, sigma_beta(n)/n^beta, squarefree,
/// k-free and von Mangoldt have dedicated entries; any other function with a
/// g-side falls back to the convolution bound (1 + alpha_g)/(3 - alpha_g).
/// Throws CatalogMiss otherwise.
CatalogEntry catalog_exponent(const ArithmeticFunction& f);

/// Geometric grid of `points` values on [x_min, x_max], rounded and deduplicated.
/// Throws Parameter if fewer than 5 distinct integers remain.
std::vector<std::int64_t> geometric_grid(std::int64_t x_min, std::int64_t x_max, int points);

/// S_f(x) - C_f x on a geometric grid. C_f is taken to 1e-4 / x_max (or the
/// attainable floor, if larger). `threads` = 0 uses every core.
ErrorSeries sample_errors(const ArithmeticFunction& f, std::int64_t x_min, std::int64_t x_max, int points,
                          unsigned threads = 0);

struct ErrorFit {
    std::optional<ArithmeticFunction> f;
    std::vector<ErrorSample> samples;
    double slope = 0;
    double intercept = 0;
    std::size_t used = 0; // samples with nonzero error
    std::optional<Rational> theoretical_exponent;
    /// max |error| / x^theoretical_exponent; NaN without an exponent.
    double max_constant = 0;
};

/// Least squares through (log x, log |error|), skipping zero errors. Needs at
/// least 5 nonzero errors (InsufficientData otherwise). The catalog exponent
/// is attached when `f` is given and catalogued.
ErrorFit fit_exponent(const std::vector<ErrorSample>& samples, const std::optional<ArithmeticFunction>& f = {});
ErrorFit fit_exponent(const ErrorSeries& series);

struct CatalogReport {
    std::string f;
    double slope = 0;
    Rational catalog_exponent;
    std::string source;
    double margin = 0; // catalog - slope
    double max_constant = 0;
    bool red_flag = false; // slope > catalog + 0.02
};

inline constexpr double kRedFlagSlack = 0.02;

/// Throws CatalogMiss when the fit carries no catalogued function.
CatalogReport compare_catalog(const ErrorFit& fit);

/// max over samples of |error| / (x^exponent (log x)^log_power).
double max_normalized_error(const std::vector<ErrorSample>& samples, double exponent, double log_power = 0);

} // namespace frac::analysis
