#include "frac/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <thread>

#include "frac/error.hpp"
#include "frac/exppairs.hpp"
#include "frac/fracsum.hpp"

namespace frac::analysis {

using arithfn::FunctionId;

CatalogEntry catalog_exponent(const ArithmeticFunction& f) {
    switch (f.id_kind()) {
    case FunctionId::Tau: return {Rational(5, 11), "tau: exponent-pair bound for the divisor fractional sum"};
    case FunctionId::PhiOverN: return {Rational(1, 3), "phi(n)/n: x^{1/3} log x"};
    case FunctionId::SigmaBetaNorm: {
        const Rational& b = f.beta();
        return {(2 - b) / (2 + b), "sigma_beta(n)/n^beta: convolution bound with alpha = 1 - beta"};
    }
    case FunctionId::Squarefree: return {Rational(3, 5), "squarefree: convolution bound with alpha = 1/2"};
    case FunctionId::KFree: {
        const Rational k(f.k());
        return {(1 + 1 / k) / (3 - 1 / k), "k-free: convolution bound with alpha = 1/k"};
    }
    case FunctionId::Lambda: return {Rational(9, 19), "von Mangoldt: x^{9/19 + eps}"};
    default: break;
    }
    if (f.has_g_side() && f.g_growth().alpha < 1)
        return {exppairs::theorem2_exponent(f.g_growth().alpha), "convolution bound (1 + alpha)/(3 - alpha)"};
    raise(ErrorKind::CatalogMiss, "no catalogued error exponent for " + f.name());
}

std::vector<std::int64_t> geometric_grid(std::int64_t x_min, std::int64_t x_max, int points) {
    if (x_min < 2 || x_min >= x_max) raise(ErrorKind::Parameter, "need 2 <= x_min < x_max");
    if (points < 5 || points > 200) raise(ErrorKind::Parameter, "points must lie in [5, 200]");
    std::vector<std::int64_t> xs;
    const double span = std::log(static_cast<double>(x_max) / static_cast<double>(x_min));
    for (int i = 0; i < points; ++i) {
        auto x = static_cast<std::int64_t>(std::llround(static_cast<double>(x_min) * std::exp(span * i / (points - 1))));
        x = std::clamp(x, x_min, x_max);
        if (xs.empty() || x > xs.back()) xs.push_back(x);
    }
    if (xs.size() < 5)
        raise(ErrorKind::Parameter, "the grid keeps only " + std::to_string(xs.size()) +
                                        " distinct integers after rounding; at least 5 are needed");
    return xs;
}

ErrorSeries sample_errors(const ArithmeticFunction& f, std::int64_t x_min, std::int64_t x_max, int points,
                          unsigned threads) {
    if (x_max > fracsum::kBlockedDefaultCap) raise(ErrorKind::Resource, "x_max exceeds the blocked_sum cap");
    const auto xs = geometric_grid(x_min, x_max, points);

    ErrorSeries out{f, {}, 0.0, 1e-4 / static_cast<double>(x_max)};
    out.cf = fracsum::compute_cf_clamped(f, out.cf_tol).value;
    out.samples.resize(xs.size());

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(xs.size()));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (std::size_t i = next++; i < xs.size(); i = next++) {
            try {
                ErrorSample s;
                s.x = xs[i];
                s.s_value = fracsum::blocked_sum(f, s.x);
                s.cf_x = out.cf * static_cast<double>(s.x);
                s.error = s.s_value.to_double() - s.cf_x;
                out.samples[i] = std::move(s);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    if (threads <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

ErrorFit fit_exponent(const std::vector<ErrorSample>& samples, const std::optional<ArithmeticFunction>& f) {
    ErrorFit fit;
    fit.f = f;
    fit.samples = samples;
    double sx = 0, sy = 0;
    std::vector<std::pair<double, double>> pts;
    for (const auto& s : samples) {
        if (s.error == 0.0) continue;
        if (!std::isfinite(s.error)) raise(ErrorKind::Domain, "non-finite error sample");
        pts.emplace_back(std::log(static_cast<double>(s.x)), std::log(std::fabs(s.error)));
    }
    fit.used = pts.size();
    if (pts.size() < 5)
        raise(ErrorKind::InsufficientData,
              "need at least 5 nonzero errors to fit, got " + std::to_string(pts.size()));
    for (auto [a, b] : pts) {
        sx += a;
        sy += b;
    }
    const double n = static_cast<double>(pts.size()), mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (auto [a, b] : pts) {
        sxx += (a - mx) * (a - mx);
        sxy += (a - mx) * (b - my);
    }
    if (sxx == 0.0) raise(ErrorKind::InsufficientData, "all samples share one x");
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;

    fit.max_constant = std::numeric_limits<double>::quiet_NaN();
    if (f) {
        try {
            fit.theoretical_exponent = catalog_exponent(*f).exponent;
            fit.max_constant = max_normalized_error(samples, fit.theoretical_exponent->get_d());
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::CatalogMiss) throw;
        }
    }
    return fit;
}

ErrorFit fit_exponent(const ErrorSeries& series) { return fit_exponent(series.samples, series.f); }

CatalogReport compare_catalog(const ErrorFit& fit) {
    if (!fit.f) raise(ErrorKind::CatalogMiss, "the fit has no function attached");
    const auto entry = catalog_exponent(*fit.f);
    CatalogReport r;
    r.f = fit.f->name();
    r.slope = fit.slope;
    r.catalog_exponent = entry.exponent;
    r.source = entry.source;
    r.margin = entry.exponent.get_d() - fit.slope;
    r.max_constant = max_normalized_error(fit.samples, entry.exponent.get_d());
    r.red_flag = fit.slope > entry.exponent.get_d() + kRedFlagSlack;
    return r;
}

double max_normalized_error(const std::vector<ErrorSample>& samples, double exponent, double log_power) {
    double m = 0;
    for (const auto& s : samples) {
        const double x = static_cast<double>(s.x);
        const double scale = std::pow(x, exponent) * (log_power == 0 ? 1.0 : std::pow(std::log(x), log_power));
        m = std::max(m, std::fabs(s.error) / scale);
    }
    return m;
}

} // namespace frac::analysis
