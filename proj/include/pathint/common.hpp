#pragma once

// Shared error types and small numeric utilities used across the library.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace pathint {

/// Bad input data or broken type invariant (CLI maps these to exit code 1).
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid operation configuration (order windows, reconstruction choices, ...).
struct ConfigError : ValidationError {
    using ValidationError::ValidationError;
};

/// Input exceeds a hard cost guard (e.g. the O(n^2) variation cap).
struct SizeError : ValidationError {
    using ValidationError::ValidationError;
};

/// A computation produced non-finite intermediates or failed to converge
/// (CLI maps these to exit code 2).
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Norm values above this cap are reported as +infinity.
inline constexpr double kNormCap = 1e12;

inline bool is_finite(double x) { return std::isfinite(x); }

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw ValidationError(msg);
}

inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> v(n);
    if (n == 1) {
        v[0] = lo;
        return v;
    }
    for (std::size_t i = 0; i < n; ++i)
        v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    if (n >= 2) v[n - 1] = hi;
    return v;
}

/// Sample quantile with linear interpolation between order statistics.
inline double quantile(std::vector<double> xs, double q) {
    require(!xs.empty(), "quantile of empty sample");
    std::sort(xs.begin(), xs.end());
    if (q <= 0) return xs.front();
    if (q >= 1) return xs.back();
    const double pos = q * static_cast<double>(xs.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(lo);
    if (lo + 1 >= xs.size()) return xs.back();
    return xs[lo] * (1.0 - frac) + xs[lo + 1] * frac;
}

inline double mean(const std::vector<double>& xs) {
    require(!xs.empty(), "mean of empty sample");
    double s = 0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

/// Spearman rank correlation (average ranks on ties). Returns 0 for
/// degenerate inputs where one side has no rank variation.
inline double spearman_rho(const std::vector<double>& x, const std::vector<double>& y) {
    require(x.size() == y.size() && x.size() >= 2, "spearman needs two equal-length samples");
    auto ranks = [](const std::vector<double>& v) {
        const std::size_t n = v.size();
        std::vector<std::size_t> idx(n);
        for (std::size_t i = 0; i < n; ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
        std::vector<double> r(n);
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i;
            while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
            const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
            for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
            i = j + 1;
        }
        return r;
    };
    const auto rx = ranks(x);
    const auto ry = ranks(y);
    const double mx = mean(rx), my = mean(ry);
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    if (sxx == 0 || syy == 0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace pathint
