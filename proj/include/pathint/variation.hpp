#pragma once

// p-variation along tagged partitions, the supremum of p-variation over all
// sub-partitions of a sampled path (dynamic program over grid subsets), and
// quadratic variation along refining partition sequences.
//
// The supremum over all partitions of a *sampled* path is taken over subsets
// of grid points: exact for piecewise-linear interpolants at p = 1 and a
// lower bound otherwise.

#include <cmath>
#include <limits>
#include <vector>

#include "pathint/common.hpp"
#include "pathint/path.hpp"

namespace pathint {

struct VariationReport {
    double p = 1.0;
    double along_partition = 0.0;           // v_p along the full grid
    double supremum = 0.0;                  // sup over grid subsets
    std::vector<std::size_t> maximizing_subset;
};

struct SupVariationOptions {
    std::size_t size_cap = std::size_t{1} << 15;  // O(n^2) cost guard
    bool approximate_above_cap = false;  // preselect direction-change extrema first
};

namespace detail {

inline double pow_p(double x, double p) {
    x = std::fabs(x);
    if (p == 1.0) return x;
    if (p == 2.0) return x * x;
    return std::pow(x, p);
}

/// Indices of the endpoints plus every local direction change. For p >= 1 the
/// optimal subset only ever needs these points (dropping an interior point of
/// a monotone run cannot decrease the sum since (x+y)^p >= x^p + y^p).
inline std::vector<std::size_t> extremal_indices(const std::vector<double>& v) {
    std::vector<std::size_t> idx;
    idx.push_back(0);
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
        const double a = v[i] - v[i - 1];
        const double b = v[i + 1] - v[i];
        if ((a > 0 && b < 0) || (a < 0 && b > 0)) idx.push_back(i);
    }
    idx.push_back(v.size() - 1);
    return idx;
}

}  // namespace detail

/// v_p(f; pi) = sum over partition cells of |increment|^p.
inline double p_variation(const SampledPath& path, const TaggedPartition& part, double p) {
    require(p >= 1.0, "p must be >= 1");
    part.validate(path);
    double acc = 0;
    for (std::size_t i = 0; i + 1 < part.points.size(); ++i)
        acc += detail::pow_p(path.values[part.points[i + 1]] - path.values[part.points[i]], p);
    return acc;
}

/// Supremum of v_p over all grid subsets containing both endpoints.
/// DP: best[j] = max_{i<j} best[i] + |f_j - f_i|^p, answer best[n-1].
inline VariationReport sup_p_variation(const SampledPath& path, double p,
                                       const SupVariationOptions& opts = {}) {
    require(p >= 1.0, "p must be >= 1");
    path.validate();

    std::vector<std::size_t> nodes;
    if (path.size() > opts.size_cap) {
        if (!opts.approximate_above_cap)
            throw SizeError("path exceeds the sup-variation size cap (" +
                            std::to_string(opts.size_cap) + " points)");
        nodes = detail::extremal_indices(path.values);
        if (nodes.size() > opts.size_cap)
            throw SizeError("extremal preselection still exceeds the size cap");
    } else {
        nodes.resize(path.size());
        for (std::size_t i = 0; i < nodes.size(); ++i) nodes[i] = i;
    }

    const std::size_t m = nodes.size();
    std::vector<double> best(m, 0.0);
    std::vector<std::size_t> prev(m, 0);
    for (std::size_t j = 1; j < m; ++j) {
        double b = -1.0;
        std::size_t arg = 0;
        const double fj = path.values[nodes[j]];
        for (std::size_t i = 0; i < j; ++i) {
            const double cand = best[i] + detail::pow_p(fj - path.values[nodes[i]], p);
            if (cand > b) {
                b = cand;
                arg = i;
            }
        }
        best[j] = b;
        prev[j] = arg;
    }

    VariationReport report;
    report.p = p;
    report.supremum = best[m - 1];
    report.along_partition = p_variation(path, TaggedPartition::full_grid(path), p);
    std::vector<std::size_t> subset;
    for (std::size_t j = m - 1;; j = prev[j]) {
        subset.push_back(nodes[j]);
        if (j == 0) break;
    }
    report.maximizing_subset.assign(subset.rbegin(), subset.rend());
    return report;
}

/// v_2 along each partition of a refining sequence; the last entry
/// approximates the quadratic variation <X>_T.
inline std::vector<double> quadratic_variation(const SampledPath& path,
                                               const std::vector<TaggedPartition>& parts) {
    std::vector<double> out;
    out.reserve(parts.size());
    double prev_mesh = std::numeric_limits<double>::infinity();
    for (const auto& part : parts) {
        const double mesh = part.mesh(path);
        require(mesh <= prev_mesh, "partition sequence must refine (mesh decreasing)");
        prev_mesh = mesh;
        out.push_back(p_variation(path, part, 2.0));
    }
    return out;
}

/// Convenience: dyadic partitions at the given levels.
inline std::vector<TaggedPartition> dyadic_partitions(const SampledPath& path, unsigned lo_level,
                                                      unsigned hi_level) {
    require(lo_level <= hi_level, "level range reversed");
    std::vector<TaggedPartition> parts;
    for (unsigned level = lo_level; level <= hi_level; ++level)
        parts.push_back(TaggedPartition::dyadic(path, level));
    return parts;
}

}  // namespace pathint
