#pragma once

// SampledPath: the universal discrete trajectory representation (a strictly
// increasing time grid starting at 0, plus values). TaggedPartition: a subset
// of grid indices with evaluation tags for Riemann-Stieltjes sums.

#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "pathint/common.hpp"

namespace pathint {

struct SampledPath {
    std::vector<double> times;
    std::vector<double> values;
    std::string label;

    std::size_t size() const { return times.size(); }
    double horizon() const { return times.empty() ? 0.0 : times.back(); }

    void validate() const {
        require(times.size() >= 2, "path needs at least 2 points");
        require(times.size() == values.size(), "times/values length mismatch");
        require(times.front() == 0.0, "path must start at t=0");
        for (std::size_t i = 0; i + 1 < times.size(); ++i)
            require(times[i] < times[i + 1], "times must be strictly increasing");
        require(times.back() > 0.0, "horizon must be positive");
        for (double v : values)
            require(is_finite(v), "path values must be finite");
        for (double t : times)
            require(is_finite(t), "path times must be finite");
    }

    /// Nominal spacing if the grid is uniform to within 1e-9 relative,
    /// otherwise 0. Fast kernel-table code paths key off this.
    double uniform_dt() const {
        const std::size_t n = times.size();
        if (n < 2) return 0.0;
        const double dt = times.back() / static_cast<double>(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (std::fabs((times[i + 1] - times[i]) - dt) > 1e-9 * dt) return 0.0;
        }
        return dt;
    }

    /// Keep every `step`-th point; (size-1) must be divisible by step.
    SampledPath subsample(std::size_t step) const {
        require(step >= 1 && (size() - 1) % step == 0,
                "subsample step must divide the cell count");
        SampledPath out;
        out.label = label;
        out.times.reserve((size() - 1) / step + 1);
        out.values.reserve(out.times.capacity());
        for (std::size_t i = 0; i < size(); i += step) {
            out.times.push_back(times[i]);
            out.values.push_back(values[i]);
        }
        return out;
    }

    static SampledPath from_function(const std::function<double(double)>& f, double T,
                                     std::size_t n, std::string label = "") {
        require(n >= 2 && T > 0, "from_function needs n >= 2 and T > 0");
        SampledPath p;
        p.label = std::move(label);
        p.times = linspace(0.0, T, n);
        p.values.resize(n);
        for (std::size_t i = 0; i < n; ++i) p.values[i] = f(p.times[i]);
        return p;
    }
};

enum class TagRule { forward, backward, midpoint };

/// Partition of [0,T] given by indices into a path grid, with a tag index
/// inside every cell. Forward tags (tag = left endpoint) realize the
/// forward/Follmer sum convention.
struct TaggedPartition {
    std::vector<std::size_t> points;  // strictly increasing, first=0, last=n-1
    std::vector<std::size_t> tags;    // tags[i] in [points[i], points[i+1]]

    std::size_t cells() const { return points.empty() ? 0 : points.size() - 1; }

    void validate(const SampledPath& path) const {
        require(points.size() >= 2, "partition needs at least 2 points");
        require(points.front() == 0 && points.back() == path.size() - 1,
                "partition must span [0,T]");
        for (std::size_t i = 0; i + 1 < points.size(); ++i)
            require(points[i] < points[i + 1], "partition indices must increase");
        require(tags.size() == cells(), "one tag per cell required");
        for (std::size_t i = 0; i < tags.size(); ++i)
            require(tags[i] >= points[i] && tags[i] <= points[i + 1],
                    "tag outside its cell");
    }

    double mesh(const SampledPath& path) const {
        double m = 0;
        for (std::size_t i = 0; i + 1 < points.size(); ++i)
            m = std::max(m, path.times[points[i + 1]] - path.times[points[i]]);
        return m;
    }

    static TaggedPartition full_grid(const SampledPath& path, TagRule rule = TagRule::forward) {
        return strided(path, 1, rule);
    }

    /// Every `stride`-th grid point; (n-1) must be divisible by stride.
    static TaggedPartition strided(const SampledPath& path, std::size_t stride, TagRule rule) {
        require(stride >= 1 && (path.size() - 1) % stride == 0,
                "stride must divide the cell count");
        TaggedPartition part;
        for (std::size_t i = 0; i < path.size(); i += stride) part.points.push_back(i);
        part.tags.resize(part.cells());
        for (std::size_t i = 0; i < part.cells(); ++i) {
            switch (rule) {
                case TagRule::forward: part.tags[i] = part.points[i]; break;
                case TagRule::backward: part.tags[i] = part.points[i + 1]; break;
                case TagRule::midpoint:
                    part.tags[i] = (part.points[i] + part.points[i + 1]) / 2;
                    break;
            }
        }
        return part;
    }

    /// Dyadic partition with 2^level cells; requires 2^level | (n-1).
    static TaggedPartition dyadic(const SampledPath& path, unsigned level,
                                  TagRule rule = TagRule::forward) {
        const std::size_t cells = std::size_t{1} << level;
        require((path.size() - 1) % cells == 0, "dyadic level incompatible with grid");
        return strided(path, (path.size() - 1) / cells, rule);
    }
};

// ---------------------------------------------------------------------------
// CSV I/O: header "t,value", one row per grid point, %.17g round-trip text.
// ---------------------------------------------------------------------------

inline void write_csv(const SampledPath& path, std::ostream& os) {
    os << "t,value\n";
    char buf[64];
    for (std::size_t i = 0; i < path.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", path.times[i], path.values[i]);
        os << buf;
    }
}

inline void write_csv_file(const SampledPath& path, const std::string& filename) {
    std::ofstream os(filename);
    require(os.good(), "cannot open output file: " + filename);
    write_csv(path, os);
    require(os.good(), "write failed: " + filename);
}

inline SampledPath read_csv(std::istream& is, std::string label = "") {
    SampledPath p;
    p.label = std::move(label);
    std::string line;
    bool first = true;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        if (first) {
            first = false;
            if (line.rfind("t,", 0) == 0 || line.rfind("t;", 0) == 0) continue;  // header
        }
        double t = 0, v = 0;
        if (std::sscanf(line.c_str(), "%lf,%lf", &t, &v) != 2)
            throw ValidationError("bad CSV row " + std::to_string(lineno) + ": " + line);
        p.times.push_back(t);
        p.values.push_back(v);
    }
    p.validate();
    return p;
}

inline SampledPath read_csv_file(const std::string& filename) {
    std::ifstream is(filename);
    require(is.good(), "cannot open input file: " + filename);
    return read_csv(is, filename);
}

}  // namespace pathint
