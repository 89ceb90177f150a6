#pragma once

// Convex functions and functions of locally bounded variation through their
// measure representation: mu = f'' as atoms plus a piecewise-constant
// density, the sign-kernel representation of the left derivative
// (sgn(0) = -1), Jordan decomposition as a difference of two non-decreasing
// parts, compact-support truncation, and the one-sided smooth mollification
// f_n with f_n' increasing to f'_-.
//
// Singular-continuous measure parts (Cantor-type) are not representable here.

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "pathint/common.hpp"

namespace pathint {

// ---------------------------------------------------------------------------
// RadonMeasure: atoms + piecewise-constant density on a compact support
// ---------------------------------------------------------------------------

struct RadonMeasure {
    struct Atom {
        double location;
        double weight;  // > 0
    };

    std::vector<Atom> atoms;
    std::vector<double> density_breaks;  // sorted; level k lives on (breaks[k], breaks[k+1])
    std::vector<double> density_levels;  // >= 0, one per density cell
    double support_lo = 0.0;
    double support_hi = 0.0;

    void validate() const {
        require(support_lo <= support_hi, "measure support interval reversed");
        for (const auto& a : atoms) {
            require(a.weight > 0, "atom weights must be positive");
            require(a.location >= support_lo && a.location <= support_hi,
                    "atom outside the support interval");
        }
        if (!density_breaks.empty()) {
            require(density_breaks.size() == density_levels.size() + 1,
                    "density needs one more breakpoint than levels");
            for (std::size_t i = 0; i + 1 < density_breaks.size(); ++i)
                require(density_breaks[i] < density_breaks[i + 1],
                        "density breakpoints must increase");
            require(density_breaks.front() >= support_lo &&
                        density_breaks.back() <= support_hi,
                    "density outside the support interval");
            for (double l : density_levels) require(l >= 0, "density levels must be >= 0");
        }
        require(is_finite(total_mass()), "measure must have finite mass");
    }

    double total_mass() const {
        double m = 0;
        for (const auto& a : atoms) m += a.weight;
        for (std::size_t k = 0; k < density_levels.size(); ++k)
            m += density_levels[k] * (density_breaks[k + 1] - density_breaks[k]);
        return m;
    }

    /// mu((-inf, x)), atoms at exactly x excluded.
    double mass_below(double x) const {
        double m = 0;
        for (const auto& a : atoms)
            if (a.location < x) m += a.weight;
        for (std::size_t k = 0; k < density_levels.size(); ++k) {
            const double lo = density_breaks[k], hi = density_breaks[k + 1];
            const double cut = std::min(std::max(x, lo), hi);
            m += density_levels[k] * (cut - lo);
        }
        return m;
    }

    /// mu((s, t)), open at both ends.
    double mass_open_interval(double s, double t) const {
        if (t <= s) return 0.0;
        double m = 0;
        for (const auto& a : atoms)
            if (a.location > s && a.location < t) m += a.weight;
        for (std::size_t k = 0; k < density_levels.size(); ++k) {
            const double lo = std::max(density_breaks[k], s);
            const double hi = std::min(density_breaks[k + 1], t);
            if (hi > lo) m += density_levels[k] * (hi - lo);
        }
        return m;
    }

    /// Integral of |x - a| against the measure (closed form).
    double abs_moment(double x) const {
        double m = 0;
        for (const auto& a : atoms) m += a.weight * std::fabs(x - a.location);
        for (std::size_t k = 0; k < density_levels.size(); ++k) {
            const double lo = density_breaks[k], hi = density_breaks[k + 1];
            double piece;
            if (x <= lo)
                piece = 0.5 * ((hi - x) * (hi - x) - (lo - x) * (lo - x));
            else if (x >= hi)
                piece = 0.5 * ((x - lo) * (x - lo) - (x - hi) * (x - hi));
            else
                piece = 0.5 * ((x - lo) * (x - lo) + (hi - x) * (hi - x));
            m += density_levels[k] * piece;
        }
        return m;
    }

    /// Restriction to [lo, hi] (atoms on the boundary kept).
    RadonMeasure restricted(double lo, double hi) const {
        RadonMeasure r;
        r.support_lo = std::max(support_lo, lo);
        r.support_hi = std::min(support_hi, hi);
        if (r.support_lo > r.support_hi) {
            r.support_lo = r.support_hi = 0.0;
            return r;
        }
        for (const auto& a : atoms)
            if (a.location >= lo && a.location <= hi) r.atoms.push_back(a);
        for (std::size_t k = 0; k < density_levels.size(); ++k) {
            const double plo = std::max(density_breaks[k], lo);
            const double phi = std::min(density_breaks[k + 1], hi);
            if (phi > plo) {
                if (r.density_breaks.empty()) {
                    r.density_breaks.push_back(plo);
                } else if (r.density_breaks.back() < plo) {
                    // zero-level pad so breaks stay contiguous across gaps
                    r.density_levels.push_back(0.0);
                    r.density_breaks.push_back(plo);
                }
                r.density_breaks.push_back(phi);
                r.density_levels.push_back(density_levels[k]);
            }
        }
        return r;
    }

    static RadonMeasure point_mass(double location, double weight = 1.0) {
        RadonMeasure m;
        m.atoms.push_back({location, weight});
        m.support_lo = std::min(location, 0.0) - 1.0;
        m.support_hi = std::max(location, 0.0) + 1.0;
        return m;
    }

    static RadonMeasure uniform_density(double lo, double hi, double level) {
        RadonMeasure m;
        m.density_breaks = {lo, hi};
        m.density_levels = {level};
        m.support_lo = lo;
        m.support_hi = hi;
        return m;
    }
};

// ---------------------------------------------------------------------------
// BVFunction: difference of two measure-represented non-decreasing parts
// ---------------------------------------------------------------------------

struct BVFunction {
    struct Part {
        double constant = 0.0;
        RadonMeasure measure;

        /// C + (1/2) * integral of sgn(x - a) d(mu), sgn(0) = -1: the
        /// left-continuous representative of the non-decreasing part.
        double evaluate(double x) const {
            return constant + measure.mass_below(x) - 0.5 * measure.total_mass();
        }
        /// Exact primitive int_0^x of the part.
        double antiderivative(double x) const {
            return constant * x + 0.5 * (measure.abs_moment(x) - measure.abs_moment(0.0));
        }
    };

    Part positive;
    Part negative;

    void validate() const {
        positive.measure.validate();
        negative.measure.validate();
    }

    double support_lo() const {
        return std::min(positive.measure.support_lo, negative.measure.support_lo);
    }
    double support_hi() const {
        return std::max(positive.measure.support_hi, negative.measure.support_hi);
    }

    double evaluate(double x) const { return positive.evaluate(x) - negative.evaluate(x); }

    /// f(x) = int_0^x f'_-(y) dy, the convex (difference) antiderivative.
    double antiderivative(double x) const {
        return positive.antiderivative(x) - negative.antiderivative(x);
    }

    /// An indicator step 1_{x > a}: unit atom at a with constant 1/2.
    static BVFunction indicator_above(double a) {
        BVFunction f;
        f.positive.constant = 0.5;
        f.positive.measure = RadonMeasure::point_mass(a, 1.0);
        return f;
    }

    static BVFunction constant(double c) {
        BVFunction f;
        f.positive.constant = c;
        f.positive.measure.support_lo = -1.0;
        f.positive.measure.support_hi = 1.0;
        return f;
    }
};

/// f'_-(x) via the sign-kernel representation, sgn(0) = -1; atoms exactly at
/// x count negatively (left continuity).
inline double evaluate_left_derivative(const BVFunction& f, double x) {
    return f.evaluate(x);
}

/// Restrict both measures to [-n, n] and re-center the constants so the
/// evaluation agrees with f on (-n, n] and is constant outside.
inline BVFunction truncate_to_compact(const BVFunction& f, double n) {
    require(n > 0, "truncation radius must be positive");
    auto truncate_part = [n](const BVFunction::Part& part) {
        BVFunction::Part out;
        out.measure = part.measure.restricted(-n, n);
        const double removed_below = part.measure.mass_below(-n);
        const double removed_above =
            part.measure.total_mass() - out.measure.total_mass() - removed_below;
        out.constant = part.constant + 0.5 * removed_below - 0.5 * removed_above;
        return out;
    };
    BVFunction out;
    out.positive = truncate_part(f.positive);
    out.negative = truncate_part(f.negative);
    return out;
}

// ---------------------------------------------------------------------------
// Mollification
// ---------------------------------------------------------------------------

namespace detail {

/// Normalized smooth bump supported in [-1, 0] with cumulative table.
struct BumpProfile {
    static constexpr int kCells = 4096;
    std::vector<double> cdf;  // cdf[k] = integral of phi over [-1, -1 + k/kCells]
    double norm = 1.0;

    BumpProfile() {
        std::vector<double> raw(kCells + 1);
        for (int k = 0; k <= kCells; ++k) raw[k] = raw_phi(u_at(k));
        cdf.assign(kCells + 1, 0.0);
        const double h = 1.0 / kCells;
        for (int k = 1; k <= kCells; ++k)
            cdf[k] = cdf[k - 1] + 0.5 * (raw[k - 1] + raw[k]) * h;
        norm = cdf[kCells];
        for (auto& c : cdf) c /= norm;
    }

    static double u_at(int k) { return -1.0 + static_cast<double>(k) / kCells; }

    static double raw_phi(double u) {
        const double x = 2.0 * u + 1.0;  // map [-1,0] onto [-1,1]
        if (x <= -1.0 || x >= 1.0) return 0.0;
        return std::exp(-1.0 / (1.0 - x * x));
    }

    double phi(double u) const { return raw_phi(u) / norm; }

    /// Integral of phi over [-1, min(u,0)], clamped to [0,1]; linear
    /// interpolation of a monotone table (monotone in u by construction).
    double cdf_at(double u) const {
        if (u <= -1.0) return 0.0;
        if (u >= 0.0) return 1.0;
        const double pos = (u + 1.0) * kCells;
        const int k = std::min(kCells - 1, static_cast<int>(pos));
        const double frac = pos - k;
        return cdf[k] * (1.0 - frac) + cdf[k + 1] * frac;
    }

    static const BumpProfile& instance() {
        static const BumpProfile profile;
        return profile;
    }
};

}  // namespace detail

struct Mollifier {
    int scale;  // n in f_n
    explicit Mollifier(int n) : scale(n) { require(n >= 1, "mollifier scale must be >= 1"); }

    double phi(double u) const { return detail::BumpProfile::instance().phi(u); }
    double cdf(double u) const { return detail::BumpProfile::instance().cdf_at(u); }
};

/// f_n together with exactly-evaluable first and second derivatives.
/// f_n'(x) is non-decreasing in the scale pointwise by construction: every
/// quadrature node contributes a term monotone in the scale.
class MollifiedFunction {
public:
    MollifiedFunction(BVFunction f, int scale) : f_(std::move(f)), n_(scale) {
        require(scale >= 1, "mollifier scale must be >= 1");
        require(is_finite(f_.support_lo()) && is_finite(f_.support_hi()),
                "mollify needs a compact-support measure; truncate first");
    }

    int scale() const { return n_; }

    /// f_n(x) = n * int f(x+y) phi(n y) dy, trapezoid over the bump support.
    double eval(double x) const {
        const auto& bump = detail::BumpProfile::instance();
        const int J = 1024;
        double acc = 0;
        for (int j = 0; j <= J; ++j) {
            const double u = -1.0 + static_cast<double>(j) / J;
            const double w = (j == 0 || j == J) ? 0.5 : 1.0;
            acc += w * bump.phi(u) * f_.antiderivative(x + u / n_);
        }
        return acc / J;
    }

    /// f_n'(x) = C + mass/2 - integral of Phi(n(a-x)) d(mu), exact for atoms,
    /// fixed-node trapezoid for the density part.
    double deriv(double x) const {
        return part_deriv(f_.positive, x) - part_deriv(f_.negative, x);
    }

    /// f_n''(a) >= 0 for convex parts: n * (phi scaled) convolved with mu.
    double second(double a) const {
        return part_second(f_.positive.measure, a) - part_second(f_.negative.measure, a);
    }

private:
    double part_deriv(const BVFunction::Part& part, double x) const {
        const auto& bump = detail::BumpProfile::instance();
        const auto& mu = part.measure;
        double conv = 0;
        for (const auto& atom : mu.atoms)
            conv += atom.weight * bump.cdf_at(n_ * (atom.location - x));
        for (std::size_t k = 0; k < mu.density_levels.size(); ++k) {
            const double lo = mu.density_breaks[k], hi = mu.density_breaks[k + 1];
            const int J = 4096;
            const double h = (hi - lo) / J;
            double piece = 0;
            for (int j = 0; j <= J; ++j) {
                const double a = lo + h * j;
                const double w = (j == 0 || j == J) ? 0.5 : 1.0;
                piece += w * bump.cdf_at(n_ * (a - x));
            }
            conv += mu.density_levels[k] * piece * h;
        }
        return part.constant + 0.5 * mu.total_mass() - conv;
    }

    double part_second(const RadonMeasure& mu, double a) const {
        const auto& bump = detail::BumpProfile::instance();
        double acc = 0;
        for (const auto& atom : mu.atoms)
            acc += atom.weight * n_ * bump.phi(n_ * (atom.location - a));
        for (std::size_t k = 0; k < mu.density_levels.size(); ++k) {
            const double lo = mu.density_breaks[k], hi = mu.density_breaks[k + 1];
            acc += mu.density_levels[k] *
                   (bump.cdf_at(n_ * (hi - a)) - bump.cdf_at(n_ * (lo - a)));
        }
        return acc;
    }

    BVFunction f_;
    int n_;
};

inline MollifiedFunction mollify(const BVFunction& f, const Mollifier& m) {
    return MollifiedFunction(f, m.scale);
}

// ---------------------------------------------------------------------------
// liminf bound check (the Portmanteau-style lemma)
// ---------------------------------------------------------------------------

struct LiminfReport {
    double mu_mass = 0.0;  // mu((s, t))
    std::vector<std::pair<int, double>> approximations;  // (scale, integral of f_n'')
    double liminf_proxy = 0.0;  // min over the tail half of the scales
    bool holds = false;
};

/// Checks mu((s,t)) <= liminf_n of int over (s,t) of f_n''(a) da, with the
/// liminf proxied by the minimum over the tail half of the scale list. The
/// integral of f_n'' is evaluated as f_n'(t) - f_n'(s).
inline LiminfReport liminf_measure_bound_check(const RadonMeasure& mu, const Mollifier&,
                                               double s_val, double t_val,
                                               const std::vector<int>& scales) {
    require(s_val < t_val, "need s < t");
    require(!scales.empty(), "need at least one mollifier scale");
    mu.validate();

    BVFunction g;
    g.positive.measure = mu;

    LiminfReport report;
    report.mu_mass = mu.mass_open_interval(s_val, t_val);
    for (int n : scales) {
        const MollifiedFunction fn(g, n);
        report.approximations.emplace_back(n, fn.deriv(t_val) - fn.deriv(s_val));
    }
    const std::size_t tail_start = scales.size() / 2;
    double proxy = std::numeric_limits<double>::infinity();
    for (std::size_t i = tail_start; i < report.approximations.size(); ++i)
        proxy = std::min(proxy, report.approximations[i].second);
    report.liminf_proxy = proxy;
    report.holds = proxy >= report.mu_mass - 1e-3 * std::max(1.0, mu.total_mass());
    return report;
}

}  // namespace pathint
