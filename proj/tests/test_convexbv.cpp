#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "pathint/convexbv.hpp"
#include "pathint/rng.hpp"

using namespace pathint;

TEST_CASE("left-derivative evaluation via the sign kernel") {
    SECTION("unit atom at 0 with C=1/2 is the indicator 1_{x>0}") {
        const auto f = BVFunction::indicator_above(0.0);
        REQUIRE(evaluate_left_derivative(f, -1.0) == 0.0);
        REQUIRE(evaluate_left_derivative(f, 0.0) == 0.0);  // sgn(0) = -1
        REQUIRE(evaluate_left_derivative(f, 1e-12) == 1.0);
        REQUIRE(evaluate_left_derivative(f, 2.0) == 1.0);
    }
    SECTION("zero measure evaluates to the constant") {
        const auto f = BVFunction::constant(2.5);
        for (double x : {-3.0, 0.0, 1.0, 7.0})
            REQUIRE(evaluate_left_derivative(f, x) == 2.5);
    }
    SECTION("uniform density on [-1,1] with C=0 clamps") {
        BVFunction f;
        f.positive.measure = RadonMeasure::uniform_density(-1.0, 1.0, 1.0);
        REQUIRE(evaluate_left_derivative(f, 0.0) == Catch::Approx(0.0).margin(1e-14));
        REQUIRE(evaluate_left_derivative(f, 0.5) == Catch::Approx(0.5));
        REQUIRE(evaluate_left_derivative(f, -0.5) == Catch::Approx(-0.5));
        REQUIRE(evaluate_left_derivative(f, 3.0) == Catch::Approx(1.0));
        REQUIRE(evaluate_left_derivative(f, -3.0) == Catch::Approx(-1.0));
    }
    SECTION("left continuity at an atom") {
        const auto f = BVFunction::indicator_above(0.3);
        const double at = evaluate_left_derivative(f, 0.3);
        for (double eps : {1e-6, 1e-9, 1e-12})
            REQUIRE(evaluate_left_derivative(f, 0.3 - eps) == at);
        REQUIRE(evaluate_left_derivative(f, 0.3 + 1e-12) == at + 1.0);
    }
}

TEST_CASE("antiderivative is the convex primitive") {
    SECTION("relu from the indicator") {
        const auto f = BVFunction::indicator_above(0.0);
        for (double x : {-2.0, -0.5, 0.0, 0.3, 1.7})
            REQUIRE(f.antiderivative(x) == Catch::Approx(std::max(x, 0.0)).margin(1e-14));
    }
    SECTION("midpoint convexity on random pairs") {
        BVFunction f;
        f.positive.constant = -0.2;
        f.positive.measure = RadonMeasure::uniform_density(-1.0, 2.0, 0.7);
        f.positive.measure.atoms.push_back({0.5, 1.3});
        f.positive.measure.support_lo = -1.0;
        f.positive.measure.support_hi = 2.0;
        CounterRng rng(4);
        for (int i = 0; i < 200; ++i) {
            const double x = 6.0 * rng.next_uniform() - 3.0;
            const double y = 6.0 * rng.next_uniform() - 3.0;
            const double lhs = f.antiderivative(0.5 * (x + y));
            const double rhs = 0.5 * (f.antiderivative(x) + f.antiderivative(y));
            REQUIRE(lhs <= rhs + 1e-9);
        }
    }
}

TEST_CASE("truncation to compact support") {
    BVFunction f;
    f.positive.constant = 0.4;
    f.positive.measure = RadonMeasure::uniform_density(-3.0, 3.0, 0.5);
    f.positive.measure.atoms.push_back({-2.5, 1.0});
    f.positive.measure.atoms.push_back({1.5, 2.0});
    f.negative.measure = RadonMeasure::point_mass(2.2, 0.8);

    SECTION("support already inside is untouched") {
        const auto g = truncate_to_compact(f, 10.0);
        CounterRng rng(9);
        for (int i = 0; i < 100; ++i) {
            const double x = 12.0 * rng.next_uniform() - 6.0;
            REQUIRE(g.evaluate(x) == Catch::Approx(f.evaluate(x)).margin(1e-12));
        }
    }
    SECTION("agreement inside (-n, n], constant outside") {
        const double n = 2.0;
        const auto g = truncate_to_compact(f, n);
        CounterRng rng(10);
        for (int i = 0; i < 1000; ++i) {
            const double x = -n + 2.0 * n * rng.next_uniform();
            REQUIRE(g.evaluate(x) == Catch::Approx(f.evaluate(x)).margin(1e-12));
        }
        REQUIRE(g.evaluate(n) == Catch::Approx(f.evaluate(n)).margin(1e-12));
        REQUIRE(g.evaluate(n + 1.0) == g.evaluate(n + 100.0));
        REQUIRE(g.evaluate(-n - 0.5) == g.evaluate(-n - 50.0));
    }
    SECTION("idempotence") {
        const auto g1 = truncate_to_compact(f, 2.0);
        const auto g2 = truncate_to_compact(g1, 2.0);
        REQUIRE(g1.positive.constant == g2.positive.constant);
        REQUIRE(g1.negative.constant == g2.negative.constant);
        REQUIRE(g1.positive.measure.total_mass() == g2.positive.measure.total_mass());
        for (double x : {-5.0, -1.0, 0.0, 1.0, 5.0})
            REQUIRE(g1.evaluate(x) == g2.evaluate(x));
    }
    SECTION("product composition matches clamped evaluation in both coordinates") {
        // 2-d truncation table: f_n(x,y) = f(clamp(x), clamp(y)) for
        // coordinate-wise products; probe one point in each of the 9 regions.
        const double n = 1.0;
        BVFunction a;
        a.positive.measure = RadonMeasure::uniform_density(-2.0, 2.0, 0.25);
        a.positive.constant = 0.6;
        BVFunction b;
        b.positive.measure = RadonMeasure::uniform_density(-2.0, 2.0, 0.4);
        b.positive.constant = 0.9;
        const auto ta = truncate_to_compact(a, n);
        const auto tb = truncate_to_compact(b, n);
        auto clamp = [n](double v) { return std::min(n, std::max(-n, v)); };
        for (double x : {-1.6, 0.2, 1.9}) {
            for (double y : {-1.4, -0.3, 1.5}) {
                const double lhs = ta.evaluate(x) * tb.evaluate(y);
                const double rhs = a.evaluate(clamp(x)) * b.evaluate(clamp(y));
                REQUIRE(lhs == Catch::Approx(rhs).margin(1e-12));
            }
        }
    }
}

TEST_CASE("mollifier profile") {
    const Mollifier m(8);
    REQUIRE(m.cdf(-1.0) == 0.0);
    REQUIRE(m.cdf(0.0) == 1.0);
    REQUIRE(m.cdf(-0.5) == Catch::Approx(0.5).margin(1e-10));  // symmetric bump
    // unit mass within 1e-10 after normalization
    const int J = 20000;
    double mass = 0;
    for (int j = 0; j <= J; ++j) {
        const double u = -1.0 + static_cast<double>(j) / J;
        mass += ((j == 0 || j == J) ? 0.5 : 1.0) * m.phi(u);
    }
    REQUIRE(mass / J == Catch::Approx(1.0).margin(1e-10));
    REQUIRE(m.phi(-0.5) > 0.0);
    REQUIRE(m.phi(0.1) == 0.0);
    REQUIRE(m.phi(-1.1) == 0.0);
}

TEST_CASE("mollification") {
    SECTION("affine f: same slope, shift bounded by the bump width") {
        const auto f = BVFunction::constant(1.5);  // f'(x) = 1.5, f(x) = 1.5 x
        for (int n : {4, 32}) {
            const MollifiedFunction fn = mollify(f, Mollifier(n));
            REQUIRE(fn.deriv(-1.0) == Catch::Approx(1.5).margin(1e-12));
            REQUIRE(fn.deriv(2.0) == Catch::Approx(1.5).margin(1e-12));
            const double slope = (fn.eval(1.0) - fn.eval(0.0)) / 1.0;
            REQUIRE(slope == Catch::Approx(1.5).margin(1e-9));
            REQUIRE(std::fabs(fn.eval(0.0) - 0.0) <= 1.5 / n + 1e-9);
        }
    }
    SECTION("relu: f_n' increases pointwise to the indicator") {
        const auto f = BVFunction::indicator_above(0.0);
        for (double x : {-0.4, -0.01, 0.02, 0.7}) {
            double prev = -1.0;
            for (int n : {4, 16, 64, 256}) {
                const double v = mollify(f, Mollifier(n)).deriv(x);
                REQUIRE(v >= prev - 1e-12);
                REQUIRE(v <= f.evaluate(x) + 1e-12);  // approximation from the left
                prev = v;
            }
            if (x > 0.05) REQUIRE(prev == Catch::Approx(1.0).margin(1e-6));
            if (x < -0.05) REQUIRE(prev == Catch::Approx(0.0).margin(1e-6));
        }
    }
    SECTION("monotone in scale at many points, mixed measure") {
        BVFunction f;
        f.positive.constant = 0.1;
        f.positive.measure = RadonMeasure::uniform_density(-1.0, 1.0, 0.8);
        f.positive.measure.atoms.push_back({0.25, 0.6});
        for (double x = -1.5; x <= 1.5; x += 0.075) {
            double prev = -1e300;
            for (int n : {2, 4, 8, 16, 32, 64, 128, 256}) {
                const double v = mollify(f, Mollifier(n)).deriv(x);
                REQUIRE(v >= prev - 1e-9);
                prev = v;
            }
        }
    }
    SECTION("f_n'' is nonnegative and integrates weakly against test functions") {
        BVFunction f;
        f.positive.measure = RadonMeasure::point_mass(0.2, 1.0);
        f.positive.measure.density_breaks = {-0.8, -0.2};
        f.positive.measure.density_levels = {1.5};
        f.positive.measure.support_lo = -1.0;
        f.positive.measure.support_hi = 1.0;
        const auto& mu = f.positive.measure;

        // 5 smooth compact-support test functions g
        auto bump = [](double x, double c, double w) {
            const double z = (x - c) / w;
            return std::fabs(z) < 1.0 ? std::exp(-1.0 / (1.0 - z * z)) : 0.0;
        };
        struct TestG {
            double c, w;
        };
        const TestG gs[] = {{0.0, 1.5}, {0.2, 0.6}, {-0.5, 0.8}, {0.5, 1.0}, {-0.1, 2.0}};

        for (const auto& g : gs) {
            // exact mu-side
            double mu_side = 0;
            for (const auto& atom : mu.atoms) mu_side += atom.weight * bump(atom.location, g.c, g.w);
            {
                const int J = 4000;
                const double lo = mu.density_breaks[0], hi = mu.density_breaks[1];
                double acc = 0;
                for (int j = 0; j <= J; ++j) {
                    const double a = lo + (hi - lo) * j / J;
                    acc += ((j == 0 || j == J) ? 0.5 : 1.0) * bump(a, g.c, g.w);
                }
                mu_side += mu.density_levels[0] * acc * (hi - lo) / J;
            }
            // f_n'' side at scale 256 on a fine fixed grid
            const MollifiedFunction fn = mollify(f, Mollifier(256));
            const int J = 1 << 15;
            const double lo = -2.5, hi = 2.5;
            double fn_side = 0;
            for (int j = 0; j <= J; ++j) {
                const double a = lo + (hi - lo) * j / J;
                const double val = fn.second(a);
                REQUIRE(val >= -1e-8);
                fn_side += ((j == 0 || j == J) ? 0.5 : 1.0) * val * bump(a, g.c, g.w);
            }
            fn_side *= (hi - lo) / J;
            REQUIRE(fn_side == Catch::Approx(mu_side).margin(1e-2));
        }
    }
}

TEST_CASE("liminf measure bound") {
    const std::vector<int> scales = {4, 8, 16, 32, 64, 128, 256};
    SECTION("unit atom at 0 against (-1,1)") {
        const auto mu = RadonMeasure::point_mass(0.0, 1.0);
        const auto r = liminf_measure_bound_check(mu, Mollifier(4), -1.0, 1.0, scales);
        REQUIRE(r.mu_mass == 1.0);
        REQUIRE(r.liminf_proxy >= 1.0 - 1e-3);
        REQUIRE(r.holds);
    }
    SECTION("atom exactly at t_val is excluded on the measure side") {
        const auto mu = RadonMeasure::point_mass(1.0, 1.0);
        const auto r = liminf_measure_bound_check(mu, Mollifier(4), -1.0, 1.0, scales);
        REQUIRE(r.mu_mass == 0.0);
        REQUIRE(r.holds);
    }
    SECTION("uniform density on [-1,1] against (0, 0.5)") {
        const auto mu = RadonMeasure::uniform_density(-1.0, 1.0, 0.5);
        const auto r = liminf_measure_bound_check(mu, Mollifier(4), 0.0, 0.5, scales);
        REQUIRE(r.mu_mass == Catch::Approx(0.25));
        REQUIRE(r.liminf_proxy == Catch::Approx(0.25).margin(5e-3));
        REQUIRE(r.holds);
    }
}
