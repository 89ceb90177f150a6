#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "pathint/fracops.hpp"
#include "pathint/processes.hpp"

using namespace pathint;

namespace {

SampledPath power_path(double mu, std::size_t n) {
    return SampledPath::from_function([mu](double t) { return std::pow(t, mu); }, 1.0, n);
}

SampledPath indicator_above(const SampledPath& x, double level) {
    SampledPath f = x;
    for (auto& v : f.values) v = v > level ? 1.0 : 0.0;
    f.label = "indicator";
    return f;
}

}  // namespace

TEST_CASE("fractional integral closed forms") {
    const std::size_t n = 1 << 10;

    SECTION("I^beta of 1 equals s^beta/Gamma(beta+1)") {
        const auto f = power_path(0.0, n);
        const auto I = frac_integral_left(f, FracOrder(0.5), Reconstruction::piecewise_linear);
        REQUIRE(I.values.back() ==
                Catch::Approx(2.0 / std::sqrt(std::numbers::pi)).epsilon(1e-6));
        REQUIRE(I.values[0] == 0.0);
    }
    SECTION("I^beta of 0 is 0") {
        auto f = power_path(0.0, 64);
        for (auto& v : f.values) v = 0.0;
        const auto I = frac_integral_left(f, FracOrder(0.3), Reconstruction::piecewise_linear);
        for (double v : I.values) REQUIRE(v == 0.0);
    }
    SECTION("I^0.5 of t at s=1 equals 4/(3 sqrt(pi))") {
        const auto f = power_path(1.0, n);
        const auto I = frac_integral_left(f, FracOrder(0.5), Reconstruction::piecewise_linear);
        REQUIRE(I.values.back() ==
                Catch::Approx(4.0 / (3.0 * std::sqrt(std::numbers::pi))).epsilon(1e-9));
    }
}

TEST_CASE("fractional derivative closed forms") {
    const std::size_t n = 1 << 10;

    SECTION("constant: (D^beta c)(s) = c s^-beta / Gamma(1-beta)") {
        auto f = power_path(0.0, n);
        for (auto& v : f.values) v = 3.0;
        for (double beta : {0.2, 0.5, 0.8}) {
            const auto D = frac_deriv_left(f, FracOrder(beta), Reconstruction::piecewise_linear);
            for (std::size_t j = 1; j < n; j += 57) {
                const double expect =
                    3.0 * std::pow(f.times[j], -beta) / std::tgamma(1.0 - beta);
                REQUIRE(D.values[j] == Catch::Approx(expect).epsilon(1e-9));
            }
        }
    }
    SECTION("linear f is reproduced exactly by the segment-exact scheme") {
        const auto f = power_path(1.0, n);
        const auto D = frac_deriv_left(f, FracOrder(0.5), Reconstruction::piecewise_linear);
        REQUIRE(D.values.back() ==
                Catch::Approx(2.0 / std::sqrt(std::numbers::pi)).epsilon(1e-9));
    }
}

TEST_CASE("power-law oracle family: D^beta t^mu and I^beta t^mu") {
    // Gamma-ratio closed forms, interior points, n = 2^12.
    const std::size_t n = 1 << 12;
    for (double mu : {0.0, 1.0, 2.0, 3.0}) {
        const auto f = power_path(mu, n);
        for (double beta : {0.2, 0.5, 0.8}) {
            const auto D = frac_deriv_left(f, FracOrder(beta), Reconstruction::piecewise_linear);
            const auto I = frac_integral_left(f, FracOrder(beta), Reconstruction::piecewise_linear);
            const double cd = std::tgamma(mu + 1.0) / std::tgamma(mu + 1.0 - beta);
            const double ci = std::tgamma(mu + 1.0) / std::tgamma(mu + 1.0 + beta);
            for (std::size_t j = n / 4; j < n; j += 101) {
                const double s = f.times[j];
                const double dref = cd * std::pow(s, mu - beta);
                const double iref = ci * std::pow(s, mu + beta);
                REQUIRE(D.values[j] == Catch::Approx(dref).epsilon(1e-3));
                REQUIRE(I.values[j] == Catch::Approx(iref).epsilon(1e-3));
            }
        }
    }
}

TEST_CASE("left inverse: D^beta of I^beta f recovers smooth f") {
    const std::size_t n = 1 << 10;
    const auto f = SampledPath::from_function(
        [](double t) { return 1.0 + t + std::sin(3.0 * t); }, 1.0, n);
    for (double beta : {0.3, 0.6}) {
        const auto I = frac_integral_left(f, FracOrder(beta), Reconstruction::piecewise_linear);
        const auto D = frac_deriv_left(I, FracOrder(beta), Reconstruction::piecewise_linear);
        double sup = 0, ref = 0;
        for (std::size_t j = n / 8; j < n; ++j) {
            sup = std::max(sup, std::fabs(D.values[j] - f.values[j]));
            ref = std::max(ref, std::fabs(f.values[j]));
        }
        REQUIRE(sup / ref < 1e-3);
    }
}

TEST_CASE("linearity of the derivative scheme") {
    const std::size_t n = 257;
    const auto f = generate(ProcessSpec::fbm_spec(0.7, 1.0, n, 1));
    const auto g = generate(ProcessSpec::fbm_spec(0.6, 1.0, n, 2));
    SampledPath comb = f;
    for (std::size_t i = 0; i < n; ++i)
        comb.values[i] = 2.5 * f.values[i] - 1.25 * g.values[i];

    const FracOrder beta(0.45);
    const auto Df = frac_deriv_left(f, beta, Reconstruction::piecewise_linear);
    const auto Dg = frac_deriv_left(g, beta, Reconstruction::piecewise_linear);
    const auto Dc = frac_deriv_left(comb, beta, Reconstruction::piecewise_linear);
    for (std::size_t j = 0; j < n; ++j) {
        const double expect = 2.5 * Df.values[j] - 1.25 * Dg.values[j];
        REQUIRE(Dc.values[j] == Catch::Approx(expect).margin(1e-9 * (1.0 + std::fabs(expect))));
    }
}

TEST_CASE("right-sided derivative") {
    const std::size_t n = 1 << 10;

    SECTION("constant g maps to 0") {
        auto g = power_path(0.0, n);
        for (auto& v : g.values) v = 7.0;
        const auto D = frac_deriv_right(g, FracOrder(0.5), 1.0, Reconstruction::piecewise_linear);
        for (double v : D.values) REQUIRE(std::fabs(v) < 1e-12);
    }
    SECTION("linear g: (D^{1-beta}_{1-} g_{1-})(s) = (1-s)^beta / Gamma(1+beta)") {
        const auto g = power_path(1.0, n);
        for (double beta : {0.3, 0.5, 0.7}) {
            const auto D =
                frac_deriv_right(g, FracOrder(beta), 1.0, Reconstruction::piecewise_linear);
            for (std::size_t j = 0; j + 1 < D.values.size(); j += 97) {
                const double expect =
                    std::pow(1.0 - g.times[j], beta) / std::tgamma(1.0 + beta);
                REQUIRE(D.values[j] == Catch::Approx(expect).epsilon(1e-9));
            }
            // spot value at s = 1/2 pinned from the symbolic closed form
            if (beta == 0.5) {
                const auto gh = power_path(1.0, n + 1);  // grid containing 0.5
                const auto Dm = frac_deriv_right(gh, FracOrder(0.5), 1.0,
                                                 Reconstruction::piecewise_linear);
                REQUIRE(Dm.values[n / 2] == Catch::Approx(0.7978845608028654).epsilon(1e-6));
            }
        }
    }
    SECTION("t off the grid is rejected") {
        const auto g = power_path(1.0, 64);
        REQUIRE_THROWS_AS(
            frac_deriv_right(g, FracOrder(0.5), 0.512345, Reconstruction::piecewise_linear),
            ValidationError);
    }
}

TEST_CASE("besov norm W1") {
    SECTION("zero function") {
        auto f = power_path(0.0, 128);
        for (auto& v : f.values) v = 0.0;
        REQUIRE(besov_norm_w1(f, FracOrder(0.4)) == 0.0);
    }
    SECTION("linear function: (2-beta)/(1-beta) on [0,1]") {
        const auto f = power_path(1.0, 1 << 9);
        for (double beta : {0.25, 0.5, 0.75}) {
            const double expect = (2.0 - beta) / (1.0 - beta);
            REQUIRE(besov_norm_w1(f, FracOrder(beta)) == Catch::Approx(expect).epsilon(1e-6));
        }
    }
    SECTION("single jump diverges at rate dt^-beta under refinement") {
        const double beta = 0.5;
        double prev = 0;
        for (std::size_t n : {1u << 8, 1u << 9, 1u << 10}) {
            const auto f = SampledPath::from_function(
                [](double t) { return t > 0.5 ? 1.0 : 0.0; }, 1.0, n + 1);
            const double dt = 1.0 / static_cast<double>(n);
            const double w1 = besov_norm_w1(f, FracOrder(beta));
            REQUIRE(w1 >= std::pow(dt, -beta));  // the cross-jump difference quotient
            if (prev > 0) REQUIRE(w1 > 1.3 * prev);  // expected growth factor 2^beta
            prev = w1;
        }
    }
}

TEST_CASE("besov norm W2") {
    SECTION("constant 1 on [0,1]: 1/(1-beta)") {
        auto f = power_path(0.0, 1 << 9);
        for (double beta : {0.25, 0.5, 0.75}) {
            REQUIRE(besov_norm_w2(f, FracOrder(beta)) ==
                    Catch::Approx(1.0 / (1.0 - beta)).epsilon(1e-9));
        }
    }
    SECTION("linear on [0,1]: 1/(2-beta) + 1/((1-beta)(2-beta))") {
        const auto f = power_path(1.0, 1 << 10);
        for (double beta : {0.25, 0.5, 0.75}) {
            const double expect = 1.0 / (2.0 - beta) + 1.0 / ((1.0 - beta) * (2.0 - beta));
            REQUIRE(besov_norm_w2(f, FracOrder(beta)) == Catch::Approx(expect).epsilon(1e-4));
        }
    }
    SECTION("indicator of fbm is finite and stable under refinement") {
        const auto fine = generate(ProcessSpec::fbm_spec(0.75, 1.0, (1 << 12) + 1, 42));
        const auto z_fine = indicator_above(fine, 0.0);
        const auto z_coarse = indicator_above(fine.subsample(4), 0.0);
        const double beta = 0.4;
        const double wf = besov_norm_w2(z_fine, FracOrder(beta),
                                        Reconstruction::piecewise_constant_left);
        const double wc = besov_norm_w2(z_coarse, FracOrder(beta),
                                        Reconstruction::piecewise_constant_left);
        REQUIRE(std::isfinite(wf));
        REQUIRE(std::isfinite(wc));
        REQUIRE(std::fabs(wf - wc) <= 0.2 * std::max(wf, wc));
    }
    SECTION("single jump stays finite under refinement (beta < 1)") {
        double prev = -1;
        for (std::size_t n : {1u << 9, 1u << 10, 1u << 11}) {
            const auto f = SampledPath::from_function(
                [](double t) { return t > 0.5 ? 1.0 : 0.0; }, 1.0, n + 1);
            const double w2 = besov_norm_w2(f, FracOrder(0.5),
                                            Reconstruction::piecewise_constant_left);
            REQUIRE(std::isfinite(w2));
            if (prev > 0) REQUIRE(std::fabs(w2 - prev) < 0.05 * prev);
            prev = w2;
        }
    }
    SECTION("monotone refinement: Hoelder path changes <= 5% between 2^12 and 2^13") {
        const auto fine = generate(ProcessSpec::fbm_spec(0.75, 1.0, (1 << 13) + 1, 9));
        const double beta = 0.5;
        const double w_fine = besov_norm_w2(fine, FracOrder(beta));
        const double w_half = besov_norm_w2(fine.subsample(2), FracOrder(beta));
        REQUIRE(std::fabs(w_fine - w_half) <= 0.05 * std::max(w_fine, w_half));
    }
}

TEST_CASE("grr check") {
    SECTION("constant function gives (0,0) with ratio 0") {
        auto f = power_path(0.0, 128);
        for (auto& v : f.values) v = 2.0;
        const auto r = grr_check(f, 2.0, 0.75);
        REQUIRE(r.lhs_max_ratio == 0.0);
        REQUIRE(r.rhs_integral == 0.0);
        REQUIRE(r.c_hat() == 0.0);
    }
    SECTION("linear f: both sides finite positive, C stable under refinement") {
        const auto f1 = power_path(1.0, 1 << 8);
        const auto f2 = power_path(1.0, 1 << 9);
        const auto r1 = grr_check(f1, 2.0, 0.75);
        const auto r2 = grr_check(f2, 2.0, 0.75);
        REQUIRE(r1.lhs_max_ratio > 0);
        REQUIRE(r1.rhs_integral > 0);
        REQUIRE(r1.c_hat() == Catch::Approx(r2.c_hat()).epsilon(0.05));
    }
    SECTION("fbm family has a finite empirical constant across seeds") {
        double cmax = 0;
        for (int s = 0; s < 50; ++s) {
            const auto x = generate(ProcessSpec::fbm_spec(0.75, 1.0, 257, 9000 + s));
            const auto r = grr_check(x, 4.0, 0.7);
            REQUIRE(std::isfinite(r.c_hat()));
            cmax = std::max(cmax, r.c_hat());
        }
        REQUIRE(std::isfinite(cmax));
        REQUIRE(cmax > 0);
    }
}
