#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

#include "pathint/path.hpp"
#include "pathint/processes.hpp"
#include "pathint/rng.hpp"

using namespace pathint;

TEST_CASE("counter rng is deterministic and counter-addressable") {
    CounterRng a(42), b(42);
    for (int i = 0; i < 100; ++i) REQUIRE(a.next_u64() == b.next_u64());

    CounterRng c(42), d(43);
    bool all_equal = true;
    for (int i = 0; i < 16; ++i) all_equal &= (c.next_u64() == d.next_u64());
    REQUIRE_FALSE(all_equal);
}

TEST_CASE("rng gaussian moments") {
    CounterRng rng(7);
    const int n = 200000;
    double s1 = 0, s2 = 0;
    for (int i = 0; i < n; ++i) {
        const double g = rng.next_gaussian();
        s1 += g;
        s2 += g * g;
    }
    REQUIRE(std::fabs(s1 / n) < 0.01);
    REQUIRE(std::fabs(s2 / n - 1.0) < 0.02);
}

TEST_CASE("brownian basics: B_0 = 0 and unit-variance endpoint") {
    const auto p = generate(ProcessSpec::brownian_spec(1.0, 2, 5));
    REQUIRE(p.values[0] == 0.0);
    REQUIRE(p.size() == 2);

    double s2 = 0;
    const int seeds = 4000;
    for (int s = 0; s < seeds; ++s) {
        const auto q = generate(ProcessSpec::brownian_spec(1.0, 2, 1000 + s));
        s2 += q.values[1] * q.values[1];
    }
    REQUIRE(s2 / seeds == Catch::Approx(1.0).margin(0.08));
}

TEST_CASE("fbm with H=1/2 is the brownian generator, bit for bit") {
    const auto a = generate(ProcessSpec::fbm_spec(0.5, 2.0, 257, 99));
    const auto b = generate(ProcessSpec::brownian_spec(2.0, 257, 99));
    REQUIRE(a.values == b.values);
    REQUIRE(a.times == b.times);
}

TEST_CASE("same spec and seed reproduce bit-identical paths") {
    const auto spec = ProcessSpec::fbm_spec(0.75, 1.0, 513, 2024);
    const auto a = generate(spec);
    const auto b = generate(spec);
    REQUIRE(a.values == b.values);
}

TEST_CASE("fbm increment variance matches dt^2H scaling") {
    // Monte-Carlo check of E (B^H_{t+dt} - B^H_t)^2 = dt^{2H}.
    const double H = 0.75;
    const std::size_t n = 1 << 12;
    double acc = 0;
    const int seeds = 100;
    for (int s = 0; s < seeds; ++s) {
        const auto p = generate(ProcessSpec::fbm_spec(H, 1.0, n, 42 + s));
        const double dt = p.times[1] - p.times[0];
        double v = 0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const double d = p.values[i + 1] - p.values[i];
            v += d * d;
        }
        v /= static_cast<double>(n - 1);
        acc += v / std::pow(dt, 2.0 * H);
    }
    REQUIRE(acc / seeds == Catch::Approx(1.0).margin(0.15));
}

TEST_CASE("fbm two-point covariance matches the fractional kernel") {
    const double H = 0.7;
    const std::size_t n = 33;
    const std::size_t is = 8, it = 24;  // s = 0.25, t = 0.75
    double acc = 0;
    const int seeds = 10000;
    double s_time = 0, t_time = 0;
    for (int k = 0; k < seeds; ++k) {
        const auto p = generate(ProcessSpec::fbm_spec(H, 1.0, n, 7777 + k));
        s_time = p.times[is];
        t_time = p.times[it];
        acc += p.values[is] * p.values[it];
    }
    const double expect = 0.5 * (std::pow(t_time, 2 * H) + std::pow(s_time, 2 * H) -
                                 std::pow(t_time - s_time, 2 * H));
    REQUIRE(acc / seeds == Catch::Approx(expect).margin(0.05 * std::pow(t_time, 2 * H)));
}

TEST_CASE("compound poisson jump count matches rate*T") {
    const double rate = 5.0, T = 1.0;
    double total = 0;
    const int seeds = 10000;
    for (int s = 0; s < seeds; ++s) {
        CounterRng rng(31000 + s);
        total += static_cast<double>(detail::poisson_jump_times(rate, T, rng).size());
    }
    REQUIRE(total / seeds == Catch::Approx(rate * T).epsilon(0.05));
}

TEST_CASE("compound poisson path is a nondecreasing step count with left limits") {
    auto spec = ProcessSpec::compound_poisson_spec(4.0, {JumpDist::Kind::constant, 1.0, 0.0},
                                                   1.0, 1 << 10, 11);
    const auto p = generate(spec);
    REQUIRE(p.values[0] == 0.0);
    for (std::size_t i = 0; i + 1 < p.size(); ++i) REQUIRE(p.values[i + 1] >= p.values[i]);
}

TEST_CASE("mixed path is the pointwise sum of derived-seed components") {
    const std::uint64_t seed = 321;
    auto fbm = ProcessSpec::fbm_spec(0.75, 1.0, 257, 0);
    auto bm = ProcessSpec::brownian_spec(1.0, 257, 0);
    auto mixed = ProcessSpec::mixed_spec({fbm, bm}, seed);
    const auto sum = generate(mixed);

    fbm.seed = seed ^ 0ull;
    bm.seed = seed ^ 1ull;
    const auto a = generate(fbm);
    const auto b = generate(bm);
    for (std::size_t i = 0; i < sum.size(); ++i)
        REQUIRE(sum.values[i] == a.values[i] + b.values[i]);
}

TEST_CASE("density assumption checker") {
    SECTION("fbm variance t^{2H}, H=0.75") {
        VarianceFunction vf{[](double t) { return std::pow(t, 1.5); }, 0.75, 1.0};
        const double bound = check_density_assumption(vf, 1.0);
        REQUIRE(bound == Catch::Approx(1.5957691216057308).epsilon(1e-6));
    }
    SECTION("stationary variance") {
        VarianceFunction vf{[](double) { return 1.0; }, 0.0, 1.0};
        REQUIRE(check_density_assumption(vf, 1.0) ==
                Catch::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-9));
    }
    SECTION("limiting case V ~ t^2 rejected") {
        VarianceFunction vf{[](double t) { return t * t; }, 1.0, 1.0};
        REQUIRE_THROWS_AS(check_density_assumption(vf, 1.0), ValidationError);
    }
}

TEST_CASE("holder estimate") {
    SECTION("linear path has exponent 1") {
        const auto p = SampledPath::from_function([](double t) { return t; }, 1.0, 1 << 10);
        REQUIRE(holder_estimate(p).alpha >= 0.95);
    }
    SECTION("constant path degenerates to (1, 0)") {
        const auto p = SampledPath::from_function([](double) { return 3.0; }, 1.0, 64);
        const auto est = holder_estimate(p);
        REQUIRE(est.alpha == 1.0);
        REQUIRE(est.constant == 0.0);
    }
    SECTION("fbm(0.75) estimate lands near the Hurst index") {
        double acc = 0;
        const int seeds = 20;
        for (int s = 0; s < seeds; ++s) {
            const auto p = generate(ProcessSpec::fbm_spec(0.75, 1.0, 1 << 14, 500 + s));
            acc += holder_estimate(p).alpha;
        }
        const double avg = acc / seeds;
        REQUIRE(avg >= 0.65);
        REQUIRE(avg <= 0.8);
    }
}

TEST_CASE("csv round trip preserves values exactly") {
    const auto p = generate(ProcessSpec::fbm_spec(0.6, 1.0, 129, 8));
    std::stringstream ss;
    write_csv(p, ss);
    const auto q = read_csv(ss);
    REQUIRE(p.times == q.times);
    REQUIRE(p.values == q.values);
}

TEST_CASE("path validation rejects malformed inputs") {
    SampledPath p;
    p.times = {0.0, 0.5, 0.5};
    p.values = {0.0, 1.0, 2.0};
    REQUIRE_THROWS_AS(p.validate(), ValidationError);

    p.times = {0.1, 0.5, 1.0};
    REQUIRE_THROWS_AS(p.validate(), ValidationError);

    REQUIRE_THROWS_AS(generate(ProcessSpec::fbm_spec(1.5, 1.0, 16, 0)), ValidationError);
    REQUIRE_THROWS_AS(generate(ProcessSpec::compound_poisson_spec(
                          -1.0, {}, 1.0, 16, 0)),
                      ValidationError);
}

TEST_CASE("subsampled path keeps every k-th point") {
    const auto p = generate(ProcessSpec::brownian_spec(1.0, 17, 3));
    const auto q = p.subsample(4);
    REQUIRE(q.size() == 5);
    for (std::size_t i = 0; i < q.size(); ++i) {
        REQUIRE(q.times[i] == p.times[4 * i]);
        REQUIRE(q.values[i] == p.values[4 * i]);
    }
}
