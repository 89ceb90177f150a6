#include <catch2/catch_amalgamated.hpp>

#include "pathint/io.hpp"

using namespace pathint;

TEST_CASE("process spec json round trip") {
    auto mixed = ProcessSpec::mixed_spec(
        {ProcessSpec::fbm_spec(0.7, 2.0, 513, 0),
         ProcessSpec::compound_poisson_spec(3.0, {JumpDist::Kind::exponential, 0.5, 0.0}, 2.0,
                                            513, 0)},
        99);
    const auto j = to_json(mixed);
    REQUIRE(j.at("schema_version") == kSchemaVersion);
    const auto back = process_spec_from_json(j);
    REQUIRE(back.kind == ProcessSpec::Kind::mixed);
    REQUIRE(back.seed == 99);
    REQUIRE(back.components.size() == 2);
    REQUIRE(back.components[0].hurst == 0.7);
    REQUIRE(back.components[1].rate == 3.0);
    REQUIRE(back.components[1].jump_dist.kind == JumpDist::Kind::exponential);

    // identical generation from the parsed spec
    const auto a = generate(mixed);
    const auto b = generate(back);
    REQUIRE(a.values == b.values);
}

TEST_CASE("drifted spec json round trip") {
    ProcessSpec drifted;
    drifted.kind = ProcessSpec::Kind::drifted;
    drifted.horizon = 1.0;
    drifted.grid_size = 65;
    drifted.seed = 5;
    drifted.base = std::make_shared<const ProcessSpec>(ProcessSpec::brownian_spec(1.0, 65, 5));
    drifted.drift.coeffs = {0.0, 1.5, -0.25};
    const auto back = process_spec_from_json(to_json(drifted));
    const auto a = generate(drifted);
    const auto b = generate(back);
    REQUIRE(a.values == b.values);
}

TEST_CASE("bv function json round trip") {
    BVFunction f;
    f.positive.constant = 0.5;
    f.positive.measure = RadonMeasure::point_mass(0.0, 1.0);
    f.negative.constant = -0.1;
    f.negative.measure = RadonMeasure::uniform_density(-1.0, 1.0, 0.3);
    const auto back = bv_function_from_json(to_json(f));
    for (double x : {-2.0, -0.5, 0.0, 0.4, 3.0}) {
        REQUIRE(back.evaluate(x) == f.evaluate(x));
        REQUIRE(back.antiderivative(x) == f.antiderivative(x));
    }
}

TEST_CASE("experiment report serialization carries rows and verdict") {
    ExperimentReport r;
    r.name = "demo";
    r.parameters["beta"] = 0.5;
    r.verdict = true;
    r.rows.push_back({"residual", 256.0, 7, 0.125});
    const auto j = to_json(r);
    REQUIRE(j.at("name") == "demo");
    REQUIRE(j.at("verdict") == true);
    REQUIRE(j.at("rows").size() == 1);
    REQUIRE(j.at("rows").at(0).at("kind") == "residual");
    REQUIRE(j.at("rows").at(0).at("seed") == 7);
}

TEST_CASE("malformed documents are rejected") {
    REQUIRE_THROWS_AS(process_spec_from_json({{"kind", "levy"}}), ValidationError);
    nlohmann::json bad = {{"kind", "fbm"}, {"hurst", 1.7}};
    REQUIRE_THROWS_AS(process_spec_from_json(bad), ValidationError);
    nlohmann::json bad_measure = {{"atoms", {{{"a", 0.0}, {"w", -1.0}}}}};
    REQUIRE_THROWS_AS(radon_measure_from_json(bad_measure), ValidationError);
}
