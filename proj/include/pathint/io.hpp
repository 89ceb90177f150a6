#pragma once

// JSON schemas for process specs, measures, BV functions, and results.
// Every document carries an explicit schema_version field so regression
// goldens stay comparable.

#include <string>

#include <json.hpp>

#include "pathint/convexbv.hpp"
#include "pathint/glsint.hpp"
#include "pathint/harness.hpp"
#include "pathint/processes.hpp"
#include "pathint/variation.hpp"

namespace pathint {

inline constexpr int kSchemaVersion = 1;

// ---------------------------------------------------------------------------
// ProcessSpec
// ---------------------------------------------------------------------------

inline nlohmann::json to_json(const ProcessSpec& spec) {
    nlohmann::json j;
    j["schema_version"] = kSchemaVersion;
    j["horizon"] = spec.horizon;
    j["grid_size"] = spec.grid_size;
    j["seed"] = spec.seed;
    switch (spec.kind) {
        case ProcessSpec::Kind::fbm:
            j["kind"] = "fbm";
            j["hurst"] = spec.hurst;
            break;
        case ProcessSpec::Kind::brownian:
            j["kind"] = "brownian";
            break;
        case ProcessSpec::Kind::compound_poisson: {
            j["kind"] = "compound_poisson";
            j["rate"] = spec.rate;
            nlohmann::json jd;
            switch (spec.jump_dist.kind) {
                case JumpDist::Kind::normal:
                    jd = {{"type", "normal"}, {"mean", spec.jump_dist.a},
                          {"stddev", spec.jump_dist.b}};
                    break;
                case JumpDist::Kind::constant:
                    jd = {{"type", "constant"}, {"value", spec.jump_dist.a}};
                    break;
                case JumpDist::Kind::exponential:
                    jd = {{"type", "exponential"}, {"mean", spec.jump_dist.a}};
                    break;
            }
            j["jump_dist"] = jd;
            break;
        }
        case ProcessSpec::Kind::drifted:
            j["kind"] = "drifted";
            j["base"] = to_json(*spec.base);
            j["drift"] = {{"coeffs", spec.drift.coeffs}};
            break;
        case ProcessSpec::Kind::mixed: {
            j["kind"] = "mixed";
            nlohmann::json comps = nlohmann::json::array();
            for (const auto& c : spec.components) comps.push_back(to_json(c));
            j["components"] = comps;
            break;
        }
    }
    return j;
}

inline ProcessSpec process_spec_from_json(const nlohmann::json& j) {
    ProcessSpec spec;
    const std::string kind = j.at("kind").get<std::string>();
    spec.horizon = j.value("horizon", 1.0);
    spec.grid_size = j.value("grid_size", std::size_t{1024});
    spec.seed = j.value("seed", std::uint64_t{0});
    if (kind == "fbm") {
        spec.kind = ProcessSpec::Kind::fbm;
        spec.hurst = j.at("hurst").get<double>();
    } else if (kind == "brownian") {
        spec.kind = ProcessSpec::Kind::brownian;
    } else if (kind == "compound_poisson") {
        spec.kind = ProcessSpec::Kind::compound_poisson;
        spec.rate = j.at("rate").get<double>();
        if (j.contains("jump_dist")) {
            const auto& jd = j.at("jump_dist");
            const std::string type = jd.value("type", "normal");
            if (type == "normal") {
                spec.jump_dist = {JumpDist::Kind::normal, jd.value("mean", 0.0),
                                  jd.value("stddev", 1.0)};
            } else if (type == "constant") {
                spec.jump_dist = {JumpDist::Kind::constant, jd.value("value", 1.0), 0.0};
            } else if (type == "exponential") {
                spec.jump_dist = {JumpDist::Kind::exponential, jd.value("mean", 1.0), 0.0};
            } else {
                throw ValidationError("unknown jump_dist type: " + type);
            }
        }
    } else if (kind == "drifted") {
        spec.kind = ProcessSpec::Kind::drifted;
        spec.base = std::make_shared<const ProcessSpec>(process_spec_from_json(j.at("base")));
        if (j.contains("drift"))
            spec.drift.coeffs = j.at("drift").at("coeffs").get<std::vector<double>>();
    } else if (kind == "mixed") {
        spec.kind = ProcessSpec::Kind::mixed;
        for (const auto& c : j.at("components")) {
            ProcessSpec comp = process_spec_from_json(c);
            comp.horizon = spec.horizon;
            comp.grid_size = spec.grid_size;
            spec.components.push_back(std::move(comp));
        }
    } else {
        throw ValidationError("unknown process kind: " + kind);
    }
    spec.validate();
    return spec;
}

// ---------------------------------------------------------------------------
// Measures and BV functions
// ---------------------------------------------------------------------------

inline nlohmann::json to_json(const RadonMeasure& mu) {
    nlohmann::json atoms = nlohmann::json::array();
    for (const auto& a : mu.atoms) atoms.push_back({{"a", a.location}, {"w", a.weight}});
    return {{"atoms", atoms},
            {"density", {{"breaks", mu.density_breaks}, {"levels", mu.density_levels}}},
            {"support", {mu.support_lo, mu.support_hi}}};
}

inline RadonMeasure radon_measure_from_json(const nlohmann::json& j) {
    RadonMeasure mu;
    if (j.contains("atoms"))
        for (const auto& a : j.at("atoms"))
            mu.atoms.push_back({a.at("a").get<double>(), a.at("w").get<double>()});
    if (j.contains("density")) {
        mu.density_breaks = j.at("density").value("breaks", std::vector<double>{});
        mu.density_levels = j.at("density").value("levels", std::vector<double>{});
    }
    if (j.contains("support")) {
        mu.support_lo = j.at("support").at(0).get<double>();
        mu.support_hi = j.at("support").at(1).get<double>();
    } else {
        double lo = 0, hi = 0;
        for (const auto& a : mu.atoms) {
            lo = std::min(lo, a.location);
            hi = std::max(hi, a.location);
        }
        if (!mu.density_breaks.empty()) {
            lo = std::min(lo, mu.density_breaks.front());
            hi = std::max(hi, mu.density_breaks.back());
        }
        mu.support_lo = lo;
        mu.support_hi = hi;
    }
    mu.validate();
    return mu;
}

inline nlohmann::json to_json(const BVFunction& f) {
    auto part = [](const BVFunction::Part& p) {
        nlohmann::json j = to_json(p.measure);
        j["constant"] = p.constant;
        return j;
    };
    return {{"schema_version", kSchemaVersion},
            {"positive_part", part(f.positive)},
            {"negative_part", part(f.negative)}};
}

inline BVFunction bv_function_from_json(const nlohmann::json& j) {
    auto part = [](const nlohmann::json& pj) {
        BVFunction::Part p;
        p.measure = radon_measure_from_json(pj);
        p.constant = pj.value("constant", 0.0);
        return p;
    };
    BVFunction f;
    if (j.contains("positive_part")) f.positive = part(j.at("positive_part"));
    if (j.contains("negative_part")) f.negative = part(j.at("negative_part"));
    f.validate();
    return f;
}

// ---------------------------------------------------------------------------
// Results
// ---------------------------------------------------------------------------

inline nlohmann::json to_json(const IntegralResult& r) {
    return {{"schema_version", kSchemaVersion},
            {"value", r.value},
            {"beta", r.beta_used},
            {"apriori_bound", r.apriori_bound},
            {"diagnostics", r.diagnostics}};
}

inline nlohmann::json to_json(const VariationReport& r) {
    return {{"schema_version", kSchemaVersion},
            {"p", r.p},
            {"along_partition", r.along_partition},
            {"supremum", r.supremum},
            {"maximizing_subset", r.maximizing_subset}};
}

inline nlohmann::json to_json(const GrrResult& r) {
    return {{"schema_version", kSchemaVersion},
            {"lhs_max_ratio", r.lhs_max_ratio},
            {"rhs_integral", r.rhs_integral},
            {"c_hat", r.c_hat()}};
}

inline nlohmann::json to_json(const ExperimentReport& r) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : r.rows)
        rows.push_back({{"kind", row.kind},
                        {"scale", row.scale},
                        {"seed", row.seed},
                        {"value", row.value}});
    return {{"schema_version", kSchemaVersion},
            {"name", r.name},
            {"parameters", r.parameters},
            {"verdict", r.verdict},
            {"rows", rows}};
}

}  // namespace pathint
