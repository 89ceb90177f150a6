// pathint command line: path simulation, fractional operators, Besov norms,
// p-variation, gLS/RS integrals, and the theorem-verification experiments.
//
// Exit codes: 0 success, 1 validation/config error, 2 numeric failure.
// Errors print a single machine-parseable line on stderr.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pathint/io.hpp"
#include "pathint/pathint.hpp"

namespace {

using namespace pathint;

std::uint64_t default_seed() {
    if (const char* env = std::getenv("PATHINT_SEED")) {
        return static_cast<std::uint64_t>(std::strtoull(env, nullptr, 10));
    }
    return 0;
}

void emit_json(const nlohmann::json& j, const std::string& out_file) {
    const std::string text = j.dump(2);
    if (!out_file.empty()) {
        std::ofstream os(out_file);
        require(os.good(), "cannot open output file: " + out_file);
        os << text << "\n";
    }
    std::cout << text << "\n";
}

Reconstruction parse_recon(const std::string& name) {
    if (name == "linear") return Reconstruction::piecewise_linear;
    if (name == "const") return Reconstruction::piecewise_constant_left;
    throw ValidationError("unknown reconstruction: " + name + " (want linear|const)");
}

/// "8..14" -> {8,10,12,14}; "8,9,12" -> {8,9,12}.
std::vector<unsigned> parse_grid_levels(const std::string& text) {
    std::vector<unsigned> levels;
    const auto dots = text.find("..");
    if (dots != std::string::npos) {
        const unsigned lo = static_cast<unsigned>(std::stoul(text.substr(0, dots)));
        const unsigned hi = static_cast<unsigned>(std::stoul(text.substr(dots + 2)));
        require(lo <= hi && hi <= 24, "grid level range out of bounds");
        for (unsigned l = lo; l <= hi; l += 2) levels.push_back(l);
        if (levels.back() != hi) levels.push_back(hi);
    } else {
        std::size_t pos = 0;
        while (pos < text.size()) {
            const auto comma = text.find(',', pos);
            const std::string tok =
                text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
            levels.push_back(static_cast<unsigned>(std::stoul(tok)));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
    }
    require(!levels.empty(), "empty grid level list");
    return levels;
}

TaggedPartition parse_partition(const SampledPath& path, const std::string& text, TagRule rule) {
    if (text.empty() || text == "full") return TaggedPartition::full_grid(path, rule);
    if (text.rfind("uniform:", 0) == 0) {
        const std::size_t cells = std::stoul(text.substr(8));
        require(cells >= 1 && (path.size() - 1) % cells == 0,
                "partition cell count must divide the grid cells");
        return TaggedPartition::strided(path, (path.size() - 1) / cells, rule);
    }
    if (text.rfind("dyadic:", 0) == 0) {
        return TaggedPartition::dyadic(path, static_cast<unsigned>(std::stoul(text.substr(7))),
                                       rule);
    }
    throw ValidationError("unknown partition spec: " + text + " (want full|uniform:N|dyadic:L)");
}

TagRule parse_tags(const std::string& name) {
    if (name == "forward") return TagRule::forward;
    if (name == "backward") return TagRule::backward;
    if (name == "midpoint") return TagRule::midpoint;
    throw ValidationError("unknown tag rule: " + name);
}

int run(int argc, char** argv) {
    CLI::App app{"pathwise stochastic integration toolkit"};
    app.require_subcommand(1);
    unsigned threads = 0;
    app.add_option("--threads", threads, "worker thread cap (0 = hardware)");

    // --- simulate ---------------------------------------------------------
    auto* sim = app.add_subcommand("simulate", "generate a sample path as CSV");
    std::string sim_kind = "brownian", sim_out, sim_spec_file;
    std::string jump_type = "normal";
    double hurst = 0.5, rate = 1.0, horizon = 1.0, jump_mean = 0.0, jump_sd = 1.0;
    std::size_t grid_n = 1024;
    std::optional<std::uint64_t> seed_opt;
    sim->add_option("--kind", sim_kind, "fbm|brownian|compound_poisson");
    sim->add_option("--hurst", hurst, "Hurst index for fbm");
    sim->add_option("--rate", rate, "jump rate for compound_poisson");
    sim->add_option("--jump-dist", jump_type, "normal|constant|exponential");
    sim->add_option("--jump-mean", jump_mean, "jump mean (or constant value)");
    sim->add_option("--jump-sd", jump_sd, "jump stddev (normal)");
    sim->add_option("--T", horizon, "horizon");
    sim->add_option("--n", grid_n, "grid points");
    sim->add_option("--seed", seed_opt, "rng seed (default: PATHINT_SEED or 0)");
    sim->add_option("--spec", sim_spec_file, "full ProcessSpec JSON (overrides flags)");
    sim->add_option("--out", sim_out, "output CSV file")->required();

    // --- frac-deriv -------------------------------------------------------
    auto* fd = app.add_subcommand("frac-deriv", "fractional derivative of a sampled path");
    std::string fd_in, fd_out, fd_side = "left", fd_recon = "linear";
    double fd_beta = 0.5;
    std::optional<double> fd_t;
    fd->add_option("--input", fd_in)->required();
    fd->add_option("--beta", fd_beta, "order in (0,1)");
    fd->add_option("--side", fd_side, "left|right");
    fd->add_option("--recon", fd_recon, "linear|const");
    fd->add_option("--t", fd_t, "right-side horizon (default: path horizon)");
    fd->add_option("--output", fd_out)->required();

    // --- besov-norm -------------------------------------------------------
    auto* bn = app.add_subcommand("besov-norm", "fractional Besov norm of a path");
    std::string bn_in, bn_which = "w2", bn_recon = "linear", bn_json;
    double bn_beta = 0.5;
    bn->add_option("--input", bn_in)->required();
    bn->add_option("--which", bn_which, "w1|w2");
    bn->add_option("--beta", bn_beta);
    bn->add_option("--recon", bn_recon, "linear|const");
    bn->add_option("--json", bn_json, "also write JSON to this file");

    // --- pvar -------------------------------------------------------------
    auto* pv = app.add_subcommand("pvar", "p-variation report");
    std::string pv_in, pv_json, pv_dyadic;
    double pv_p = 2.0;
    bool pv_sup = false, pv_approx = false;
    pv->add_option("--input", pv_in)->required();
    pv->add_option("--p", pv_p);
    pv->add_flag("--sup", pv_sup, "supremum over grid subsets (O(n^2))");
    pv->add_flag("--approx-above-cap", pv_approx, "extremal preselection above the size cap");
    pv->add_option("--dyadic-levels", pv_dyadic, "e.g. 4..12: quadratic variation rows");
    pv->add_option("--json", pv_json);

    // --- gls --------------------------------------------------------------
    auto* gl = app.add_subcommand("gls", "generalized Lebesgue-Stieltjes integral");
    std::string gl_f, gl_g, gl_json, gl_recon_f = "linear", gl_recon_g = "linear";
    double gl_beta = 0.5;
    std::optional<double> gl_t;
    gl->add_option("--f", gl_f, "integrand CSV")->required();
    gl->add_option("--g", gl_g, "integrator CSV")->required();
    gl->add_option("--beta", gl_beta);
    gl->add_option("--t", gl_t, "upper limit (default: horizon)");
    gl->add_option("--recon-f", gl_recon_f, "linear|const");
    gl->add_option("--recon-g", gl_recon_g, "linear|const");
    gl->add_option("--json", gl_json);

    // --- rs-sum -----------------------------------------------------------
    auto* rs = app.add_subcommand("rs-sum", "tagged Riemann-Stieltjes sum");
    std::string rs_f, rs_g, rs_json, rs_tags = "forward", rs_part = "full";
    rs->add_option("--f", rs_f)->required();
    rs->add_option("--g", rs_g)->required();
    rs->add_option("--tags", rs_tags, "forward|backward|midpoint");
    rs->add_option("--partition", rs_part, "full|uniform:N|dyadic:L");
    rs->add_option("--json", rs_json);

    // --- grr-check --------------------------------------------------------
    auto* gr = app.add_subcommand("grr-check", "Garsia-Rodemich-Rumsey diagnostic");
    std::string gr_in, gr_json;
    double gr_p = 2.0, gr_alpha = 0.75;
    gr->add_option("--input", gr_in)->required();
    gr->add_option("--p", gr_p);
    gr->add_option("--alpha", gr_alpha);
    gr->add_option("--json", gr_json);

    // --- verify-ito -------------------------------------------------------
    auto* vi = app.add_subcommand("verify-ito", "pathwise change-of-variable experiments");
    std::string vi_kind = "smooth", vi_spec_file, vi_out, vi_grids = "8..14", vi_fprime_file;
    unsigned vi_seeds = 1;
    double vi_beta = 0.5;
    bool vi_allow_qv = false;
    vi->add_option("--kind", vi_kind, "smooth|convex|tanaka");
    vi->add_option("--spec", vi_spec_file, "ProcessSpec JSON file")->required();
    vi->add_option("--grids", vi_grids, "dyadic levels, e.g. 8..14 or 8,10,12");
    vi->add_option("--seeds", vi_seeds, "number of seeds (0..N-1)");
    vi->add_option("--beta", vi_beta);
    vi->add_option("--fprime", vi_fprime_file,
                   "BVFunction JSON for convex/tanaka (default: unit step at 0)");
    vi->add_flag("--allow-qv", vi_allow_qv, "permit non-vanishing quadratic variation (smooth)");
    vi->add_option("--out", vi_out, "report JSON file");

    // --- check-density ----------------------------------------------------
    auto* cd = app.add_subcommand("check-density",
                                  "Gaussian density-assumption bound for V(t)=c*t^(2b)");
    double cd_exponent = 0.75, cd_constant = 1.0, cd_T = 1.0;
    std::string cd_json;
    cd->add_option("--exponent", cd_exponent, "b in V(t) = c t^(2b)");
    cd->add_option("--constant", cd_constant, "c");
    cd->add_option("--T", cd_T);
    cd->add_option("--json", cd_json);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);  // prints help, exits 0
    } catch (const CLI::ParseError& e) {
        app.exit(e);  // prints the usage message
        return 1;
    }

    if (sim->parsed()) {
        ProcessSpec spec;
        if (!sim_spec_file.empty()) {
            std::ifstream is(sim_spec_file);
            require(is.good(), "cannot open spec file: " + sim_spec_file);
            nlohmann::json j;
            is >> j;
            spec = process_spec_from_json(j);
        } else {
            const std::uint64_t seed = seed_opt.value_or(default_seed());
            if (sim_kind == "fbm") {
                spec = ProcessSpec::fbm_spec(hurst, horizon, grid_n, seed);
            } else if (sim_kind == "brownian") {
                spec = ProcessSpec::brownian_spec(horizon, grid_n, seed);
            } else if (sim_kind == "compound_poisson") {
                JumpDist jd;
                if (jump_type == "normal") jd = {JumpDist::Kind::normal, jump_mean, jump_sd};
                else if (jump_type == "constant") jd = {JumpDist::Kind::constant, jump_mean, 0.0};
                else if (jump_type == "exponential")
                    jd = {JumpDist::Kind::exponential, jump_mean, 0.0};
                else
                    throw ValidationError("unknown jump dist: " + jump_type);
                spec = ProcessSpec::compound_poisson_spec(rate, jd, horizon, grid_n, seed);
            } else {
                throw ValidationError("unknown kind: " + sim_kind +
                                      " (mixed/drifted require --spec)");
            }
        }
        write_csv_file(generate(spec), sim_out);
        return 0;
    }

    if (fd->parsed()) {
        const auto path = read_csv_file(fd_in);
        const FracOrder order(fd_beta);
        const auto recon = parse_recon(fd_recon);
        SampledPath out;
        if (fd_side == "left") {
            out = frac_deriv_left(path, order, recon);
        } else if (fd_side == "right") {
            out = frac_deriv_right(path, order, fd_t.value_or(path.horizon()), recon);
        } else {
            throw ValidationError("unknown side: " + fd_side);
        }
        write_csv_file(out, fd_out);
        return 0;
    }

    if (bn->parsed()) {
        const auto path = read_csv_file(bn_in);
        const FracOrder order(bn_beta);
        const auto recon = parse_recon(bn_recon);
        double value;
        if (bn_which == "w1") value = besov_norm_w1(path, order, recon);
        else if (bn_which == "w2") value = besov_norm_w2(path, order, recon);
        else throw ValidationError("unknown norm: " + bn_which);
        emit_json({{"schema_version", kSchemaVersion},
                   {"which", bn_which},
                   {"beta", bn_beta},
                   {"value", value},
                   {"finite", std::isfinite(value)}},
                  bn_json);
        return 0;
    }

    if (pv->parsed()) {
        const auto path = read_csv_file(pv_in);
        nlohmann::json j;
        if (pv_sup) {
            SupVariationOptions opts;
            opts.approximate_above_cap = pv_approx;
            j = to_json(sup_p_variation(path, pv_p, opts));
        } else {
            j = {{"schema_version", kSchemaVersion},
                 {"p", pv_p},
                 {"along_partition", p_variation(path, TaggedPartition::full_grid(path), pv_p)}};
        }
        if (!pv_dyadic.empty()) {
            const auto levels = parse_grid_levels(pv_dyadic);
            std::vector<TaggedPartition> parts;
            for (unsigned l : levels) parts.push_back(TaggedPartition::dyadic(path, l));
            const auto qv = quadratic_variation(path, parts);
            nlohmann::json rows = nlohmann::json::array();
            for (std::size_t i = 0; i < qv.size(); ++i)
                rows.push_back({{"level", levels[i]}, {"v2", qv[i]}});
            j["quadratic_variation"] = rows;
        }
        emit_json(j, pv_json);
        return 0;
    }

    if (gl->parsed()) {
        const auto f = read_csv_file(gl_f);
        const auto g = read_csv_file(gl_g);
        GlsConfig cfg;
        cfg.beta = FracOrder(gl_beta);
        cfg.integrand_recon = parse_recon(gl_recon_f);
        cfg.integrator_recon = parse_recon(gl_recon_g);
        const auto r = gls_integral(f, g, cfg, gl_t.value_or(f.horizon()));
        emit_json(to_json(r), gl_json);
        return 0;
    }

    if (rs->parsed()) {
        const auto f = read_csv_file(rs_f);
        const auto g = read_csv_file(rs_g);
        const auto part = parse_partition(g, rs_part, parse_tags(rs_tags));
        emit_json({{"schema_version", kSchemaVersion},
                   {"value", rs_sum(f, g, part)},
                   {"cells", part.cells()},
                   {"tags", rs_tags}},
                  rs_json);
        return 0;
    }

    if (gr->parsed()) {
        const auto path = read_csv_file(gr_in);
        emit_json(to_json(grr_check(path, gr_p, gr_alpha)), gr_json);
        return 0;
    }

    if (cd->parsed()) {
        const double b = cd_exponent, c = cd_constant;
        VarianceFunction vf{[b, c](double t) { return c * std::pow(t, 2.0 * b); }, b, c};
        emit_json({{"schema_version", kSchemaVersion},
                   {"bound", check_density_assumption(vf, cd_T)},
                   {"exponent", b},
                   {"constant", c}},
                  cd_json);
        return 0;
    }

    if (vi->parsed()) {
        std::ifstream is(vi_spec_file);
        require(is.good(), "cannot open spec file: " + vi_spec_file);
        nlohmann::json sj;
        is >> sj;
        const ProcessSpec spec = process_spec_from_json(sj);

        BVFunction fprime = BVFunction::indicator_above(0.0);
        if (!vi_fprime_file.empty()) {
            std::ifstream fs(vi_fprime_file);
            require(fs.good(), "cannot open fprime file: " + vi_fprime_file);
            nlohmann::json fj;
            fs >> fj;
            fprime = bv_function_from_json(fj);
        }

        HarnessOptions opts;
        opts.grid_levels = parse_grid_levels(vi_grids);
        opts.seeds.clear();
        for (std::uint64_t s = 0; s < vi_seeds; ++s) opts.seeds.push_back(s);
        opts.allow_qv_regime = vi_allow_qv;
        opts.threads = threads;

        GlsConfig cfg;
        cfg.beta = FracOrder(vi_beta);

        ExperimentReport report;
        if (vi_kind == "smooth") {
            report = ito_smooth_residual([](double x) { return x * x; },
                                         [](double x) { return 2.0 * x; }, spec, cfg, opts);
        } else if (vi_kind == "convex") {
            report = ito_convex_residual(fprime, spec, GlsConfig::for_bv_image(vi_beta), opts);
        } else if (vi_kind == "tanaka") {
            require(fprime.negative.measure.total_mass() == 0.0,
                    "tanaka experiment expects a convex fprime (positive part only)");
            report = ito_tanaka_residual(fprime, fprime.positive.measure, spec, cfg, opts);
        } else {
            throw ValidationError("unknown experiment kind: " + vi_kind);
        }
        emit_json(to_json(report), vi_out);
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const pathint::NumericError& e) {
        std::cerr << "error: numeric: " << e.what() << "\n";
        return 2;
    } catch (const pathint::ValidationError& e) {
        std::cerr << "error: validation: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
