#include "btq/errors.hpp"
#include "btq/pipeline.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

using namespace btq;

namespace {

std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void add_common(CLI::App* cmd, RunConfig& cfg)
{
    cmd->add_option("--n", cfg.n, "rank parameter (SL_{n+1})");
    cmd->add_option("--q", cfg.q, "field size");
    cmd->add_option("--level", cfg.level, "congruence level: 'full' or a monic polynomial");
    cmd->add_option("--radius", cfg.radius, "window radius");
    cmd->add_option("--support-radius", cfg.support_radius, "support radius (default radius-3)");
    cmd->add_option("--l", cfg.l, "truncation level");
    cmd->add_option("--precision", cfg.precision, "series precision override");
    cmd->add_option("--out", cfg.out_dir, "output directory");
    cmd->add_option("--workers", cfg.workers, "parallelism cap (0 = all cores)");
    cmd->add_option("--seed", cfg.seed, "seed for the randomized suites");
    cmd->add_flag("--emit-dot", cfg.emit_dot, "also write an n = 1 quotient graph in DOT format");
}

CanonicalLattice base_vertex(const GroupSpec& spec)
{
    const FqCtx& F = spec.field();
    SeriesMat rows(spec.n + 1, std::vector<LaurentSeries>(spec.n + 1, LaurentSeries::zero(F)));
    for (int i = 0; i <= spec.n; ++i) rows[i][i] = LaurentSeries::one(F);
    return CanonicalLattice::from_rows(F, std::move(rows));
}

void write_file(const std::string& dir, const std::string& name, const std::string& text)
{
    namespace fs = std::filesystem;
    if (dir.empty()) {
        std::cout << text;
        return;
    }
    fs::create_directories(dir);
    std::ofstream out(fs::path(dir) / name, std::ios::binary);
    out << text;
    std::cerr << "wrote " << (fs::path(dir) / name).string() << "\n";
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Bruhat-Tits building quotients: harmonic cocycles, compact-support "
                 "cohomology, cusps and Euler characteristics over F_q(t)"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string config_path;
    std::string quotient_file;

    // a config file provides defaults; explicit flags override it
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--config") config_path = argv[i + 1];
    try {
        if (!config_path.empty()) cfg = RunConfig::from_json(slurp(config_path));
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    auto* cbuild = app.add_subcommand("build", "build and serialize a ball of the building");
    auto* cquot = app.add_subcommand("quotient", "orbits, stabilizers and incidence mod Gamma");
    auto* charm = app.add_subcommand("harmonic", "harmonic cocycles and cohomology dimensions");
    auto* ccusp = app.add_subcommand("cusps", "cusps, sector truncations and D(l) stabilization");
    auto* ceuler = app.add_subcommand("euler", "fundamental patch and Euler characteristics");
    auto* cverify = app.add_subcommand("verify", "run the aggregated invariant suites");
    auto* call = app.add_subcommand("all", "full pipeline with all reports");
    for (auto* c : {cbuild, cquot, charm, ccusp, ceuler, cverify, call}) {
        add_common(c, cfg);
        c->add_option("--config", config_path, "JSON config file (defaults for the flags)");
    }
    cverify->add_option("--quotient-file", quotient_file,
                        "verify a serialized quotient complex instead of building one");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cbuild->parsed()) {
            cfg.validate();
            BallComplex b = ball(base_vertex(cfg.group()), cfg.radius);
            write_file(cfg.out_dir, "ball.txt", serialize_complex(b));
            std::cout << "vertices " << b.simplex_count(0) << " edges " << b.simplex_count(1)
                      << " triangles " << b.simplex_count(2) << " euler " << b.euler_sum()
                      << "\n";
        } else if (cquot->parsed()) {
            cfg.validate();
            QuotientComplex Q = build_quotient(cfg.group(), cfg.radius);
            write_file(cfg.out_dir, "quotient.txt", Q.serialize());
            if (cfg.emit_dot && cfg.n == 1) write_file(cfg.out_dir, "quotient.dot", quotient_dot(Q));
            for (int qd = 0; qd <= Q.dim(); ++qd)
                std::cout << "dimension " << qd << ": " << Q.orbit_count(qd) << " orbits\n";
        } else if (charm->parsed()) {
            cfg.validate();
            QuotientComplex Q = build_quotient(cfg.group(), cfg.radius);
            CohomologyReport rep = cohomology_report(Q, cfg.effective_support_radius());
            write_file(cfg.out_dir, "cohomology.json", rep.to_json());
            for (const auto& d : rep.degrees)
                std::cout << "q=" << d.q << " dim H_!=" << d.dim_hc
                          << " dim harmonic=" << d.dim_harmonic << "\n";
            std::cout << (rep.stable ? "stable" : "UNSTABLE") << "\n";
            if (!rep.stable) throw InstabilityError("harmonic: dimensions did not stabilize");
        } else if (ccusp->parsed()) {
            cfg.validate();
            GroupSpec spec = cfg.group();
            auto cusps = enumerate_cusps(spec);
            std::cout << "cusps " << cusps.size() << "\n";
            QuotientComplex Q = build_quotient(spec, cfg.radius);
            auto depths = sector_depths(spec, cusps, Q, cfg.effective_precision());
            TruncationComplex t = truncation_complex(cfg.l, depths, Q);
            auto stab = stabilization_check(spec, cfg.l, {cfg.radius - 1, cfg.radius},
                                            cfg.effective_precision());
            nlohmann::json j;
            j["cusps"] = cusps.size();
            j["d_counts"] = t.d_counts;
            j["stabilized"] = stab.stabilized;
            write_file(cfg.out_dir, "cusps.json", j.dump(2));
            for (int qd = 0; qd < int(t.d_counts.size()); ++qd)
                std::cout << "D(" << cfg.l << ") dimension " << qd << ": " << t.d_counts[qd]
                          << " orbits\n";
            if (!stab.stabilized)
                throw InstabilityError("cusps: D(l) counts did not stabilize");
        } else if (ceuler->parsed() || call->parsed()) {
            RunArtifacts art = run_pipeline(cfg);
            if (!cfg.out_dir.empty()) write_reports(art, cfg.out_dir);
            std::cout << art.summary_json() << "\n";
        } else if (cverify->parsed()) {
            cfg.validate();
            std::vector<VerifyResult> results;
            if (!quotient_file.empty()) {
                QuotientComplex Q = parse_quotient(slurp(quotient_file));
                results = run_verify(cfg, &Q);
            } else {
                results = run_verify(cfg);
            }
            bool allpass = true;
            for (const auto& r : results) {
                std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << "\n";
                if (!r.pass) {
                    allpass = false;
                    std::cout << "  " << r.detail << "\n";
                }
            }
            std::cout << (allpass ? "verify: all green" : "verify: failures above") << "\n";
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const PrecisionError& e) {
        std::cerr << "precision exhaustion: " << e.what() << "\n";
        return 3;
    } catch (const InstabilityError& e) {
        std::cerr << "instability detected: " << e.what() << "\n";
        return 4;
    } catch (const CertificationError& e) {
        std::cerr << "certification failure: " << e.what() << "\n";
        return 5;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
