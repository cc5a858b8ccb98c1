#include "btq/pipeline.hpp"
#include "btq/errors.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

namespace btq {

Poly parse_level(const std::string& text, const FqCtx& F)
{
    // sums of terms c, t, t^k, c*t^k over F_q; coefficients are element
    // codes 0..q-1
    std::vector<fq_t> coeffs;
    auto bump = [&](int deg, int code) {
        if (int(coeffs.size()) <= deg) coeffs.resize(deg + 1, 0);
        coeffs[deg] = F.add(coeffs[deg], fq_t(code));
    };
    size_t pos = 0;
    while (pos < text.size()) {
        size_t next = text.find('+', pos);
        std::string term = text.substr(pos, next == std::string::npos ? std::string::npos
                                                                      : next - pos);
        pos = next == std::string::npos ? text.size() : next + 1;
        int code = 1, deg = 0;
        size_t tpos = term.find('t');
        if (tpos == std::string::npos) {
            code = std::stoi(term);
            deg = 0;
        } else {
            std::string cpart = term.substr(0, tpos);
            if (!cpart.empty() && cpart.back() == '*') cpart.pop_back();
            code = cpart.empty() ? 1 : std::stoi(cpart);
            size_t caret = term.find('^', tpos);
            deg = caret == std::string::npos ? 1 : std::stoi(term.substr(caret + 1));
        }
        if (code < 0 || code >= F.q()) throw ConfigError("level: coefficient out of range");
        bump(deg, code);
    }
    Poly p(F, coeffs);
    if (p.is_zero()) throw ConfigError("level: zero polynomial");
    if (p.lead() != 1) throw ConfigError("level: generator must be monic");
    return p;
}

GroupSpec RunConfig::group() const
{
    const FqCtx& F = fq_context(q);
    GroupSpec spec;
    spec.n = n;
    spec.q = q;
    if (level != "full") spec.level = parse_level(level, F);
    return spec;
}

void RunConfig::validate() const
{
    if (n < 1 || n > 2) throw ConfigError("config: n must be 1 or 2");
    if (q < 2 || q > 9) throw ConfigError("config: q out of the supported range");
    fq_context(q); // throws for non prime powers
    if (radius < 4) throw ConfigError("config: window radius must be at least 4");
    int r = effective_support_radius();
    if (r < 0) throw ConfigError("config: negative support radius");
    if (r + 3 > radius)
        throw ConfigError("config: window radius must exceed the support radius by at least 3");
    if (effective_precision() < radius + n + 5)
        throw ConfigError("config: precision must be at least radius + n + 5");
    if (l < 0) throw ConfigError("config: negative truncation level");
    if (workers < 0) throw ConfigError("config: negative worker count");
    group(); // parses the level
}

std::string RunConfig::to_json() const
{
    nlohmann::json j;
    j["n"] = n;
    j["q"] = q;
    j["level"] = level;
    j["radius"] = radius;
    j["support_radius"] = effective_support_radius();
    j["l"] = l;
    j["precision"] = effective_precision();
    j["workers"] = workers;
    j["seed"] = seed;
    return j.dump(2);
}

std::string RunConfig::config_hash() const
{
    // FNV-1a over the canonical JSON
    std::string s = to_json();
    unsigned long long h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

RunConfig RunConfig::from_json(const std::string& text)
{
    nlohmann::json j = nlohmann::json::parse(text);
    RunConfig c;
    if (j.contains("n")) c.n = j["n"];
    if (j.contains("q")) c.q = j["q"];
    if (j.contains("level")) c.level = j["level"];
    if (j.contains("radius")) c.radius = j["radius"];
    if (j.contains("support_radius")) c.support_radius = j["support_radius"];
    if (j.contains("l")) c.l = j["l"];
    if (j.contains("precision")) c.precision = j["precision"];
    if (j.contains("out")) c.out_dir = j["out"];
    if (j.contains("workers")) c.workers = j["workers"];
    if (j.contains("seed")) c.seed = j["seed"];
    return c;
}

RunArtifacts run_pipeline(const RunConfig& cfg)
{
    cfg.validate();
    RunArtifacts art;
    art.config = cfg;
    GroupSpec spec = cfg.group();
    art.quotient = build_quotient(spec, cfg.radius, cfg.workers);
    art.report = cohomology_report(art.quotient, cfg.effective_support_radius());
    art.cusps = enumerate_cusps(spec);
    art.depths = sector_depths(spec, art.cusps, art.quotient, cfg.effective_precision());
    art.truncation = truncation_complex(cfg.l, art.depths, art.quotient);
    art.stabilization =
        stabilization_check(spec, cfg.l, {cfg.radius - 1, cfg.radius}, cfg.effective_precision());
    std::vector<std::vector<Cochain>> bases;
    for (const auto& d : art.report.degrees) bases.push_back(d.harmonic_basis);
    art.locus = support_locus(bases, art.depths, art.quotient);
    art.patch = choose_patch(art.quotient, art.truncation, bases);
    identified_counts(art.patch, spec);
    art.chi_geometric = euler_characteristic(art.patch);
    art.chi_cohomological = euler_from_cohomology(art.report);
    if (!art.stabilization.stabilized)
        throw InstabilityError("pipeline: D(l) counts did not stabilize across the radii");
    return art;
}

std::string RunArtifacts::summary_json() const
{
    nlohmann::json j;
    j["config"] = nlohmann::json::parse(config.to_json());
    j["config_hash"] = config.config_hash();
    j["orbit_counts"] = nlohmann::json::array();
    for (int qd = 0; qd <= quotient.dim(); ++qd) j["orbit_counts"].push_back(quotient.orbit_count(qd));
    j["cusps"] = cusps.size();
    nlohmann::json dims = nlohmann::json::array();
    for (const auto& d : report.degrees)
        dims.push_back({{"q", d.q},
                        {"dim_harmonic", d.dim_harmonic},
                        {"dim_hc", d.dim_hc},
                        {"dim_z", d.dim_z},
                        {"dim_b", d.dim_b}});
    j["dimensions"] = dims;
    j["stable"] = report.stable;
    j["d_counts"] = truncation.d_counts;
    j["d_stabilized"] = stabilization.stabilized;
    j["support_locus"] = locus.l_per_degree;
    j["g_counts"] = patch.g_counts;
    j["chi_geometric"] = chi_geometric;
    j["chi_cohomological"] = chi_cohomological;
    j["chi_offset"] = chi_geometric - chi_cohomological;
    return j.dump(2);
}

void write_reports(const RunArtifacts& art, const std::string& dir)
{
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    auto write = [&](const std::string& name, const std::string& text) {
        std::ofstream out(fs::path(dir) / name, std::ios::binary);
        out << text;
    };
    write("quotient.txt", art.quotient.serialize());
    write("cohomology.json", art.report.to_json());
    {
        nlohmann::json j;
        j["config_hash"] = art.config.config_hash();
        j["count"] = art.cusps.size();
        nlohmann::json reps = nlohmann::json::array();
        for (const auto& c : art.cusps) {
            nlohmann::json jc;
            jc["flag"] = c.rep.g.to_string();
            if (art.config.n == 1) {
                auto [a, b] = c.p1_coordinates();
                jc["p1"] = "(" + a.to_string() + " : " + b.to_string() + ")";
            }
            reps.push_back(jc);
        }
        j["representatives"] = reps;
        write("cusps.json", j.dump(2));
    }
    {
        nlohmann::json j;
        j["config_hash"] = art.config.config_hash();
        j["l"] = art.truncation.l;
        j["counting_radius"] = art.truncation.counting_radius;
        j["d_counts"] = art.truncation.d_counts;
        j["stabilization_radii"] = art.stabilization.radii;
        j["stabilization_counts"] = art.stabilization.counts;
        j["stabilized"] = art.stabilization.stabilized;
        j["support_locus"] = art.locus.l_per_degree;
        write("truncation.json", j.dump(2));
    }
    {
        nlohmann::json j;
        j["config_hash"] = art.config.config_hash();
        j["g_counts"] = art.patch.g_counts;
        j["chi_geometric"] = art.chi_geometric;
        j["chi_cohomological"] = art.chi_cohomological;
        j["chi_offset"] = art.chi_geometric - art.chi_cohomological;
        write("euler.json", j.dump(2));
    }
    write("patch.txt", art.patch.serialize());
    write("run.json", art.summary_json());
    if (art.config.emit_dot && art.config.n == 1) write("quotient.dot", quotient_dot(art.quotient));
}

std::string quotient_dot(const QuotientComplex& Q)
{
    std::string s = "graph quotient {\n";
    for (int id = 0; id < int(Q.orbits[0].size()); ++id)
        s += "  v" + std::to_string(id) + " [label=\"d" + std::to_string(Q.orbits[0][id].depth) +
             " s" + std::to_string(Q.orbits[0][id].stab_oriented) + "\"];\n";
    for (const auto& e : Q.orbits[1])
        s += "  v" + std::to_string(e.faces[1].first) + " -- v" +
             std::to_string(e.faces[0].first) + ";\n";
    s += "}\n";
    return s;
}

QuotientComplex parse_quotient(const std::string& text)
{
    QuotientComplex Q;
    std::istringstream in(text);
    std::string line;
    const FqCtx* F = nullptr;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "window") {
            ls >> Q.window;
        } else if (tag == "group") {
            std::string a, b, c;
            ls >> a >> b >> c;
            Q.spec.n = std::stoi(a.substr(2));
            Q.spec.q = std::stoi(b.substr(2));
            F = &fq_context(Q.spec.q);
            std::string lv = c.substr(6);
            if (lv != "full") Q.spec.level = parse_level(lv, *F);
        } else if (tag == "orbit") {
            int qd, id;
            ls >> qd >> id;
            if (int(Q.orbits[qd].size()) != id)
                throw Error("parse_quotient: orbit records out of order");
            OrbitRecord rec;
            std::string key;
            while (ls >> key) rec.rep.push_back(CanonicalLattice::from_key(*F, key));
            rec.stab_oriented = rec.stab_setwise = 1;
            rec.orientation_reversing = false;
            rec.depth = 0;
            Q.orbits[qd].push_back(std::move(rec));
            if (qd == 0)
                Q.vertex_lookup.emplace(Q.orbits[0].back().rep[0].key(),
                                        std::make_pair(id, PolyMat::identity(Q.spec.n + 1, *F)));
        } else if (tag == "stab") {
            int qd, id;
            long long so, ss;
            std::string rev, depthword;
            int depth;
            ls >> qd >> id >> so >> ss >> rev >> depthword >> depth;
            Q.orbits[qd][id].stab_oriented = so;
            Q.orbits[qd][id].stab_setwise = ss;
            Q.orbits[qd][id].orientation_reversing = rev == "rev";
            Q.orbits[qd][id].depth = depth;
        } else if (tag == "face") {
            int qd, id, i, fo, sign;
            ls >> qd >> id >> i >> fo >> sign;
            auto& faces = Q.orbits[qd][id].faces;
            if (int(faces.size()) != i) throw Error("parse_quotient: face records out of order");
            faces.push_back({fo, sign});
        }
        // cert records are not needed to rebuild the incidence structure
    }
    return Q;
}

namespace {

Cochain random_cochain(const QuotientComplex& Q, int qd, int radius, std::mt19937& rng)
{
    std::uniform_int_distribution<int> dv(-6, 6), dd(1, 3);
    Cochain f(qd, Q);
    for (int id = 0; id < int(Q.orbits[qd].size()); ++id) {
        const auto& rec = Q.orbits[qd][id];
        if (rec.orientation_reversing || rec.depth > radius) continue;
        f.set(id, Rat(dv(rng), dd(rng)));
    }
    return f;
}

} // namespace

std::vector<VerifyResult> run_verify(const RunConfig& cfg, const QuotientComplex* loaded)
{
    cfg.validate();
    GroupSpec spec = cfg.group();
    QuotientComplex built;
    const QuotientComplex* Qp = loaded;
    if (!Qp) {
        built = build_quotient(spec, cfg.radius);
        Qp = &built;
    }
    const QuotientComplex& Q = *Qp;
    const int r = std::min(cfg.effective_support_radius(), Q.window - 3);
    std::vector<VerifyResult> out;
    std::mt19937 rng(cfg.seed);

    auto record = [&](const std::string& name, bool pass, const std::string& detail) {
        out.push_back({name, pass, detail});
    };

    // d^2 = 0 and delta^2 = 0
    {
        bool ok = true;
        std::string detail;
        for (int qd = 0; qd <= Q.dim() && ok; ++qd)
            for (int it = 0; it < 100 && ok; ++it) {
                Cochain f = random_cochain(Q, qd, r, rng);
                Cochain dd2 = d(d(f));
                if (!dd2.is_zero()) {
                    ok = false;
                    for (const auto& [orbit, v] : dd2.values())
                        detail = "orbit " + std::to_string(orbit) + " of dimension " +
                                 std::to_string(qd + 2) + " value " + rat_to_string(v);
                }
            }
        record("d_after_d_is_zero", ok, detail);
    }
    {
        bool ok = true;
        std::string detail;
        for (int qd = 2; qd <= Q.dim() && ok; ++qd)
            for (int it = 0; it < 100 && ok; ++it) {
                Cochain f = random_cochain(Q, qd, r, rng);
                if (!delta(delta(f)).is_zero()) {
                    ok = false;
                    detail = "degree " + std::to_string(qd);
                }
            }
        record("delta_after_delta_is_zero", ok, detail);
    }
    // adjointness on seeded random pairs
    {
        bool ok = true;
        std::string detail;
        for (int qd = 1; qd <= Q.dim() && ok; ++qd)
            for (int it = 0; it < 100 && ok; ++it) {
                Cochain f = random_cochain(Q, qd - 1, r, rng);
                Cochain g = random_cochain(Q, qd, r, rng);
                Rat lhs = pairing(d(f), g), rhs = pairing(f, delta(g));
                if (lhs != rhs) {
                    ok = false;
                    detail = "degree " + std::to_string(qd) + ": " + rat_to_string(lhs) +
                             " != " + rat_to_string(rhs) + "\nf: " + f.serialize() +
                             "g: " + g.serialize();
                }
            }
        record("adjointness", ok, detail);
    }
    // energy identity
    {
        bool ok = true;
        std::string detail;
        for (int qd = 0; qd <= Q.dim() && ok; ++qd)
            for (int it = 0; it < 100 && ok; ++it) {
                Cochain f = random_cochain(Q, qd, r, rng);
                Rat lhs = pairing(laplacian(f), f);
                Rat rhs =
                    pairing(d(f), d(f)) + (qd >= 1 ? pairing(delta(f), delta(f)) : Rat(0));
                if (lhs != rhs) {
                    ok = false;
                    detail = "degree " + std::to_string(qd) + "\nf: " + f.serialize();
                }
            }
        record("energy_identity", ok, detail);
    }
    // laplacian kernel = ker d cap ker delta
    {
        bool ok = true;
        std::string detail;
        for (int qd = 0; qd <= Q.dim() && ok; ++qd) {
            std::vector<int> support;
            for (int id = 0; id < int(Q.orbits[qd].size()); ++id)
                if (!Q.orbits[qd][id].orientation_reversing && Q.orbits[qd][id].depth <= r)
                    support.push_back(id);
            SparseRationalMatrix lap(int(Q.orbits[qd].size()), int(support.size()));
            for (int c2 = 0; c2 < int(support.size()); ++c2) {
                Cochain e(qd, Q);
                e.set(support[c2], Rat(1));
                Cochain le = laplacian(e);
                for (const auto& [orbit, v] : le.values()) lap.add(orbit, c2, v);
            }
            auto kern = kernel_basis(lap);
            auto hb = harmonic_space(qd, Q, r);
            if (kern.size() != hb.size()) {
                ok = false;
                detail = "degree " + std::to_string(qd) + ": laplacian kernel " +
                         std::to_string(kern.size()) + ", both-kernels " +
                         std::to_string(hb.size());
            }
            for (const auto& v : kern) {
                Cochain f(qd, Q);
                for (int c2 = 0; c2 < int(support.size()); ++c2)
                    if (v[c2] != 0) f.set(support[c2], v[c2]);
                if (!d(f).is_zero() || !delta(f).is_zero()) ok = false;
            }
        }
        record("laplacian_kernel_equivalence", ok, detail);
    }
    // contractibility sums for balls
    {
        bool ok = true;
        std::string detail;
        const FqCtx& F = spec.field();
        SeriesMat rows(spec.n + 1,
                       std::vector<LaurentSeries>(spec.n + 1, LaurentSeries::zero(F)));
        for (int i = 0; i <= spec.n; ++i) rows[i][i] = LaurentSeries::one(F);
        CanonicalLattice base = CanonicalLattice::from_rows(F, rows);
        int maxr = spec.n == 1 ? 5 : 3;
        for (int rr = 1; rr <= maxr && ok; ++rr) {
            long long s = ball(base, rr).euler_sum();
            if (s != 1) {
                ok = false;
                detail = "radius " + std::to_string(rr) + " sum " + std::to_string(s);
            }
        }
        record("ball_euler_sums", ok, detail);
    }
    // decomposition Z = H + B
    {
        bool ok = true;
        std::string detail;
        for (int qd = 0; qd <= Q.dim() && ok; ++qd) {
            auto chk = verify_decomposition(qd, Q, r, cfg.seed);
            if (!chk.ok) {
                ok = false;
                detail = "degree " + std::to_string(qd) + ": dims " + std::to_string(chk.dim_z) +
                         " != " + std::to_string(chk.dim_h) + " + " + std::to_string(chk.dim_b) +
                         (chk.orthogonal ? "" : " (pairing not orthogonal)");
            }
        }
        record("decomposition_orthogonality", ok, detail);
    }
    // stabilizer orders are p-powers for proper levels
    if (!spec.is_full()) {
        bool ok = true;
        std::string detail;
        int p = spec.field().p();
        for (int qd = 0; qd <= Q.dim(); ++qd)
            for (const auto& o : Q.orbits[qd]) {
                long long v = o.stab_oriented;
                while (v % p == 0) v /= p;
                if (v != 1) {
                    ok = false;
                    detail = "order " + std::to_string(o.stab_oriented);
                }
            }
        record("stabilizers_p_power", ok, detail);
    }
    return out;
}

} // namespace btq
