#include "btq/harmonic.hpp"
#include "btq/errors.hpp"
#include "btq/linalg.hpp"

#include <json.hpp>

#include <random>

namespace btq {

namespace {

std::vector<int> support_orbits(const QuotientComplex& Q, int q, int radius)
{
    std::vector<int> ids;
    if (q < 0 || q > Q.dim()) return ids;
    for (int id = 0; id < int(Q.orbits[q].size()); ++id)
        if (!Q.orbits[q][id].orientation_reversing && Q.orbits[q][id].depth <= radius)
            ids.push_back(id);
    return ids;
}

// rows: (df)(Sigma) = 0 for every enumerated (q+1)-orbit Sigma
SparseRationalMatrix d_conditions(const QuotientComplex& Q, int q,
                                  const std::vector<int>& support)
{
    std::map<int, int> col;
    for (int i = 0; i < int(support.size()); ++i) col[support[i]] = i;
    int nrows = (q + 1 <= Q.dim()) ? int(Q.orbits[q + 1].size()) : 0;
    SparseRationalMatrix A(nrows, int(support.size()));
    for (int id = 0; id < nrows; ++id)
        for (const auto& [faceOrbit, sign] : Q.orbits[q + 1][id].faces) {
            auto it = col.find(faceOrbit);
            if (it != col.end()) A.add(id, it->second, Rat(sign));
        }
    return A;
}

// rows: (delta g)(s) = 0 for every (q-1)-orbit s
SparseRationalMatrix delta_conditions(const QuotientComplex& Q, int q,
                                      const std::vector<int>& support)
{
    std::map<int, int> col;
    for (int i = 0; i < int(support.size()); ++i) col[support[i]] = i;
    int nrows = (q >= 1) ? int(Q.orbits[q - 1].size()) : 0;
    SparseRationalMatrix D(nrows, int(support.size()));
    if (q < 1) return D;
    for (int i = 0; i < int(support.size()); ++i) {
        int id = support[i];
        Rat wq = orbit_weight(Q, q, id);
        for (const auto& [faceOrbit, sign] : Q.orbits[q][id].faces)
            D.add(faceOrbit, i, Rat(sign) * wq);
    }
    return D;
}

Cochain to_cochain(const QuotientComplex& Q, int q, const std::vector<int>& support,
                   const RatVec& v)
{
    Cochain f(q, Q);
    for (size_t i = 0; i < support.size(); ++i)
        if (v[i] != 0) f.set(support[i], v[i]);
    return f;
}

SparseRationalMatrix stack(const SparseRationalMatrix& a, const SparseRationalMatrix& b)
{
    SparseRationalMatrix s(a.rows() + b.rows(), a.cols());
    for (const auto& [rc, v] : a.entries()) s.set(rc.first, rc.second, v);
    for (const auto& [rc, v] : b.entries()) s.set(rc.first + a.rows(), rc.second, v);
    return s;
}

void require_radius(const QuotientComplex& Q, int support_radius)
{
    if (support_radius + 2 > Q.window)
        throw Error("harmonic: support radius + 2 must not exceed the window radius");
    if (support_radius < 0) throw Error("harmonic: negative support radius");
}

// span of { dg restricted to the region : supp(dg) inside the support
// region }, expressed in the support-region coordinates. g ranges over
// the whole window so that coboundaries of cochains supported out to
// infinity (constant along cusp directions) are captured; the
// decomposition and stabilization checks certify the window was large
// enough.
std::vector<RatVec> coboundary_space(const QuotientComplex& Q, int q,
                                     const std::vector<int>& support)
{
    if (q < 1) return {};
    std::map<int, int> col;
    for (int i = 0; i < int(support.size()); ++i) col[support[i]] = i;
    std::vector<int> gspace = support_orbits(Q, q - 1, Q.window);
    if (gspace.empty()) return {};
    std::map<int, int> gcol;
    for (int i = 0; i < int(gspace.size()); ++i) gcol[gspace[i]] = i;

    // rows of d(g) split into "inside the region" and "outside"
    SparseRationalMatrix dout(int(Q.orbits[q].size()), int(gspace.size()));
    SparseRationalMatrix din(int(support.size()), int(gspace.size()));
    for (int id = 0; id < int(Q.orbits[q].size()); ++id)
        for (const auto& [faceOrbit, sign] : Q.orbits[q][id].faces) {
            auto g = gcol.find(faceOrbit);
            if (g == gcol.end()) continue;
            auto it = col.find(id);
            if (it != col.end())
                din.add(it->second, g->second, Rat(sign));
            else
                dout.add(id, g->second, Rat(sign));
        }
    std::vector<RatVec> confined = kernel_basis(dout);
    std::vector<RatVec> image;
    for (const auto& g : confined) {
        RatVec img = din.apply(g);
        bool nonzero = false;
        for (const auto& x : img) nonzero = nonzero || x != 0;
        if (nonzero) image.push_back(std::move(img));
    }
    // reduce to a basis
    std::vector<RatVec> basis;
    for (auto& v : image) {
        basis.push_back(v);
        if (rank_dense(basis) < int(basis.size())) basis.pop_back();
    }
    return basis;
}

} // namespace

std::vector<Cochain> harmonic_space(int q, const QuotientComplex& Q, int support_radius)
{
    require_radius(Q, support_radius);
    auto support = support_orbits(Q, q, support_radius);
    auto A = d_conditions(Q, q, support);
    auto D = delta_conditions(Q, q, support);
    auto kb = kernel_basis(stack(A, D));
    std::vector<Cochain> out;
    for (const auto& v : kb) out.push_back(to_cochain(Q, q, support, v));
    return out;
}

std::pair<long long, std::vector<Cochain>>
compact_support_cohomology(int q, const QuotientComplex& Q, int support_radius)
{
    require_radius(Q, support_radius);
    auto support = support_orbits(Q, q, support_radius);
    auto zbasis = kernel_basis(d_conditions(Q, q, support));
    auto bbasis = coboundary_space(Q, q, support);
    long long dim = (long long)zbasis.size() - (long long)bbasis.size();
    // representatives: z-vectors independent modulo B
    std::vector<RatVec> reps = bbasis;
    std::vector<Cochain> basis;
    for (const auto& z : zbasis) {
        reps.push_back(z);
        if (rank_dense(reps) < int(reps.size())) {
            reps.pop_back();
            continue;
        }
        basis.push_back(to_cochain(Q, q, support, z));
    }
    return {dim, basis};
}

DecompositionCheck verify_decomposition(int q, const QuotientComplex& Q, int support_radius,
                                        unsigned seed)
{
    require_radius(Q, support_radius);
    DecompositionCheck out;
    auto support = support_orbits(Q, q, support_radius);
    auto zbasis = kernel_basis(d_conditions(Q, q, support));
    auto bbasis = coboundary_space(Q, q, support);
    auto hbasis = harmonic_space(q, Q, support_radius);

    out.dim_z = (long long)zbasis.size();
    out.dim_b = (long long)bbasis.size();
    out.dim_h = (long long)hbasis.size();
    out.dims_add = out.dim_z == out.dim_h + out.dim_b;

    out.orthogonal = true;
    for (const auto& h : hbasis)
        for (const auto& b : bbasis) {
            Cochain bc = to_cochain(Q, q, support, b);
            if (pairing(h, bc) != 0) out.orthogonal = false;
        }

    // random z in Z decomposes exactly as h + b
    out.recombines = true;
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> dc(-3, 3);
    std::vector<RatVec> hvecs;
    std::map<int, int> col;
    for (int i = 0; i < int(support.size()); ++i) col[support[i]] = i;
    for (const auto& h : hbasis) {
        RatVec v(support.size(), Rat(0));
        for (const auto& [k, x] : h.values()) v[col[k]] = x;
        hvecs.push_back(std::move(v));
    }
    for (int trial = 0; trial < 5 && out.dims_add; ++trial) {
        RatVec z(support.size(), Rat(0));
        for (const auto& zb : zbasis) {
            Rat c(dc(rng));
            for (size_t i = 0; i < z.size(); ++i) z[i] += c * zb[i];
        }
        // solve z = sum c_i h_i + sum d_j b_j
        int cols = int(hvecs.size() + bbasis.size());
        SparseRationalMatrix M(int(support.size()), cols);
        for (int i = 0; i < int(hvecs.size()); ++i)
            for (size_t r = 0; r < support.size(); ++r) M.add(int(r), i, hvecs[i][r]);
        for (int j = 0; j < int(bbasis.size()); ++j)
            for (size_t r = 0; r < support.size(); ++r)
                M.add(int(r), int(hvecs.size()) + j, bbasis[j][r]);
        auto sol = solve(M, z);
        if (!sol) {
            out.recombines = false;
            break;
        }
        RatVec back = M.apply(*sol);
        if (back != z) out.recombines = false;
    }
    out.ok = out.dims_add && out.orthogonal && out.recombines;
    return out;
}

namespace {

DegreeData degree_data(const QuotientComplex& Q, int q, int r)
{
    DegreeData d;
    d.q = q;
    d.support_radius = r;
    auto support = support_orbits(Q, q, r);
    d.dim_z = (long long)kernel_basis(d_conditions(Q, q, support)).size();
    d.dim_b = (long long)coboundary_space(Q, q, support).size();
    d.harmonic_basis = harmonic_space(q, Q, r);
    d.dim_harmonic = (long long)d.harmonic_basis.size();
    auto hc = compact_support_cohomology(q, Q, r);
    d.dim_hc = hc.first;
    d.hc_basis = std::move(hc.second);
    return d;
}

} // namespace

CohomologyReport cohomology_report(const QuotientComplex& Q, int support_radius)
{
    if (support_radius + 3 > Q.window)
        throw Error("cohomology_report: stabilization needs support radius + 3 <= window");
    CohomologyReport rep;
    rep.spec = Q.spec;
    rep.window = Q.window;
    rep.support_radius = support_radius;
    rep.stable = true;
    for (int q = 0; q <= Q.dim(); ++q) {
        rep.degrees.push_back(degree_data(Q, q, support_radius));
        rep.degrees_next.push_back(degree_data(Q, q, support_radius + 1));
        const auto& a = rep.degrees.back();
        const auto& b = rep.degrees_next.back();
        if (a.dim_harmonic != b.dim_harmonic || a.dim_hc != b.dim_hc) rep.stable = false;
    }
    return rep;
}

std::string CohomologyReport::to_json() const
{
    nlohmann::json j;
    j["group"] = {{"n", spec.n}, {"q", spec.q}, {"level", spec.level_string()}};
    j["window"] = window;
    j["support_radius"] = support_radius;
    j["stable"] = stable;
    auto dump_deg = [](const DegreeData& d) {
        nlohmann::json jd;
        jd["q"] = d.q;
        jd["support_radius"] = d.support_radius;
        jd["dim_z"] = d.dim_z;
        jd["dim_b"] = d.dim_b;
        jd["dim_harmonic"] = d.dim_harmonic;
        jd["dim_hc"] = d.dim_hc;
        nlohmann::json basis = nlohmann::json::array();
        for (const auto& f : d.harmonic_basis) {
            nlohmann::json entry = nlohmann::json::array();
            for (const auto& [orbit, value] : f.values())
                entry.push_back({{"orbit", orbit}, {"value", rat_to_string(value)}});
            basis.push_back(entry);
        }
        jd["harmonic_basis"] = basis;
        return jd;
    };
    j["degrees"] = nlohmann::json::array();
    for (const auto& d : degrees) j["degrees"].push_back(dump_deg(d));
    j["degrees_next"] = nlohmann::json::array();
    for (const auto& d : degrees_next) j["degrees_next"].push_back(dump_deg(d));
    return j.dump(2);
}

} // namespace btq
