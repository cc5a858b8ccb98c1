#include "btq/euler.hpp"
#include "btq/errors.hpp"

#include <algorithm>

namespace btq {

int PatchComplex::add_vertex(const CanonicalLattice& v)
{
    auto it = index.find(v.key());
    if (it != index.end()) return it->second;
    int id = int(verts.size());
    index[v.key()] = id;
    verts.push_back(v);
    return id;
}

void PatchComplex::add_simplex(const SimplexTuple& s)
{
    std::vector<int> ids;
    for (const auto& v : s) ids.push_back(add_vertex(v));
    std::sort(ids.begin(), ids.end());
    if (ids.size() == 2) edges.insert({ids[0], ids[1]});
    if (ids.size() == 3) {
        tris.insert({ids[0], ids[1], ids[2]});
        edges.insert({ids[0], ids[1]});
        edges.insert({ids[0], ids[2]});
        edges.insert({ids[1], ids[2]});
    }
}

long long PatchComplex::count(int q) const
{
    if (q == 0) return (long long)verts.size();
    if (q == 1) return (long long)edges.size();
    if (q == 2) return (long long)tris.size();
    return 0;
}

long long PatchComplex::euler_sum() const
{
    return count(0) - count(1) + count(2);
}

std::vector<SimplexTuple> PatchComplex::simplices(int q) const
{
    std::vector<SimplexTuple> out;
    if (q == 0)
        for (const auto& v : verts) out.push_back({v});
    if (q == 1)
        for (const auto& e : edges) out.push_back({verts[e[0]], verts[e[1]]});
    if (q == 2)
        for (const auto& t : tris) out.push_back({verts[t[0]], verts[t[1]], verts[t[2]]});
    return out;
}

namespace {

struct MutableComplex {
    std::set<int> vs;
    std::set<std::array<int, 2>> es;
    std::set<std::array<int, 3>> ts;

    // cofaces of a vertex / edge
    int vertex_degree(int v) const
    {
        int d = 0;
        for (const auto& e : es)
            if (e[0] == v || e[1] == v) ++d;
        return d;
    }
    std::vector<std::array<int, 2>> vertex_cofaces(int v) const
    {
        std::vector<std::array<int, 2>> out;
        for (const auto& e : es)
            if (e[0] == v || e[1] == v) out.push_back(e);
        return out;
    }
    std::vector<std::array<int, 3>> edge_cofaces(const std::array<int, 2>& e) const
    {
        std::vector<std::array<int, 3>> out;
        for (const auto& t : ts) {
            int hit = 0;
            for (int i = 0; i < 3; ++i)
                if (t[i] == e[0] || t[i] == e[1]) ++hit;
            if (hit == 2) out.push_back(t);
        }
        return out;
    }
};

} // namespace

std::optional<std::vector<CollapseStep>> collapse_certificate(const PatchComplex& c)
{
    MutableComplex m;
    for (int i = 0; i < int(c.verts.size()); ++i) m.vs.insert(i);
    m.es = c.edges;
    m.ts = c.tris;
    std::vector<CollapseStep> seq;
    auto key = [&](int v) { return c.verts[v].key(); };
    bool progress = true;
    while (progress) {
        progress = false;
        // free edges (exactly one triangle coface)
        for (const auto& e : m.es) {
            auto cof = m.edge_cofaces(e);
            if (cof.size() != 1) continue;
            CollapseStep st;
            st.q = 1;
            st.free_face = {key(e[0]), key(e[1])};
            st.coface = {key(cof[0][0]), key(cof[0][1]), key(cof[0][2])};
            m.ts.erase(cof[0]);
            m.es.erase(e);
            seq.push_back(std::move(st));
            progress = true;
            break;
        }
        if (progress) continue;
        // free vertices (exactly one edge coface, and no triangle through it)
        for (int v : m.vs) {
            auto cof = m.vertex_cofaces(v);
            if (cof.size() != 1) continue;
            bool blocked = false;
            for (const auto& t : m.ts)
                for (int i = 0; i < 3; ++i)
                    if (t[i] == v) blocked = true;
            if (blocked) continue;
            CollapseStep st;
            st.q = 0;
            st.free_face = {key(v)};
            st.coface = {key(cof[0][0]), key(cof[0][1])};
            m.es.erase(cof[0]);
            m.vs.erase(v);
            seq.push_back(std::move(st));
            progress = true;
            break;
        }
    }
    if (m.vs.size() == 1 && m.es.empty() && m.ts.empty()) return seq;
    return std::nullopt;
}

bool replay_collapse(const PatchComplex& c, const std::vector<CollapseStep>& seq)
{
    MutableComplex m;
    for (int i = 0; i < int(c.verts.size()); ++i) m.vs.insert(i);
    m.es = c.edges;
    m.ts = c.tris;
    auto vid = [&](const std::string& k) {
        auto it = c.index.find(k);
        return it == c.index.end() ? -1 : it->second;
    };
    for (const auto& st : seq) {
        if (st.q == 1) {
            std::array<int, 2> e{vid(st.free_face[0]), vid(st.free_face[1])};
            std::sort(e.begin(), e.end());
            std::array<int, 3> t{vid(st.coface[0]), vid(st.coface[1]), vid(st.coface[2])};
            std::sort(t.begin(), t.end());
            if (e[0] < 0 || t[0] < 0) return false;
            if (!m.es.count(e) || !m.ts.count(t)) return false;
            if (m.edge_cofaces(e).size() != 1) return false;
            m.ts.erase(t);
            m.es.erase(e);
        } else {
            int v = vid(st.free_face[0]);
            std::array<int, 2> e{vid(st.coface[0]), vid(st.coface[1])};
            std::sort(e.begin(), e.end());
            if (v < 0 || e[0] < 0) return false;
            if (!m.vs.count(v) || !m.es.count(e)) return false;
            if (m.vertex_cofaces(v).size() != 1) return false;
            m.es.erase(e);
            m.vs.erase(v);
        }
    }
    return m.vs.size() == 1 && m.es.empty() && m.ts.empty();
}

std::string FundamentalPatch::serialize() const
{
    std::string out;
    std::vector<std::string> lines;
    for (const auto& v : complex.verts) lines.push_back("0 " + v.key());
    for (const auto& e : complex.edges) {
        std::array<std::string, 2> k{complex.verts[e[0]].key(), complex.verts[e[1]].key()};
        std::sort(k.begin(), k.end());
        lines.push_back("1 " + k[0] + " " + k[1]);
    }
    for (const auto& t : complex.tris) {
        std::array<std::string, 3> k{complex.verts[t[0]].key(), complex.verts[t[1]].key(),
                                     complex.verts[t[2]].key()};
        std::sort(k.begin(), k.end());
        lines.push_back("2 " + k[0] + " " + k[1] + " " + k[2]);
    }
    std::sort(lines.begin(), lines.end());
    for (const auto& l : lines) out += l + "\n";
    for (const auto& st : collapse) {
        out += "collapse " + std::to_string(st.q);
        for (const auto& k : st.free_face) out += " " + k;
        out += " ->";
        for (const auto& k : st.coface) out += " " + k;
        out += "\n";
    }
    for (size_t qd = 0; qd < g_counts.size(); ++qd)
        out += "g " + std::to_string(qd) + " " + std::to_string(g_counts[qd]) + "\n";
    return out;
}

namespace {

// instances of each orbit already present in the lift
struct LiftState {
    // per dim: orbit id -> explicit instances
    std::map<std::pair<int, int>, std::vector<SimplexTuple>> instances;

    void record(const QuotientComplex& Q, const SimplexTuple& s)
    {
        auto fo = Q.find_simplex_orbit(s);
        if (!fo) return;
        instances[{int(s.size()) - 1, std::get<0>(*fo)}].push_back(s);
        if (s.size() >= 2)
            for (size_t i = 0; i < s.size(); ++i) {
                SimplexTuple face;
                for (size_t k = 0; k < s.size(); ++k)
                    if (k != i) face.push_back(s[k]);
                record(Q, face);
            }
    }
};

SimplexTuple face_of(const SimplexTuple& s, int i)
{
    SimplexTuple out;
    for (int k = 0; k < int(s.size()); ++k)
        if (k != i) out.push_back(s[k]);
    return out;
}

} // namespace

FundamentalPatch choose_patch(const QuotientComplex& Q, const TruncationComplex& trunc,
                              const std::vector<std::vector<Cochain>>& harmonic_bases)
{
    const GroupSpec& spec = Q.spec;
    const int n = Q.dim();

    // target orbits: D(l) within the counting radius plus every harmonic
    // support orbit
    std::vector<std::set<int>> target(n + 1);
    for (int qd = 0; qd <= n; ++qd)
        for (int id = 0; id < int(Q.orbits[qd].size()); ++id)
            if (trunc.in_d[qd][id] && Q.orbits[qd][id].depth <= trunc.counting_radius)
                target[qd].insert(id);
    for (int qd = 0; qd < int(harmonic_bases.size()) && qd <= n; ++qd)
        for (const auto& f : harmonic_bases[qd])
            for (const auto& [orbit, value] : f.values()) target[qd].insert(orbit);
    // close targets under faces
    for (int qd = n; qd >= 1; --qd)
        for (int id : target[qd])
            for (const auto& [faceOrbit, sign] : Q.orbits[qd][id].faces)
                target[qd - 1].insert(faceOrbit);
    // top targets: not a face of another target
    std::vector<std::set<int>> covered(n + 1);
    for (int qd = 1; qd <= n; ++qd)
        for (int id : target[qd])
            for (const auto& [faceOrbit, sign] : Q.orbits[qd][id].faces)
                covered[qd - 1].insert(faceOrbit);
    std::vector<std::pair<int, int>> tops; // (dim, orbit), dim descending
    for (int qd = n; qd >= 0; --qd)
        for (int id : target[qd])
            if (!covered[qd].count(id)) tops.emplace_back(qd, id);
    if (tops.empty()) {
        // degenerate case: the patch is the base vertex
        FundamentalPatch p;
        p.complex.add_simplex({Q.orbits[0][0].rep[0]});
        p.collapse = {};
        return p;
    }

    FundamentalPatch patch;
    LiftState lift;
    std::vector<bool> done(tops.size(), false);

    auto place = [&](const SimplexTuple& s) {
        patch.complex.add_simplex(s);
        lift.record(Q, s);
    };

    // seed with the first top simplex
    place(Q.orbits[tops[0].first][tops[0].second].rep);
    done[0] = true;
    bool progress = true;
    int placed = 1;
    while (placed < int(tops.size()) && progress) {
        progress = false;
        for (size_t t = 0; t < tops.size(); ++t) {
            if (done[t]) continue;
            auto [qd, id] = tops[t];
            const SimplexTuple& rep = Q.orbits[qd][id].rep;
            if (qd == 0) {
                // isolated vertex target: connect through a quotient path
                // by simply placing the representative
                place(rep);
                done[t] = true;
                ++placed;
                progress = true;
                continue;
            }
            // find a face of rep whose orbit already has an instance
            bool glued = false;
            for (int i = 0; i < int(rep.size()) && !glued; ++i) {
                SimplexTuple face = face_of(rep, i);
                auto fo = Q.find_simplex_orbit(face);
                if (!fo) continue;
                auto key = std::make_pair(qd - 1, std::get<0>(*fo));
                auto inst = lift.instances.find(key);
                if (inst == lift.instances.end() || inst->second.empty()) continue;
                const SimplexTuple& anchor = inst->second.front();
                auto idf = identify(face, anchor, spec);
                if (!idf) continue;
                SimplexTuple moved;
                for (const auto& v : rep) moved.push_back(act_vertex(idf->gamma, v));
                place(moved);
                glued = true;
            }
            if (glued) {
                done[t] = true;
                ++placed;
                progress = true;
            }
        }
        if (!progress && placed < int(tops.size())) {
            // disconnected target: place the next representative as is
            for (size_t t = 0; t < tops.size(); ++t)
                if (!done[t]) {
                    place(Q.orbits[tops[t].first][tops[t].second].rep);
                    done[t] = true;
                    ++placed;
                    progress = true;
                    break;
                }
        }
    }

    auto cert = collapse_certificate(patch.complex);
    if (!cert)
        throw CertificationError("choose_patch: no collapsible lift found (patch with " +
                                 std::to_string(patch.complex.count(0)) + " vertices, " +
                                 std::to_string(patch.complex.count(1)) + " edges, " +
                                 std::to_string(patch.complex.count(2)) + " triangles)");
    patch.collapse = *cert;
    return patch;
}

std::vector<long long> identified_counts(FundamentalPatch& patch, const GroupSpec& spec)
{
    std::vector<long long> g(spec.n + 1, 0);
    patch.certificates.clear();
    for (int qd = 0; qd <= spec.n; ++qd) {
        auto simps = patch.complex.simplices(qd);
        std::vector<bool> marked(simps.size(), false);
        for (size_t i = 0; i < simps.size(); ++i)
            for (size_t j = i + 1; j < simps.size(); ++j) {
                auto idf = identify(simps[i], simps[j], spec);
                if (!idf) continue;
                marked[i] = marked[j] = true;
                patch.certificates.push_back(IdentifiedPair{qd, simps[i], simps[j], idf->gamma});
            }
        for (bool b : marked)
            if (b) ++g[qd];
    }
    patch.g_counts = g;
    return g;
}

long long euler_characteristic(const FundamentalPatch& patch)
{
    if (patch.g_counts.empty()) throw Error("euler_characteristic: counts not computed");
    long long chi = 1;
    for (size_t qd = 0; qd < patch.g_counts.size(); ++qd)
        chi += (qd % 2 == 0 ? -1 : 1) * patch.g_counts[qd];
    return chi;
}

long long euler_from_cohomology(const CohomologyReport& report)
{
    if (!report.stable)
        throw InstabilityError("euler_from_cohomology: refusing an unstable report");
    long long chi = 0;
    for (const auto& d : report.degrees) chi += (d.q % 2 == 0 ? 1 : -1) * d.dim_hc;
    return chi;
}

} // namespace btq
