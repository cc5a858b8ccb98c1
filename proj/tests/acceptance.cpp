// Acceptance suite: one line per criterion, exact arithmetic throughout
// (tolerance zero). Exit status 0 iff every criterion passes.

#include "btq/pipeline.hpp"

#include <chrono>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

using namespace btq;

namespace {

int failures = 0;

void report(int index, const std::string& name, bool pass, const std::string& detail)
{
    std::cout << "criterion " << index << " [" << name << "]: " << (pass ? "PASS" : "FAIL");
    if (!detail.empty()) std::cout << " -- " << detail;
    std::cout << std::endl;
    if (!pass) ++failures;
}

struct QuotientCache {
    std::map<std::string, QuotientComplex> cache;
    const QuotientComplex& get(const GroupSpec& spec, int window)
    {
        std::string key = std::to_string(spec.n) + "/" + std::to_string(spec.q) + "/" +
                          spec.level_string() + "/" + std::to_string(window);
        auto it = cache.find(key);
        if (it == cache.end()) it = cache.emplace(key, build_quotient(spec, window)).first;
        return it->second;
    }
} quotients;

CanonicalLattice base_vertex(const FqCtx& F, int n)
{
    SeriesMat rows(n + 1, std::vector<LaurentSeries>(n + 1, LaurentSeries::zero(F)));
    for (int i = 0; i <= n; ++i) rows[i][i] = LaurentSeries::one(F);
    return CanonicalLattice::from_rows(F, std::move(rows));
}

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

long long count_sl2_constants(const FqCtx& F)
{
    long long count = 0;
    for (int a = 0; a < F.q(); ++a)
        for (int b = 0; b < F.q(); ++b)
            for (int c = 0; c < F.q(); ++c)
                for (int d2 = 0; d2 < F.q(); ++d2)
                    if (F.sub(F.mul(fq_t(a), fq_t(d2)), F.mul(fq_t(b), fq_t(c))) == 1) ++count;
    return count;
}

long long cycle_rank_oracle(const QuotientComplex& Q, int r)
{
    std::vector<int> verts;
    for (int id = 0; id < int(Q.orbits[0].size()); ++id)
        if (Q.orbits[0][id].depth <= r) verts.push_back(id);
    std::map<int, int> comp;
    for (int v : verts) comp[v] = v;
    std::function<int(int)> find = [&](int x) { return comp[x] == x ? x : comp[x] = find(comp[x]); };
    long long edges = 0;
    for (const auto& e : Q.orbits[1]) {
        if (e.depth > r) continue;
        ++edges;
        int a = find(e.faces[0].first), b = find(e.faces[1].first);
        if (a != b) comp[a] = b;
    }
    std::set<int> roots;
    for (int v : verts) roots.insert(find(v));
    return edges - (long long)verts.size() + (long long)roots.size();
}

// ---------------------------------------------------------------- criterion 1

void criterion1()
{
    bool pass = true;
    std::string detail;
    for (int q : {2, 3}) {
        const int R = 8;
        GroupSpec spec{1, q, std::nullopt};
        const QuotientComplex& Q = quotients.get(spec, R);
        if (Q.orbit_count(0) != R + 1 || Q.orbit_count(1) != R) {
            pass = false;
            detail += "q=" + std::to_string(q) + ": orbit counts " +
                      std::to_string(Q.orbit_count(0)) + "/" + std::to_string(Q.orbit_count(1)) +
                      " ";
            continue;
        }
        // path structure: each edge orbit joins consecutive depths, one per level
        std::vector<int> seen(R + 1, 0);
        for (const auto& e : Q.orbits[1]) {
            int a = Q.orbits[0][e.faces[0].first].depth;
            int b = Q.orbits[0][e.faces[1].first].depth;
            if (std::abs(a - b) != 1) pass = false;
            seen[std::max(a, b)]++;
        }
        for (int d2 = 1; d2 <= R; ++d2)
            if (seen[d2] != 1) pass = false;
        // oracle: stabilizer orders strictly increase along the apartment
        // beyond the first step
        for (int k = 1; k + 1 <= R; ++k)
            if (!(Q.orbits[0][k].stab_oriented < Q.orbits[0][k + 1].stab_oriented)) pass = false;
        // harmonic dimension in degree one vanishes
        auto rep = cohomology_report(Q, R - 3);
        if (!rep.stable) pass = false;
        if (rep.degrees[1].dim_harmonic != 0 || rep.degrees[1].dim_hc != 0) pass = false;
        // chi from the identified-count formula is 1 with all g_q = 0
        auto cusps = enumerate_cusps(spec);
        auto depths = sector_depths(spec, cusps, Q, R + 8);
        TruncationComplex t = truncation_complex(1, depths, Q);
        std::vector<std::vector<Cochain>> bases(2);
        for (int qd = 0; qd <= 1; ++qd) bases[qd] = rep.degrees[qd].harmonic_basis;
        FundamentalPatch patch = choose_patch(Q, t, bases);
        auto g = identified_counts(patch, spec);
        if (!(g == std::vector<long long>{0, 0})) pass = false;
        if (euler_characteristic(patch) != 1) pass = false;
        if (!replay_collapse(patch.complex, patch.collapse)) pass = false;
        detail += "q=" + std::to_string(q) + ": path " + std::to_string(Q.orbit_count(0)) + "+" +
                  std::to_string(Q.orbit_count(1)) + " chi=1 ";
    }
    report(1, "tree fixture SL_2(F_q[t]), window 8", pass, detail);
}

// ---------------------------------------------------------------- criterion 2

void criterion2()
{
    bool pass = true;
    std::string detail;
    const int R = 8;
    const FqCtx& F = fq_context(2);
    GroupSpec spec{1, 2, Poly::t(F)};
    const QuotientComplex& Q = quotients.get(spec, R);

    auto cusps = enumerate_cusps(spec);
    if (cusps.size() != 3) pass = false;
    detail += "cusps=" + std::to_string(cusps.size()) + " ";

    // oracle: orbits on P^1(K) via reduction mod t; every residue class
    // appears and maps to a distinct stored cusp
    {
        std::mt19937 rng(11);
        std::uniform_int_distribution<int> dd(0, 3), dc(0, 1);
        std::map<int, int> class_to_cusp;
        int tested = 0;
        while (tested < 80) {
            int da = dd(rng), db = dd(rng);
            std::vector<fq_t> ca(da + 1), cb(db + 1);
            for (auto& x : ca) x = fq_t(dc(rng));
            for (auto& x : cb) x = fq_t(dc(rng));
            Poly a(F, ca), b(F, cb);
            if (a.is_zero() && b.is_zero()) continue;
            if (Poly::gcd(a, b).deg() != 0) continue;
            ++tested;
            RatMat g(2, F);
            g.at(1, 0) = RationalFunction(a);
            g.at(1, 1) = RationalFunction(b);
            g.at(0, 0) = RationalFunction::one(F);
            if (g.det().is_zero()) {
                g.at(0, 0) = RationalFunction::zero(F);
                g.at(0, 1) = RationalFunction::one(F);
            }
            auto [idx, gamma] = cusp_of_flag(Flag{g}, spec, cusps);
            if (!member(gamma, spec)) pass = false;
            int cls = b.coeff(0) == 0 ? 2 : int(F.div(a.coeff(0), b.coeff(0)));
            auto it = class_to_cusp.find(cls);
            if (it == class_to_cusp.end())
                class_to_cusp[cls] = idx;
            else if (it->second != idx)
                pass = false;
        }
        std::set<int> distinct;
        for (auto [cls, idx] : class_to_cusp) distinct.insert(idx);
        if (distinct.size() != 3) pass = false;
    }

    auto rep = cohomology_report(Q, R - 3);
    if (!rep.stable) pass = false;
    long long oracle = cycle_rank_oracle(Q, R - 1);
    if (rep.degrees[1].dim_harmonic != oracle) pass = false;
    detail += "dimH1=" + std::to_string(rep.degrees[1].dim_harmonic) +
              " cycle_rank=" + std::to_string(oracle) + " ";

    // Euler pipelines, computed independently; the identified-count value
    // carries the contractible-complex normalization, so the two sides
    // differ by the constant 1, which is asserted and surfaced verbatim
    auto depths = sector_depths(spec, cusps, Q, R + 8);
    TruncationComplex t = truncation_complex(1, depths, Q);
    std::vector<std::vector<Cochain>> bases(2);
    for (int qd = 0; qd <= 1; ++qd) bases[qd] = rep.degrees[qd].harmonic_basis;
    FundamentalPatch patch = choose_patch(Q, t, bases);
    auto g = identified_counts(patch, spec);
    long long chi_geom = euler_characteristic(patch);
    long long chi_coh = euler_from_cohomology(rep);
    long long expect_geom = 1;
    for (size_t qd = 0; qd < g.size(); ++qd) expect_geom += (qd % 2 == 0 ? -1 : 1) * g[qd];
    if (chi_geom != expect_geom) pass = false;
    if (chi_geom - chi_coh != 1) pass = false;
    if (!replay_collapse(patch.complex, patch.collapse)) pass = false;
    detail += "chi_geom=" + std::to_string(chi_geom) + " chi_coh=" + std::to_string(chi_coh) +
              " offset=" + std::to_string(chi_geom - chi_coh) + " (degree-0 convention)";
    report(2, "congruence fixture Gamma(t) in SL_2(F_2[t]), window 8", pass, detail);
}

// ---------------------------------------------------------------- criterion 3

void criterion3()
{
    bool pass = true;
    std::string detail;
    long long checked = 0;
    struct Fx {
        int n, q, window;
    };
    for (Fx fx : {Fx{1, 2, 8}, Fx{1, 3, 8}, Fx{2, 2, 3}}) {
        GroupSpec spec{fx.n, fx.q, std::nullopt};
        const QuotientComplex& Q = quotients.get(spec, fx.window);
        const int r = Q.window - 3;
        std::mt19937 rng(1234);
        for (int qd = 0; qd <= Q.dim(); ++qd) {
            for (int it = 0; it < 100; ++it) {
                Cochain f = random_cochain(Q, qd, r, rng);
                if (!d(d(f)).is_zero()) pass = false;
                if (qd >= 2 && !delta(delta(f)).is_zero()) pass = false;
                if (qd >= 1) {
                    Cochain e = random_cochain(Q, qd - 1, r, rng);
                    if (pairing(d(e), f) != pairing(e, delta(f))) pass = false;
                }
                Rat lhs = pairing(laplacian(f), f);
                Rat rhs = pairing(d(f), d(f)) + (qd >= 1 ? pairing(delta(f), delta(f)) : Rat(0));
                if (lhs != rhs) pass = false;
                ++checked;
            }
        }
    }
    detail = std::to_string(checked) + " random cochains, zero failures";
    report(3, "operator identities d^2, delta^2, adjointness, energy", pass, detail);
}

// ---------------------------------------------------------------- criterion 4

void criterion4()
{
    bool pass = true;
    std::string detail;
    struct Fx {
        int n, q, window;
        const char* level;
    };
    for (Fx fx : {Fx{1, 2, 8, "full"}, Fx{1, 3, 8, "full"}, Fx{1, 2, 8, "t"}, Fx{2, 2, 3, "full"}}) {
        const FqCtx& F = fq_context(fx.q);
        GroupSpec spec{fx.n, fx.q,
                       std::string(fx.level) == "full" ? std::optional<Poly>() : Poly::t(F)};
        const QuotientComplex& Q = quotients.get(spec, fx.window);
        const int r = Q.window - 3;
        for (int qd = 0; qd <= Q.dim(); ++qd) {
            // laplacian kernel via indicators
            std::vector<int> support;
            for (int id = 0; id < int(Q.orbits[qd].size()); ++id)
                if (!Q.orbits[qd][id].orientation_reversing && Q.orbits[qd][id].depth <= r)
                    support.push_back(id);
            SparseRationalMatrix lap(int(Q.orbits[qd].size()), int(support.size()));
            for (int c = 0; c < int(support.size()); ++c) {
                Cochain e(qd, Q);
                e.set(support[c], Rat(1));
                Cochain le = laplacian(e);
                for (const auto& [orbit, v] : le.values()) lap.add(orbit, c, v);
            }
            auto kern = kernel_basis(lap);
            auto hb = harmonic_space(qd, Q, r);
            if (kern.size() != hb.size()) pass = false;
            // mutual containment: laplacian-kernel vectors satisfy both
            // conditions; harmonic vectors are laplacian-zero
            for (const auto& v : kern) {
                Cochain f(qd, Q);
                for (int c = 0; c < int(support.size()); ++c)
                    if (v[c] != 0) f.set(support[c], v[c]);
                if (!d(f).is_zero() || !delta(f).is_zero()) pass = false;
            }
            for (const auto& h : hb)
                if (!laplacian(h).is_zero()) pass = false;
        }
    }
    report(4, "kernel of the laplacian equals ker d cap ker delta", pass, detail);
}

// ---------------------------------------------------------------- criterion 5

std::vector<const FundamentalPatch*> certified_patches;
std::vector<FundamentalPatch> patch_store;

void criterion5()
{
    bool pass = true;
    std::string detail;
    for (int q : {2, 3})
        for (int r = 1; r <= 5; ++r) {
            long long s = ball(base_vertex(fq_context(q), 1), r).euler_sum();
            if (s != 1) {
                pass = false;
                detail += "n=1 q=" + std::to_string(q) + " r=" + std::to_string(r) + " sum " +
                          std::to_string(s) + " ";
            }
        }
    for (int r = 1; r <= 3; ++r) {
        long long s = ball(base_vertex(fq_context(2), 2), r).euler_sum();
        if (s != 1) {
            pass = false;
            detail += "n=2 r=" + std::to_string(r) + " sum " + std::to_string(s) + " ";
        }
    }
    for (const auto* p : certified_patches) {
        if (p->complex.euler_sum() != 1) {
            pass = false;
            detail += "patch sum " + std::to_string(p->complex.euler_sum()) + " ";
        }
        if (!replay_collapse(p->complex, p->collapse)) pass = false;
    }
    detail += std::to_string(certified_patches.size()) + " certified patches checked";
    report(5, "contractibility sums: balls and fundamental patches", pass, detail);
}

// ---------------------------------------------------------------- criterion 6

void criterion6()
{
    bool pass = true;
    std::string detail;
    struct Fx {
        int n, q, window;
        const char* level;
    };
    for (Fx fx : {Fx{1, 2, 8, "full"}, Fx{1, 3, 8, "full"}, Fx{1, 2, 8, "t"}, Fx{2, 2, 4, "full"}}) {
        const FqCtx& F = fq_context(fx.q);
        GroupSpec spec{fx.n, fx.q,
                       std::string(fx.level) == "full" ? std::optional<Poly>() : Poly::t(F)};
        const QuotientComplex& Q = quotients.get(spec, fx.window);
        auto rep = cohomology_report(Q, fx.window - 3);
        if (!rep.stable) pass = false;
        for (const auto& d2 : rep.degrees) {
            if (d2.dim_harmonic != d2.dim_hc) pass = false;
            auto chk = verify_decomposition(d2.q, Q, fx.window - 3);
            if (!chk.ok) pass = false;
        }
        if (fx.n == 2) {
            detail += "SL_3(F_2[t]) window 4 dims:";
            for (const auto& d2 : rep.degrees)
                detail += " " + std::to_string(d2.dim_harmonic) + "=" + std::to_string(d2.dim_hc);
        }
        // keep patches for criterion 5
        auto cusps = enumerate_cusps(spec);
        auto depths = sector_depths(spec, cusps, Q, fx.window + 8);
        TruncationComplex t = truncation_complex(1, depths, Q);
        std::vector<std::vector<Cochain>> bases;
        for (const auto& d2 : rep.degrees) bases.push_back(d2.harmonic_basis);
        patch_store.push_back(choose_patch(Q, t, bases));
    }
    for (const auto& p : patch_store) certified_patches.push_back(&p);
    report(6, "harmonic dimension = compact-support dimension; Z = H + B exact", pass, detail);
}

// ---------------------------------------------------------------- criterion 7

void criterion7()
{
    bool pass = true;
    std::string detail;
    struct Fx {
        int n, q, w1, w2;
        const char* level;
    };
    for (Fx fx : {Fx{1, 2, 7, 8, "full"}, Fx{1, 3, 7, 8, "full"}, Fx{1, 2, 7, 8, "t"},
                  Fx{2, 2, 3, 4, "full"}}) {
        const FqCtx& F = fq_context(fx.q);
        GroupSpec spec{fx.n, fx.q,
                       std::string(fx.level) == "full" ? std::optional<Poly>() : Poly::t(F)};
        auto cusps = enumerate_cusps(spec);
        for (int l : {0, 1, 2}) {
            const int cap = std::max(fx.w1 - l - 2, 0);
            std::vector<std::vector<long long>> counts;
            for (int w : {fx.w1, fx.w2}) {
                const QuotientComplex& Q = quotients.get(spec, w);
                auto depths = sector_depths(spec, cusps, Q, w + 8);
                TruncationComplex t = truncation_complex(l, depths, Q);
                std::vector<long long> c(Q.dim() + 1, 0);
                for (int qd = 0; qd <= Q.dim(); ++qd)
                    for (size_t i = 0; i < Q.orbits[qd].size(); ++i)
                        if (t.in_d[qd][i] && Q.orbits[qd][i].depth <= cap) c[qd]++;
                counts.push_back(std::move(c));
            }
            if (counts[0] != counts[1]) {
                pass = false;
                detail += "n=" + std::to_string(fx.n) + " level=" + fx.level +
                          " l=" + std::to_string(l) + " differs ";
            }
        }
    }
    if (pass) detail = "D(l) counts identical at the two largest radii, l in {0,1,2}";
    report(7, "truncation complexes stabilize across window radii", pass, detail);
}

// ---------------------------------------------------------------- criterion 8

void criterion8()
{
    bool pass = true;
    std::string detail;
    // p-power stabilizers at a proper level
    {
        const FqCtx& F = fq_context(2);
        GroupSpec spec{1, 2, Poly::t(F)};
        const QuotientComplex& Q = quotients.get(spec, 8);
        for (int qd = 0; qd <= Q.dim(); ++qd)
            for (const auto& o : Q.orbits[qd]) {
                long long v = o.stab_oriented;
                while (v % 2 == 0) v /= 2;
                if (v != 1) {
                    pass = false;
                    detail += "non-2-power order " + std::to_string(o.stab_oriented) + " ";
                }
            }
    }
    // base-vertex stabilizer order against exhaustive enumeration
    for (int q : {2, 3}) {
        const FqCtx& F = fq_context(q);
        GroupSpec spec{1, q, std::nullopt};
        long long got = stabilizer_order({base_vertex(F, 1)}, spec);
        long long expect = (long long)q * (q - 1) * (q + 1);
        long long oracle = count_sl2_constants(F);
        if (got != expect || got != oracle) {
            pass = false;
            detail += "q=" + std::to_string(q) + " got " + std::to_string(got) + " ";
        } else {
            detail += "q=" + std::to_string(q) + ": " + std::to_string(got) + " ";
        }
    }
    report(8, "stabilizer sanity: p-powers at proper level, |SL_2(F_q)| at the base", pass,
           detail);
}

} // namespace

int main()
{
    auto t0 = std::chrono::steady_clock::now();
    try {
        criterion1();
        criterion2();
        criterion3();
        criterion4();
        criterion6(); // populates patches used by criterion 5
        criterion5();
        criterion7();
        criterion8();
    } catch (const std::exception& e) {
        std::cout << "acceptance suite aborted: " << e.what() << std::endl;
        return 9;
    }
    auto t1 = std::chrono::steady_clock::now();
    std::cout << "acceptance: " << (failures == 0 ? "all criteria PASS" : "FAILURES above")
              << " (" << std::chrono::duration<double>(t1 - t0).count() << "s)" << std::endl;
    return failures == 0 ? 0 : 1;
}
