#include "btq/cusps.hpp"
#include "btq/errors.hpp"

#include <algorithm>
#include <functional>

namespace btq {

std::pair<Poly, Poly> CuspClass::p1_coordinates() const
{
    const int m = rep.g.m;
    if (m != 2) throw Error("p1_coordinates: only defined for n = 1");
    // the line of the flag is spanned by the last row
    const FqCtx& F = rep.g.a[0].field();
    RationalFunction a = rep.g.at(1, 0), b = rep.g.at(1, 1);
    Poly lcm = (a.den() * b.den()) / Poly::gcd(a.den(), b.den());
    Poly pa = a.num() * (lcm / a.den());
    Poly pb = b.num() * (lcm / b.den());
    Poly g = Poly::gcd(pa, pb);
    if (g.deg() > 0) {
        pa = pa / g;
        pb = pb / g;
    }
    fq_t lead = pb.is_zero() ? pa.lead() : pb.lead();
    pa = pa.scaled(F.inv(lead));
    pb = pb.scaled(F.inv(lead));
    return {pa, pb};
}

namespace {

// in-place column operation col_j -= f * col_k on g and the accumulator
void colop(RatMat& g, RatMat& v, int j, int k, const RationalFunction& f)
{
    const int m = g.m;
    for (int i = 0; i < m; ++i) {
        g.a[i * m + j] = g.at(i, j) - f * g.at(i, k);
        v.a[i * m + j] = v.at(i, j) - f * v.at(i, k);
    }
}

// determinant-one column swap: (c_j, c_k) -> (c_k, -c_j)
void colswap_sl(RatMat& g, RatMat& v, int j, int k)
{
    const FqCtx& F = g.a[0].field();
    RationalFunction one = RationalFunction::one(F);
    colop(g, v, j, k, -one); // c_j += c_k
    colop(g, v, k, j, one);  // c_k -= c_j
    colop(g, v, j, k, -one); // c_j += c_k
}

} // namespace

PolyMat flag_reduce(const Flag& f, const FqCtx& F)
{
    const int m = f.g.m;
    RatMat g = f.g;
    // row scaling is an upper-triangular move on flags: clear denominators
    // and content row by row, leaving coprime-ish polynomial rows
    for (int i = 0; i < m; ++i) {
        Poly lcm = Poly::constant(F, 1);
        for (int j = 0; j < m; ++j) {
            const Poly& den = g.at(i, j).den();
            lcm = lcm * (den / Poly::gcd(lcm, den));
        }
        RationalFunction scale{lcm};
        Poly content = Poly::zero(F);
        for (int j = 0; j < m; ++j) {
            g.a[i * m + j] = g.at(i, j) * scale;
            content = Poly::gcd(content, g.at(i, j).num());
        }
        if (content.deg() > 0)
            for (int j = 0; j < m; ++j)
                g.a[i * m + j] = g.at(i, j) / RationalFunction(content);
    }
    RatMat v = RatMat::identity(m, F);
    for (int r = m - 1; r >= 1; --r) {
        // Euclid across columns 0..r of row r until one nonzero entry
        for (;;) {
            int nonzero = 0, minc = -1;
            for (int c = 0; c <= r; ++c) {
                if (g.at(r, c).is_zero()) continue;
                ++nonzero;
                if (minc == -1 || g.at(r, c).num().deg() < g.at(r, minc).num().deg()) minc = c;
            }
            if (nonzero == 0) throw Error("flag_reduce: singular flag matrix");
            if (nonzero == 1) {
                if (minc != r) colswap_sl(g, v, minc, r);
                break;
            }
            for (int c = 0; c <= r; ++c) {
                if (c == minc || g.at(r, c).is_zero()) continue;
                Poly quo = g.at(r, c).num() / g.at(r, minc).num();
                colop(g, v, c, minc, RationalFunction(quo));
            }
        }
    }
    // v has polynomial entries and det 1; gamma = v^{-1}
    PolyMat gamma(m, F);
    RatMat vinv = v.adjugate();
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            const RationalFunction& e = vinv.at(i, j);
            if (e.den().deg() != 0) throw Error("flag_reduce: non-polynomial certificate");
            gamma.at(i, j) = e.num().scaled(F.inv(e.den().coeff(0)));
        }
    return gamma;
}

namespace {

// residues modulo the level generator, as polynomials of degree < deg I
std::vector<Poly> residues(const FqCtx& F, const Poly& gen)
{
    std::vector<Poly> out;
    const int L = gen.deg();
    long long total = 1;
    for (int i = 0; i < L; ++i) total *= F.q();
    for (long long code = 0; code < total; ++code) {
        long long c = code;
        std::vector<fq_t> cs(L, 0);
        for (int i = 0; i < L; ++i) {
            cs[i] = fq_t(c % F.q());
            c /= F.q();
        }
        out.emplace_back(F, cs);
    }
    return out;
}

PolyMat mat_mod(const PolyMat& g, const Poly& gen)
{
    PolyMat r = g;
    for (auto& e : r.a) e = e % gen;
    return r;
}

// upper triangular modulo I with constant diagonal of product 1: the
// image of the polynomial Borel subgroup in SL_{n+1}(A/I)
bool in_borel_image(const PolyMat& gbar, const FqCtx& F)
{
    const int m = gbar.m;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            if (j < i && !gbar.at(i, j).is_zero()) return false;
            if (j == i && gbar.at(i, i).deg() != 0) return false;
        }
    fq_t prod = 1;
    for (int i = 0; i < m; ++i) prod = F.mul(prod, gbar.at(i, i).coeff(0));
    return prod == 1;
}

} // namespace

std::vector<CuspClass> enumerate_cusps(const GroupSpec& spec)
{
    const FqCtx& F = spec.field();
    const int m = spec.n + 1;
    std::vector<CuspClass> out;
    if (spec.is_full()) {
        CuspClass c;
        c.rep = standard_flag(F, spec.n);
        c.reduce = PolyMat::identity(m, F);
        out.push_back(std::move(c));
        return out;
    }
    const Poly& gen = *spec.level;
    auto res = residues(F, gen);
    const long long per = (long long)res.size();
    double total = 1;
    for (int i = 0; i < m * m; ++i) total *= double(per);
    if (total > 4e6) throw CertificationError("enumerate_cusps: residue ring too large");
    std::vector<PolyMat> sl;
    for (long long code = 0; code < (long long)total; ++code) {
        long long c = code;
        PolyMat g(m, F);
        for (int i = 0; i < m * m; ++i) {
            g.a[i] = res[c % per];
            c /= per;
        }
        Poly det = g.det() % gen;
        if (det.deg() == 0 && det.coeff(0) == 1) sl.push_back(std::move(g));
    }
    // partition SL(A/I) into left cosets of the Borel image
    std::map<std::string, int> index;
    for (int i = 0; i < int(sl.size()); ++i) index[sl[i].to_string()] = i;
    std::vector<int> comp(sl.size());
    for (size_t i = 0; i < sl.size(); ++i) comp[i] = int(i);
    std::function<int(int)> find = [&](int x) { return comp[x] == x ? x : comp[x] = find(comp[x]); };
    std::vector<int> borel;
    for (int i = 0; i < int(sl.size()); ++i)
        if (in_borel_image(sl[i], F)) borel.push_back(i);
    for (int i = 0; i < int(sl.size()); ++i)
        for (int b : borel) {
            PolyMat prod = mat_mod(sl[b] * sl[i], gen);
            int j = index.at(prod.to_string());
            int ra = find(i), rb = find(j);
            if (ra != rb) comp[ra] = rb;
        }
    std::map<int, int> reps;
    for (int i = 0; i < int(sl.size()); ++i) {
        int r = find(i);
        if (!reps.count(r)) reps[r] = i;
    }

    for (auto [root, idx] : reps) {
        // Lift sl[idx] to SL(A): reduce the residue matrix to the identity
        // by elementary row operations over A/I; the product of their
        // inverses is a polynomial lift of determinant exactly 1.
        PolyMat w = sl[idx];
        PolyMat lift = PolyMat::identity(m, F);
        auto rowop = [&](int i2, int j2, const Poly& f) {
            // w <- E_{i2,j2}(f) w, lift <- lift E_{i2,j2}(-f);
            // the invariant sl[idx] == lift * w mod I is preserved
            for (int c2 = 0; c2 < m; ++c2)
                w.a[i2 * m + c2] = (w.at(i2, c2) + f * w.at(j2, c2)) % gen;
            PolyMat e = PolyMat::identity(m, F);
            e.at(i2, j2) = -f;
            lift = lift * e;
        };
        auto unit_inverse = [&](const Poly& u) {
            for (const auto& r2 : res) {
                Poly p = (u * r2) % gen;
                if (p.deg() == 0 && p.coeff(0) == 1) return r2;
            }
            throw CertificationError("enumerate_cusps: pivot is not a unit");
        };
        auto isunit = [&](const Poly& p) {
            return !p.is_zero() && Poly::gcd(p, gen).deg() == 0;
        };
        const Poly one = Poly::constant(F, 1);
        for (int c = 0; c < m; ++c) {
            int pivot = -1;
            for (int r2 = c; r2 < m && pivot < 0; ++r2)
                if (isunit(w.at(r2, c))) pivot = r2;
            if (pivot < 0) {
                // invertible over the semilocal ring A/I: a row addition
                // always produces a unit in the column
                for (int r2 = c; r2 < m && pivot < 0; ++r2)
                    for (int r3 = c; r3 < m && pivot < 0; ++r3) {
                        if (r2 == r3) continue;
                        for (const auto& cc : res) {
                            if (cc.is_zero()) continue;
                            if (isunit((w.at(r2, c) + cc * w.at(r3, c)) % gen)) {
                                rowop(r2, r3, cc);
                                pivot = r2;
                                break;
                            }
                        }
                    }
                if (pivot < 0) throw CertificationError("enumerate_cusps: no unit pivot");
            }
            if (pivot != c) {
                // determinant-one swap of rows (c, pivot)
                rowop(c, pivot, one);
                rowop(pivot, c, -one);
                rowop(c, pivot, one);
            }
            Poly uinv = unit_inverse(w.at(c, c));
            for (int r2 = 0; r2 < m; ++r2) {
                if (r2 == c || w.at(r2, c).is_zero()) continue;
                rowop(r2, c, (-(w.at(r2, c) * uinv)) % gen);
            }
        }
        // w is diagonal with unit entries of product 1; cascade Whitehead
        // shears, diag(v, v^{-1}) = E12(v) E21(-v^{-1}) E12(v) E21(1) E12(-1) E21(1),
        // applied right factor first
        for (int c = 0; c + 1 < m; ++c) {
            Poly u = w.at(c, c);
            if (u.deg() == 0 && u.coeff(0) == 1) continue;
            Poly v = unit_inverse(u);
            rowop(c + 1, c, one);
            rowop(c, c + 1, -one);
            rowop(c + 1, c, one);
            rowop(c, c + 1, v);
            rowop(c + 1, c, -u);
            rowop(c, c + 1, v);
        }
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                Poly want = (i == j) ? one : Poly::zero(F);
                if (!(w.at(i, j) == want))
                    throw CertificationError("enumerate_cusps: lift normalization failed");
            }
        Poly dl = lift.det();
        if (!(dl.deg() == 0 && dl.coeff(0) == 1))
            throw CertificationError("enumerate_cusps: lift determinant is not 1");

        CuspClass c;
        Flag fl;
        fl.g = RatMat::from_poly(lift);
        c.rep = fl; // flag(lift); its reduction certificate is lift itself
        c.reduce = lift;
        out.push_back(std::move(c));
    }
    return out;
}

std::pair<int, PolyMat> cusp_of_flag(const Flag& f, const GroupSpec& spec,
                                     const std::vector<CuspClass>& cusps)
{
    const FqCtx& F = spec.field();
    PolyMat gf = flag_reduce(f, F);
    for (int i = 0; i < int(cusps.size()); ++i) {
        const PolyMat& gi = cusps[i].reduce;
        if (spec.is_full()) {
            PolyMat gamma = gi.adjugate() * gf;
            return {i, gamma};
        }
        PolyMat u = mat_mod(gi * gf.adjugate(), *spec.level);
        if (!in_borel_image(u, F)) continue;
        // upper-triangular residues with constant diagonal lift verbatim
        PolyMat gamma = gi.adjugate() * u * gf;
        return {i, gamma};
    }
    throw CertificationError("cusp_of_flag: flag matches no stored representative");
}

std::vector<SimplexTuple> sector_truncation(const CuspClass& cusp, int l, int bound,
                                            int precision)
{
    const FqCtx& F = cusp.rep.g.a[0].field();
    const int n = cusp.rep.g.m - 1;
    SectorRef s = sector(F, n, cusp.rep, precision);
    std::vector<SimplexTuple> out;
    for (const auto& alc : standard_sector_alcoves(F, n, bound)) {
        if (alc.depth < l) continue;
        SimplexTuple moved;
        for (const auto& v : alc.verts) moved.push_back(act_vertex_rat(s.w, v, precision));
        out.push_back(std::move(moved));
    }
    return out;
}

std::vector<std::vector<int>> sector_depths(const GroupSpec& spec,
                                            const std::vector<CuspClass>& cusps,
                                            const QuotientComplex& Q, int precision)
{
    const int n = Q.dim();
    const FqCtx& F = spec.field();
    std::vector<std::vector<int>> depth(n + 1);
    for (int qd = 0; qd <= n; ++qd) depth[qd].assign(Q.orbits[qd].size(), -1);

    for (const auto& cusp : cusps) {
        SectorRef s = sector(F, n, cusp.rep, precision);
        for (const auto& alc : standard_sector_alcoves(F, n, Q.window)) {
            SimplexTuple moved;
            bool inside = true;
            for (const auto& v : alc.verts) {
                moved.push_back(act_vertex_rat(s.w, v, precision));
                if (moved.back().spread() > Q.window) inside = false;
            }
            if (!inside) continue;
            auto fo = Q.find_simplex_orbit(moved);
            if (!fo) continue; // outside the window
            int id = std::get<0>(*fo);
            depth[n][id] = std::max(depth[n][id], alc.depth);
        }
    }
    // faces of deep chambers inherit the depth
    for (int qd = n; qd >= 1; --qd)
        for (int id = 0; id < int(Q.orbits[qd].size()); ++id) {
            if (depth[qd][id] < 0) continue;
            for (const auto& [faceOrbit, sign] : Q.orbits[qd][id].faces)
                depth[qd - 1][faceOrbit] = std::max(depth[qd - 1][faceOrbit], depth[qd][id]);
        }
    return depth;
}

TruncationComplex truncation_complex(int l, const std::vector<std::vector<int>>& depths,
                                     const QuotientComplex& Q)
{
    const int n = Q.dim();
    TruncationComplex t;
    t.l = l;
    t.counting_radius = std::max(Q.window - l - 2, 0);
    t.in_p.resize(n + 1);
    t.in_d.resize(n + 1);
    for (int qd = 0; qd <= n; ++qd) {
        t.in_p[qd].assign(Q.orbits[qd].size(), 0);
        t.in_d[qd].assign(Q.orbits[qd].size(), 0);
        for (size_t i = 0; i < Q.orbits[qd].size(); ++i)
            t.in_p[qd][i] = depths[qd][i] >= l ? 1 : 0;
    }
    // D(l): minimal subcomplex containing every simplex outside P(l)
    for (int qd = 0; qd <= n; ++qd)
        for (size_t i = 0; i < Q.orbits[qd].size(); ++i)
            if (!t.in_p[qd][i]) t.in_d[qd][i] = 1;
    for (int qd = n; qd >= 1; --qd)
        for (size_t i = 0; i < Q.orbits[qd].size(); ++i)
            if (t.in_d[qd][i])
                for (const auto& [faceOrbit, sign] : Q.orbits[qd][i].faces)
                    t.in_d[qd - 1][faceOrbit] = 1;
    t.d_counts.assign(n + 1, 0);
    for (int qd = 0; qd <= n; ++qd)
        for (size_t i = 0; i < Q.orbits[qd].size(); ++i)
            if (t.in_d[qd][i] && Q.orbits[qd][i].depth <= t.counting_radius) t.d_counts[qd]++;
    return t;
}

StabilizationReport stabilization_check(const GroupSpec& spec, int l,
                                        const std::vector<int>& radii, int precision)
{
    if (radii.size() < 2) throw Error("stabilization_check: need at least two radii");
    StabilizationReport rep;
    rep.l = l;
    rep.radii = radii;
    auto cusps = enumerate_cusps(spec);
    int mincap = -1;
    for (int r : radii) mincap = mincap < 0 ? r : std::min(mincap, r);
    const int cap = std::max(mincap - l - 2, 0);
    for (int r : radii) {
        QuotientComplex Q = build_quotient(spec, r);
        auto depths = sector_depths(spec, cusps, Q, precision + r);
        TruncationComplex t = truncation_complex(l, depths, Q);
        // recount within the shared cap so radii are comparable
        std::vector<long long> counts(Q.dim() + 1, 0);
        for (int qd = 0; qd <= Q.dim(); ++qd)
            for (size_t i = 0; i < Q.orbits[qd].size(); ++i)
                if (t.in_d[qd][i] && Q.orbits[qd][i].depth <= cap) counts[qd]++;
        rep.counts.push_back(std::move(counts));
    }
    const auto& a = rep.counts[rep.counts.size() - 2];
    const auto& b = rep.counts[rep.counts.size() - 1];
    rep.stabilized = true;
    for (size_t qd = 0; qd < a.size(); ++qd)
        if (a[qd] != b[qd]) rep.stabilized = false;
    return rep;
}

SupportLocus support_locus(const std::vector<std::vector<Cochain>>& bases,
                           const std::vector<std::vector<int>>& depths,
                           const QuotientComplex& Q)
{
    SupportLocus out;
    for (size_t qd = 0; qd < bases.size(); ++qd) {
        int maxdepth = -1;
        for (const auto& f : bases[qd])
            for (const auto& [orbit, value] : f.values())
                maxdepth = std::max(maxdepth, depths[qd][orbit]);
        out.l_per_degree.push_back(maxdepth + 1);
        if (maxdepth + 1 > Q.window) out.flagged = true;
    }
    return out;
}

} // namespace btq
