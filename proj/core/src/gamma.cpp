#include "btq/gamma.hpp"
#include "btq/errors.hpp"
#include "btq/parallel.hpp"

#include <algorithm>
#include <numeric>

namespace btq {

bool member(const PolyMat& g, const GroupSpec& spec)
{
    const FqCtx& F = spec.field();
    Poly dg = g.det();
    if (!(dg.deg() == 0 && dg.coeff(0) == 1)) return false;
    if (spec.is_full()) return true;
    for (int i = 0; i < g.m; ++i)
        for (int j = 0; j < g.m; ++j) {
            Poly r = g.at(i, j) % *spec.level;
            if (i == j) r = r - Poly::constant(F, 1);
            if (!r.is_zero()) return false;
        }
    return true;
}

namespace {

// Exact inverse of a canonical (monomial-diagonal upper triangular) matrix.
SeriesMat invert_canonical(const CanonicalLattice& L)
{
    const FqCtx& F = L.field();
    const int d = L.n() + 1;
    SeriesMat c = L.to_matrix();
    SeriesMat x(d, std::vector<LaurentSeries>(d, LaurentSeries::zero(F)));
    for (int j = 0; j < d; ++j) {
        x[j][j] = LaurentSeries::monomial(F, 1, -L.diag()[j]);
        for (int i = j - 1; i >= 0; --i) {
            LaurentSeries acc = LaurentSeries::zero(F);
            for (int k = i + 1; k <= j; ++k) acc = acc + c[i][k] * x[k][j];
            x[i][j] = (-acc).shifted(-L.diag()[i]);
        }
    }
    return x;
}

int sgn_of_perm(const std::vector<int>& p)
{
    int s = 1;
    for (size_t i = 0; i < p.size(); ++i)
        for (size_t j = i + 1; j < p.size(); ++j)
            if (p[i] > p[j]) s = -s;
    return s;
}

} // namespace

GammaSolver::GammaSolver(const GroupSpec& spec, int degree_bound)
    : spec_(spec), F_(spec.field()), d_(spec.n + 1), degb_(std::max(degree_bound, 0)),
      nunk_((spec.n + 1) * (spec.n + 1) * (std::max(degree_bound, 0) + 1))
{
    add_congruence_conditions();
}

void GammaSolver::add_equation(std::vector<fq_t> row, fq_t b)
{
    rows_.push_back(std::move(row));
    rhs_.push_back(b);
}

void GammaSolver::add_congruence_conditions()
{
    if (spec_.is_full()) return;
    const Poly& gen = *spec_.level;
    const int L = gen.deg();
    // t^deg mod gen, precomputed
    std::vector<Poly> tmod;
    Poly cur = Poly::constant(F_, 1);
    for (int deg = 0; deg <= degb_; ++deg) {
        tmod.push_back(cur % gen);
        cur = cur * Poly::t(F_);
    }
    for (int r = 0; r < d_; ++r)
        for (int s = 0; s < d_; ++s)
            for (int j = 0; j < L; ++j) {
                std::vector<fq_t> row(nunk_, 0);
                for (int deg = 0; deg <= degb_; ++deg)
                    row[(r * d_ + s) * (degb_ + 1) + deg] = tmod[deg].coeff(j);
                fq_t b = (r == s && j == 0) ? fq_t(1) : fq_t(0);
                add_equation(std::move(row), b);
            }
}

bool GammaSolver::add_vertex_map(const CanonicalLattice& from, const CanonicalLattice& to)
{
    const int diff = from.det_val() - to.det_val();
    if (diff % d_ != 0) {
        feasible_ = false;
        return false;
    }
    const int k = diff / d_;
    SeriesMat cf = from.to_matrix();
    SeriesMat ti = invert_canonical(to);
    // P[i][r][s][j] = cf[i][r] * ti[s][j]; E_{ij} = sum_{r,s,deg} x_{rsdeg}
    // pi^{-deg-k} P; all coefficients of E at negative exponents vanish.
    for (int i = 0; i < d_; ++i)
        for (int j = 0; j < d_; ++j) {
            std::vector<LaurentSeries> prods(d_ * d_, LaurentSeries::zero(F_));
            int mlow = 0;
            for (int r = 0; r < d_; ++r)
                for (int s = 0; s < d_; ++s) {
                    prods[r * d_ + s] = cf[i][r] * ti[s][j];
                    const auto& p = prods[r * d_ + s];
                    if (!p.is_zero()) mlow = std::min(mlow, p.val() - degb_ - k);
                }
            for (int m = mlow; m < 0; ++m) {
                std::vector<fq_t> row(nunk_, 0);
                bool any = false;
                for (int r = 0; r < d_; ++r)
                    for (int s = 0; s < d_; ++s) {
                        const auto& p = prods[r * d_ + s];
                        if (p.is_zero()) continue;
                        for (int deg = 0; deg <= degb_; ++deg) {
                            int idx = m + deg + k;
                            if (idx < p.val() || idx >= p.known_end()) continue;
                            fq_t cv = p.coeff_at(idx);
                            if (cv != 0) {
                                row[(r * d_ + s) * (degb_ + 1) + deg] =
                                    F_.add(row[(r * d_ + s) * (degb_ + 1) + deg], cv);
                                any = true;
                            }
                        }
                    }
                if (any) add_equation(std::move(row), 0);
            }
        }
    return true;
}

void GammaSolver::for_each_gamma(const std::function<bool(const PolyMat&)>& fn) const
{
    if (!feasible_) return;
    // Gauss over F_q
    std::vector<std::vector<fq_t>> m = rows_;
    std::vector<fq_t> b = rhs_;
    std::vector<int> pivcol;
    int rank = 0;
    for (int c = 0; c < nunk_ && rank < int(m.size()); ++c) {
        int piv = -1;
        for (int r = rank; r < int(m.size()); ++r)
            if (m[r][c] != 0) {
                piv = r;
                break;
            }
        if (piv == -1) continue;
        std::swap(m[rank], m[piv]);
        std::swap(b[rank], b[piv]);
        fq_t inv = F_.inv(m[rank][c]);
        for (int j = 0; j < nunk_; ++j) m[rank][j] = F_.mul(m[rank][j], inv);
        b[rank] = F_.mul(b[rank], inv);
        for (int r = 0; r < int(m.size()); ++r) {
            if (r == rank || m[r][c] == 0) continue;
            fq_t f = m[r][c];
            for (int j = 0; j < nunk_; ++j) m[r][j] = F_.sub(m[r][j], F_.mul(f, m[rank][j]));
            b[r] = F_.sub(b[r], F_.mul(f, b[rank]));
        }
        pivcol.push_back(c);
        ++rank;
    }
    for (int r = rank; r < int(m.size()); ++r)
        if (b[r] != 0) return; // inconsistent
    std::vector<fq_t> x0(nunk_, 0);
    for (int r = 0; r < rank; ++r) x0[pivcol[r]] = b[r];
    std::vector<int> freecols;
    {
        std::vector<bool> ispiv(nunk_, false);
        for (int c : pivcol) ispiv[c] = true;
        for (int c = 0; c < nunk_; ++c)
            if (!ispiv[c]) freecols.push_back(c);
    }
    const int kdim = int(freecols.size());
    double total = 1;
    for (int i = 0; i < kdim; ++i) total *= F_.q();
    if (total > double(1 << 22))
        throw CertificationError("identification search space exceeds the degree-bound budget");

    std::vector<std::vector<fq_t>> kern(kdim, std::vector<fq_t>(nunk_, 0));
    for (int i = 0; i < kdim; ++i) {
        int c = freecols[i];
        kern[i][c] = 1;
        for (int r = 0; r < rank; ++r) kern[i][pivcol[r]] = F_.neg(m[r][c]);
    }

    std::vector<fq_t> digits(kdim, 0);
    std::vector<fq_t> x = x0;
    const long long count = (long long)total;
    for (long long it = 0;; ++it) {
        // build h and test
        PolyMat h(d_, F_);
        for (int r = 0; r < d_; ++r)
            for (int s = 0; s < d_; ++s) {
                std::vector<fq_t> cs(degb_ + 1);
                for (int deg = 0; deg <= degb_; ++deg)
                    cs[deg] = x[(r * d_ + s) * (degb_ + 1) + deg];
                h.at(r, s) = Poly(F_, std::move(cs));
            }
        Poly dh = h.det();
        if (dh.deg() == 0 && dh.coeff(0) == 1) {
            if (!fn(h.adjugate())) return;
        }
        if (it + 1 >= count) break;
        // odometer step over all field codes per free coordinate
        int pos = 0;
        while (true) {
            fq_t old = digits[pos];
            fq_t nw = fq_t((old + 1) % F_.q());
            digits[pos] = nw;
            fq_t dlt = F_.sub(nw, old);
            for (int j = 0; j < nunk_; ++j)
                if (kern[pos][j] != 0) x[j] = F_.add(x[j], F_.mul(dlt, kern[pos][j]));
            if (nw != 0) break;
            ++pos;
        }
    }
}

long long GammaSolver::count() const
{
    long long c = 0;
    for_each_gamma([&](const PolyMat&) {
        ++c;
        return true;
    });
    return c;
}

std::optional<PolyMat> GammaSolver::first() const
{
    std::optional<PolyMat> out;
    for_each_gamma([&](const PolyMat& g) {
        out = g;
        return false;
    });
    return out;
}

namespace {

int type_of(const CanonicalLattice& v)
{
    int d = v.n() + 1;
    return ((v.det_val() % d) + d) % d;
}

std::vector<std::vector<int>> matchings(const SimplexTuple& from, const SimplexTuple& to)
{
    // permutations sigma with type(from_i) == type(to_{sigma(i)}), evens first
    const int k = int(from.size());
    std::vector<int> p(k);
    std::iota(p.begin(), p.end(), 0);
    std::vector<std::vector<int>> evens, odds;
    do {
        bool ok = true;
        for (int i = 0; i < k && ok; ++i)
            if (type_of(from[i]) != type_of(to[p[i]])) ok = false;
        if (!ok) continue;
        (sgn_of_perm(p) == 1 ? evens : odds).push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    evens.insert(evens.end(), odds.begin(), odds.end());
    return evens;
}

int pair_bound(const SimplexTuple& from, const SimplexTuple& to, const std::vector<int>& p)
{
    int b = -1;
    for (size_t i = 0; i < from.size(); ++i) {
        int s = from[i].spread() + to[p[i]].spread();
        if (b == -1 || s < b) b = s;
    }
    return b;
}

} // namespace

StabInfo stabilizer_info(const SimplexTuple& s, const GroupSpec& spec, int degree_bound)
{
    StabInfo info;
    for (const auto& p : matchings(s, s)) {
        int bound = degree_bound >= 0 ? degree_bound : pair_bound(s, s, p);
        GammaSolver solver(spec, bound);
        bool ok = true;
        for (size_t i = 0; i < s.size() && ok; ++i) ok = solver.add_vertex_map(s[i], s[p[i]]);
        if (!ok) continue;
        long long c = solver.count();
        info.setwise += c;
        if (sgn_of_perm(p) == 1) info.oriented += c;
    }
    return info;
}

long long stabilizer_order(const SimplexTuple& s, const GroupSpec& spec)
{
    return stabilizer_info(s, spec).oriented;
}

std::optional<Identification> identify(const SimplexTuple& from, const SimplexTuple& to,
                                       const GroupSpec& spec)
{
    if (from.size() != to.size()) return std::nullopt;
    for (const auto& p : matchings(from, to)) {
        GammaSolver solver(spec, pair_bound(from, to, p));
        bool ok = true;
        for (size_t i = 0; i < from.size() && ok; ++i)
            ok = solver.add_vertex_map(from[i], to[p[i]]);
        if (!ok) continue;
        auto g = solver.first();
        if (g) return Identification{*g, sgn_of_perm(p)};
    }
    return std::nullopt;
}

// ----- quotient construction ---------------------------------------------------

std::optional<std::pair<int, PolyMat>>
QuotientComplex::find_vertex_orbit(const CanonicalLattice& v) const
{
    auto it = vertex_lookup.find(v.key());
    if (it != vertex_lookup.end()) return it->second;
    for (int id = 0; id < int(orbits[0].size()); ++id) {
        const auto& rep = orbits[0][id].rep[0];
        if (type_of(rep) != type_of(v)) continue;
        auto found = identify({v}, {rep}, spec);
        if (found) return std::make_pair(id, found->gamma);
    }
    return std::nullopt;
}

std::optional<std::tuple<int, int, PolyMat>>
QuotientComplex::find_simplex_orbit(const SimplexTuple& s) const
{
    const int qdim = int(s.size()) - 1;
    if (qdim == 0) {
        auto v = find_vertex_orbit(s[0]);
        if (!v) return std::nullopt;
        return std::make_tuple(v->first, 1, v->second);
    }
    // vertex orbits of the tuple, for candidate filtering
    std::vector<int> vorbs;
    for (const auto& v : s) {
        auto f = find_vertex_orbit(v);
        if (!f) return std::nullopt;
        vorbs.push_back(f->first);
    }
    std::multiset<int> want(vorbs.begin(), vorbs.end());
    for (int id = 0; id < int(orbits[qdim].size()); ++id) {
        const auto& rec = orbits[qdim][id];
        std::multiset<int> have;
        for (const auto& v : rec.rep) {
            auto f = vertex_lookup.find(v.key());
            if (f == vertex_lookup.end()) break;
            have.insert(f->second.first);
        }
        if (have != want) continue;
        auto found = identify(s, rec.rep, spec);
        if (found) return std::make_tuple(id, found->sign, found->gamma);
    }
    return std::nullopt;
}

std::string QuotientComplex::serialize() const
{
    std::string out;
    out += "window " + std::to_string(window) + "\n";
    out += "group n=" + std::to_string(spec.n) + " q=" + std::to_string(spec.q) +
           " level=" + spec.level_string() + "\n";
    for (int qdim = 0; qdim <= spec.n; ++qdim)
        for (int id = 0; id < int(orbits[qdim].size()); ++id) {
            const auto& r = orbits[qdim][id];
            std::string line = "orbit " + std::to_string(qdim) + " " + std::to_string(id);
            for (const auto& v : r.rep) line += " " + v.key();
            out += line + "\n";
            out += "stab " + std::to_string(qdim) + " " + std::to_string(id) + " " +
                   std::to_string(r.stab_oriented) + " " + std::to_string(r.stab_setwise) +
                   (r.orientation_reversing ? " rev" : " dir") + " depth " +
                   std::to_string(r.depth) + "\n";
            for (size_t i = 0; i < r.faces.size(); ++i)
                out += "face " + std::to_string(qdim) + " " + std::to_string(id) + " " +
                       std::to_string(i) + " " + std::to_string(r.faces[i].first) + " " +
                       std::to_string(r.faces[i].second) + "\n";
            for (size_t i = 0; i < r.face_certs.size(); ++i)
                out += "cert " + std::to_string(qdim) + " " + std::to_string(id) + " " +
                       std::to_string(i) + " " + r.face_certs[i].to_string() + "\n";
        }
    return out;
}

QuotientComplex build_quotient(const GroupSpec& spec, int window, int workers)
{
    const FqCtx& F = spec.field();
    const int n = spec.n;
    QuotientComplex Q;
    Q.spec = spec;
    Q.window = window;

    auto base = [&]() {
        SeriesMat rows(n + 1, std::vector<LaurentSeries>(n + 1, LaurentSeries::zero(F)));
        for (int i = 0; i <= n; ++i) rows[i][i] = LaurentSeries::one(F);
        return CanonicalLattice::from_rows(F, std::move(rows));
    }();

    PolyMat id = PolyMat::identity(n + 1, F);

    // --- vertex orbits, BFS over the quotient graph ---
    {
        OrbitRecord rec;
        rec.rep = {base};
        rec.stab_oriented = rec.stab_setwise = 0; // filled after enumeration
        rec.orientation_reversing = false;
        rec.depth = 0;
        Q.orbits[0].push_back(rec);
        Q.vertex_lookup.emplace(base.key(), std::make_pair(0, id));
    }
    std::vector<int> frontier{0};
    for (int depth = 0; depth < window; ++depth) {
        std::vector<int> next;
        for (int vid : frontier) {
            auto nbs = neighbors(Q.orbits[0][vid].rep[0]);
            std::sort(nbs.begin(), nbs.end(),
                      [](const CanonicalLattice& a, const CanonicalLattice& b) {
                          return a.key() < b.key();
                      });
            for (const auto& w : nbs) {
                if (Q.vertex_lookup.count(w.key())) continue;
                // try to match an existing orbit at depth >= depth-1
                int found = -1;
                PolyMat cert = id;
                for (int cand = 0; cand < int(Q.orbits[0].size()) && found < 0; ++cand) {
                    if (Q.orbits[0][cand].depth < depth - 1) continue;
                    const auto& rep = Q.orbits[0][cand].rep[0];
                    if (type_of(rep) != type_of(w)) continue;
                    auto idf = identify({w}, {rep}, spec);
                    if (idf) {
                        found = cand;
                        cert = idf->gamma;
                    }
                }
                if (found < 0) {
                    OrbitRecord rec;
                    rec.rep = {w};
                    rec.stab_oriented = rec.stab_setwise = 0;
                    rec.orientation_reversing = false;
                    rec.depth = depth + 1;
                    found = int(Q.orbits[0].size());
                    Q.orbits[0].push_back(rec);
                    next.push_back(found);
                }
                Q.vertex_lookup.emplace(w.key(), std::make_pair(found, cert));
            }
        }
        frontier = std::move(next);
    }

    // Vertices adjacent to a depth-`window` representative were never
    // swept by the BFS; resolve their orbits on demand (and cache). A
    // vertex that matches no enumerated orbit lies outside the window.
    auto resolve_vertex = [&](const CanonicalLattice& w) -> int {
        auto it = Q.vertex_lookup.find(w.key());
        if (it != Q.vertex_lookup.end()) return it->second.first;
        for (int cand = 0; cand < int(Q.orbits[0].size()); ++cand) {
            const auto& rep = Q.orbits[0][cand].rep[0];
            if (type_of(rep) != type_of(w)) continue;
            auto idf = identify({w}, {rep}, spec);
            if (idf) {
                Q.vertex_lookup.emplace(w.key(), std::make_pair(cand, idf->gamma));
                return cand;
            }
        }
        return -1;
    };

    // --- edge orbits ---
    for (int vid = 0; vid < int(Q.orbits[0].size()); ++vid) {
        const auto& r = Q.orbits[0][vid].rep[0];
        auto nbs = neighbors(r);
        std::sort(nbs.begin(), nbs.end(),
                  [](const CanonicalLattice& a, const CanonicalLattice& b) {
                      return a.key() < b.key();
                  });
        for (const auto& w : nbs) {
            if (resolve_vertex(w) < 0) continue; // outside the window
            auto wl = Q.vertex_lookup.find(w.key());
            SimplexTuple e = {r, w};
            std::multiset<int> want{vid, wl->second.first};
            bool known = false;
            for (int cand = 0; cand < int(Q.orbits[1].size()) && !known; ++cand) {
                const auto& crep = Q.orbits[1][cand].rep;
                std::multiset<int> have{Q.vertex_lookup[crep[0].key()].first,
                                        Q.vertex_lookup[crep[1].key()].first};
                if (have != want) continue;
                if (identify(e, crep, spec)) known = true;
            }
            if (known) continue;
            OrbitRecord rec;
            rec.rep = e;
            rec.stab_oriented = rec.stab_setwise = 0;
            rec.orientation_reversing = false;
            rec.depth = std::max(Q.orbits[0][vid].depth, Q.orbits[0][wl->second.first].depth);
            // faces: d[v0,v1] = [v1] - [v0]
            rec.faces.push_back({wl->second.first, +1});
            rec.face_certs.push_back(wl->second.second);
            rec.faces.push_back({vid, -1});
            rec.face_certs.push_back(id);
            Q.orbits[1].push_back(rec);
        }
    }

    // --- triangle orbits (n = 2) ---
    if (n == 2) {
        for (int vid = 0; vid < int(Q.orbits[0].size()); ++vid) {
            const auto& r = Q.orbits[0][vid].rep[0];
            auto nbs = neighbors(r);
            std::sort(nbs.begin(), nbs.end(),
                      [](const CanonicalLattice& a, const CanonicalLattice& b) {
                          return a.key() < b.key();
                      });
            std::vector<std::set<std::string>> nbkeys(nbs.size());
            for (size_t i = 0; i < nbs.size(); ++i)
                for (const auto& x : neighbors(nbs[i])) nbkeys[i].insert(x.key());
            for (size_t i = 0; i < nbs.size(); ++i) {
                if (resolve_vertex(nbs[i]) < 0) continue;
                for (size_t j = i + 1; j < nbs.size(); ++j) {
                    if (resolve_vertex(nbs[j]) < 0) continue;
                    if (!nbkeys[i].count(nbs[j].key())) continue;
                    SimplexTuple tri = {r, nbs[i], nbs[j]};
                    const int oi = Q.vertex_lookup[nbs[i].key()].first;
                    const int oj = Q.vertex_lookup[nbs[j].key()].first;
                    std::multiset<int> want{vid, oi, oj};
                    bool known = false;
                    for (int cand = 0; cand < int(Q.orbits[2].size()) && !known; ++cand) {
                        const auto& crep = Q.orbits[2][cand].rep;
                        std::multiset<int> have{Q.vertex_lookup[crep[0].key()].first,
                                                Q.vertex_lookup[crep[1].key()].first,
                                                Q.vertex_lookup[crep[2].key()].first};
                        if (have != want) continue;
                        if (identify(tri, crep, spec)) known = true;
                    }
                    if (known) continue;
                    OrbitRecord rec;
                    rec.rep = tri;
                    rec.stab_oriented = rec.stab_setwise = 0;
                    rec.orientation_reversing = false;
                    rec.depth = std::max(Q.orbits[0][vid].depth,
                                         std::max(Q.orbits[0][oi].depth, Q.orbits[0][oj].depth));
                    // faces: d[v0,v1,v2] = [v1,v2] - [v0,v2] + [v0,v1]
                    for (int fi = 0; fi < 3; ++fi) {
                        SimplexTuple face;
                        for (int k = 0; k < 3; ++k)
                            if (k != fi) face.push_back(tri[k]);
                        auto fo = Q.find_simplex_orbit(face);
                        if (!fo)
                            throw CertificationError(
                                "quotient: face orbit missing inside the window");
                        int sign = (fi % 2 == 0 ? 1 : -1) * std::get<1>(*fo);
                        rec.faces.push_back({std::get<0>(*fo), sign});
                        rec.face_certs.push_back(std::get<2>(*fo));
                    }
                    Q.orbits[2].push_back(rec);
                }
            }
        }
    }

    // stabilizer orders, computed per orbit in parallel (pure solves on
    // immutable data; results land in preallocated slots)
    std::vector<std::pair<int, int>> jobs;
    for (int qd = 0; qd <= n; ++qd)
        for (int id = 0; id < int(Q.orbits[qd].size()); ++id) jobs.emplace_back(qd, id);
    parallel_for(int(jobs.size()), workers, [&](int j) {
        auto [qd, id] = jobs[j];
        StabInfo si = stabilizer_info(Q.orbits[qd][id].rep, spec);
        Q.orbits[qd][id].stab_oriented = si.oriented;
        Q.orbits[qd][id].stab_setwise = si.setwise;
        Q.orbits[qd][id].orientation_reversing = si.reversing();
    });

    return Q;
}

} // namespace btq
