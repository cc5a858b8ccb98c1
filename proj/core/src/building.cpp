#include "btq/building.hpp"
#include "btq/errors.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <numeric>
#include <sstream>

namespace btq {

// ----- matrices ------------------------------------------------------------

PolyMat PolyMat::identity(int m, const FqCtx& F)
{
    PolyMat g(m, F);
    for (int i = 0; i < m; ++i) g.at(i, i) = Poly::constant(F, 1);
    return g;
}

PolyMat PolyMat::operator*(const PolyMat& o) const
{
    PolyMat r(m, a[0].field());
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            Poly s = Poly::zero(a[0].field());
            for (int k = 0; k < m; ++k) s = s + at(i, k) * o.at(k, j);
            r.at(i, j) = s;
        }
    return r;
}

namespace {

template <typename T, typename Ring>
T det_rec(const std::vector<T>& a, int m, const Ring& zero)
{
    if (m == 1) return a[0];
    T s = zero;
    bool plus = true;
    for (int k = 0; k < m; ++k) {
        std::vector<T> sub;
        sub.reserve((m - 1) * (m - 1));
        for (int i = 1; i < m; ++i)
            for (int j = 0; j < m; ++j)
                if (j != k) sub.push_back(a[i * m + j]);
        T term = a[k] * det_rec(sub, m - 1, zero);
        s = plus ? s + term : s - term;
        plus = !plus;
    }
    return s;
}

// adj[i][j] = (-1)^{i+j} * minor with row j, column i removed
template <typename Mat, typename T>
Mat adjugate_impl(const Mat& g, const T& zero)
{
    Mat r = g;
    const int m = g.m;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            std::vector<T> sub;
            sub.reserve((m - 1) * (m - 1));
            for (int r2 = 0; r2 < m; ++r2)
                for (int c2 = 0; c2 < m; ++c2)
                    if (r2 != j && c2 != i) sub.push_back(g.at(r2, c2));
            T co = det_rec(sub, m - 1, zero);
            r.at(i, j) = ((i + j) % 2 == 0) ? co : (zero - co);
        }
    return r;
}

} // namespace

Poly PolyMat::det() const
{
    return det_rec(a, m, Poly::zero(a[0].field()));
}

PolyMat PolyMat::adjugate() const
{
    if (m == 1) {
        PolyMat r(1, a[0].field());
        r.at(0, 0) = Poly::constant(a[0].field(), 1);
        return r;
    }
    return adjugate_impl(*this, Poly::zero(a[0].field()));
}

std::string PolyMat::to_string() const
{
    std::string s = "[";
    for (int i = 0; i < m; ++i) {
        s += (i ? ",[" : "[");
        for (int j = 0; j < m; ++j) s += (j ? "," : "") + at(i, j).to_string();
        s += "]";
    }
    return s + "]";
}

RatMat RatMat::identity(int m, const FqCtx& F)
{
    RatMat g(m, F);
    for (int i = 0; i < m; ++i) g.at(i, i) = RationalFunction::one(F);
    return g;
}

RatMat RatMat::from_poly(const PolyMat& g)
{
    RatMat r(g.m, g.a[0].field());
    for (int i = 0; i < g.m * g.m; ++i) r.a[i] = RationalFunction(g.a[i]);
    return r;
}

RatMat RatMat::operator*(const RatMat& o) const
{
    RatMat r(m, a[0].field());
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            RationalFunction s = RationalFunction::zero(a[0].field());
            for (int k = 0; k < m; ++k) s = s + at(i, k) * o.at(k, j);
            r.at(i, j) = s;
        }
    return r;
}

RationalFunction RatMat::det() const
{
    return det_rec(a, m, RationalFunction::zero(a[0].field()));
}

RatMat RatMat::adjugate() const
{
    if (m == 1) return RatMat::identity(1, a[0].field());
    return adjugate_impl(*this, RationalFunction::zero(a[0].field()));
}

std::string RatMat::to_string() const
{
    std::string s = "[";
    for (int i = 0; i < m; ++i) {
        s += (i ? ",[" : "[");
        for (int j = 0; j < m; ++j) s += (j ? "," : "") + at(i, j).to_string();
        s += "]";
    }
    return s + "]";
}

SeriesMat expand_mat(const RatMat& g, int precision)
{
    SeriesMat s(g.m, std::vector<LaurentSeries>(g.m));
    for (int i = 0; i < g.m; ++i)
        for (int j = 0; j < g.m; ++j)
            s[i][j] = g.at(i, j).is_zero() ? LaurentSeries::zero(g.a[0].field())
                                           : laurent_expand(g.at(i, j), precision);
    return s;
}

SeriesMat expand_mat_exact(const PolyMat& g)
{
    SeriesMat s(g.m, std::vector<LaurentSeries>(g.m));
    for (int i = 0; i < g.m; ++i)
        for (int j = 0; j < g.m; ++j) s[i][j] = LaurentSeries::from_poly(g.at(i, j));
    return s;
}

SeriesMat mat_mul(const SeriesMat& a, const SeriesMat& b)
{
    const size_t rows = a.size(), inner = b.size(), cols = b[0].size();
    const FqCtx& F = b[0][0].field();
    SeriesMat r(rows, std::vector<LaurentSeries>(cols, LaurentSeries::zero(F)));
    for (size_t i = 0; i < rows; ++i)
        for (size_t k = 0; k < inner; ++k) {
            if (a[i][k].exactly_zero()) continue;
            for (size_t j = 0; j < cols; ++j) r[i][j] = r[i][j] + a[i][k] * b[k][j];
        }
    return r;
}

// ----- canonical form -------------------------------------------------------

int CanonicalLattice::det_val() const
{
    int s = 0;
    for (int d : diag_) s += d;
    return s;
}

std::string CanonicalLattice::key() const
{
    std::string s;
    const int d = int(diag_.size());
    for (int i = 0; i < d; ++i) {
        if (i) s += ",";
        s += std::to_string(diag_[i]);
    }
    for (int r = 0; r < d; ++r)
        for (int c = r + 1; c < d; ++c) {
            s += "|";
            const auto& e = up_[r * d + c];
            for (int k = 0; k < diag_[c]; ++k)
                s += char('0' + (k < int(e.size()) ? e[k] : 0));
        }
    return s;
}

SeriesMat CanonicalLattice::to_matrix() const
{
    const int d = int(diag_.size());
    SeriesMat m(d, std::vector<LaurentSeries>(d, LaurentSeries::zero(*F_)));
    for (int r = 0; r < d; ++r) {
        m[r][r] = LaurentSeries::monomial(*F_, 1, diag_[r]);
        for (int c = r + 1; c < d; ++c) {
            const auto& e = up_[r * d + c];
            if (!e.empty()) m[r][c] = LaurentSeries(*F_, 0, e, kExactPrec);
        }
    }
    return m;
}

namespace {

// Exact GL(O)-elimination step: scale the target row by the pivot's unit
// part and subtract the matching multiple of the pivot row. No division.
void eliminate_row(SeriesMat& w, int target, int pivotrow, int col, int pivval,
                   const LaurentSeries& pivunit)
{
    const LaurentSeries f = w[target][col].shifted(-pivval);
    for (size_t j = 0; j < w[target].size(); ++j) {
        if (int(j) == col) continue;
        w[target][j] = pivunit * w[target][j] - f * w[pivotrow][j];
    }
    w[target][col] = LaurentSeries::zero(w[target][col].field());
}

int pivot_scan(const SeriesMat& w, int col, int firstrow, const char* what)
{
    int best = -1, minval = 0;
    for (int r = firstrow; r < int(w.size()); ++r) {
        const auto& s = w[r][col];
        if (s.is_zero()) continue;
        if (best == -1 || s.val() < minval) {
            best = r;
            minval = s.val();
        }
    }
    for (int r = firstrow; r < int(w.size()); ++r) {
        const auto& s = w[r][col];
        if (s.is_zero() && !s.exactly_zero()) {
            if (best == -1 || s.abs_prec() <= minval)
                throw PrecisionError(std::string("canonical form: ") + what +
                                     ": pivot not determined at current precision");
        }
    }
    return best;
}

} // namespace

CanonicalLattice CanonicalLattice::from_rows(const FqCtx& F, SeriesMat rows)
{
    const int d = int(rows[0].size());
    SeriesMat& w = rows;

    // triangulate
    for (int c = 0; c < d; ++c) {
        int best = pivot_scan(w, c, c, "elimination");
        if (best == -1) throw Error("canonical form: rows do not span a full-rank lattice");
        std::swap(w[c], w[best]);
        const int a = w[c][c].val();
        const LaurentSeries u = w[c][c].shifted(-a);
        for (int r = c + 1; r < int(w.size()); ++r)
            if (!w[r][c].is_zero()) eliminate_row(w, r, c, c, a, u);
    }
    for (int r = d; r < int(w.size()); ++r)
        for (int j = 0; j < d; ++j)
            if (!w[r][j].is_zero()) throw Error("canonical form: dependent rows not eliminated");

    // normalize rows to monomial diagonal
    int amax = 0;
    for (int c = 0; c < d; ++c) amax = std::max(amax, w[c][c].val());
    int vmin = 0;
    for (int r = 0; r < d; ++r)
        for (int j = 0; j < d; ++j)
            if (!w[r][j].is_zero()) vmin = std::min(vmin, w[r][j].val());
    const int work = amax - vmin + 2;
    for (int c = 0; c < d; ++c) {
        const int a = w[c][c].val();
        const LaurentSeries uinv = w[c][c].shifted(-a).inverse(work);
        for (int j = c + 1; j < d; ++j) w[c][j] = w[c][j] * uinv;
        w[c][c] = LaurentSeries::monomial(F, 1, a);
    }

    // reduce above-diagonal entries modulo the column pivot pi^{a_c}
    for (int c = 1; c < d; ++c) {
        const int a = w[c][c].val();
        for (int r = 0; r < c; ++r) {
            const LaurentSeries e = w[r][c];
            if (e.is_zero()) continue;
            // known digits at exponents >= a get cleared with row c
            const int hstart = std::max(e.val(), a);
            std::vector<fq_t> hc;
            for (int k = hstart; k < e.known_end(); ++k) hc.push_back(e.coeff_at(k));
            LaurentSeries hiser(F, hstart, std::move(hc),
                                e.is_exact() ? kExactPrec : std::max(e.abs_prec() - hstart, 0));
            if (hiser.is_zero()) continue;
            const LaurentSeries g = hiser.shifted(-a);
            for (int j = c; j < d; ++j) w[r][j] = w[r][j] - g * w[c][j];
        }
    }

    // homothety normalization: make the matrix primitive in O^{d}
    int minv = 0;
    bool seen = false;
    for (int r = 0; r < d; ++r)
        for (int j = 0; j < d; ++j)
            if (!w[r][j].is_zero()) {
                int v = w[r][j].val();
                if (!seen || v < minv) minv = v, seen = true;
            }
    if (!seen) throw Error("canonical form: empty matrix");
    for (int r = 0; r < d; ++r)
        for (int j = 0; j < d; ++j)
            if (w[r][j].is_zero() && !w[r][j].exactly_zero() && w[r][j].abs_prec() <= minv)
                throw PrecisionError("canonical form: homothety shift not determined");
    if (minv != 0)
        for (int r = 0; r < d; ++r)
            for (int j = 0; j < d; ++j) w[r][j] = w[r][j].shifted(-minv);

    // extract
    CanonicalLattice L;
    L.F_ = &F;
    L.diag_.resize(d);
    L.up_.assign(d * d, {});
    for (int c = 0; c < d; ++c) L.diag_[c] = w[c][c].val();
    for (int r = 0; r < d; ++r)
        for (int c = r + 1; c < d; ++c) {
            const int a = L.diag_[c];
            const auto& e = w[r][c];
            if (!e.is_zero() && e.val() < 0)
                throw Error("canonical form: non-integral entry after normalization");
            std::vector<fq_t> digits(a, 0);
            for (int k = 0; k < a; ++k) digits[k] = e.coeff_at(k);
            L.up_[r * d + c] = std::move(digits);
        }
    return L;
}

CanonicalLattice CanonicalLattice::from_key(const FqCtx& F, const std::string& key)
{
    CanonicalLattice L;
    L.F_ = &F;
    size_t bar = key.find('|');
    std::string diagpart = bar == std::string::npos ? key : key.substr(0, bar);
    {
        size_t pos = 0;
        while (pos < diagpart.size()) {
            size_t comma = diagpart.find(',', pos);
            if (comma == std::string::npos) comma = diagpart.size();
            L.diag_.push_back(std::stoi(diagpart.substr(pos, comma - pos)));
            pos = comma + 1;
        }
    }
    const int d = int(L.diag_.size());
    L.up_.assign(d * d, {});
    size_t pos = bar;
    for (int r = 0; r < d; ++r)
        for (int c = r + 1; c < d; ++c) {
            if (pos == std::string::npos || pos >= key.size())
                throw Error("CanonicalLattice::from_key: truncated key");
            size_t next = key.find('|', pos + 1);
            std::string digits =
                key.substr(pos + 1, (next == std::string::npos ? key.size() : next) - pos - 1);
            if (int(digits.size()) != L.diag_[c])
                throw Error("CanonicalLattice::from_key: digit block length mismatch");
            std::vector<fq_t> e(digits.size());
            for (size_t k = 0; k < digits.size(); ++k) e[k] = fq_t(digits[k] - '0');
            L.up_[r * d + c] = std::move(e);
            pos = next;
        }
    return L;
}

int CanonicalLattice::spread() const
{
    // Smith elimination over O_oo with exact cross-elimination.
    SeriesMat w = to_matrix();
    const int d = int(diag_.size());
    std::vector<int> divisors;
    for (int step = 0; step < d; ++step) {
        int br = -1, bc = -1, minval = 0;
        for (int r = step; r < d; ++r)
            for (int c = step; c < d; ++c) {
                if (w[r][c].is_zero()) continue;
                if (br == -1 || w[r][c].val() < minval) {
                    br = r;
                    bc = c;
                    minval = w[r][c].val();
                }
            }
        if (br == -1) throw Error("spread: singular matrix");
        std::swap(w[step], w[br]);
        for (int r = 0; r < d; ++r) std::swap(w[r][step], w[r][bc]);
        const LaurentSeries u = w[step][step].shifted(-minval);
        for (int r = step + 1; r < d; ++r)
            if (!w[r][step].is_zero()) eliminate_row(w, r, step, step, minval, u);
        // column elimination
        for (int c = step + 1; c < d; ++c) {
            if (w[step][c].is_zero()) continue;
            const LaurentSeries f = w[step][c].shifted(-minval);
            for (int r = step; r < d; ++r) {
                if (r == step) continue;
                w[r][c] = u * w[r][c] - f * w[r][step];
            }
            w[step][c] = LaurentSeries::zero(field());
        }
        divisors.push_back(minval);
    }
    const auto [lo, hi] = std::minmax_element(divisors.begin(), divisors.end());
    return *hi - *lo;
}

CanonicalLattice act_vertex(const PolyMat& g, const CanonicalLattice& v)
{
    const FqCtx& F = v.field();
    Poly dg = g.det();
    if (!(dg.deg() == 0 && dg.coeff(0) == 1)) throw Error("act: determinant is not 1");
    SeriesMat rows = mat_mul(v.to_matrix(), expand_mat_exact(g.adjugate()));
    return CanonicalLattice::from_rows(F, std::move(rows));
}

CanonicalLattice act_vertex_rat(const RatMat& ginv, const CanonicalLattice& v, int precision)
{
    const FqCtx& F = v.field();
    SeriesMat rows = mat_mul(v.to_matrix(), expand_mat(ginv, precision));
    return CanonicalLattice::from_rows(F, std::move(rows));
}

// ----- neighbors -------------------------------------------------------------

namespace {

// All reduced row echelon forms of rank k in F_q^m.
void enumerate_rref(const FqCtx& F, int m, int k,
                    const std::function<void(const std::vector<std::vector<fq_t>>&)>& emit)
{
    std::vector<int> pivots(k);
    std::function<void(int, int)> choose = [&](int idx, int start) {
        if (idx == k) {
            // free positions: columns right of each pivot, not a pivot column
            std::vector<std::pair<int, int>> free;
            for (int r = 0; r < k; ++r)
                for (int c = pivots[r] + 1; c < m; ++c)
                    if (std::find(pivots.begin(), pivots.end(), c) == pivots.end())
                        free.emplace_back(r, c);
            std::vector<std::vector<fq_t>> rows(k, std::vector<fq_t>(m, 0));
            for (int r = 0; r < k; ++r) rows[r][pivots[r]] = 1;
            const int q = F.q();
            long long total = 1;
            for (size_t i = 0; i < free.size(); ++i) total *= q;
            for (long long code = 0; code < total; ++code) {
                long long c2 = code;
                for (auto [r, c] : free) {
                    rows[r][c] = fq_t(c2 % q);
                    c2 /= q;
                }
                emit(rows);
            }
            return;
        }
        for (int c = start; c < m; ++c) {
            pivots[idx] = c;
            choose(idx + 1, c + 1);
        }
    };
    choose(0, 0);
}

} // namespace

std::vector<CanonicalLattice> neighbors(const CanonicalLattice& v)
{
    const FqCtx& F = v.field();
    const int d = v.n() + 1;
    const SeriesMat base = v.to_matrix();
    std::vector<CanonicalLattice> out;
    for (int k = 1; k <= d - 1; ++k) {
        enumerate_rref(F, d, k, [&](const std::vector<std::vector<fq_t>>& sub) {
            SeriesMat rows;
            for (int r = 0; r < k; ++r) {
                std::vector<LaurentSeries> lift(d, LaurentSeries::zero(F));
                for (int j = 0; j < d; ++j) {
                    if (sub[r][j] == 0) continue;
                    for (int c = 0; c < d; ++c) lift[c] = lift[c] + base[j][c].scaled(sub[r][j]);
                }
                rows.push_back(std::move(lift));
            }
            for (int r = 0; r < d; ++r) {
                std::vector<LaurentSeries> row(d);
                for (int c = 0; c < d; ++c) row[c] = base[r][c].shifted(1);
                rows.push_back(std::move(row));
            }
            out.push_back(CanonicalLattice::from_rows(F, std::move(rows)));
        });
    }
    return out;
}

// ----- apartment --------------------------------------------------------------

Rat pairing_a(int i, const ApartmentPoint& v)
{
    const int n = int(v.size());
    Rat cur = (i >= 0 && i <= n - 1) ? v[i] : Rat(0);
    Rat prev = (i - 1 >= 0 && i - 1 <= n - 1) ? v[i - 1] : Rat(0);
    return cur - prev;
}

Rat pairing_aij(int i, int j, const ApartmentPoint& v)
{
    return pairing_a(i, v) - pairing_a(j, v);
}

bool is_apartment_vertex(const ApartmentPoint& v, int n)
{
    using boost::multiprecision::denominator;
    for (int i = 0; i <= n; ++i)
        if (denominator(pairing_aij(i, n, v)) != 1) return false;
    return true;
}

CanonicalLattice apartment_vertex(const FqCtx& F, const ApartmentPoint& v, int n)
{
    if (!is_apartment_vertex(v, n)) throw Error("apartment_vertex: not a vertex of V_0");
    SeriesMat rows(n + 1, std::vector<LaurentSeries>(n + 1, LaurentSeries::zero(F)));
    for (int i = 0; i <= n; ++i) {
        Rat c = pairing_aij(i, n, v);
        long long e = c.convert_to<long long>();
        rows[i][i] = LaurentSeries::monomial(F, 1, int(e));
    }
    return CanonicalLattice::from_rows(F, std::move(rows));
}

bool in_fundamental_sector(const ApartmentPoint& v, int n)
{
    for (int i = 0; i <= n - 1; ++i)
        if (pairing_aij(i, i + 1, v) < 0) return false;
    return true;
}

ApartmentPoint torus_translation(const std::vector<RationalFunction>& t)
{
    const int n = int(t.size()) - 1;
    ApartmentPoint m(n, Rat(0));
    int acc = 0;
    for (int i = 0; i <= n - 1; ++i) {
        acc += val_infty(t[i]);
        m[i] = Rat(-acc);
    }
    return m;
}

std::vector<CanonicalLattice> fundamental_chamber(const FqCtx& F, int n)
{
    std::vector<CanonicalLattice> out;
    for (int k = 0; k <= n; ++k) {
        SeriesMat rows(n + 1, std::vector<LaurentSeries>(n + 1, LaurentSeries::zero(F)));
        for (int i = 0; i <= n; ++i) rows[i][i] = LaurentSeries::monomial(F, 1, i < k ? 1 : 0);
        out.push_back(CanonicalLattice::from_rows(F, std::move(rows)));
    }
    return out;
}

// ----- ball ---------------------------------------------------------------------

long long BallComplex::simplex_count(int q) const
{
    if (q == 0) return (long long)verts.size();
    if (q == 1) return (long long)edges.size();
    if (q == 2) return (long long)triangles.size();
    return 0;
}

long long BallComplex::euler_sum() const
{
    return simplex_count(0) - simplex_count(1) + simplex_count(2);
}

BallComplex ball(const CanonicalLattice& center, int radius)
{
    BallComplex b;
    b.n = center.n();
    b.radius = radius;
    b.verts.push_back(center);
    b.dist.push_back(0);
    b.index[center.key()] = 0;
    b.adj.emplace_back();

    std::vector<int> frontier{0};
    for (int depth = 0; depth < radius; ++depth) {
        std::vector<int> next;
        for (int u : frontier) {
            for (const auto& w : neighbors(b.verts[u])) {
                const std::string k = w.key();
                auto it = b.index.find(k);
                int id;
                if (it == b.index.end()) {
                    id = int(b.verts.size());
                    b.index[k] = id;
                    b.verts.push_back(w);
                    b.dist.push_back(depth + 1);
                    b.adj.emplace_back();
                    next.push_back(id);
                } else {
                    id = it->second;
                }
                b.adj[u].insert(id);
                b.adj[id].insert(u);
            }
        }
        frontier = std::move(next);
    }
    // adjacency among boundary vertices
    for (int u : frontier)
        for (const auto& w : neighbors(b.verts[u])) {
            auto it = b.index.find(w.key());
            if (it != b.index.end()) {
                b.adj[u].insert(it->second);
                b.adj[it->second].insert(u);
            }
        }

    for (int u = 0; u < int(b.verts.size()); ++u)
        for (int v : b.adj[u])
            if (u < v) b.edges.push_back({u, v});
    if (b.n >= 2) {
        for (const auto& e : b.edges)
            for (int w : b.adj[e[0]])
                if (w > e[1] && b.adj[e[1]].count(w)) b.triangles.push_back({e[0], e[1], w});
    }
    return b;
}

std::string serialize_complex(const BallComplex& b)
{
    std::vector<std::string> lines;
    for (const auto& v : b.verts) lines.push_back("0 " + v.key());
    for (const auto& e : b.edges) {
        std::array<std::string, 2> k{b.verts[e[0]].key(), b.verts[e[1]].key()};
        std::sort(k.begin(), k.end());
        lines.push_back("1 " + k[0] + " " + k[1]);
    }
    for (const auto& t : b.triangles) {
        std::array<std::string, 3> k{b.verts[t[0]].key(), b.verts[t[1]].key(),
                                     b.verts[t[2]].key()};
        std::sort(k.begin(), k.end());
        lines.push_back("2 " + k[0] + " " + k[1] + " " + k[2]);
    }
    std::sort(lines.begin(), lines.end());
    std::string out;
    for (const auto& l : lines) {
        out += l;
        out += "\n";
    }
    return out;
}

// ----- sectors --------------------------------------------------------------------

namespace {

int rank_rat(std::vector<std::vector<RationalFunction>> rows)
{
    if (rows.empty()) return 0;
    const int nc = int(rows[0].size());
    int rank = 0;
    for (int c = 0; c < nc && rank < int(rows.size()); ++c) {
        int piv = -1;
        for (int r = rank; r < int(rows.size()); ++r)
            if (!rows[r][c].is_zero()) {
                piv = r;
                break;
            }
        if (piv == -1) continue;
        std::swap(rows[rank], rows[piv]);
        RationalFunction inv = rows[rank][c].inv();
        for (int j = c; j < nc; ++j) rows[rank][j] = rows[rank][j] * inv;
        for (int r = 0; r < int(rows.size()); ++r) {
            if (r == rank || rows[r][c].is_zero()) continue;
            RationalFunction f = rows[r][c];
            for (int j = c; j < nc; ++j) rows[r][j] = rows[r][j] - f * rows[rank][j];
        }
        ++rank;
    }
    return rank;
}

} // namespace

bool Flag::operator==(const Flag& o) const
{
    const int m = g.m;
    for (int j = 1; j <= m - 1; ++j) {
        std::vector<std::vector<RationalFunction>> rows;
        for (int r = m - j; r < m; ++r) {
            std::vector<RationalFunction> row;
            for (int c = 0; c < m; ++c) row.push_back(g.at(r, c));
            rows.push_back(row);
        }
        for (int r = m - j; r < m; ++r) {
            std::vector<RationalFunction> row;
            for (int c = 0; c < m; ++c) row.push_back(o.g.at(r, c));
            rows.push_back(row);
        }
        if (rank_rat(rows) != j) return false;
    }
    return true;
}

Flag standard_flag(const FqCtx& F, int n)
{
    return Flag{RatMat::identity(n + 1, F)};
}

bool SectorRef::contains(const CanonicalLattice& v) const
{
    return is_standard_sector_vertex(act_vertex_rat(winv, v, precision));
}

SectorRef sector(const FqCtx& F, int n, const Flag& flag, int precision)
{
    const int m = n + 1;
    {
        RationalFunction dt = flag.g.det();
        if (dt.is_zero()) throw Error("sector: flag matrix is singular");
    }
    RatMat g = flag.g;
    RatMat v = RatMat::identity(m, F);
    int detsign = 1;
    for (int r = m - 1; r >= 1; --r) {
        int best = -1, bestval = 0;
        for (int c = 0; c <= r; ++c) {
            if (g.at(r, c).is_zero()) continue;
            int val = val_infty(g.at(r, c));
            if (best == -1 || val < bestval) {
                best = c;
                bestval = val;
            }
        }
        if (best == -1) throw Error("sector: flag matrix is singular");
        if (best != r) {
            for (int i = 0; i < m; ++i) {
                std::swap(g.a[i * m + best], g.a[i * m + r]);
                std::swap(v.a[i * m + best], v.a[i * m + r]);
            }
            detsign = -detsign;
        }
        RationalFunction pinv = g.at(r, r).inv();
        for (int c = 0; c < r; ++c) {
            if (g.at(r, c).is_zero()) continue;
            RationalFunction f = g.at(r, c) * pinv; // val >= 0 by pivot choice
            for (int i = 0; i < m; ++i) {
                g.a[i * m + c] = g.at(i, c) - f * g.at(i, r);
                v.a[i * m + c] = v.at(i, c) - f * v.at(i, r);
            }
        }
    }
    if (detsign < 0) {
        // rescale one column to land in SL
        const FqCtx& FF = F;
        RationalFunction minus = RationalFunction(Poly::constant(FF, FF.neg(1)));
        for (int i = 0; i < m; ++i) {
            g.a[i * m + 0] = g.at(i, 0) * minus;
            v.a[i * m + 0] = v.at(i, 0) * minus;
        }
    }
    SectorRef s;
    s.winv = v;
    s.w = v.adjugate();
    s.precision = precision;
    return s;
}

bool is_standard_sector_vertex(const CanonicalLattice& v)
{
    const int d = v.n() + 1;
    for (int r = 0; r < d; ++r)
        for (int c = r + 1; c < d; ++c)
            for (fq_t x : v.upper(r, c))
                if (x != 0) return false;
    for (int i = 0; i + 1 < d; ++i)
        if (v.diag()[i] < v.diag()[i + 1]) return false;
    return v.diag()[d - 1] == 0;
}

std::vector<SectorAlcove> standard_sector_alcoves(const FqCtx& F, int n, int bound)
{
    // non-increasing exponent tuples c_0 >= .. >= c_{n-1} >= c_n = 0
    std::vector<std::vector<int>> diags;
    std::vector<int> cur(n + 1, 0);
    std::function<void(int, int)> gen = [&](int i, int hi) {
        if (i == n + 1) {
            if (cur[n] == 0) diags.push_back(cur);
            return;
        }
        for (int vdig = 0; vdig <= hi; ++vdig) {
            cur[i] = vdig;
            gen(i + 1, vdig);
        }
    };
    gen(0, bound);

    std::vector<CanonicalLattice> verts;
    std::map<std::string, int> idx;
    for (const auto& dg : diags) {
        SeriesMat rows(n + 1, std::vector<LaurentSeries>(n + 1, LaurentSeries::zero(F)));
        for (int i = 0; i <= n; ++i) rows[i][i] = LaurentSeries::monomial(F, 1, dg[i]);
        CanonicalLattice L = CanonicalLattice::from_rows(F, std::move(rows));
        idx[L.key()] = int(verts.size());
        verts.push_back(L);
    }
    std::vector<std::set<int>> adj(verts.size());
    for (int u = 0; u < int(verts.size()); ++u)
        for (const auto& w : neighbors(verts[u])) {
            auto it = idx.find(w.key());
            if (it != idx.end()) {
                adj[u].insert(it->second);
                adj[it->second].insert(u);
            }
        }

    // Truncation depth of an alcove C: the largest l with C inside a
    // translate of the origin star by a lattice vector with all
    // coordinates >= l. Positions are handled through the pairings
    // f_i = <a_i, x>; a lattice translation by sum m_j e_j shifts f by
    // (m_0, m_1 - m_0, .., -m_{n-1}).
    auto f_of_vertex = [&](const CanonicalLattice& v) {
        const auto& dg = v.diag();
        std::vector<Rat> c(n + 1);
        for (int i = 0; i <= n; ++i) c[i] = Rat(dg[i] - dg[n]);
        Rat fsum = 0;
        for (int i = 0; i <= n; ++i) fsum += c[i];
        Rat fn = -fsum / (n + 1);
        std::vector<Rat> f(n + 1);
        for (int i = 0; i <= n; ++i) f[i] = c[i] + fn;
        return f;
    };
    // fundamental chamber vertices in f-coordinates
    std::vector<std::vector<Rat>> c0(n + 1, std::vector<Rat>(n + 1, Rat(0)));
    for (int k = 1; k <= n + 0; ++k) {
        int i = k - 1;
        for (int j = 0; j <= n; ++j)
            c0[k][j] = (j <= i) ? Rat(n - i, n + 1) : Rat(-(i + 1), n + 1);
    }
    std::vector<int> perm(n + 1);
    auto depth_of = [&](const std::vector<int>& members) {
        // centroids in f-coordinates
        std::vector<Rat> cent(n + 1, Rat(0));
        for (int m2 : members) {
            auto f = f_of_vertex(verts[m2]);
            for (int i = 0; i <= n; ++i) cent[i] += f[i];
        }
        for (auto& x : cent) x /= int(members.size());
        int best = -1;
        std::iota(perm.begin(), perm.end(), 0);
        do {
            std::vector<Rat> cent0(n + 1, Rat(0));
            for (int k = 0; k <= n; ++k)
                for (int i = 0; i <= n; ++i) cent0[perm[i]] += c0[k][i];
            for (auto& x : cent0) x /= (n + 1);
            // translation in f-coordinates and its m-coordinates
            std::vector<Rat> delta(n + 1);
            for (int i = 0; i <= n; ++i) delta[i] = cent[i] - cent0[i];
            bool integral = true;
            std::vector<Rat> m(n, Rat(0));
            Rat acc = 0;
            for (int i = 0; i < n; ++i) {
                acc += delta[i];
                m[i] = acc;
                if (boost::multiprecision::denominator(m[i]) != 1) integral = false;
            }
            if (!integral) continue;
            // verify the vertex sets match
            std::set<std::string> want;
            for (int m2 : members) {
                auto f = f_of_vertex(verts[m2]);
                std::string s;
                for (int i = 0; i <= n; ++i) s += rat_to_string(f[i]) + ",";
                want.insert(s);
            }
            bool match = true;
            for (int k = 0; k <= n && match; ++k) {
                std::vector<Rat> f(n + 1);
                for (int i = 0; i <= n; ++i) f[perm[i]] = c0[k][i];
                for (int i = 0; i <= n; ++i) f[i] += delta[i];
                std::string s;
                for (int i = 0; i <= n; ++i) s += rat_to_string(f[i]) + ",";
                if (!want.count(s)) match = false;
            }
            if (!match) continue;
            Rat dmin = m.empty() ? Rat(0) : m[0];
            for (const auto& x : m) dmin = std::min(dmin, x);
            int cand = int(boost::multiprecision::numerator(dmin).convert_to<long long>());
            best = std::max(best, cand);
        } while (std::next_permutation(perm.begin(), perm.end()));
        return best;
    };

    std::vector<SectorAlcove> out;
    if (n == 1) {
        for (int u = 0; u < int(verts.size()); ++u)
            for (int v2 : adj[u])
                if (u < v2) {
                    SectorAlcove a;
                    a.verts = {verts[u], verts[v2]};
                    a.depth = depth_of({u, v2});
                    out.push_back(std::move(a));
                }
    } else {
        for (int u = 0; u < int(verts.size()); ++u)
            for (int v2 : adj[u]) {
                if (v2 <= u) continue;
                for (int w2 : adj[u])
                    if (w2 > v2 && adj[v2].count(w2)) {
                        SectorAlcove a;
                        a.verts = {verts[u], verts[v2], verts[w2]};
                        a.depth = depth_of({u, v2, w2});
                        out.push_back(std::move(a));
                    }
            }
    }
    return out;
}

} // namespace btq
