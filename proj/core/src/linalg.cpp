#include "btq/linalg.hpp"
#include "btq/errors.hpp"

#include <algorithm>

namespace btq {

void SparseRationalMatrix::set(int r, int c, const Rat& v)
{
    if (v == 0)
        e_.erase({r, c});
    else
        e_[{r, c}] = v;
}

void SparseRationalMatrix::add(int r, int c, const Rat& v)
{
    auto it = e_.find({r, c});
    if (it == e_.end()) {
        if (v != 0) e_[{r, c}] = v;
        return;
    }
    it->second += v;
    if (it->second == 0) e_.erase(it);
}

Rat SparseRationalMatrix::get(int r, int c) const
{
    auto it = e_.find({r, c});
    return it == e_.end() ? Rat(0) : it->second;
}

std::vector<RatVec> SparseRationalMatrix::to_dense() const
{
    std::vector<RatVec> d(rows_, RatVec(cols_, Rat(0)));
    for (const auto& [rc, v] : e_) d[rc.first][rc.second] = v;
    return d;
}

RatVec SparseRationalMatrix::apply(const RatVec& x) const
{
    if (int(x.size()) != cols_) throw Error("SparseRationalMatrix: size mismatch in apply");
    RatVec y(rows_, Rat(0));
    for (const auto& [rc, v] : e_) y[rc.first] += v * x[rc.second];
    return y;
}

namespace {

size_t bitsize(const Rat& r)
{
    using boost::multiprecision::denominator;
    using boost::multiprecision::numerator;
    Int n = numerator(r), d = denominator(r);
    if (n < 0) n = -n;
    return msb(n == 0 ? Int(1) : n) + msb(d);
}

// Gauss-Jordan over Q with selectable pivoting. Rows are combined by
// cross-multiplication first (fraction-free step), then rescaled, so no
// elimination step ever divides by a candidate that could vanish.
// Returns pivot columns; `rows` is left in reduced echelon form.
std::vector<int> reduce(std::vector<RatVec>& rows, PivotRule rule)
{
    std::vector<int> pivots;
    if (rows.empty()) return pivots;
    const int ncols = int(rows[0].size());
    int r = 0;
    for (int c = 0; c < ncols && r < int(rows.size()); ++c) {
        int best = -1;
        size_t bestsz = 0;
        for (int i = r; i < int(rows.size()); ++i) {
            if (rows[i][c] == 0) continue;
            if (rule == PivotRule::first_nonzero) {
                best = i;
                break;
            }
            size_t sz = bitsize(rows[i][c]);
            if (best == -1 || sz < bestsz) {
                best = i;
                bestsz = sz;
            }
        }
        if (best == -1) continue;
        std::swap(rows[r], rows[best]);
        Rat pv = rows[r][c];
        for (int j = c; j < ncols; ++j) rows[r][j] /= pv;
        for (int i = 0; i < int(rows.size()); ++i) {
            if (i == r || rows[i][c] == 0) continue;
            Rat f = rows[i][c];
            for (int j = c; j < ncols; ++j) rows[i][j] -= f * rows[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

} // namespace

int rank_dense(std::vector<RatVec> rows, PivotRule rule)
{
    return int(reduce(rows, rule).size());
}

int rank(const SparseRationalMatrix& m, PivotRule rule)
{
    auto d = m.to_dense();
    return rank_dense(std::move(d), rule);
}

std::vector<RatVec> kernel_basis(const SparseRationalMatrix& m, PivotRule rule)
{
    auto rows = m.to_dense();
    auto pivots = reduce(rows, rule);
    const int n = m.cols();
    std::vector<bool> ispivot(n, false);
    for (int c : pivots) ispivot[c] = true;
    std::vector<RatVec> basis;
    for (int c = 0; c < n; ++c) {
        if (ispivot[c]) continue;
        RatVec v(n, Rat(0));
        v[c] = 1;
        for (size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -rows[i][c];
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<RatVec> solve(const SparseRationalMatrix& a, const RatVec& b)
{
    if (int(b.size()) != a.rows()) throw Error("solve: rhs size mismatch");
    auto rows = a.to_dense();
    for (int i = 0; i < a.rows(); ++i) rows[i].push_back(b[i]);
    auto pivots = reduce(rows, PivotRule::smallest_bitsize);
    // inconsistent iff a pivot lands in the rhs column
    if (!pivots.empty() && pivots.back() == a.cols()) return std::nullopt;
    RatVec x(a.cols(), Rat(0));
    for (size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = rows[i][a.cols()];
    return x;
}

std::vector<RatVec> weighted_orthogonal_complement(const std::vector<RatVec>& basis,
                                                   const RatVec& weights)
{
    for (const auto& w : weights)
        if (w <= 0) throw Error("weighted_orthogonal_complement: nonpositive weight");
    const int n = int(weights.size());
    SparseRationalMatrix m(int(basis.size()), n);
    for (int i = 0; i < int(basis.size()); ++i) {
        if (int(basis[i].size()) != n)
            throw Error("weighted_orthogonal_complement: vector size mismatch");
        for (int j = 0; j < n; ++j) m.add(i, j, basis[i][j] * weights[j]);
    }
    return kernel_basis(m);
}

bool in_span(const std::vector<RatVec>& basis, const RatVec& v)
{
    std::vector<RatVec> rows = basis;
    int r0 = rank_dense(rows);
    rows.push_back(v);
    return rank_dense(rows) == r0;
}

bool same_span(const std::vector<RatVec>& a, const std::vector<RatVec>& b)
{
    for (const auto& v : a)
        if (!in_span(b, v)) return false;
    for (const auto& v : b)
        if (!in_span(a, v)) return false;
    return true;
}

} // namespace btq
