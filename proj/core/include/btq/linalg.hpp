#pragma once

#include "btq/rational.hpp"

#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace btq {

using RatVec = std::vector<Rat>;

// Sparse exact-rational matrix; explicit zeros are never stored.
class SparseRationalMatrix {
public:
    SparseRationalMatrix(int rows, int cols) : rows_(rows), cols_(cols) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    void set(int r, int c, const Rat& v);
    void add(int r, int c, const Rat& v);
    Rat get(int r, int c) const;
    const std::map<std::pair<int, int>, Rat>& entries() const { return e_; }

    std::vector<RatVec> to_dense() const;
    RatVec apply(const RatVec& x) const; // A x

private:
    int rows_, cols_;
    std::map<std::pair<int, int>, Rat> e_;
};

enum class PivotRule { smallest_bitsize, first_nonzero };

int rank(const SparseRationalMatrix& m, PivotRule rule = PivotRule::smallest_bitsize);

// Exact basis of the right kernel; size = cols - rank.
std::vector<RatVec> kernel_basis(const SparseRationalMatrix& m,
                                 PivotRule rule = PivotRule::smallest_bitsize);

// One solution of A x = b, if any.
std::optional<RatVec> solve(const SparseRationalMatrix& a, const RatVec& b);

// Basis of the complement of span(basis) under <x,y>_w = sum w_i x_i y_i.
// Weights must be positive; dim(sub) + dim(complement) = ambient dim.
std::vector<RatVec> weighted_orthogonal_complement(const std::vector<RatVec>& basis,
                                                   const RatVec& weights);

// Dense helpers for subspace bookkeeping (small dimensions).
int rank_dense(std::vector<RatVec> rows, PivotRule rule = PivotRule::smallest_bitsize);
bool in_span(const std::vector<RatVec>& basis, const RatVec& v);
bool same_span(const std::vector<RatVec>& a, const std::vector<RatVec>& b);

} // namespace btq
