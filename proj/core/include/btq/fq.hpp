#pragma once

#include <cstdint>
#include <vector>

namespace btq {

// An element of F_q is a code in 0..q-1. For q = p^e the code's base-p
// digits are the coordinates in the polynomial basis 1, x, .., x^{e-1}
// of F_p[x]/(irreducible). Code 0 is zero, code 1 is one.
using fq_t = std::uint8_t;

class FqCtx {
public:
    explicit FqCtx(int q);

    int q() const { return q_; }
    int p() const { return p_; }
    int e() const { return e_; }

    fq_t add(fq_t a, fq_t b) const { return add_[a * q_ + b]; }
    fq_t sub(fq_t a, fq_t b) const { return add_[a * q_ + neg_[b]]; }
    fq_t mul(fq_t a, fq_t b) const { return mul_[a * q_ + b]; }
    fq_t neg(fq_t a) const { return neg_[a]; }
    fq_t inv(fq_t a) const; // throws on zero
    fq_t div(fq_t a, fq_t b) const { return mul(a, inv(b)); }

    // Image of an integer under Z -> F_q (lands in the prime field).
    fq_t from_int(long long v) const;

private:
    int q_, p_, e_;
    std::vector<fq_t> add_, mul_, neg_;
};

// Shared immutable context per field size; valid q: prime powers p^e
// with e <= 3 and q <= 9 (2, 3, 4, 5, 7, 8, 9).
const FqCtx& fq_context(int q);

} // namespace btq
