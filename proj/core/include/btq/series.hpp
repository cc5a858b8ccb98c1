#pragma once

#include "btq/poly.hpp"
#include "btq/rational.hpp"

#include <limits>
#include <string>
#include <vector>

namespace btq {

// Relative precision marker for exact Laurent polynomials.
inline constexpr int kExactPrec = std::numeric_limits<int>::max() / 4;

// Element of K_oo = F_q((pi)), pi = 1/t, to explicit precision.
//
// Nonzero: value = pi^val * (c[0] + c[1] pi + ...) + O(pi^{val+prec}),
// with c[0] != 0; prec == kExactPrec means the value is exactly the
// finite sum (a Laurent polynomial in pi). Zero: known to be O(pi^A)
// where A is the absolute precision (kExactPrec = exactly zero).
class LaurentSeries {
public:
    LaurentSeries() : F_(nullptr), zero_(true), val_(0), prec_(kExactPrec) {}
    explicit LaurentSeries(const FqCtx& F) : F_(&F), zero_(true), val_(0), prec_(kExactPrec) {}
    LaurentSeries(const FqCtx& F, int val, std::vector<fq_t> coeffs, int prec);

    static LaurentSeries zero(const FqCtx& F) { return LaurentSeries(F); }
    static LaurentSeries zero_to_precision(const FqCtx& F, int abs_prec);
    static LaurentSeries one(const FqCtx& F) { return LaurentSeries(F, 0, {1}, kExactPrec); }
    // c * pi^k, exact
    static LaurentSeries monomial(const FqCtx& F, fq_t c, int k);
    // exact expansion of p(t) as a Laurent polynomial in pi = 1/t
    static LaurentSeries from_poly(const Poly& p);

    const FqCtx& field() const { return *F_; }
    bool is_zero() const { return zero_; }
    bool exactly_zero() const { return zero_ && prec_ == kExactPrec; }
    bool is_exact() const { return prec_ == kExactPrec; }

    // valuation of a nonzero series (throws on zero)
    int val() const;
    // first exponent not known to carry a correct coefficient
    int abs_prec() const;
    int rel_prec() const { return prec_; }
    // first exponent past the stored coefficient window
    int known_end() const;
    // coefficient of pi^k within the known window
    fq_t coeff_at(int k) const;

    LaurentSeries operator+(const LaurentSeries& o) const;
    LaurentSeries operator-(const LaurentSeries& o) const;
    LaurentSeries operator*(const LaurentSeries& o) const;
    LaurentSeries operator-() const;
    LaurentSeries scaled(fq_t c) const;
    LaurentSeries shifted(int k) const; // * pi^k

    // Multiplicative inverse to relative precision min(rel_prec, target).
    LaurentSeries inverse(int target_rel_prec) const;

    LaurentSeries truncated(int rel_prec) const;

    // Known-window agreement (and identical precision bookkeeping).
    bool operator==(const LaurentSeries& o) const;

    std::string to_string() const;

private:
    const FqCtx* F_;
    bool zero_;
    int val_;             // nonzero only
    std::vector<fq_t> c_; // nonzero only, c_[0] != 0
    int prec_;            // relative precision; abs precision when zero
    void normalize();
};

enum class SeriesOp { add, mul, inv_of_a };

// The three-way arithmetic entry point used by the CLI verify suite.
LaurentSeries series_arith(const LaurentSeries& a, const LaurentSeries& b, SeriesOp op);

// Order of f at the place infinity; ord(pi) = 1, f != 0.
int val_infty(const RationalFunction& f);

// Normalized absolute value q^{-val}; 0 for f = 0.
Rat abs_infty(const RationalFunction& f);

// Expansion of f in K_oo to `precision` coefficients past the leading term.
LaurentSeries laurent_expand(const RationalFunction& f, int precision);

} // namespace btq
