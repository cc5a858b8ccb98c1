#include "btq/series.hpp"
#include "btq/errors.hpp"

#include <algorithm>

namespace btq {

namespace {
int add_prec(int a, int b)
{
    return (a >= kExactPrec || b >= kExactPrec) ? std::min(a, b)
                                                : a + b; // unused combination
}
} // namespace

LaurentSeries::LaurentSeries(const FqCtx& F, int val, std::vector<fq_t> coeffs, int prec)
    : F_(&F), zero_(false), val_(val), c_(std::move(coeffs)), prec_(prec)
{
    normalize();
}

void LaurentSeries::normalize()
{
    if (prec_ < 0) prec_ = 0;
    if (prec_ != kExactPrec && int(c_.size()) > prec_) c_.resize(prec_);
    size_t lead = 0;
    while (lead < c_.size() && c_[lead] == 0) ++lead;
    if (lead == c_.size()) {
        // nothing visible in the window
        int abs = (prec_ == kExactPrec) ? kExactPrec : val_ + prec_;
        zero_ = true;
        c_.clear();
        val_ = 0;
        prec_ = abs;
        return;
    }
    if (lead > 0) {
        c_.erase(c_.begin(), c_.begin() + lead);
        val_ += int(lead);
        if (prec_ != kExactPrec) prec_ -= int(lead);
    }
    if (prec_ == kExactPrec) {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    } else {
        c_.resize(prec_, 0);
    }
}

LaurentSeries LaurentSeries::zero_to_precision(const FqCtx& F, int abs_prec)
{
    LaurentSeries s(F);
    s.prec_ = abs_prec;
    return s;
}

LaurentSeries LaurentSeries::monomial(const FqCtx& F, fq_t c, int k)
{
    if (c == 0) return zero(F);
    return LaurentSeries(F, k, {c}, kExactPrec);
}

LaurentSeries LaurentSeries::from_poly(const Poly& p)
{
    if (p.is_zero()) return zero(p.field());
    // t^d = pi^{-d}
    std::vector<fq_t> rev(p.coeffs().rbegin(), p.coeffs().rend());
    return LaurentSeries(p.field(), -p.deg(), std::move(rev), kExactPrec);
}

int LaurentSeries::val() const
{
    if (zero_) throw PrecisionError("LaurentSeries: valuation of zero undefined");
    return val_;
}

int LaurentSeries::abs_prec() const
{
    if (zero_) return prec_;
    if (prec_ == kExactPrec) return kExactPrec;
    return val_ + prec_;
}

int LaurentSeries::known_end() const
{
    if (zero_) return 0;
    return val_ + int(c_.size());
}

fq_t LaurentSeries::coeff_at(int k) const
{
    if (k >= abs_prec()) throw PrecisionError("LaurentSeries: coefficient beyond precision");
    if (zero_) return 0;
    if (k < val_ || k - val_ >= int(c_.size())) return 0;
    return c_[k - val_];
}

LaurentSeries LaurentSeries::operator+(const LaurentSeries& o) const
{
    const FqCtx& F = *(F_ ? F_ : o.F_);
    int A = std::min(abs_prec(), o.abs_prec());
    if (zero_ && o.zero_) return zero_to_precision(F, A);
    if (zero_) return o.truncated(A == kExactPrec ? kExactPrec : A - o.val_);
    if (o.zero_) return truncated(A == kExactPrec ? kExactPrec : A - val_);
    int v = std::min(val_, o.val_);
    int n;
    if (A == kExactPrec)
        n = std::max(val_ + int(c_.size()), o.val_ + int(o.c_.size())) - v;
    else
        n = A - v;
    std::vector<fq_t> out(std::max(n, 0), 0);
    for (int i = 0; i < int(out.size()); ++i) {
        int k = v + i;
        fq_t x = (k >= val_ && k - val_ < int(c_.size())) ? c_[k - val_] : fq_t(0);
        fq_t y = (k >= o.val_ && k - o.val_ < int(o.c_.size())) ? o.c_[k - o.val_] : fq_t(0);
        out[i] = F.add(x, y);
    }
    return LaurentSeries(F, v, std::move(out), A == kExactPrec ? kExactPrec : n);
}

LaurentSeries LaurentSeries::operator-() const
{
    LaurentSeries r = *this;
    for (auto& x : r.c_) x = F_->neg(x);
    return r;
}

LaurentSeries LaurentSeries::operator-(const LaurentSeries& o) const
{
    return *this + (-o);
}

LaurentSeries LaurentSeries::scaled(fq_t c) const
{
    if (zero_) return *this;
    if (c == 0) return zero(*F_);
    LaurentSeries r = *this;
    for (auto& x : r.c_) x = F_->mul(x, c);
    return r;
}

LaurentSeries LaurentSeries::shifted(int k) const
{
    if (zero_) {
        if (prec_ == kExactPrec) return *this;
        return zero_to_precision(*F_, prec_ + k);
    }
    LaurentSeries r = *this;
    r.val_ += k;
    return r;
}

LaurentSeries LaurentSeries::operator*(const LaurentSeries& o) const
{
    const FqCtx& F = *(F_ ? F_ : o.F_);
    // O(pi^A) * (u pi^v + ...) is O(pi^{A+v}); O * O needs no more care here
    if (zero_ || o.zero_) {
        if (exactly_zero() || o.exactly_zero()) return zero(F);
        int A;
        if (zero_ && o.zero_)
            A = std::min(add_prec(prec_, o.prec_), kExactPrec);
        else if (zero_)
            A = (prec_ == kExactPrec) ? kExactPrec : prec_ + o.val_;
        else
            A = (o.prec_ == kExactPrec) ? kExactPrec : o.prec_ + val_;
        return zero_to_precision(F, A);
    }
    int relp = std::min(prec_, o.prec_);
    int n;
    if (relp == kExactPrec)
        n = int(c_.size() + o.c_.size()) - 1;
    else
        n = relp;
    std::vector<fq_t> out(n, 0);
    for (int i = 0; i < int(c_.size()) && i < n; ++i) {
        if (c_[i] == 0) continue;
        for (int j = 0; j < int(o.c_.size()) && i + j < n; ++j)
            out[i + j] = F.add(out[i + j], F.mul(c_[i], o.c_[j]));
    }
    return LaurentSeries(F, val_ + o.val_, std::move(out), relp);
}

LaurentSeries LaurentSeries::inverse(int target_rel_prec) const
{
    if (zero_) throw Error("LaurentSeries: inversion of zero");
    int m = std::min(prec_, target_rel_prec);
    if (m < 1) throw PrecisionError("LaurentSeries: insufficient precision for inversion");
    std::vector<fq_t> d(m, 0);
    fq_t u0 = F_->inv(c_[0]);
    d[0] = u0;
    for (int k = 1; k < m; ++k) {
        fq_t acc = 0;
        for (int i = 1; i <= k; ++i) {
            fq_t ci = (i < int(c_.size())) ? c_[i] : fq_t(0);
            if (ci != 0) acc = F_->add(acc, F_->mul(ci, d[k - i]));
        }
        d[k] = F_->neg(F_->mul(u0, acc));
    }
    return LaurentSeries(*F_, -val_, std::move(d), m);
}

LaurentSeries LaurentSeries::truncated(int rel_prec) const
{
    if (rel_prec >= prec_) return *this;
    if (zero_) return zero_to_precision(*F_, rel_prec);
    if (rel_prec < 1) throw PrecisionError("LaurentSeries: truncation below one coefficient");
    LaurentSeries r = *this;
    r.prec_ = rel_prec;
    r.normalize();
    return r;
}

bool LaurentSeries::operator==(const LaurentSeries& o) const
{
    if (zero_ != o.zero_) return false;
    if (zero_) return prec_ == o.prec_;
    return val_ == o.val_ && c_ == o.c_ && prec_ == o.prec_;
}

std::string LaurentSeries::to_string() const
{
    if (exactly_zero()) return "0";
    if (zero_) return "O(pi^" + std::to_string(prec_) + ")";
    std::string s;
    for (int i = 0; i < int(c_.size()); ++i) {
        if (c_[i] == 0) continue;
        int k = val_ + i;
        if (!s.empty()) s += "+";
        if (k == 0 || c_[i] != 1) s += std::to_string(int(c_[i]));
        if (k != 0 && c_[i] != 1) s += "*";
        if (k == 1) s += "pi";
        if (k != 0 && k != 1) s += "pi^" + std::to_string(k);
    }
    if (s.empty()) s = "0";
    if (prec_ != kExactPrec) s += "+O(pi^" + std::to_string(val_ + prec_) + ")";
    return s;
}

LaurentSeries series_arith(const LaurentSeries& a, const LaurentSeries& b, SeriesOp op)
{
    switch (op) {
    case SeriesOp::add: return a + b;
    case SeriesOp::mul: return a * b;
    case SeriesOp::inv_of_a: return a.inverse(kExactPrec);
    }
    throw Error("series_arith: unknown op");
}

int val_infty(const RationalFunction& f)
{
    if (f.is_zero()) throw Error("val_infty: valuation of zero undefined");
    return f.den().deg() - f.num().deg();
}

Rat abs_infty(const RationalFunction& f)
{
    if (f.is_zero()) return Rat(0);
    int v = val_infty(f);
    Int q(f.field().q());
    Int pw = 1;
    for (int i = 0; i < (v >= 0 ? v : -v); ++i) pw *= q;
    return v >= 0 ? Rat(1, pw) : Rat(pw, 1);
}

LaurentSeries laurent_expand(const RationalFunction& f, int precision)
{
    if (precision < 1) throw Error("laurent_expand: precision must be >= 1");
    if (f.is_zero()) return LaurentSeries::zero(f.field());
    LaurentSeries num = LaurentSeries::from_poly(f.num());
    LaurentSeries den = LaurentSeries::from_poly(f.den());
    return (num * den.inverse(precision)).truncated(precision);
}

} // namespace btq
