#include "btq/poly.hpp"
#include "btq/errors.hpp"

#include <algorithm>

namespace btq {

Poly::Poly(const FqCtx& F, std::vector<fq_t> coeffs) : F_(&F), c_(std::move(coeffs))
{
    trim();
}

void Poly::trim()
{
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Poly Poly::constant(const FqCtx& F, fq_t c)
{
    return Poly(F, {c});
}

Poly Poly::t(const FqCtx& F)
{
    return Poly(F, {0, 1});
}

Poly Poly::monomial(const FqCtx& F, fq_t c, int k)
{
    std::vector<fq_t> v(k + 1, 0);
    v[k] = c;
    return Poly(F, std::move(v));
}

Poly Poly::operator+(const Poly& o) const
{
    std::vector<fq_t> v(std::max(c_.size(), o.c_.size()), 0);
    for (size_t i = 0; i < v.size(); ++i) v[i] = F_->add(coeff(int(i)), o.coeff(int(i)));
    return Poly(*F_, std::move(v));
}

Poly Poly::operator-(const Poly& o) const
{
    std::vector<fq_t> v(std::max(c_.size(), o.c_.size()), 0);
    for (size_t i = 0; i < v.size(); ++i) v[i] = F_->sub(coeff(int(i)), o.coeff(int(i)));
    return Poly(*F_, std::move(v));
}

Poly Poly::operator-() const
{
    std::vector<fq_t> v = c_;
    for (auto& x : v) x = F_->neg(x);
    return Poly(*F_, std::move(v));
}

Poly Poly::scaled(fq_t c) const
{
    std::vector<fq_t> v = c_;
    for (auto& x : v) x = F_->mul(x, c);
    return Poly(*F_, std::move(v));
}

Poly Poly::operator*(const Poly& o) const
{
    if (is_zero() || o.is_zero()) return Poly(*F_);
    std::vector<fq_t> v(c_.size() + o.c_.size() - 1, 0);
    for (size_t i = 0; i < c_.size(); ++i)
        for (size_t j = 0; j < o.c_.size(); ++j)
            v[i + j] = F_->add(v[i + j], F_->mul(c_[i], o.c_[j]));
    return Poly(*F_, std::move(v));
}

void Poly::divmod(const Poly& a, const Poly& b, Poly& q, Poly& r)
{
    if (b.is_zero()) throw Error("Poly: division by zero");
    const FqCtx& F = *a.F_;
    std::vector<fq_t> rem = a.c_;
    int db = b.deg();
    fq_t linv = F.inv(b.lead());
    std::vector<fq_t> quo;
    if (int(rem.size()) - 1 >= db) quo.assign(rem.size() - db, 0);
    for (int d = int(rem.size()) - 1; d >= db; --d) {
        if (rem[d] == 0) continue;
        fq_t f = F.mul(rem[d], linv);
        quo[d - db] = f;
        for (int i = 0; i <= db; ++i)
            rem[d - db + i] = F.sub(rem[d - db + i], F.mul(f, b.coeff(i)));
    }
    q = Poly(F, std::move(quo));
    r = Poly(F, std::move(rem));
}

Poly Poly::operator%(const Poly& o) const
{
    Poly q, r;
    divmod(*this, o, q, r);
    return r;
}

Poly Poly::operator/(const Poly& o) const
{
    Poly q, r;
    divmod(*this, o, q, r);
    return q;
}

Poly Poly::gcd(Poly a, Poly b)
{
    while (!b.is_zero()) {
        Poly r = a % b;
        a = b;
        b = r;
    }
    return a.is_zero() ? a : a.monic();
}

Poly Poly::monic() const
{
    if (is_zero()) return *this;
    return scaled(F_->inv(lead()));
}

std::string Poly::to_string() const
{
    if (is_zero()) return "0";
    std::string s;
    for (int i = deg(); i >= 0; --i) {
        fq_t c = c_[i];
        if (c == 0) continue;
        if (!s.empty()) s += "+";
        if (i == 0 || c != 1) s += std::to_string(int(c));
        if (i > 0 && c != 1) s += "*";
        if (i == 1) s += "t";
        if (i > 1) s += "t^" + std::to_string(i);
    }
    return s;
}

RationalFunction::RationalFunction(Poly num) : num_(std::move(num))
{
    den_ = Poly::constant(num_.field(), 1);
}

RationalFunction::RationalFunction(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den))
{
    if (den_.is_zero()) throw Error("RationalFunction: zero denominator");
    reduce();
}

void RationalFunction::reduce()
{
    const FqCtx& F = num_.field();
    if (num_.is_zero()) {
        den_ = Poly::constant(F, 1);
        return;
    }
    Poly g = Poly::gcd(num_, den_);
    if (g.deg() > 0) {
        num_ = num_ / g;
        den_ = den_ / g;
    }
    fq_t l = den_.lead();
    if (l != 1) {
        fq_t li = F.inv(l);
        num_ = num_.scaled(li);
        den_ = den_.scaled(li);
    }
}

RationalFunction RationalFunction::operator+(const RationalFunction& o) const
{
    return RationalFunction(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

RationalFunction RationalFunction::operator-(const RationalFunction& o) const
{
    return RationalFunction(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}

RationalFunction RationalFunction::operator*(const RationalFunction& o) const
{
    return RationalFunction(num_ * o.num_, den_ * o.den_);
}

RationalFunction RationalFunction::operator/(const RationalFunction& o) const
{
    if (o.is_zero()) throw Error("RationalFunction: division by zero");
    return RationalFunction(num_ * o.den_, den_ * o.num_);
}

RationalFunction RationalFunction::operator-() const
{
    RationalFunction r = *this;
    r.num_ = -r.num_;
    return r;
}

RationalFunction RationalFunction::inv() const
{
    if (is_zero()) throw Error("RationalFunction: inverse of zero");
    return RationalFunction(den_, num_);
}

std::string RationalFunction::to_string() const
{
    if (den_.deg() == 0) return num_.to_string();
    return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
}

} // namespace btq
