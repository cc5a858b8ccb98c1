#pragma once

#include "btq/fq.hpp"

#include <string>
#include <vector>

namespace btq {

// Element of F_q[t]; coefficients ascending, trimmed, empty = 0.
class Poly {
public:
    Poly() : F_(nullptr) {}
    explicit Poly(const FqCtx& F) : F_(&F) {}
    Poly(const FqCtx& F, std::vector<fq_t> coeffs);

    static Poly zero(const FqCtx& F) { return Poly(F); }
    static Poly constant(const FqCtx& F, fq_t c);
    static Poly t(const FqCtx& F); // the variable
    // c * t^k
    static Poly monomial(const FqCtx& F, fq_t c, int k);

    const FqCtx& field() const { return *F_; }
    bool is_zero() const { return c_.empty(); }
    int deg() const { return int(c_.size()) - 1; } // deg(0) = -1
    fq_t coeff(int i) const { return (i >= 0 && i < int(c_.size())) ? c_[i] : fq_t(0); }
    fq_t lead() const { return c_.empty() ? fq_t(0) : c_.back(); }
    const std::vector<fq_t>& coeffs() const { return c_; }

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly operator-() const;
    Poly scaled(fq_t c) const;
    bool operator==(const Poly& o) const { return c_ == o.c_; }
    bool operator!=(const Poly& o) const { return c_ != o.c_; }

    // quotient and remainder; divisor nonzero
    static void divmod(const Poly& a, const Poly& b, Poly& q, Poly& r);
    Poly operator%(const Poly& o) const;
    Poly operator/(const Poly& o) const;

    static Poly gcd(Poly a, Poly b); // monic gcd
    Poly monic() const;

    std::string to_string() const; // e.g. "t^2+t+1"; codes printed for e > 1

private:
    const FqCtx* F_;
    std::vector<fq_t> c_;
    void trim();
};

// Element of K = F_q(t), reduced with monic denominator.
class RationalFunction {
public:
    RationalFunction() = default;
    RationalFunction(Poly num, Poly den);
    explicit RationalFunction(Poly num);

    static RationalFunction zero(const FqCtx& F) { return RationalFunction(Poly::zero(F)); }
    static RationalFunction one(const FqCtx& F) { return RationalFunction(Poly::constant(F, 1)); }

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    const FqCtx& field() const { return num_.field(); }

    RationalFunction operator+(const RationalFunction& o) const;
    RationalFunction operator-(const RationalFunction& o) const;
    RationalFunction operator*(const RationalFunction& o) const;
    RationalFunction operator/(const RationalFunction& o) const;
    RationalFunction operator-() const;
    RationalFunction inv() const;
    bool operator==(const RationalFunction& o) const { return num_ == o.num_ && den_ == o.den_; }

    std::string to_string() const;

private:
    Poly num_, den_;
    void reduce();
};

} // namespace btq
