#pragma once

#include "btq/gamma.hpp"
#include "btq/linalg.hpp"
#include "btq/rational.hpp"

#include <map>

namespace btq {

// Finitely supported Gamma-invariant cochain on oriented-simplex orbits,
// one value per stored orientation representative; the value on the
// opposite orientation is the negative. Orientation-reversing orbits
// carry 0.
class Cochain {
public:
    Cochain() : q_(0), Q_(nullptr) {}
    Cochain(int q, const QuotientComplex& Q) : q_(q), Q_(&Q) {}

    int degree() const { return q_; }
    const QuotientComplex& complex() const { return *Q_; }
    const std::map<int, Rat>& values() const { return v_; }
    bool is_zero() const { return v_.empty(); }

    Rat get(int orbit) const;
    void set(int orbit, const Rat& value); // throws on a reversing orbit
    void add(int orbit, const Rat& value);

    Cochain operator+(const Cochain& o) const;
    Cochain operator-(const Cochain& o) const;
    Cochain scaled(const Rat& c) const;
    bool operator==(const Cochain& o) const { return q_ == o.q_ && v_ == o.v_; }

    // max orbit depth over the support (-1 for the zero cochain)
    int support_depth() const;

    // "orbit-id value" lines with exact rational literals
    std::string serialize() const;

private:
    int q_;
    const QuotientComplex* Q_;
    std::map<int, Rat> v_;
};

// Pairing weight of one stored orbit: eps_q / #Gamma_sigma with eps_0 = 1
// and eps_q = 2 for q >= 1 (both orientations of the orbit).
Rat orbit_weight(const QuotientComplex& Q, int q, int orbit);

// f |-> f o boundary on the quotient incidence; the zero map in top degree.
// Refuses supports too close to the window boundary.
Cochain d(const Cochain& f);

// Stabilizer-weighted coboundary adjoint: (d f, g)_q = (f, delta g)_{q-1}
// exactly; delta^0 = 0.
Cochain delta(const Cochain& g);

// delta^{q+1} d^q + d^{q-1} delta^q; degree 0 uses the reduced form.
Cochain laplacian(const Cochain& f);

// (f, g)_q^Gamma = sum over oriented-orbit classes of f g / #Gamma_sigma.
Rat pairing(const Cochain& f, const Cochain& g);

// Image of r under the augmentation R -> C^0 restricted to the window
// (constant value on every vertex orbit of depth <= maxdepth).
Cochain augmentation_cochain(const QuotientComplex& Q, const Rat& r, int maxdepth);

} // namespace btq
