#include "btq/cochain.hpp"
#include "btq/errors.hpp"

namespace btq {

Rat Cochain::get(int orbit) const
{
    auto it = v_.find(orbit);
    return it == v_.end() ? Rat(0) : it->second;
}

void Cochain::set(int orbit, const Rat& value)
{
    if (value == 0) {
        v_.erase(orbit);
        return;
    }
    if (q_ >= 0 && q_ <= Q_->dim() && Q_->orbits[q_][orbit].orientation_reversing)
        throw Error("Cochain: nonzero value on an orientation-reversing orbit");
    v_[orbit] = value;
}

void Cochain::add(int orbit, const Rat& value)
{
    set(orbit, get(orbit) + value);
}

Cochain Cochain::operator+(const Cochain& o) const
{
    if (q_ != o.q_) throw Error("Cochain: degree mismatch");
    Cochain r = *this;
    for (const auto& [k, x] : o.v_) r.add(k, x);
    return r;
}

Cochain Cochain::operator-(const Cochain& o) const
{
    return *this + o.scaled(Rat(-1));
}

Cochain Cochain::scaled(const Rat& c) const
{
    Cochain r(q_, *Q_);
    if (c == 0) return r;
    for (const auto& [k, x] : v_) r.v_[k] = x * c;
    return r;
}

int Cochain::support_depth() const
{
    int d = -1;
    for (const auto& [k, x] : v_) d = std::max(d, Q_->orbits[q_][k].depth);
    return d;
}

std::string Cochain::serialize() const
{
    std::string out;
    for (const auto& [k, x] : v_) out += std::to_string(k) + " " + rat_to_string(x) + "\n";
    return out;
}

Rat orbit_weight(const QuotientComplex& Q, int q, int orbit)
{
    return Rat(q == 0 ? 1 : 2, Q.orbits[q][orbit].stab_oriented);
}

namespace {

void check_support(const Cochain& f, const char* op)
{
    const QuotientComplex& Q = f.complex();
    if (f.degree() < 0 || f.degree() > Q.dim()) return; // formal zero degrees
    for (const auto& [k, x] : f.values())
        if (!Q.operator_safe(f.degree(), k))
            throw Error(std::string(op) + ": support touches the boundary-incomplete region "
                                          "(orbit " +
                        std::to_string(k) + " of dimension " + std::to_string(f.degree()) + ")");
}

} // namespace

Cochain d(const Cochain& f)
{
    const QuotientComplex& Q = f.complex();
    const int q = f.degree();
    check_support(f, "d");
    Cochain out(q + 1, Q);
    if (q >= Q.dim() || f.is_zero()) return out; // top degree: the zero map
    for (int id = 0; id < int(Q.orbits[q + 1].size()); ++id) {
        const auto& rec = Q.orbits[q + 1][id];
        Rat acc = 0;
        for (const auto& [faceOrbit, sign] : rec.faces) acc += Rat(sign) * f.get(faceOrbit);
        if (acc == 0) continue;
        if (rec.orientation_reversing)
            throw Error("d: incidence data inconsistent on a reversing orbit");
        out.set(id, acc);
    }
    return out;
}

Cochain delta(const Cochain& g)
{
    const QuotientComplex& Q = g.complex();
    const int q = g.degree();
    check_support(g, "delta");
    Cochain out(q - 1, Q);
    if (q <= 0 || q > Q.dim() || g.is_zero()) return out; // delta^0 = 0
    std::map<int, Rat> acc;
    for (const auto& [orbit, value] : g.values()) {
        const auto& rec = Q.orbits[q][orbit];
        const Rat wq = orbit_weight(Q, q, orbit);
        for (const auto& [faceOrbit, sign] : rec.faces) acc[faceOrbit] += Rat(sign) * wq * value;
    }
    for (const auto& [faceOrbit, sum] : acc) {
        if (sum == 0) continue;
        if (Q.orbits[q - 1][faceOrbit].orientation_reversing)
            throw Error("delta: incidence data inconsistent on a reversing orbit");
        out.set(faceOrbit, sum / orbit_weight(Q, q - 1, faceOrbit));
    }
    return out;
}

Cochain laplacian(const Cochain& f)
{
    Cochain first = delta(d(f));
    if (f.degree() == 0) return first;
    return first + d(delta(f));
}

Rat pairing(const Cochain& f, const Cochain& g)
{
    if (f.degree() != g.degree()) throw Error("pairing: degree mismatch");
    const QuotientComplex& Q = f.complex();
    Rat acc = 0;
    for (const auto& [k, x] : f.values()) {
        Rat y = g.get(k);
        if (y == 0) continue;
        acc += orbit_weight(Q, f.degree(), k) * x * y;
    }
    return acc;
}

Cochain augmentation_cochain(const QuotientComplex& Q, const Rat& r, int maxdepth)
{
    Cochain out(0, Q);
    if (r == 0) return out;
    for (int id = 0; id < int(Q.orbits[0].size()); ++id)
        if (Q.orbits[0][id].depth <= maxdepth) out.set(id, r);
    return out;
}

} // namespace btq
