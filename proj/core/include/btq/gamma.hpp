#pragma once

#include "btq/building.hpp"

#include <functional>
#include <tuple>
#include <optional>

namespace btq {

// Gamma = SL_{n+1}(F_q[t]) or its principal congruence subgroup Gamma(I),
// I = (level) with a monic generator.
struct GroupSpec {
    int n = 1;
    int q = 2;
    std::optional<Poly> level; // nullopt = full

    const FqCtx& field() const { return fq_context(q); }
    bool is_full() const { return !level.has_value(); }
    std::string level_string() const { return is_full() ? "full" : level->to_string(); }
};

// det g = 1 and (level = full or g ≡ identity mod level)
bool member(const PolyMat& g, const GroupSpec& spec);

using SimplexTuple = std::vector<CanonicalLattice>;

// Searches h = gamma^{-1} in M_{n+1}(F_q[t]) with deg <= bound subject to
// lattice-mapping conditions and the congruence condition, as an affine
// F_q-linear system on the coefficient vector; candidates are then
// filtered by det h = 1. Complete within the degree bound.
class GammaSolver {
public:
    GammaSolver(const GroupSpec& spec, int degree_bound);

    // act(gamma, from) = to; returns false when the homothety shift is
    // non-integral (no solution possible).
    bool add_vertex_map(const CanonicalLattice& from, const CanonicalLattice& to);

    // Visit every gamma (det h = 1, congruence satisfied); return false
    // from the callback to stop early. Enumeration order is deterministic.
    void for_each_gamma(const std::function<bool(const PolyMat&)>& fn) const;

    long long count() const;
    std::optional<PolyMat> first() const;

private:
    const GroupSpec& spec_;
    const FqCtx& F_;
    int d_;        // matrix size n+1
    int degb_;     // max t-degree of h entries
    int nunk_;     // (n+1)^2 (degb+1)
    bool feasible_ = true;
    std::vector<std::vector<fq_t>> rows_;
    std::vector<fq_t> rhs_;

    void add_congruence_conditions();
    void add_equation(std::vector<fq_t> row, fq_t b);
};

struct StabInfo {
    long long oriented = 0; // even vertex permutations
    long long setwise = 0;  // all vertex permutations
    bool reversing() const { return setwise > oriented; }
};

// Exact stabilizer orders of a simplex given as an ordered vertex tuple.
// degree_bound: pass the window-derived bound, or -1 for the default
// 2 * max vertex spread.
StabInfo stabilizer_info(const SimplexTuple& s, const GroupSpec& spec, int degree_bound = -1);

// Oriented stabilizer order (even-permutation convention); the setwise
// order for q = 0 simplices (where the two notions agree).
long long stabilizer_order(const SimplexTuple& s, const GroupSpec& spec);

// One gamma mapping `from` onto `to` as unoriented simplices, with the
// vertex-matching parity: sign = +1 for an even matching, -1 for odd.
struct Identification {
    PolyMat gamma;
    int sign = 1;
};
std::optional<Identification> identify(const SimplexTuple& from, const SimplexTuple& to,
                                       const GroupSpec& spec);

// ----- quotient complex ------------------------------------------------------

struct OrbitRecord {
    SimplexTuple rep;        // orientation representative
    long long stab_oriented; // #Gamma_sigma, even-permutation convention
    long long stab_setwise;
    bool orientation_reversing;
    int depth; // quotient-graph distance from the base vertex orbit
    // signed faces of the representative: one entry per deleted index i,
    // (face orbit id, (-1)^i * orientation sign against the face rep)
    std::vector<std::pair<int, int>> faces;
    // certificate mapping face i of rep onto the face-orbit representative
    std::vector<PolyMat> face_certs;
};

struct QuotientComplex {
    GroupSpec spec;
    int window = 0; // vertex orbits enumerated to this depth
    std::vector<OrbitRecord> orbits[3];

    // every vertex key seen during the BFS -> (orbit id, certificate
    // gamma with act(gamma, vertex) = orbit representative)
    std::map<std::string, std::pair<int, PolyMat>> vertex_lookup;

    int n() const { return spec.n; }
    int dim() const { return spec.n; }
    long long orbit_count(int qdim) const { return (long long)orbits[qdim].size(); }

    // deepest simplex orbits that still have complete coface data
    bool operator_safe(int qdim, int orbit) const
    {
        return orbits[qdim][orbit].depth <= window - 1;
    }
    bool support_safe(int qdim, int orbit) const
    {
        return orbits[qdim][orbit].depth <= window - 2;
    }

    std::optional<std::pair<int, PolyMat>> find_vertex_orbit(const CanonicalLattice& v) const;
    // (orbit id, sign, certificate): act(cert, tuple) = rep as an
    // unoriented simplex; sign is the matching parity.
    std::optional<std::tuple<int, int, PolyMat>> find_simplex_orbit(const SimplexTuple& s) const;

    std::string serialize() const;
};

// Orbits, stabilizers and signed incidence of the window ball modulo
// Gamma. Identifications and stabilizers are certified by explicit group
// elements; the construction is deterministic.
QuotientComplex build_quotient(const GroupSpec& spec, int window, int workers = 0);

} // namespace btq
