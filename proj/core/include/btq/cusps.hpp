#pragma once

#include "btq/cochain.hpp"
#include "btq/gamma.hpp"

namespace btq {

// One cusp = Gamma-class of chambers at infinity = class of rational
// complete flags. `reduce` is an SL_{n+1}(F_q[t]) element carrying the
// representative flag to the standard one.
struct CuspClass {
    Flag rep;
    PolyMat reduce;
    // n = 1 convenience: the point of P^1(K) in coprime coordinates
    std::pair<Poly, Poly> p1_coordinates() const;
};

// gamma in SL_{n+1}(F_q[t]) with flag(g gamma^{-1}) standard, by
// column reduction over the polynomial ring.
PolyMat flag_reduce(const Flag& f, const FqCtx& F);

// Complete, duplicate-free cusp representatives; completeness is certified
// by the finite-quotient criterion (cosets of the Borel image in
// SL_{n+1}(A/I)).
std::vector<CuspClass> enumerate_cusps(const GroupSpec& spec);

// Index of the cusp equivalent to the flag, plus a certificate gamma in
// Gamma with gamma . flag = representative flag.
std::pair<int, PolyMat> cusp_of_flag(const Flag& f, const GroupSpec& spec,
                                     const std::vector<CuspClass>& cusps);

// Chambers of the cusp's sector (based at the fundamental vertex) with
// wall depth >= l, for vertices of spread <= bound.
std::vector<SimplexTuple> sector_truncation(const CuspClass& cusp, int l, int bound,
                                            int precision);

// For each orbit of the window: the maximal truncation depth of a sector
// chamber (over all cusps and Gamma-translates) whose class it is, or of
// a chamber it is a face of; -1 when the orbit meets no sector translate.
std::vector<std::vector<int>> sector_depths(const GroupSpec& spec,
                                            const std::vector<CuspClass>& cusps,
                                            const QuotientComplex& Q, int precision);

struct TruncationComplex {
    int l = 0;
    int counting_radius = 0;               // depth cap for the reported counts
    std::vector<std::vector<char>> in_p;   // [dim][orbit] union of sector translates
    std::vector<std::vector<char>> in_d;   // [dim][orbit] complementary complex
    std::vector<long long> d_counts;       // per dim, orbits of D(l) within the cap
};

TruncationComplex truncation_complex(int l, const std::vector<std::vector<int>>& depths,
                                     const QuotientComplex& Q);

struct StabilizationReport {
    int l = 0;
    std::vector<int> radii;
    std::vector<std::vector<long long>> counts; // per radius, per dim
    bool stabilized = false;
};

// Gamma\D(l) simplex counts per dimension across window radii; verdict
// "stabilized" iff the two largest radii agree.
StabilizationReport stabilization_check(const GroupSpec& spec, int l,
                                        const std::vector<int>& radii, int precision);

struct SupportLocus {
    std::vector<int> l_per_degree; // least l with supports outside P(l)
    bool flagged = false;          // a support stayed inside every tested P(l)
};

SupportLocus support_locus(const std::vector<std::vector<Cochain>>& bases,
                           const std::vector<std::vector<int>>& depths,
                           const QuotientComplex& Q);

} // namespace btq
