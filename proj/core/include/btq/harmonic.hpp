#pragma once

#include "btq/cochain.hpp"

namespace btq {

// Dimensions and bases for one degree at one support radius.
struct DegreeData {
    int q = 0;
    int support_radius = 0;
    long long dim_z = 0;        // finitely supported cocycles in the region
    long long dim_b = 0;        // coboundaries landing in the region
    long long dim_harmonic = 0; // ker d cap ker delta
    long long dim_hc = 0;       // dim_z - dim_b
    std::vector<Cochain> harmonic_basis;
    std::vector<Cochain> hc_basis; // representatives of Z modulo B
};

// Exact basis of {f supported in the radius, invariant, df = 0, delta f = 0}.
std::vector<Cochain> harmonic_space(int q, const QuotientComplex& Q, int support_radius);

// Compact-support cohomology dimension by rank-nullity on the window,
// independent of the harmonic route, with representative cocycles.
std::pair<long long, std::vector<Cochain>> compact_support_cohomology(int q,
                                                                      const QuotientComplex& Q,
                                                                      int support_radius);

struct DecompositionCheck {
    bool ok = false;
    bool dims_add = false;
    bool orthogonal = false;
    bool recombines = false;
    long long dim_z = 0, dim_h = 0, dim_b = 0;
};

// Z = H (+) B on the window: dimension count, exact orthogonality of the
// harmonic and coboundary parts, and exact recombination of random
// elements of Z.
DecompositionCheck verify_decomposition(int q, const QuotientComplex& Q, int support_radius,
                                        unsigned seed = 1);

struct CohomologyReport {
    GroupSpec spec;
    int window = 0;
    int support_radius = 0; // dimensions are reported at this radius
    bool stable = false;    // radius r and r+1 agree in every degree
    std::vector<DegreeData> degrees;      // at support_radius
    std::vector<DegreeData> degrees_next; // at support_radius + 1

    std::string to_json() const;
};

// Full report over all degrees with the radius-stabilization check;
// requires support_radius + 3 <= window.
CohomologyReport cohomology_report(const QuotientComplex& Q, int support_radius);

} // namespace btq
