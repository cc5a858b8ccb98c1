#pragma once

#include "btq/cusps.hpp"
#include "btq/harmonic.hpp"

#include <array>
#include <set>

namespace btq {

// Explicit finite subcomplex of the building, closed under faces.
struct PatchComplex {
    std::vector<CanonicalLattice> verts;
    std::map<std::string, int> index;
    std::set<std::array<int, 2>> edges;
    std::set<std::array<int, 3>> tris;

    int add_vertex(const CanonicalLattice& v);
    void add_simplex(const SimplexTuple& s); // adds all faces too
    bool has_vertex(const std::string& key) const { return index.count(key) != 0; }
    long long count(int q) const;
    long long euler_sum() const; // alternating simplex-count sum
    std::vector<SimplexTuple> simplices(int q) const;
};

// One elementary collapse: remove the free face together with its unique
// coface (vertex tuples, replayable from the serialized form alone).
struct CollapseStep {
    int q = 0; // dimension of the free face
    std::vector<std::string> free_face;
    std::vector<std::string> coface;
};

// Greedy free-face collapsing down to a single vertex.
std::optional<std::vector<CollapseStep>> collapse_certificate(const PatchComplex& c);

// Replay a recorded collapse sequence; true iff it reduces c to a point.
bool replay_collapse(const PatchComplex& c, const std::vector<CollapseStep>& seq);

struct IdentifiedPair {
    int q = 0;
    SimplexTuple from, to;
    PolyMat gamma;
};

struct FundamentalPatch {
    PatchComplex complex;
    std::vector<CollapseStep> collapse;
    std::vector<long long> g_counts; // filled by identified_counts
    std::vector<IdentifiedPair> certificates;

    std::string serialize() const;
};

// A finite contractible D with Gamma.D covering D(l) on the window and
// all harmonic supports inside Gamma.D; chambers are lifted along a
// spanning tree of the face-sharing graph, so no two lifted top simplices
// are Gamma-equivalent. Throws CertificationError when no collapsible
// lift is found.
FundamentalPatch choose_patch(const QuotientComplex& Q, const TruncationComplex& trunc,
                              const std::vector<std::vector<Cochain>>& harmonic_bases);

// g_q = number of q-simplices of D with a nontrivial Gamma-translate
// inside D, with explicit certificates.
std::vector<long long> identified_counts(FundamentalPatch& patch, const GroupSpec& spec);

// 1 + sum (-1)^{q+1} g_q
long long euler_characteristic(const FundamentalPatch& patch);

// plain alternating sum of compact-support cohomology dimensions;
// refuses an unstable report
long long euler_from_cohomology(const CohomologyReport& report);

} // namespace btq
