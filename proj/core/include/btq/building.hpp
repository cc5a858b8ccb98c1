#pragma once

#include "btq/rational.hpp"
#include "btq/series.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace btq {

using SeriesMat = std::vector<std::vector<LaurentSeries>>;

// Square matrix over F_q[t].
struct PolyMat {
    int m = 0;
    std::vector<Poly> a;

    PolyMat() = default;
    PolyMat(int m_, const FqCtx& F) : m(m_), a(m_ * m_, Poly::zero(F)) {}
    static PolyMat identity(int m, const FqCtx& F);

    Poly& at(int i, int j) { return a[i * m + j]; }
    const Poly& at(int i, int j) const { return a[i * m + j]; }

    PolyMat operator*(const PolyMat& o) const;
    Poly det() const;
    PolyMat adjugate() const; // inverse when det == 1
    bool operator==(const PolyMat& o) const { return m == o.m && a == o.a; }
    std::string to_string() const;
};

// Square matrix over K = F_q(t).
struct RatMat {
    int m = 0;
    std::vector<RationalFunction> a;

    RatMat() = default;
    RatMat(int m_, const FqCtx& F) : m(m_), a(m_ * m_, RationalFunction::zero(F)) {}
    static RatMat identity(int m, const FqCtx& F);
    static RatMat from_poly(const PolyMat& g);

    RationalFunction& at(int i, int j) { return a[i * m + j]; }
    const RationalFunction& at(int i, int j) const { return a[i * m + j]; }

    RatMat operator*(const RatMat& o) const;
    RationalFunction det() const;
    RatMat adjugate() const;
    std::string to_string() const;
};

SeriesMat expand_mat(const RatMat& g, int precision);
SeriesMat expand_mat_exact(const PolyMat& g);
SeriesMat mat_mul(const SeriesMat& a, const SeriesMat& b);

// Canonical representative of a homothety class of rank-(n+1) O_oo-lattices.
//
// Upper-triangular basis matrix: diagonal pi^{a_c}, entries above the
// diagonal are polynomials in pi of degree < a_c (reduced modulo the pivot
// of their column), and the whole matrix is primitive: every entry lies in
// O_oo and at least one entry is a unit. One such matrix per class.
class CanonicalLattice {
public:
    CanonicalLattice() : F_(nullptr) {}

    int n() const { return int(diag_.size()) - 1; }
    const FqCtx& field() const { return *F_; }
    const std::vector<int>& diag() const { return diag_; }
    const std::vector<fq_t>& upper(int r, int c) const { return up_[r * int(diag_.size()) + c]; }

    int det_val() const; // sum of diagonal exponents
    std::string key() const;
    SeriesMat to_matrix() const; // exact

    // max - min elementary divisor relative to the standard lattice
    // (graph distance from the base vertex).
    int spread() const;

    bool operator==(const CanonicalLattice& o) const
    {
        return diag_ == o.diag_ && up_ == o.up_;
    }
    bool operator<(const CanonicalLattice& o) const { return key() < o.key(); }

    // Row-span Hermite reduction over O_oo followed by the homothety
    // normalization. Throws PrecisionError when a pivot or digit is not
    // determined at the rows' precision.
    static CanonicalLattice from_rows(const FqCtx& F, SeriesMat rows);

    // Inverse of key(): rebuilds the canonical data from its string form.
    static CanonicalLattice from_key(const FqCtx& F, const std::string& key);

private:
    const FqCtx* F_;
    std::vector<int> diag_;
    std::vector<std::vector<fq_t>> up_;
};

// z g^{-1} action; ginv must be the exact inverse of the acting matrix.
CanonicalLattice act_vertex(const PolyMat& g, const CanonicalLattice& v);
CanonicalLattice act_vertex_rat(const RatMat& ginv, const CanonicalLattice& v, int precision);

// All classes [M'] with pi M < M' < M: one per proper nonzero subspace
// of M/pi M.
std::vector<CanonicalLattice> neighbors(const CanonicalLattice& v);

// ----- apartment ---------------------------------------------------------

using ApartmentPoint = std::vector<Rat>; // n coordinates in the basis e_0..e_{n-1}

Rat pairing_a(int i, const ApartmentPoint& v);            // <a_i, v>
Rat pairing_aij(int i, int j, const ApartmentPoint& v);   // <a_{i,j}, v>
bool is_apartment_vertex(const ApartmentPoint& v, int n); // integral pairings

// Key of the diagonal lattice with exponents <a_{i,n}, v>.
CanonicalLattice apartment_vertex(const FqCtx& F, const ApartmentPoint& v, int n);

bool in_fundamental_sector(const ApartmentPoint& v, int n);

// Translation vector on V_0 of t = diag(t_0..t_n).
ApartmentPoint torus_translation(const std::vector<RationalFunction>& t);

// Vertices [M_0], .., [M_n] of the fundamental chamber.
std::vector<CanonicalLattice> fundamental_chamber(const FqCtx& F, int n);

// ----- finite complexes --------------------------------------------------

struct BallComplex {
    int n = 0;
    int radius = 0;
    std::vector<CanonicalLattice> verts;
    std::vector<int> dist;
    std::map<std::string, int> index;
    std::vector<std::set<int>> adj;
    std::vector<std::array<int, 2>> edges;     // sorted pairs
    std::vector<std::array<int, 3>> triangles; // sorted triples, n = 2 only

    long long simplex_count(int q) const;
    long long euler_sum() const; // alternating simplex-count sum
};

BallComplex ball(const CanonicalLattice& center, int radius);

// Line-oriented text format, one simplex per line, sorted; diffable.
std::string serialize_complex(const BallComplex& b);

// ----- sectors -----------------------------------------------------------

// A complete flag of K^{n+1}: step j = row span of the last j rows of g.
// The standard flag is the identity; gamma moves flag(g) to flag(g gamma^{-1}).
struct Flag {
    RatMat g;
    bool operator==(const Flag& o) const;
};

Flag standard_flag(const FqCtx& F, int n);

// Sector of the building based at the fundamental vertex ending at the
// chamber at infinity of a rational flag. w maps the sector to the
// standard one and fixes the base vertex; winv is its exact inverse.
struct SectorRef {
    RatMat w, winv;
    int precision = 0;

    bool contains(const CanonicalLattice& v) const;
};

// Membership test for vertices at the given working precision.
SectorRef sector(const FqCtx& F, int n, const Flag& flag, int precision);

// Diagonal class with non-increasing exponents ending in 0.
bool is_standard_sector_vertex(const CanonicalLattice& v);

// Alcove of the standard sector: n+1 diagonal vertex classes; depth is the
// least wall distance min_i min_v <a_{i,i+1}, v>.
struct SectorAlcove {
    std::vector<CanonicalLattice> verts;
    int depth = 0;
};

// All alcoves of the standard sector whose vertices have spread <= bound.
std::vector<SectorAlcove> standard_sector_alcoves(const FqCtx& F, int n, int bound);

} // namespace btq
