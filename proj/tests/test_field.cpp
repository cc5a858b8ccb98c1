#include <doctest.h>

#include "btq/errors.hpp"
#include "btq/series.hpp"

#include <random>

using namespace btq;

namespace {

Poly rand_poly(const FqCtx& F, int maxdeg, std::mt19937& rng)
{
    std::uniform_int_distribution<int> dd(0, maxdeg), dc(0, F.q() - 1);
    int d = dd(rng);
    std::vector<fq_t> c(d + 1);
    for (auto& x : c) x = fq_t(dc(rng));
    return Poly(F, std::move(c));
}

RationalFunction rand_ratfn_nonzero(const FqCtx& F, int maxdeg, std::mt19937& rng)
{
    for (;;) {
        Poly num = rand_poly(F, maxdeg, rng);
        Poly den = rand_poly(F, maxdeg, rng);
        if (num.is_zero() || den.is_zero()) continue;
        return RationalFunction(num, den);
    }
}

} // namespace

TEST_CASE("F_q field axioms hold for every supported size")
{
    for (int q : {2, 3, 4, 5, 7, 8, 9}) {
        const FqCtx& F = fq_context(q);
        CHECK(F.q() == q);
        for (int a = 0; a < q; ++a) {
            CHECK(F.add(fq_t(a), 0) == a);
            CHECK(F.mul(fq_t(a), 1) == a);
            CHECK(F.add(fq_t(a), F.neg(fq_t(a))) == 0);
            if (a != 0) CHECK(F.mul(fq_t(a), F.inv(fq_t(a))) == 1);
            for (int b = 0; b < q; ++b) {
                CHECK(F.add(fq_t(a), fq_t(b)) == F.add(fq_t(b), fq_t(a)));
                CHECK(F.mul(fq_t(a), fq_t(b)) == F.mul(fq_t(b), fq_t(a)));
                for (int c = 0; c < q; ++c) {
                    CHECK(F.add(F.add(fq_t(a), fq_t(b)), fq_t(c)) ==
                          F.add(fq_t(a), F.add(fq_t(b), fq_t(c))));
                    CHECK(F.mul(F.mul(fq_t(a), fq_t(b)), fq_t(c)) ==
                          F.mul(fq_t(a), F.mul(fq_t(b), fq_t(c))));
                    CHECK(F.mul(fq_t(a), F.add(fq_t(b), fq_t(c))) ==
                          F.add(F.mul(fq_t(a), fq_t(b)), F.mul(fq_t(a), fq_t(c))));
                }
            }
        }
    }
}

TEST_CASE("polynomial division and gcd")
{
    const FqCtx& F = fq_context(3);
    std::mt19937 rng(7);
    for (int it = 0; it < 200; ++it) {
        Poly a = rand_poly(F, 6, rng);
        Poly b = rand_poly(F, 4, rng);
        if (b.is_zero()) continue;
        Poly q, r;
        Poly::divmod(a, b, q, r);
        CHECK(a == q * b + r);
        CHECK(r.deg() < b.deg());
        Poly g = Poly::gcd(a, b);
        if (!a.is_zero()) CHECK((a % g).is_zero());
        CHECK((b % g).is_zero());
    }
}

TEST_CASE("val_infty on the documented inputs")
{
    const FqCtx& F = fq_context(2);
    Poly one = Poly::constant(F, 1);
    Poly t = Poly::t(F);

    CHECK(val_infty(RationalFunction(one)) == 0);
    CHECK(val_infty(RationalFunction(one, t)) == 1);
    // (t^2+1)/t^5 has order 3 in pi = 1/t
    Poly t2p1 = t * t + one;
    Poly t5 = t * t * t * t * t;
    CHECK(val_infty(RationalFunction(t2p1, t5)) == 3);
    CHECK_THROWS_AS(val_infty(RationalFunction::zero(F)), Error);
}

TEST_CASE("abs_infty normalization")
{
    {
        const FqCtx& F = fq_context(2);
        CHECK(abs_infty(RationalFunction::one(F)) == Rat(1));
        CHECK(abs_infty(RationalFunction(Poly::constant(F, 1), Poly::t(F))) == Rat(1, 2));
        CHECK(abs_infty(RationalFunction::zero(F)) == Rat(0));
    }
    {
        const FqCtx& F = fq_context(3);
        Poly t = Poly::t(F);
        CHECK(abs_infty(RationalFunction(t * t * t)) == Rat(27));
    }
}

TEST_CASE("laurent_expand on the documented inputs")
{
    const FqCtx& F = fq_context(2);
    Poly one = Poly::constant(F, 1);
    Poly t = Poly::t(F);

    // 1/(1 - 1/t) = t/(t-1): geometric series 1 + pi + pi^2 + ...
    RationalFunction f(t, t - one);
    LaurentSeries s = laurent_expand(f, 3);
    CHECK(s.val() == 0);
    CHECK(s.coeff_at(0) == 1);
    CHECK(s.coeff_at(1) == 1);
    CHECK(s.coeff_at(2) == 1);
    CHECK(s.rel_prec() == 3);

    LaurentSeries st = laurent_expand(RationalFunction(t), 2);
    CHECK(st.val() == -1);
    CHECK(st.coeff_at(-1) == 1);
    CHECK(st.coeff_at(0) == 0);

    LaurentSeries s2 = laurent_expand(RationalFunction(t + one, t), 2);
    CHECK(s2.val() == 0);
    CHECK(s2.coeff_at(0) == 1);
    CHECK(s2.coeff_at(1) == 1);

    CHECK(laurent_expand(RationalFunction::zero(F), 3).exactly_zero());
    // round-trip of the valuation
    std::mt19937 rng(11);
    for (int it = 0; it < 100; ++it) {
        RationalFunction g = rand_ratfn_nonzero(F, 5, rng);
        CHECK(laurent_expand(g, 4).val() == val_infty(g));
    }
}

TEST_CASE("series arithmetic identities")
{
    const FqCtx& F = fq_context(2);
    LaurentSeries a(F, -1, {1, 0, 1, 1}, 4);

    LaurentSeries z = series_arith(a, -a, SeriesOp::add);
    CHECK(z.is_zero());
    CHECK(z.abs_prec() == -1 + 4);

    LaurentSeries u = series_arith(a, a.inverse(4), SeriesOp::mul);
    CHECK(u.val() == 0);
    CHECK(u.coeff_at(0) == 1);
    for (int k = 1; k < u.abs_prec(); ++k) CHECK(u.coeff_at(k) == 0);

    // char-2 square: (1+pi)^2 = 1 + pi^2
    LaurentSeries onepi(F, 0, {1, 1}, kExactPrec);
    LaurentSeries sq = onepi * onepi;
    CHECK(sq.is_exact());
    CHECK(sq.coeff_at(0) == 1);
    CHECK(sq.coeff_at(1) == 0);
    CHECK(sq.coeff_at(2) == 1);

    CHECK_THROWS_AS(series_arith(LaurentSeries::zero(F), a, SeriesOp::inv_of_a), Error);
    CHECK_THROWS_AS(a.truncated(0), PrecisionError);
}

TEST_CASE("ultrametric valuation properties on random rational functions")
{
    std::mt19937 rng(23);
    for (int q : {2, 3}) {
        const FqCtx& F = fq_context(q);
        for (int it = 0; it < 300; ++it) {
            RationalFunction f = rand_ratfn_nonzero(F, 5, rng);
            RationalFunction g = rand_ratfn_nonzero(F, 5, rng);
            CHECK(val_infty(f * g) == val_infty(f) + val_infty(g));
            RationalFunction s = f + g;
            if (!s.is_zero()) {
                CHECK(val_infty(s) >= std::min(val_infty(f), val_infty(g)));
                if (val_infty(f) != val_infty(g))
                    CHECK(val_infty(s) == std::min(val_infty(f), val_infty(g)));
            }
            CHECK(abs_infty(f * g) == abs_infty(f) * abs_infty(g));
        }
    }
}

TEST_CASE("product formula spot-check for small irreducibles")
{
    // For irreducible f the only contributing places are infinity and (f):
    // |f|_oo * (q^{deg f})^{-1} = 1.
    for (int q : {2, 3}) {
        const FqCtx& F = fq_context(q);
        std::vector<Poly> irreducibles;
        // all monic irreducibles of degree <= 2 by trial division
        for (int deg = 1; deg <= 2; ++deg) {
            int count = 1;
            for (int i = 0; i < deg; ++i) count *= q;
            for (int code = 0; code < count; ++code) {
                std::vector<fq_t> c(deg + 1, 0);
                int v = code;
                for (int i = 0; i < deg; ++i) {
                    c[i] = fq_t(v % q);
                    v /= q;
                }
                c[deg] = 1;
                Poly f(F, c);
                bool irred = true;
                for (int a = 0; a < q && irred; ++a) {
                    // linear factor test
                    fq_t acc = 0, pw = 1;
                    for (int i = 0; i <= f.deg(); ++i) {
                        acc = F.add(acc, F.mul(f.coeff(i), pw));
                        pw = F.mul(pw, fq_t(a));
                    }
                    if (deg == 2 && acc == 0) irred = false;
                }
                if (deg == 1 || irred) irreducibles.push_back(f);
            }
        }
        for (const auto& f : irreducibles) {
            Rat at_infty = abs_infty(RationalFunction(f));
            Int qd = 1;
            for (int i = 0; i < f.deg(); ++i) qd *= q;
            CHECK(at_infty * Rat(1, qd) == Rat(1));
        }
    }
}

namespace {

// Test-only oracle: recover num/den of bounded degree from a series by
// solving P(t) = s(pi) Q(t) on known coefficients, Gaussian elimination
// over F_q.
RationalFunction reconstruct(const FqCtx& F, const LaurentSeries& s, int dnum, int dden)
{
    // unknowns: p_0..p_dnum, q_0..q_dden ; equations: coefficients of
    // pi^k in P - s*Q for k in a window
    const int nuk = (dnum + 1) + (dden + 1);
    const int kmin = s.is_zero() ? -dnum - 1 : std::min(-dnum, s.val() - dden) - 1;
    // stay strictly inside the known window: k + dden < abs_prec
    const int kmax = s.is_zero() ? 2 : s.abs_prec() - dden;
    std::vector<std::vector<fq_t>> rows;
    for (int k = kmin; k < kmax; ++k) {
        std::vector<fq_t> row(nuk, 0);
        // P contributes t^i = pi^{-i}
        if (-k >= 0 && -k <= dnum) row[-k] = 1;
        // -(s*Q): Q coefficient q_j contributes s.coeff_at(k+j)
        for (int j = 0; j <= dden; ++j) {
            int idx = k + j;
            fq_t cv = 0;
            if (!s.is_zero() && idx >= s.val() && idx < s.abs_prec())
                cv = s.coeff_at(idx);
            row[dnum + 1 + j] = F.neg(cv);
        }
        rows.push_back(std::move(row));
    }
    // kernel via Gauss over F_q
    int rank = 0;
    std::vector<int> pivcol;
    for (int c = 0; c < nuk && rank < int(rows.size()); ++c) {
        int piv = -1;
        for (int r = rank; r < int(rows.size()); ++r)
            if (rows[r][c] != 0) {
                piv = r;
                break;
            }
        if (piv == -1) continue;
        std::swap(rows[rank], rows[piv]);
        fq_t inv = F.inv(rows[rank][c]);
        for (int j = 0; j < nuk; ++j) rows[rank][j] = F.mul(rows[rank][j], inv);
        for (int r = 0; r < int(rows.size()); ++r) {
            if (r == rank || rows[r][c] == 0) continue;
            fq_t f = rows[r][c];
            for (int j = 0; j < nuk; ++j)
                rows[r][j] = F.sub(rows[r][j], F.mul(f, rows[rank][j]));
        }
        pivcol.push_back(c);
        ++rank;
    }
    // pick a kernel vector with Q != 0: set one free variable to 1
    std::vector<fq_t> sol(nuk, 0);
    for (int c = nuk - 1; c >= 0; --c) {
        bool ispiv = false;
        for (int pc : pivcol)
            if (pc == c) ispiv = true;
        if (!ispiv) {
            sol[c] = 1;
            for (int r = 0; r < rank; ++r) sol[pivcol[r]] = F.neg(rows[r][c]);
            break;
        }
    }
    Poly P(F, std::vector<fq_t>(sol.begin(), sol.begin() + dnum + 1));
    Poly Q(F, std::vector<fq_t>(sol.begin() + dnum + 1, sol.end()));
    return RationalFunction(P, Q);
}

} // namespace

TEST_CASE("expansion followed by rational reconstruction is the identity")
{
    std::mt19937 rng(37);
    const FqCtx& F = fq_context(2);
    for (int it = 0; it < 50; ++it) {
        RationalFunction f = rand_ratfn_nonzero(F, 3, rng);
        LaurentSeries s = laurent_expand(f, 12);
        RationalFunction g = reconstruct(F, s, 3, 3);
        CHECK(f == g);
    }
}
