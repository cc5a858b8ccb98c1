#include <benchmark/benchmark.h>

#include "btq/gamma.hpp"
#include "btq/linalg.hpp"

#include <random>

using namespace btq;

namespace {

PolyMat random_polymat(const FqCtx& F, int d, int maxdeg, std::mt19937& rng)
{
    std::uniform_int_distribution<int> dd(0, maxdeg), dc(0, F.q() - 1);
    for (;;) {
        PolyMat m(d, F);
        for (int i = 0; i < d * d; ++i) {
            int deg = dd(rng);
            std::vector<fq_t> c(deg + 1);
            for (auto& x : c) x = fq_t(dc(rng));
            m.a[i] = Poly(F, std::move(c));
        }
        if (!m.det().is_zero()) return m;
    }
}

CanonicalLattice base_vertex(const FqCtx& F, int n)
{
    SeriesMat rows(n + 1, std::vector<LaurentSeries>(n + 1, LaurentSeries::zero(F)));
    for (int i = 0; i <= n; ++i) rows[i][i] = LaurentSeries::one(F);
    return CanonicalLattice::from_rows(F, std::move(rows));
}

} // namespace

static void BM_CanonicalForm(benchmark::State& state)
{
    const FqCtx& F = fq_context(2);
    const int n = int(state.range(0));
    std::mt19937 rng(7);
    std::vector<SeriesMat> inputs;
    for (int i = 0; i < 64; ++i)
        inputs.push_back(expand_mat_exact(random_polymat(F, n + 1, 3, rng)));
    size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(CanonicalLattice::from_rows(F, inputs[i % inputs.size()]));
        ++i;
    }
}
BENCHMARK(BM_CanonicalForm)->Arg(1)->Arg(2);

static void BM_Neighbors(benchmark::State& state)
{
    const FqCtx& F = fq_context(2);
    CanonicalLattice b = base_vertex(F, int(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(neighbors(b));
}
BENCHMARK(BM_Neighbors)->Arg(1)->Arg(2);

static void BM_Ball(benchmark::State& state)
{
    const FqCtx& F = fq_context(2);
    CanonicalLattice b = base_vertex(F, 1);
    for (auto _ : state) benchmark::DoNotOptimize(ball(b, int(state.range(0))));
}
BENCHMARK(BM_Ball)->Arg(3)->Arg(5);

static void BM_StabilizerOrder(benchmark::State& state)
{
    const FqCtx& F = fq_context(2);
    GroupSpec spec{1, 2, std::nullopt};
    SeriesMat rows(2, std::vector<LaurentSeries>(2, LaurentSeries::zero(F)));
    rows[0][0] = LaurentSeries::monomial(F, 1, int(state.range(0)));
    rows[1][1] = LaurentSeries::one(F);
    CanonicalLattice v = CanonicalLattice::from_rows(F, std::move(rows));
    for (auto _ : state) benchmark::DoNotOptimize(stabilizer_order({v}, spec));
}
BENCHMARK(BM_StabilizerOrder)->Arg(2)->Arg(6);

static void BM_QuotientBuild(benchmark::State& state)
{
    GroupSpec spec{1, 2, std::nullopt};
    for (auto _ : state) benchmark::DoNotOptimize(build_quotient(spec, int(state.range(0)), 1));
}
BENCHMARK(BM_QuotientBuild)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_KernelBasis(benchmark::State& state)
{
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> dv(-4, 4), dd(1, 3), keep(0, 2);
    const int m = int(state.range(0));
    SparseRationalMatrix a(m, m);
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c)
            if (keep(rng) != 0) a.set(r, c, Rat(dv(rng), dd(rng)));
    for (auto _ : state) benchmark::DoNotOptimize(kernel_basis(a));
}
BENCHMARK(BM_KernelBasis)->Arg(20)->Arg(60)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
