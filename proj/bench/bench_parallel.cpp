// Serial reference kernels against their OpenMP versions.

#include <benchmark/benchmark.h>

#include <random>

#include "chab/mwsieve.hpp"
#include "chab/pipeline.hpp"

using namespace chab;

namespace {

const ProblemConfig& config() {
    static const ProblemConfig cfg = load_config(std::string(CHAB_DATA_DIR) + "/paper_config.json");
    return cfg;
}

FqCurve reduced(const char* id, long p) {
    const auto& cfg = config();
    const PrimeOfK P = splitting_type(cfg.F, p).at(0);
    return reduce_curve(cfg.curve(id).C, P, FqCtx::residue_field(cfg.F, P).get());
}

void BM_count_points_serial(benchmark::State& st) {
    FqCurve C = reduced("C1", 131);
    for (auto _ : st) benchmark::DoNotOptimize(count_points_serial(C));
}
void BM_count_points_omp(benchmark::State& st) {
    FqCurve C = reduced("C1", 131);
    for (auto _ : st) benchmark::DoNotOptimize(count_points(C));
}

struct DlogFixture {
    JacobianGroup G;
    std::vector<FqDiv> Ds;
    DlogFixture() : G(JacobianGroup::of_curve(reduced("C1", 859))) {
        std::mt19937_64 rng(1);
        for (int i = 0; i < 256; ++i) Ds.push_back(random_divisor(G.curve(), rng));
        G.prepare(Ds.size());
    }
};

DlogFixture& dlog_fixture() {
    static DlogFixture f;
    return f;
}

void BM_dlog_batch_serial(benchmark::State& st) {
    auto& f = dlog_fixture();
    for (auto _ : st) benchmark::DoNotOptimize(f.G.dlog_batch_serial(f.Ds));
}
void BM_dlog_batch_omp(benchmark::State& st) {
    auto& f = dlog_fixture();
    for (auto _ : st) benchmark::DoNotOptimize(f.G.dlog_batch(f.Ds));
}

SieveInput sieve_input() {
    const auto& cc = config().curve("C3");
    SieveInput in{cc.C, cc.gens, cc.N, cc.sieve_primes, {}, std::nullopt};
    for (const auto& k : cc.known) in.known.push_back(k.P);
    return in;
}

void BM_sieve_classes(benchmark::State& st) {
    static const SieveContext ctx = build_context(sieve_input());
    SieveOptions opt;
    opt.parallel = st.range(0) != 0;
    const auto& classes = ctx.tables[0].classes();
    const int n = int(classes.size());
    for (auto _ : st) {
        std::vector<ClassOutcome> out(n);
        if (opt.parallel) {
#pragma omp parallel for schedule(dynamic, 1)
            for (int i = 0; i < n; ++i) out[i] = sieve_class(ctx, classes[i], opt);
        } else {
            for (int i = 0; i < n; ++i) out[i] = sieve_class(ctx, classes[i], opt);
        }
        benchmark::DoNotOptimize(out);
    }
}

}  // namespace

BENCHMARK(BM_count_points_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_count_points_omp)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_dlog_batch_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_dlog_batch_omp)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_sieve_classes)->Arg(0)->Arg(1)->ArgNames({"parallel"})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
