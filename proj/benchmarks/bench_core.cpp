#include <benchmark/benchmark.h>

#include "sqc/circuit.hpp"
#include "sqc/rng.hpp"
#include "sqc/simulation.hpp"
#include "sqc/training.hpp"

using namespace sqc;

namespace {

const ArchitectureSpec& paper_arch() {
    static const ArchitectureSpec arch = ArchitectureSpec::blocks(
        15, {LayerKind::X, LayerKind::Z, LayerKind::XXAxial, LayerKind::ZZDiag});
    return arch;
}

std::vector<double> random_theta(size_t n, uint64_t seed) {
    Rng rng(seed);
    std::vector<double> theta(n);
    for (double& t : theta) t = rng.uniform(-3.1, 3.1);
    return theta;
}

Field16 sample_field() {
    return embed_populations(equilibrium(1.0, {0.004, -0.002}));
}

void bm_bgk_collide(benchmark::State& state) {
    const Populations f = equilibrium(1.0, {0.004, -0.002});
    for (auto _ : state) {
        benchmark::DoNotOptimize(bgk_collide(f, 1.0));
    }
}
BENCHMARK(bm_bgk_collide);

void bm_forward_15_blocks(benchmark::State& state) {
    const auto theta = random_theta(paper_arch().n_params(), 1);
    const EncodeResult enc = encode(sample_field());
    for (auto _ : state) {
        StateVector s = enc.state;
        forward(paper_arch(), theta, s);
        benchmark::DoNotOptimize(s);
    }
}
BENCHMARK(bm_forward_15_blocks);

void bm_collide_sqc_15_blocks(benchmark::State& state) {
    const auto theta = random_theta(paper_arch().n_params(), 2);
    const Field16 f = sample_field();
    for (auto _ : state) {
        benchmark::DoNotOptimize(collide_sqc(paper_arch(), theta, f));
    }
}
BENCHMARK(bm_collide_sqc_15_blocks);

void bm_loss_gradient_batch5(benchmark::State& state) {
    const auto theta = random_theta(paper_arch().n_params(), 3);
    Rng rng(4);
    std::vector<Sample16> batch;
    for (int b = 0; b < 5; ++b) {
        Populations pre = equilibrium(rng.uniform(0.95, 1.05),
                                      {rng.uniform(-0.01, 0.01), rng.uniform(-0.01, 0.01)});
        batch.push_back({embed_populations(pre),
                         embed_populations(bgk_collide(pre, 1.0))});
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(loss_gradient(paper_arch(), theta, batch, 0.5));
    }
}
BENCHMARK(bm_loss_gradient_batch5);

void bm_step_bgk_64(benchmark::State& state) {
    Grid grid = init_taylor_green(64, 64, 0.01);
    BgkCollision op(1.0);
    for (auto _ : state) {
        step(grid, op);
    }
}
BENCHMARK(bm_step_bgk_64);

void bm_step_sqc_64(benchmark::State& state) {
    Grid grid = init_taylor_green(64, 64, 0.01);
    SqcOperator op{paper_arch(), random_theta(paper_arch().n_params(), 5)};
    SqcCollision collision(op);
    const int threads = static_cast<int>(state.range(0));
    for (auto _ : state) {
        step(grid, collision, 0.0, threads);
    }
}
BENCHMARK(bm_step_sqc_64)->Arg(1)->Arg(4);

}  // namespace

BENCHMARK_MAIN();
