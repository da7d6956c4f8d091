// Microbenchmarks for the hot paths: the flow vector field at both ends
// of the metric family, the loop-space gradient, level-set sampling,
// the exact regularity analyzer, and the cylinder Neumann solve.

#include <cmath>
#include <complex>

#include <benchmark/benchmark.h>

#include <Eigen/Core>

#include "vortex/approx.hpp"
#include "vortex/cylinder.hpp"
#include "vortex/flow.hpp"
#include "vortex/fourier.hpp"
#include "vortex/loopspace.hpp"
#include "vortex/rng.hpp"
#include "vortex/toric.hpp"

namespace {

using namespace vortex;

ApproxSpace projective_space(int band_hi) {
    Eigen::MatrixXi weights(3, 1);
    weights << 1, 1, 1;
    Eigen::VectorXd tau(1);
    tau << 1.0;
    const TorusAction action = TorusAction::create(weights, tau);
    std::vector<Band> bands(3, Band{0, band_hi});
    return build(action, bands);
}

FlowState random_state(const ApproxSpace& space, std::uint64_t seed) {
    Rng rng(seed);
    FlowState st;
    st.c.resize(space.N);
    for (int l = 0; l < space.N; ++l)
        st.c(l) = std::complex<double>(rng.normal(), rng.normal()) * 0.4;
    st.eta = Eigen::VectorXd::Zero(space.k());
    for (int a = 0; a < space.k(); ++a)
        st.eta(a) = rng.normal() * 0.3;
    return st;
}

void bm_vector_field(benchmark::State& state) {
    const ApproxSpace space = projective_space(static_cast<int>(state.range(0)));
    const FlowState st = random_state(space, 42);
    const double r = state.range(1) == 0 ? 0.0 : 1.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(vector_field(space, st, r));
    }
}
BENCHMARK(bm_vector_field)->Args({2, 0})->Args({2, 1})->Args({8, 0})->Args({8, 1});

void bm_grad(benchmark::State& state) {
    const ApproxSpace space = projective_space(static_cast<int>(state.range(0)));
    const FlowState st = random_state(space, 43);
    const LoopPoint p = LoopPoint::coulomb(embed(space, st.c), st.eta);
    for (auto _ : state) {
        benchmark::DoNotOptimize(grad(space.action, p, 1.0));
    }
}
BENCHMARK(bm_grad)->Arg(2)->Arg(8);

void bm_sample_level_set(benchmark::State& state) {
    const ApproxSpace space = projective_space(2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sample_level_set(space, 10, 7, 1));
    }
}
BENCHMARK(bm_sample_level_set);

void bm_classify_value(benchmark::State& state) {
    Eigen::MatrixXi weights(4, 2);
    weights << 1, 0, 0, 1, 1, 1, 2, 1;
    RationalVector tau = {Rational(3), Rational(2)};
    const TorusAction action = TorusAction::create_exact(weights, tau);
    for (auto _ : state) {
        benchmark::DoNotOptimize(classify_value(action));
    }
}
BENCHMARK(bm_classify_value);

void bm_solve_neumann(benchmark::State& state) {
    NeumannOptions opts;
    opts.resolution = static_cast<int>(state.range(0));
    const int ns = resolve_resolution(opts);
    const int nt = 32;
    const SCollocation sc = make_collocation(1.0, opts.backend, ns);
    CylinderField h;
    h.values = Eigen::MatrixXd::Zero(ns, nt);
    Eigen::VectorXd gp(nt), gm(nt);
    const double w = kTwoPi;
    for (int p = 0; p < nt; ++p) {
        gp(p) = w * std::sinh(w) * std::cos(w * p / nt);
        gm(p) = gp(p);
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_neumann(h, gp, gm, opts));
    }
}
BENCHMARK(bm_solve_neumann)->Arg(33)->Arg(49)->Arg(65);

} // namespace

BENCHMARK_MAIN();
