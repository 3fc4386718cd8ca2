#include <benchmark/benchmark.h>

#include <random>

#include "takiff/dynamics.hpp"
#include "takiff/jet.hpp"
#include "takiff/phase.hpp"
#include "takiff/solutions.hpp"

using namespace takiff;

namespace
{

Jet random_jet(std::size_t order, std::mt19937_64 &gen)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Jet j(order);
    for (std::size_t k = 0; k <= order; ++k) {
        j[k] = u(gen);
    }
    j[0] = 1.0 + 0.5 * std::abs(j[0]);
    return j;
}

PhaseState random_state(const RootData &rd, int order, std::mt19937_64 &gen)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    PhaseState ps = PhaseState::zero(rd, order);
    for (Eigen::Index i = 0; i < ps.q.size(); ++i) {
        ps.q(i) = u(gen);
        ps.p(i) = u(gen);
    }
    return ps;
}

void BM_JetMul(benchmark::State &state)
{
    std::mt19937_64 gen(1);
    const auto order = static_cast<std::size_t>(state.range(0));
    const Jet a = random_jet(order, gen), b = random_jet(order, gen);
    for (auto _ : state) {
        benchmark::DoNotOptimize(a * b);
    }
}
BENCHMARK(BM_JetMul)->Arg(2)->Arg(8)->Arg(32);

void BM_JetExp(benchmark::State &state)
{
    std::mt19937_64 gen(2);
    const Jet a = random_jet(static_cast<std::size_t>(state.range(0)), gen);
    for (auto _ : state) {
        benchmark::DoNotOptimize(exp(a));
    }
}
BENCHMARK(BM_JetExp)->Arg(2)->Arg(8)->Arg(32);

void BM_JetInvSqrtLog(benchmark::State &state)
{
    std::mt19937_64 gen(3);
    const Jet a = random_jet(static_cast<std::size_t>(state.range(0)), gen);
    for (auto _ : state) {
        benchmark::DoNotOptimize(log_unit(sqrt_unit(inv(a))));
    }
}
BENCHMARK(BM_JetInvSqrtLog)->Arg(2)->Arg(8)->Arg(32);

void BM_Rk4Step(benchmark::State &state)
{
    std::mt19937_64 gen(4);
    const RootData rd = type_a(static_cast<int>(state.range(0)));
    PhaseState ps = random_state(rd, static_cast<int>(state.range(1)), gen);
    for (auto _ : state) {
        benchmark::DoNotOptimize(step(ps, rd, 1e-3, Scheme::rk4));
    }
}
BENCHMARK(BM_Rk4Step)->Args({1, 2})->Args({2, 2})->Args({3, 3});

void BM_ConservedFamily(benchmark::State &state)
{
    std::mt19937_64 gen(5);
    const RootData rd = type_a(static_cast<int>(state.range(0)));
    const int order = static_cast<int>(state.range(1));
    const CoeffState cs = to_coeff(random_state(rd, order, gen), rd);
    const auto family = conserved_family(rd, order);
    for (auto _ : state) {
        double sum = 0.0;
        for (const auto &idx : family) {
            sum += conserved(cs, rd, idx.k, idx.degree);
        }
        benchmark::DoNotOptimize(sum);
    }
}
BENCHMARK(BM_ConservedFamily)->Args({1, 2})->Args({2, 2})->Args({3, 4});

void BM_TypeAJetLift(benchmark::State &state)
{
    std::mt19937_64 gen(6);
    const RootData rd = type_a(static_cast<int>(state.range(0)));
    const BaseSolution base = type_a_base_solution(rd);
    const PhaseState ps = random_state(rd, 2, gen);
    for (auto _ : state) {
        benchmark::DoNotOptimize(jet_lift(base, ps.q, ps.p, 1.0));
    }
}
BENCHMARK(BM_TypeAJetLift)->Arg(1)->Arg(2)->Arg(3);

} // namespace

BENCHMARK_MAIN();
