#include <benchmark/benchmark.h>

#include <tsopt/circuit.hpp>
#include <tsopt/random.hpp>
#include <tsopt/symmetry.hpp>

using namespace tsopt;

namespace {

// Prep -> n_mid two-outcome channels -> measurement, all on one qubit wire.
Circuit chain_circuit(int n_mid, Rng& rng) {
    std::vector<SystemLabel> systems;
    std::vector<CircuitNode> nodes;
    std::vector<CircuitWire> wires;

    systems.push_back({"w0", 2});
    Matrix rho = random_density(2, rng);
    nodes.push_back({"prep", {}, {"w0"}, make_preparation({rho})});

    for (int i = 0; i < n_mid; ++i) {
        std::string in = "w" + std::to_string(i);
        std::string out = "w" + std::to_string(i + 1);
        systems.push_back({out, 2});
        CPMap m = random_channel(2, 2, 2, rng);
        // Split the channel into two single-Kraus outcomes.
        GeneralizedOperation op({CPMap({m.kraus()[0]}, 2, 2), CPMap({m.kraus()[1]}, 2, 2)});
        nodes.push_back({"t" + std::to_string(i), {in}, {out}, op});
        wires.push_back({i, 0, i + 1, 0});
    }

    std::string last = "w" + std::to_string(n_mid);
    nodes.push_back({"meas", {last}, {}, make_measurement(random_povm(2, 2, rng))});
    wires.push_back({n_mid, 0, n_mid + 1, 0});
    return Circuit(std::move(systems), std::move(nodes), std::move(wires));
}

void bm_evaluate_chain(benchmark::State& state) {
    Rng rng(17);
    Circuit c = chain_circuit(static_cast<int>(state.range(0)), rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(evaluate(c));
    }
}
BENCHMARK(bm_evaluate_chain)->Arg(2)->Arg(4)->Arg(6);

void bm_kraus_choi_round_trip(benchmark::State& state) {
    Rng rng(18);
    Index d = state.range(0);
    CPMap m = random_channel(d, d, 3, rng);
    for (auto _ : state) {
        Matrix choi = m.choi();
        benchmark::DoNotOptimize(choi_to_kraus(choi, d, d));
    }
}
BENCHMARK(bm_kraus_choi_round_trip)->Arg(2)->Arg(4)->Arg(8);

void bm_reverse_circuit(benchmark::State& state) {
    Rng rng(19);
    Circuit c = chain_circuit(3, rng);
    SymmetryTransform t(SymmetryKind::TypeII, true, {{2, Matrix::Identity(2, 2)}}, {}, true);
    for (auto _ : state) {
        benchmark::DoNotOptimize(reverse_circuit(c, t));
    }
}
BENCHMARK(bm_reverse_circuit);

}  // namespace

BENCHMARK_MAIN();
