#include <benchmark/benchmark.h>

#include <random>

#include "lukas/automaton.hpp"
#include "lukas/neuron.hpp"
#include "lukas/trainer.hpp"
#include "lukas/truth_table.hpp"

using namespace lukas;

namespace {

const std::string kData = LUKAS_DATA_DIR;

void bm_truth_table(benchmark::State& state) {
  Formula f = parse_formula("(x1 * ~x2 + x3) -> (x4 + ~x1) * x5");
  long n = state.range(0);
  for (auto _ : state) {
    TruthTable t = truth_subtable(f, n);
    benchmark::DoNotOptimize(t.entries.data());
  }
  state.SetItemsProcessed(
      int64_t(state.iterations()) *
      int64_t(std::pow(double(n + 1), 5)));
}

void bm_word_sweep(benchmark::State& state) {
  OmegaAutomaton aut = load_automaton(kData + "/binary.aut", 4);
  auto words = enumerate_words(4, 6);  // 15625 words
  int jobs = int(state.range(0));
  for (auto _ : state) {
    Dataset d = io_dataset(aut, words, "a", jobs);
    benchmark::DoNotOptimize(d.rows.data());
  }
  state.SetItemsProcessed(int64_t(state.iterations()) * int64_t(words.size()));
}

void bm_lm_step(benchmark::State& state) {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> u(0, 1);
  TrainData data;
  data.input_names = {"x", "y", "z"};
  data.output_names = {"t"};
  for (int i = 0; i < 125; ++i) {
    double x = u(rng), y = u(rng), z = u(rng);
    data.xs.push_back({x, y, z});
    data.ys.push_back({std::min(1.0, x + std::max(0.0, y + z - 1))});
  }
  int hidden = int(state.range(0));
  CastroNetwork net;
  net.input_names = data.input_names;
  CastroNetwork::Layer l1, l2;
  l1.weights = Eigen::MatrixXd::Random(hidden, 3);
  l1.biases = Eigen::VectorXd::Random(hidden);
  l2.weights = Eigen::MatrixXd::Random(1, hidden);
  l2.biases = Eigen::VectorXd::Random(1);
  net.layers = {l1, l2};
  for (auto _ : state) {
    LmResult r = lm_step(net, data, 0.01);
    benchmark::DoNotOptimize(r.sse);
  }
}

void bm_rule_r(benchmark::State& state) {
  NeuronConfig cfg({"x1", "x2", "x3", "x4"}, {-1, 1, 1, -1}, 0);
  long n = state.range(0);
  for (auto _ : state) {
    auto expansions = rule_r_expansions(cfg, n);
    benchmark::DoNotOptimize(expansions.size());
  }
}

BENCHMARK(bm_truth_table)->Arg(2)->Arg(4)->Arg(6);
BENCHMARK(bm_word_sweep)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_lm_step)->Arg(4)->Arg(8);
BENCHMARK(bm_rule_r)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
