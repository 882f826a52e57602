#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <fstream>

#include "lukas/trainer.hpp"
#include "lukas/truth_table.hpp"

using namespace lukas;

namespace {

TrainData grid_data(const Formula& f, const std::vector<std::string>& vars,
                    long n) {
  TruthTable t = table_over(f, vars, n);
  TrainData data;
  data.input_names = vars;
  data.output_names = {"t"};
  for (size_t i = 0; i < t.entries.size(); ++i) {
    std::vector<double> x;
    for (long p : t.point(i)) x.push_back(double(p) / double(n));
    data.xs.push_back(std::move(x));
    data.ys.push_back({double(t.entries[i]) / double(n)});
  }
  return data;
}

}  // namespace

TEST_CASE("config parsing: key=value lines and the topology schedule") {
  TrainConfig cfg;
  cfg.set("n", "2");
  cfg.set("seed", "7");
  cfg.set("tau", "0.9");
  cfg.set("restarts", "3");
  cfg.set("topology_schedule", "2;4;4,2;6,3");
  cfg.set("max_epochs", "100");
  CHECK(cfg.n == 2);
  CHECK(cfg.seed == 7);
  CHECK(cfg.tau == doctest::Approx(0.9));
  CHECK(cfg.restarts_for(10) == 3);
  REQUIRE(cfg.topology_schedule.size() == 4);
  CHECK(cfg.topology_schedule[2] == std::vector<int>{4, 2});
  CHECK_THROWS_AS(cfg.set("banana", "1"), error);

  TrainConfig dflt;
  CHECK(dflt.restarts_for(3) == 11);  // 5 + 2 * inputs

  std::string path = "train_cfg_test.tmp";
  {
    std::ofstream out(path);
    out << "# comment\nn = 4\ntau=0.97\n\ntopology_schedule = 3;5,2\n";
  }
  TrainConfig loaded = TrainConfig::load(path);
  std::remove(path.c_str());
  CHECK(loaded.n == 4);
  CHECK(loaded.tau == doctest::Approx(0.97));
  REQUIRE(loaded.topology_schedule.size() == 2);
  CHECK(loaded.topology_schedule[1] == std::vector<int>{5, 2});
}

TEST_CASE("training rows are selected by output column names") {
  Dataset d;
  d.attributes = {"a", "b", "t"};
  d.n = 4;
  d.keys = {"k0", "k1"};
  d.rows = {{TruthValue(1, 4), TruthValue(2, 4), TruthValue(3, 4)},
            {TruthValue(0, 4), TruthValue(4, 4), TruthValue(2, 4)}};
  TrainData data = make_train_data(d, {"t"});
  CHECK(data.input_names == std::vector<std::string>{"a", "b"});
  CHECK(data.output_names == std::vector<std::string>{"t"});
  CHECK(data.xs[1] == std::vector<double>{0.0, 1.0});
  CHECK(data.ys[0] == std::vector<double>{0.75});
  CHECK_THROWS_AS(make_train_data(d, {"missing"}), error);
}

TEST_CASE("data similarity is 1 exactly on a perfect fit") {
  Formula f = parse_formula("x * y");
  TrainData data = grid_data(f, {"x", "y"}, 4);
  CastroNetwork net;
  net.input_names = {"x", "y"};
  CastroNetwork::Layer l;
  l.weights = Eigen::MatrixXd(1, 2);
  l.weights << 1, 1;
  l.biases = Eigen::VectorXd(1);
  l.biases << -1;
  net.layers = {l};
  net.crisp = true;
  CHECK(data_similarity(net, data) == doctest::Approx(1.0));
  CHECK(data_similarity(f, data, 4) == doctest::Approx(1.0));
  CHECK(data_similarity(parse_formula("x + y"), data, 4) < 1.0);
}

TEST_CASE("a damped step from a near-solution reduces the error") {
  TrainData data = grid_data(parse_formula("x"), {"x"}, 4);
  CastroNetwork net;
  net.input_names = {"x"};
  CastroNetwork::Layer l;
  l.weights = Eigen::MatrixXd(1, 1);
  l.weights << 0.6;
  l.biases = Eigen::VectorXd(1);
  l.biases << 0.05;
  net.layers = {l};
  double before = network_sse(net, data.xs, data.ys);
  LmResult r = lm_step(net, data, 0.01);
  CHECK(r.accepted);
  CHECK(r.sse < before);
}

TEST_CASE("pruning removes a redundant duplicated feature") {
  // two identical input columns; the trained weights split between them
  TrainData data;
  data.input_names = {"x", "x_copy"};
  data.output_names = {"t"};
  for (int i = 0; i <= 4; ++i) {
    double v = i / 4.0;
    data.xs.push_back({v, v});
    data.ys.push_back({v});
  }
  CastroNetwork net;
  net.input_names = data.input_names;
  CastroNetwork::Layer l;
  l.weights = Eigen::MatrixXd(1, 2);
  l.weights << 0.5, 0.5;
  l.biases = Eigen::VectorXd(1);
  l.biases << 0.0;
  net.layers = {l};

  CastroNetwork pruned = obs_prune(net, data, 1e-6);
  int zeros = int(pruned.layers[0].weights.cwiseAbs().array().count()) ;
  // exactly one of the two weights survives, compensated to ~1
  CHECK((pruned.layers[0].weights.array() == 0.0).count() == 1);
  CHECK(network_sse(pruned, data.xs, data.ys) ==
        doctest::Approx(0.0).epsilon(1e-6));
  (void)zeros;
}

TEST_CASE("training a two-input conjunction converges") {
  TrainData data = grid_data(parse_formula("x * y"), {"x", "y"}, 4);
  TrainConfig cfg;
  cfg.seed = 42;
  cfg.restarts = 4;
  cfg.max_epochs = 200;
  TrainReport report;
  CastroNetwork net = train({2}, data, cfg, &report);
  CHECK(data_similarity(net, data) > 0.95);
  CHECK(report.epochs > 0);
  CHECK(report.restarts > 0);
}

TEST_CASE("full extraction recovers a small formula exactly") {
  TrainData data = grid_data(parse_formula("x * ~y"), {"x", "y"}, 4);
  TrainConfig cfg;
  cfg.seed = 42;
  cfg.tau = 0.999;
  ExtractionResult r = reverse_engineer(data, cfg);
  CHECK(r.lambda == doctest::Approx(1.0));
  CHECK(table_over(r.formula, {"x", "y"}, 4).entries ==
        table_over(parse_formula("x * ~y"), {"x", "y"}, 4).entries);
  CHECK(!r.report.stages.empty());
}

TEST_CASE("reports serialize to text and json") {
  TrainData data = grid_data(parse_formula("x + y"), {"x", "y"}, 2);
  TrainConfig cfg;
  cfg.seed = 42;
  cfg.tau = 0.999;
  ExtractionResult r = reverse_engineer(data, cfg);
  std::string text = r.report.to_text();
  CHECK(text.find("lambda") != std::string::npos);
  auto j = nlohmann::json::parse(r.report.to_json());
  CHECK(j.contains("lambda_formula"));
  CHECK(j["formula"].get<std::string>() == r.report.formula.to_string());
}
