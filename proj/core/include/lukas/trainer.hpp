#pragma once

#include <string>
#include <vector>

#include "lukas/crystallize.hpp"
#include "lukas/dataset.hpp"
#include "lukas/formula.hpp"
#include "lukas/network.hpp"

namespace lukas {

struct TrainConfig {
  long n = 4;               // logic resolution: values live in S_n
  unsigned long seed = 42;
  double tau = 0.95;        // acceptance threshold on data similarity
  int restarts = -1;        // -1 means 5 + 2 * input count
  std::vector<std::vector<int>> topology_schedule = {{2}, {4}, {4, 2}, {6, 3}};
  double mu_init = 0.01;
  double mu_factor = 10.0;
  double mu_max = 1e10;
  int max_epochs = 500;
  int crystallization_exponent = 2;
  double obs_tolerance = 1e-6;  // allowed SSE increase per pruned weight
  double sse_tolerance = 1e-9;  // early-stop on training error

  int restarts_for(size_t input_count) const {
    return restarts >= 0 ? restarts : int(5 + 2 * input_count);
  }

  /// key=value text, one entry per line, '#' comments.
  static TrainConfig load(const std::string& path);
  void set(const std::string& key, const std::string& value);
};

struct TrainReport {
  double lambda_raw = 0;      // trained net vs data
  double lambda_crisp = 0;    // after crisp crystallization
  double lambda_pruned = 0;   // after pruning + re-crystallization
  double lambda_formula = 0;  // extracted formula vs data
  int epochs = 0;
  int restarts = 0;
  std::vector<std::string> stages;
  Formula formula;

  std::string to_text() const;
  std::string to_json() const;
};

/// Rows for supervised training; all values expected in S_n.
struct TrainData {
  std::vector<std::string> input_names;
  std::vector<std::string> output_names;
  std::vector<std::vector<double>> xs;
  std::vector<std::vector<double>> ys;
};

/// Column selection from a keyed table: `outputs` become targets, the
/// remaining attributes the inputs.
TrainData make_train_data(const Dataset& d,
                          const std::vector<std::string>& outputs);

/// Mean-absolute-error exponential similarity of the network's
/// predictions against the targets.
double data_similarity(const CastroNetwork& net, const TrainData& data);
double data_similarity(const Formula& f, const TrainData& data, long n);

struct LmResult {
  CastroNetwork net;
  double sse;
  bool accepted;
};

/// One damped Gauss-Newton update followed by soft crystallization;
/// accepted only when the SSE decreases.
LmResult lm_step(const CastroNetwork& net, const TrainData& data, double mu,
                 int crystallization_exponent = 2);

/// Trains one topology (hidden widths + linear output layer) across
/// deterministic restarts; returns the best network by data similarity.
CastroNetwork train(const std::vector<int>& hidden, const TrainData& data,
                    const TrainConfig& cfg, TrainReport* report = nullptr);

/// Optimal-brain-surgeon pruning of minimum-saliency weights while the
/// SSE increase per step stays within tolerance.
CastroNetwork obs_prune(const CastroNetwork& net, const TrainData& data,
                        double tolerance);

struct ExtractionResult {
  Formula formula;
  double lambda = 0;
  TrainReport report;
};

/// Full pipeline: train with soft crystallization, escalate topology on
/// failure, crisp-crystallize, prune, approximate and translate.
ExtractionResult reverse_engineer(const TrainData& data,
                                  const TrainConfig& cfg);

}  // namespace lukas
