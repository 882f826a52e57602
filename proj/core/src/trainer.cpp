#include "lukas/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "lukas/translate.hpp"

namespace lukas {

// ----------------------------------------------------------- config

void TrainConfig::set(const std::string& key, const std::string& value) {
  if (key == "n") n = std::stol(value);
  else if (key == "seed") seed = std::stoul(value);
  else if (key == "tau") tau = std::stod(value);
  else if (key == "restarts") restarts = std::stoi(value);
  else if (key == "mu_init") mu_init = std::stod(value);
  else if (key == "mu_factor") mu_factor = std::stod(value);
  else if (key == "mu_max") mu_max = std::stod(value);
  else if (key == "max_epochs") max_epochs = std::stoi(value);
  else if (key == "crystallization_exponent")
    crystallization_exponent = std::stoi(value);
  else if (key == "obs_tolerance") obs_tolerance = std::stod(value);
  else if (key == "sse_tolerance") sse_tolerance = std::stod(value);
  else if (key == "topology_schedule") {
    // e.g. "2;4;4,2;6,3" — stages separated by ';', widths by ','.
    topology_schedule.clear();
    std::istringstream stages(value);
    std::string stage;
    while (std::getline(stages, stage, ';')) {
      std::vector<int> widths;
      std::istringstream ws(stage);
      std::string w;
      while (std::getline(ws, w, ','))
        if (!w.empty()) widths.push_back(std::stoi(w));
      topology_schedule.push_back(widths);
    }
  } else {
    throw error("unknown training option '" + key + "'");
  }
}

TrainConfig TrainConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open '" + path + "'");
  TrainConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t a = line.find_first_not_of(" \t\r");
    if (a == std::string::npos || line[a] == '#') continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw io_error(path + ":" + std::to_string(lineno) +
                     ": expected key=value");
    auto trim = [](std::string s) {
      size_t b = s.find_first_not_of(" \t\r");
      size_t e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string()
                                    : s.substr(b, e - b + 1);
    };
    cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

// ----------------------------------------------------------- report

std::string TrainReport::to_text() const {
  std::ostringstream out;
  out << "formula: " << formula.to_string() << "\n"
      << "lambda(trained net vs data):   " << lambda_raw << "\n"
      << "lambda(crisp net vs data):     " << lambda_crisp << "\n"
      << "lambda(pruned net vs data):    " << lambda_pruned << "\n"
      << "lambda(formula vs data):       " << lambda_formula << "\n"
      << "epochs: " << epochs << ", restarts: " << restarts << "\n";
  for (const auto& s : stages) out << "  " << s << "\n";
  return out.str();
}

std::string TrainReport::to_json() const {
  nlohmann::json j;
  j["formula"] = formula.to_string();
  j["lambda_raw"] = lambda_raw;
  j["lambda_crisp"] = lambda_crisp;
  j["lambda_pruned"] = lambda_pruned;
  j["lambda_formula"] = lambda_formula;
  j["epochs"] = epochs;
  j["restarts"] = restarts;
  j["stages"] = stages;
  return j.dump(2);
}

// ------------------------------------------------------------- data

TrainData make_train_data(const Dataset& d,
                          const std::vector<std::string>& outputs) {
  std::set<std::string> out_set(outputs.begin(), outputs.end());
  for (const auto& o : outputs) d.column(o);  // validate names
  TrainData t;
  for (const auto& a : d.attributes)
    if (!out_set.count(a)) t.input_names.push_back(a);
  t.output_names = outputs;
  for (const auto& row : d.rows) {
    std::vector<double> x, y;
    for (size_t c = 0; c < d.attributes.size(); ++c)
      if (!out_set.count(d.attributes[c])) x.push_back(row[c].to_double());
    for (const auto& o : outputs) y.push_back(row[d.column(o)].to_double());
    t.xs.push_back(std::move(x));
    t.ys.push_back(std::move(y));
  }
  return t;
}

double data_similarity(const CastroNetwork& net, const TrainData& data) {
  double total = 0;
  size_t count = 0;
  for (size_t i = 0; i < data.xs.size(); ++i) {
    auto out = net.forward(data.xs[i]);
    for (size_t k = 0; k < out.size(); ++k) {
      total += std::abs(out[k] - data.ys[i][k]);
      ++count;
    }
  }
  if (count == 0) return 1.0;
  return total == 0 ? 1.0 : std::exp(-total / double(count));
}

double data_similarity(const Formula& f, const TrainData& data, long n) {
  double total = 0;
  for (size_t i = 0; i < data.xs.size(); ++i) {
    std::map<std::string, TruthValue> assign;
    for (size_t v = 0; v < data.input_names.size(); ++v)
      assign.emplace(data.input_names[v],
                     TruthValue(std::lround(data.xs[i][v] * double(n)), n));
    double pred = f.eval(assign).to_double();
    total += std::abs(pred - data.ys[i][0]);
  }
  if (data.xs.empty()) return 1.0;
  return total == 0 ? 1.0 : std::exp(-total / double(data.xs.size()));
}

// -------------------------------------------------- parameter vector

namespace {

long param_count(const CastroNetwork& net) {
  long p = 0;
  for (const auto& l : net.layers)
    p += l.weights.rows() * l.weights.cols() + l.biases.size();
  return p;
}

Eigen::VectorXd flatten(const CastroNetwork& net) {
  Eigen::VectorXd p(param_count(net));
  long at = 0;
  for (const auto& l : net.layers) {
    for (long r = 0; r < l.weights.rows(); ++r)
      for (long c = 0; c < l.weights.cols(); ++c) p(at++) = l.weights(r, c);
    for (long r = 0; r < l.biases.size(); ++r) p(at++) = l.biases(r);
  }
  return p;
}

CastroNetwork unflatten(const CastroNetwork& shape, const Eigen::VectorXd& p) {
  CastroNetwork net = shape;
  net.crisp = false;
  long at = 0;
  for (auto& l : net.layers) {
    for (long r = 0; r < l.weights.rows(); ++r)
      for (long c = 0; c < l.weights.cols(); ++c) l.weights(r, c) = p(at++);
    for (long r = 0; r < l.biases.size(); ++r) l.biases(r) = p(at++);
  }
  return net;
}

// Indices of weight entries (excluding biases) in the flat vector.
std::vector<long> weight_indices(const CastroNetwork& net) {
  std::vector<long> idx;
  long at = 0;
  for (const auto& l : net.layers) {
    for (long k = 0; k < l.weights.rows() * l.weights.cols(); ++k)
      idx.push_back(at + k);
    at += l.weights.rows() * l.weights.cols() + l.biases.size();
  }
  return idx;
}

double act_derivative(double z) { return z >= 0.0 && z <= 1.0 ? 1.0 : 0.0; }

/// Jacobian of all outputs over all rows w.r.t. the flat parameters,
/// and the error vector out - y in the same row order.
void jacobian(const CastroNetwork& net, const TrainData& data,
              Eigen::MatrixXd& J, Eigen::VectorXd& e) {
  size_t L = net.layers.size();
  size_t K = net.output_arity();
  long P = param_count(net);
  long rows = long(data.xs.size() * K);
  J.setZero(rows, P);
  e.resize(rows);

  // Flat offsets of each layer's weight block and bias block.
  std::vector<long> w_off(L), b_off(L);
  long at = 0;
  for (size_t l = 0; l < L; ++l) {
    w_off[l] = at;
    at += net.layers[l].weights.rows() * net.layers[l].weights.cols();
    b_off[l] = at;
    at += net.layers[l].biases.size();
  }

  std::vector<Eigen::VectorXd> a(L + 1), z(L);
  for (size_t i = 0; i < data.xs.size(); ++i) {
    a[0] = Eigen::Map<const Eigen::VectorXd>(data.xs[i].data(),
                                             long(data.xs[i].size()));
    for (size_t l = 0; l < L; ++l) {
      z[l] = net.layers[l].weights * a[l] + net.layers[l].biases;
      a[l + 1] = z[l].unaryExpr([](double t) { return truncate01(t); });
    }
    for (size_t k = 0; k < K; ++k) {
      long row = long(i * K + k);
      e(row) = a[L](long(k)) - data.ys[i][k];
      Eigen::VectorXd delta = Eigen::VectorXd::Zero(long(K));
      delta(long(k)) = act_derivative(z[L - 1](long(k)));
      for (size_t l = L; l-- > 0;) {
        const auto& layer = net.layers[l];
        long nr = layer.weights.rows(), nc = layer.weights.cols();
        for (long r = 0; r < nr; ++r) {
          if (delta(r) == 0.0) continue;
          for (long c = 0; c < nc; ++c)
            J(row, w_off[l] + r * nc + c) = delta(r) * a[l](c);
          J(row, b_off[l] + r) = delta(r);
        }
        if (l == 0) break;
        Eigen::VectorXd prev = layer.weights.transpose() * delta;
        for (long c = 0; c < nc; ++c) prev(c) *= act_derivative(z[l - 1](c));
        delta = std::move(prev);
      }
    }
  }
}

CastroNetwork crystallize_params(const CastroNetwork& shape,
                                 const Eigen::VectorXd& p, int exponent) {
  Eigen::VectorXd q = p;
  for (long i = 0; i < q.size(); ++i)
    q(i) = soft_crystallize(q(i), exponent);
  return unflatten(shape, q);
}

}  // namespace

LmResult lm_step(const CastroNetwork& net, const TrainData& data, double mu,
                 int crystallization_exponent) {
  if (data.xs.empty()) throw error("training data is empty");
  Eigen::MatrixXd J;
  Eigen::VectorXd e;
  jacobian(net, data, J, e);
  double sse_old = e.squaredNorm();

  Eigen::MatrixXd H = J.transpose() * J;
  Eigen::VectorXd g = J.transpose() * e;
  Eigen::MatrixXd A = H + mu * H.diagonal().asDiagonal().toDenseMatrix();
  Eigen::VectorXd step = A.ldlt().solve(-g);
  if (!step.allFinite()) {
    A += 1e-8 * Eigen::MatrixXd::Identity(A.rows(), A.cols());
    step = A.ldlt().solve(-g);
  }

  Eigen::VectorXd p = flatten(net) + step;
  CastroNetwork cand =
      crystallize_params(net, p, crystallization_exponent);
  double sse_new = network_sse(cand, data.xs, data.ys);
  if (sse_new < sse_old) return {std::move(cand), sse_new, true};
  return {net, sse_old, false};
}

CastroNetwork train(const std::vector<int>& hidden, const TrainData& data,
                    const TrainConfig& cfg, TrainReport* report) {
  if (data.xs.empty()) throw error("training data is empty");
  size_t inputs = data.input_names.size();
  size_t outputs = data.output_names.size();
  int restarts = cfg.restarts_for(inputs);

  CastroNetwork best;
  double best_lambda = -1;
  int best_epochs = 0;
  for (int restart = 0; restart < restarts; ++restart) {
    std::seed_seq seq{cfg.seed, (unsigned long)restart};
    std::mt19937 gen(seq);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);

    CastroNetwork net;
    net.input_names = data.input_names;
    long width = long(inputs);
    std::vector<long> widths;
    for (int h : hidden) widths.push_back(h);
    widths.push_back(long(outputs));
    for (long w : widths) {
      CastroNetwork::Layer l;
      l.weights = Eigen::MatrixXd::Zero(w, width);
      l.biases = Eigen::VectorXd::Zero(w);
      for (long r = 0; r < w; ++r) {
        for (long c = 0; c < width; ++c) l.weights(r, c) = dist(gen);
        l.biases(r) = dist(gen);
      }
      width = w;
      net.layers.push_back(std::move(l));
    }

    double mu = cfg.mu_init;
    double sse = network_sse(net, data.xs, data.ys);
    int epoch = 0;
    for (; epoch < cfg.max_epochs; ++epoch) {
      LmResult r = lm_step(net, data, mu, cfg.crystallization_exponent);
      if (r.accepted) {
        net = std::move(r.net);
        sse = r.sse;
        mu /= cfg.mu_factor;
        if (sse < cfg.sse_tolerance) break;
      } else {
        mu *= cfg.mu_factor;
        if (mu > cfg.mu_max) break;
      }
    }
    double lambda = data_similarity(net, data);
    if (lambda > best_lambda + 1e-15) {
      best = net;
      best_lambda = lambda;
      best_epochs = epoch;
    }
    if (report) report->restarts = restart + 1;
    if (best_lambda >= 1.0) break;  // nothing can beat an exact fit
  }
  if (report) report->epochs = best_epochs;
  return best;
}

CastroNetwork obs_prune(const CastroNetwork& net, const TrainData& data,
                        double tolerance) {
  CastroNetwork current = net;
  std::set<long> clamped;  // once pruned, a slot stays at zero
  for (;;) {
    Eigen::MatrixXd J;
    Eigen::VectorXd e;
    jacobian(current, data, J, e);
    double sse = e.squaredNorm();
    Eigen::MatrixXd H =
        J.transpose() * J +
        1e-8 * Eigen::MatrixXd::Identity(J.cols(), J.cols());
    Eigen::MatrixXd Hinv = H.inverse();
    Eigen::VectorXd p = flatten(current);

    long best_q = -1;
    double best_saliency = 0;
    for (long q : weight_indices(current)) {
      if (clamped.count(q)) continue;
      if (std::abs(p(q)) < 1e-12) continue;  // already zero
      double saliency = 0.5 * p(q) * p(q) / Hinv(q, q);
      if (best_q < 0 || saliency < best_saliency) {
        best_q = q;
        best_saliency = saliency;
      }
    }
    if (best_q < 0) break;

    Eigen::VectorXd adjusted =
        p - (p(best_q) / Hinv(best_q, best_q)) * Hinv.col(best_q);
    adjusted(best_q) = 0.0;  // prune exactly
    for (long q : clamped) adjusted(q) = 0.0;
    CastroNetwork cand = unflatten(current, adjusted);
    cand.crisp = false;
    double sse_new = network_sse(cand, data.xs, data.ys);
    if (sse_new - sse > tolerance) break;
    current = std::move(cand);
    clamped.insert(best_q);
  }
  return current;
}

ExtractionResult reverse_engineer(const TrainData& data,
                                  const TrainConfig& cfg) {
  if (data.output_names.size() != 1)
    throw error("extraction targets a single output attribute");
  ExtractionResult best;
  best.lambda = -1;
  for (const auto& topology : cfg.topology_schedule) {
    TrainReport report;
    std::ostringstream topo;
    for (size_t i = 0; i < topology.size(); ++i)
      topo << (i ? "," : "") << topology[i];
    CastroNetwork net = train(topology, data, cfg, &report);
    report.lambda_raw = data_similarity(net, data);

    CastroNetwork crisp = crisp_crystallize(net);
    report.lambda_crisp = data_similarity(crisp, data);

    CastroNetwork pruned =
        crisp_crystallize(obs_prune(crisp, data, cfg.obs_tolerance));
    report.lambda_pruned = data_similarity(pruned, data);
    const CastroNetwork& chosen =
        report.lambda_pruned >= report.lambda_crisp - 1e-12 ? pruned : crisp;

    Translation tr = network_to_formula(chosen, cfg.n, 0);
    report.formula = tr.formula;
    report.lambda_formula = data_similarity(tr.formula, data, cfg.n);
    report.stages.push_back(
        "topology [" + topo.str() + "]: raw " +
        std::to_string(report.lambda_raw) + ", crisp " +
        std::to_string(report.lambda_crisp) + ", pruned " +
        std::to_string(report.lambda_pruned) + ", formula " +
        std::to_string(report.lambda_formula));

    if (report.lambda_formula > best.lambda) {
      best.formula = report.formula;
      best.lambda = report.lambda_formula;
      best.report = report;
    }
    if (best.lambda >= cfg.tau) break;
  }
  return best;
}

}  // namespace lukas
