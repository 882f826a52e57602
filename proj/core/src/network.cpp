#include "lukas/network.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace lukas {

double truncate01(double x) { return std::min(1.0, std::max(0.0, x)); }

Eigen::VectorXd CastroNetwork::forward(const Eigen::VectorXd& x) const {
  if (size_t(x.size()) != input_arity())
    throw error("input arity mismatch: got " + std::to_string(x.size()) +
                ", expected " + std::to_string(input_arity()));
  Eigen::VectorXd v = x;
  for (const auto& layer : layers) {
    Eigen::VectorXd z = layer.weights * v + layer.biases;
    v = z.unaryExpr([](double t) { return truncate01(t); });
  }
  return v;
}

std::vector<double> CastroNetwork::forward(const std::vector<double>& x) const {
  Eigen::VectorXd v =
      Eigen::Map<const Eigen::VectorXd>(x.data(), long(x.size()));
  Eigen::VectorXd y = forward(v);
  return std::vector<double>(y.data(), y.data() + y.size());
}

void CastroNetwork::validate() const {
  long width = long(input_arity());
  for (size_t i = 0; i < layers.size(); ++i) {
    const auto& l = layers[i];
    if (l.weights.cols() != width || l.weights.rows() != l.biases.size() ||
        l.weights.rows() < 1)
      throw error("layer " + std::to_string(i) + " has inconsistent shape");
    width = l.weights.rows();
    if (crisp) {
      for (long r = 0; r < l.weights.rows(); ++r)
        for (long c = 0; c < l.weights.cols(); ++c) {
          double w = l.weights(r, c);
          if (w != -1.0 && w != 0.0 && w != 1.0)
            throw error("crisp network has weight " + std::to_string(w));
        }
      for (long r = 0; r < l.biases.size(); ++r)
        if (l.biases(r) != std::floor(l.biases(r)))
          throw error("crisp network has non-integer bias");
    }
  }
  if (layers.empty()) throw error("network has no layers");
}

std::string CastroNetwork::to_json() const {
  nlohmann::json j;
  j["inputs"] = input_names;
  j["crisp"] = crisp;
  j["layers"] = nlohmann::json::array();
  for (const auto& l : layers) {
    nlohmann::json jl;
    jl["weights"] = nlohmann::json::array();
    for (long r = 0; r < l.weights.rows(); ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (long c = 0; c < l.weights.cols(); ++c) {
        if (crisp)
          row.push_back(long(l.weights(r, c)));
        else
          row.push_back(l.weights(r, c));
      }
      jl["weights"].push_back(row);
    }
    jl["biases"] = nlohmann::json::array();
    for (long r = 0; r < l.biases.size(); ++r) {
      if (crisp)
        jl["biases"].push_back(long(l.biases(r)));
      else
        jl["biases"].push_back(l.biases(r));
    }
    j["layers"].push_back(jl);
  }
  return j.dump(2);
}

CastroNetwork CastroNetwork::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  CastroNetwork net;
  net.input_names = j.at("inputs").get<std::vector<std::string>>();
  net.crisp = j.value("crisp", false);
  for (const auto& jl : j.at("layers")) {
    Layer l;
    const auto& w = jl.at("weights");
    long rows = long(w.size());
    long cols = rows ? long(w[0].size()) : 0;
    l.weights.resize(rows, cols);
    for (long r = 0; r < rows; ++r) {
      if (long(w[r].size()) != cols)
        throw error("ragged weight matrix in network file");
      for (long c = 0; c < cols; ++c) l.weights(r, c) = w[r][c].get<double>();
    }
    const auto& b = jl.at("biases");
    l.biases.resize(long(b.size()));
    for (long r = 0; r < l.biases.size(); ++r) l.biases(r) = b[r].get<double>();
    net.layers.push_back(std::move(l));
  }
  net.validate();
  return net;
}

void CastroNetwork::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw error("cannot write '" + path + "'");
  out << to_json() << "\n";
}

CastroNetwork CastroNetwork::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

TruthTable network_table(const CastroNetwork& net, long n, size_t output) {
  if (output >= net.output_arity()) throw error("output index out of range");
  TruthTable t;
  t.variables = net.input_names;
  t.n = n;
  size_t m = t.variables.size();
  size_t total = 1;
  for (size_t v = 0; v < m; ++v) total *= size_t(n + 1);
  t.entries.reserve(total);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(long(m));
  for (size_t i = 0; i < total; ++i) {
    size_t rest = i;
    for (size_t v = m; v-- > 0;) {
      x(long(v)) = double(rest % size_t(n + 1)) / double(n);
      rest /= size_t(n + 1);
    }
    double y = net.forward(x)(long(output));
    long num = std::lround(y * double(n));
    if (std::abs(y * double(n) - double(num)) > 1e-9)
      throw error("network output off the S_n grid; crisp network required");
    t.entries.push_back(num);
  }
  return t;
}

double network_sse(const CastroNetwork& net,
                   const std::vector<std::vector<double>>& xs,
                   const std::vector<std::vector<double>>& ys) {
  double sse = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    auto y = net.forward(xs[i]);
    for (size_t k = 0; k < y.size(); ++k) {
      double e = ys[i][k] - y[k];
      sse += e * e;
    }
  }
  return sse;
}

}  // namespace lukas
