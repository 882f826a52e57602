#include "lukas/diagram.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace lukas {

const MultiDiagram::Node& MultiDiagram::node(const std::string& name) const {
  for (const auto& v : nodes)
    if (v.name == name) return v;
  throw error("unknown diagram node '" + name + "'");
}

void MultiDiagram::validate() const {
  for (const auto& a : arrows)
    for (const auto& attr : a.view.attributes()) {
      const Node& v = node(attr.name);
      if (v.domain != attr.domain)
        throw error("arrow '" + a.name + "' disagrees with node '" +
                    v.name + "' on the domain");
    }
  for (const auto& s : input_nodes) node(s);
}

namespace {

std::vector<Attribute> node_attrs(const MultiDiagram& d,
                                  const std::vector<std::string>& names) {
  std::vector<Attribute> attrs;
  for (const auto& name : names)
    attrs.push_back({name, d.node(name).domain});
  return attrs;
}

std::vector<std::string> non_input_nodes(const MultiDiagram& d) {
  std::vector<std::string> rest;
  for (const auto& v : d.nodes)
    if (std::find(d.input_nodes.begin(), d.input_nodes.end(), v.name) ==
        d.input_nodes.end())
      rest.push_back(v.name);
  return rest;
}

// Degree of membership of a node value: the diagonal of the node's
// similarity relation, 1 when none is attached.
TruthValue node_diag(const MultiDiagram& d, const MultiDiagram::Node& v,
                     const std::string& value) {
  if (!v.similarity) return TruthValue::one(d.n);
  return v.similarity->at(value, value);
}

void check_acyclic_inputs(const MultiDiagram& d) {
  std::set<std::string> s(d.input_nodes.begin(), d.input_nodes.end());
  std::map<std::string, std::vector<std::string>> edges;
  for (const auto& a : d.arrows)
    for (const auto& from : a.view.inputs())
      for (const auto& to : a.view.outputs())
        if (s.count(from.name) && s.count(to.name))
          edges[from.name].push_back(to.name);
  std::map<std::string, int> color;  // 0 new, 1 open, 2 done
  std::function<void(const std::string&)> dfs = [&](const std::string& v) {
    color[v] = 1;
    for (const auto& w : edges[v]) {
      if (color[w] == 1)
        throw error("input sub-graph of the diagram is cyclic at '" + w +
                    "'");
      if (color[w] == 0) dfs(w);
    }
    color[v] = 2;
  };
  for (const auto& v : s)
    if (color[v] == 0) dfs(v);
}

}  // namespace

FiniteView limit(const MultiDiagram& d) {
  d.validate();
  auto rest = non_input_nodes(d);
  FiniteView result(node_attrs(d, d.input_nodes), node_attrs(d, rest), d.n);
  for (const auto& tuple : result.grid()) {
    std::map<std::string, std::string> assign;
    const auto& attrs = result.attributes();
    for (size_t i = 0; i < attrs.size(); ++i) assign[attrs[i].name] = tuple[i];
    TruthValue acc = TruthValue::one(d.n);
    for (const auto& a : d.arrows) {
      acc = fusion(acc, a.view.at_named(assign));
      if (acc.numerator() == 0) break;
    }
    result.set(tuple, acc);
  }
  return result;
}

CheckResult lambda_commutative(const MultiDiagram& d, double lambda,
                               SimilarityMode mode) {
  d.validate();
  check_acyclic_inputs(d);
  FiniteView lim = limit(d);
  auto s_attrs = node_attrs(d, d.input_nodes);
  FiniteView lhs(s_attrs, {}, d.n);
  for (const auto& [tuple, v] : lim.entries()) {
    std::vector<std::string> key(tuple.begin(),
                                 tuple.begin() + s_attrs.size());
    lhs.set(key, join(lhs.at(key), v));
  }
  // Node-similarity product, join-projected onto the inputs: the
  // non-input factor is a constant.
  TruthValue rest_max = TruthValue::one(d.n);
  auto rest = non_input_nodes(d);
  if (!rest.empty()) {
    rest_max = TruthValue::zero(d.n);
    for (const auto& tuple : domain_grid(node_attrs(d, rest))) {
      TruthValue acc = TruthValue::one(d.n);
      for (size_t i = 0; i < rest.size(); ++i)
        acc = fusion(acc, node_diag(d, d.node(rest[i]), tuple[i]));
      rest_max = join(rest_max, acc);
    }
  }
  FiniteView rhs(s_attrs, {}, d.n);
  for (const auto& tuple : rhs.grid()) {
    TruthValue acc = rest_max;
    for (size_t i = 0; i < d.input_nodes.size(); ++i)
      acc = fusion(acc, node_diag(d, d.node(d.input_nodes[i]), tuple[i]));
    rhs.set(tuple, acc);
  }
  double sim = view_similarity(lhs, rhs, mode);
  return {sim >= lambda - 1e-12, sim};
}

CheckResult lambda_limit_check(const FiniteView& r, const MultiDiagram& d,
                               double lambda, SimilarityMode mode) {
  double sim = view_similarity(r, limit(d), mode);
  return {sim >= lambda - 1e-12, sim};
}

}  // namespace lukas
