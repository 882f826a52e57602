#include "lukas/automaton.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "lukas/translate.hpp"

namespace lukas {

size_t OmegaAutomaton::state_index(const std::string& name) const {
  for (size_t i = 0; i < states.size(); ++i)
    if (states[i] == name) return i;
  throw error("unknown state '" + name + "'");
}

bool OmegaAutomaton::is_input(size_t index) const {
  return input_signs.count(states.at(index)) > 0;
}

bool OmegaAutomaton::outputs_overlap_inputs() const {
  for (const auto& o : outputs)
    if (input_signs.count(o)) return true;
  return false;
}

void OmegaAutomaton::validate() const {
  size_t s = states.size();
  if (std::set<std::string>(states.begin(), states.end()).size() != s)
    throw error("duplicate state name");
  if (m0.size() != s || m1.size() != s)
    throw error("transition matrices must be square of the state count");
  for (size_t i = 0; i < s; ++i)
    if (m0[i].size() != s || m1[i].size() != s)
      throw error("transition matrices must be square of the state count");
  if (init.size() != s) throw error("initial vector length mismatch");
  for (const auto& v : init)
    if (v.denominator() != n) throw resolution_mismatch("initial vector");
  for (const auto& [state, sign] : input_signs) {
    size_t i = state_index(state);
    (void)sign;
    for (size_t j = 0; j < s; ++j)
      if (m0[i][j] || m1[i][j])
        throw error("input state '" + state + "' has incoming edges");
  }
  for (const auto& o : outputs) state_index(o);
}

std::vector<TruthValue> OmegaAutomaton::overwrite(std::vector<TruthValue> e,
                                                  const SignValues& signs) const {
  std::set<std::string> known;
  for (const auto& [state, sign] : input_signs) known.insert(sign);
  for (const auto& [sign, value] : signs) {
    (void)value;
    if (!known.count(sign)) throw error("unknown sign '" + sign + "'");
  }
  for (const auto& [state, sign] : input_signs) {
    auto it = signs.find(sign);
    e[state_index(state)] =
        it == signs.end() ? TruthValue::zero(n) : it->second;
  }
  return e;
}

std::vector<TruthValue> OmegaAutomaton::propagate(
    const std::vector<TruthValue>& e) const {
  size_t s = states.size();
  std::vector<TruthValue> out(s, TruthValue::zero(n));
  for (size_t i = 0; i < s; ++i) {
    long acc = 0;
    for (size_t j = 0; j < s; ++j) {
      if (m1[i][j]) acc = ops::osum(acc, e[j].numerator(), n);
      if (m0[i][j]) acc = ops::osum(acc, ops::neg(e[j].numerator(), n), n);
    }
    out[i] = TruthValue(acc, n);
  }
  return out;
}

std::vector<TruthValue> OmegaAutomaton::step(const std::vector<TruthValue>& e,
                                             const SignValues& signs) const {
  return propagate(overwrite(e, signs));
}

RunResult run(const OmegaAutomaton& aut, const FuzzyWord& word) {
  RunResult r;
  std::vector<TruthValue> e = aut.init;
  for (const auto& position : word) {
    e = aut.overwrite(e, position);
    r.trace.push_back(e);
    e = aut.propagate(e);
  }
  r.trace.push_back(e);
  for (const auto& o : aut.outputs) r.output.push_back(e[aut.state_index(o)]);
  return r;
}

std::vector<FuzzyWord> enumerate_words(long n, int length,
                                       const std::string& attribute) {
  if (n < 1 || length < 1) throw error("enumerate_words needs n,length >= 1");
  const std::string pos = attribute + "=1", neg = attribute + "=0";
  std::vector<FuzzyWord> words;
  std::vector<long> digits(size_t(length), 0);
  for (;;) {
    FuzzyWord w;
    for (long d : digits)
      w.push_back({{pos, TruthValue(d, n)}, {neg, TruthValue(n - d, n)}});
    words.push_back(std::move(w));
    // first position is the slowest-varying digit
    int i = length - 1;
    while (i >= 0 && digits[size_t(i)] == n) digits[size_t(i--)] = 0;
    if (i < 0) break;
    ++digits[size_t(i)];
  }
  return words;
}

namespace {

/// Runs every word, chunked across threads; row order is by index, so
/// the result does not depend on the thread count.
std::vector<RunResult> run_all(const OmegaAutomaton& aut,
                               const std::vector<FuzzyWord>& words, int jobs) {
  std::vector<RunResult> results(words.size());
  if (jobs <= 1) {
    for (size_t w = 0; w < words.size(); ++w) results[w] = run(aut, words[w]);
    return results;
  }
  std::vector<std::thread> pool;
  std::atomic<size_t> next{0};
  for (int t = 0; t < jobs; ++t)
    pool.emplace_back([&] {
      for (;;) {
        size_t w = next.fetch_add(64);
        if (w >= words.size()) return;
        size_t stop = std::min(words.size(), w + 64);
        for (; w < stop; ++w) results[w] = run(aut, words[w]);
      }
    });
  for (auto& t : pool) t.join();
  return results;
}

}  // namespace

Dataset io_dataset(const OmegaAutomaton& aut,
                   const std::vector<FuzzyWord>& words,
                   const std::string& attribute, int jobs) {
  if (words.empty()) throw error("no words given");
  size_t length = words.front().size();
  Dataset d;
  d.n = aut.n;
  for (size_t i = 0; i < length; ++i)
    d.attributes.push_back(attribute + std::to_string(i + 1));
  for (const auto& s : aut.states) d.attributes.push_back(s);
  const std::string pos = attribute + "=1";
  for (const auto& w : words)
    if (w.size() != length) throw error("ragged word list");
  std::vector<RunResult> results = run_all(aut, words, jobs);
  for (size_t w = 0; w < words.size(); ++w) {
    std::vector<TruthValue> row;
    for (const auto& position : words[w]) {
      auto it = position.find(pos);
      row.push_back(it == position.end() ? TruthValue::zero(aut.n)
                                         : it->second);
    }
    for (const auto& v : results[w].trace.back()) row.push_back(v);
    d.keys.push_back("w" + std::to_string(w));
    d.rows.push_back(std::move(row));
  }
  return d;
}

Dataset transition_dataset(const OmegaAutomaton& aut,
                           const std::vector<FuzzyWord>& words, int k,
                           int jobs) {
  if (words.empty()) throw error("no words given");
  size_t length = words.front().size();
  size_t kk = k < 0 ? length : size_t(k);
  if (kk < 1 || kk > length) throw error("iteration out of range");
  Dataset d;
  d.n = aut.n;
  for (const auto& s : aut.states) d.attributes.push_back(s);
  for (const auto& s : aut.states) d.attributes.push_back(s + "'");
  for (const auto& w : words)
    if (w.size() != length) throw error("ragged word list");
  std::vector<RunResult> results = run_all(aut, words, jobs);
  for (size_t w = 0; w < words.size(); ++w) {
    std::vector<TruthValue> row = results[w].trace[kk - 1];
    for (const auto& v : aut.propagate(results[w].trace[kk - 1]))
      row.push_back(v);
    d.keys.push_back("w" + std::to_string(w));
    d.rows.push_back(std::move(row));
  }
  return d;
}

// ------------------------------------------------- formula lowering

namespace {

using Kind = Formula::Kind;

struct Builder {
  long n;
  std::vector<std::string> states;
  std::vector<std::vector<std::pair<int, int>>> in_edges;  // (src, label)
  std::map<std::string, int> var_state;
  std::map<std::string, std::string> input_signs;
  int counter = 0;

  int add_state(const std::string& name) {
    states.push_back(name);
    in_edges.emplace_back();
    return int(states.size()) - 1;
  }
  int fresh() { return add_state("q" + std::to_string(++counter)); }

  struct Signal {
    int state;
    int depth;
    bool neg;
  };

  int input(const std::string& var) {
    auto it = var_state.find(var);
    if (it != var_state.end()) return it->second;
    int idx = add_state(var);
    var_state[var] = idx;
    input_signs[var] = var + "=1";
    return idx;
  }

  /// New state one level up carrying the signal's value (delay for a
  /// plain signal, inverter for a negated one).
  Signal materialize(Signal s) {
    int idx = fresh();
    in_edges[size_t(idx)].push_back({s.state, s.neg ? 0 : 1});
    return {idx, s.depth + 1, false};
  }

  Signal pad(Signal s, int depth) {
    while (s.depth < depth) s = materialize(s);
    return s;
  }

  Signal combine(Signal l, Signal r) {
    // boolean matrices cannot carry the same edge twice
    if (l.state == r.state && l.neg == r.neg) r = materialize(r);
    int depth = std::max(l.depth, r.depth) + 1;
    l = pad(l, depth - 1);
    r = pad(r, depth - 1);
    int idx = fresh();
    in_edges[size_t(idx)].push_back({l.state, l.neg ? 0 : 1});
    in_edges[size_t(idx)].push_back({r.state, r.neg ? 0 : 1});
    return {idx, depth, false};
  }

  Signal operand(Formula::NodePtr node) {
    bool neg = false;
    while (node->kind == Kind::Neg) {
      neg = !neg;
      node = node->left;
    }
    Signal s = compile(node);
    s.neg = s.neg != neg;
    return s;
  }

  Signal compile(const Formula::NodePtr& node) {
    switch (node->kind) {
      case Kind::Var:
        return {input(node->name), 0, false};
      case Kind::StrongSum:
        return combine(operand(node->left), operand(node->right));
      case Kind::Implies: {
        Signal l = operand(node->left);
        l.neg = !l.neg;
        return combine(l, operand(node->right));
      }
      case Kind::Fusion: {
        // x (*) y = ~(~x (+) ~y): a sum of inverted edges, then an
        // inverter on top.
        Signal l = operand(node->left), r = operand(node->right);
        l.neg = !l.neg;
        r.neg = !r.neg;
        Signal inner = combine(l, r);
        inner.neg = true;
        return materialize(inner);
      }
      default:
        throw error("connective not supported by the lowering");
    }
  }
};

}  // namespace

CompiledFormula formula_to_automaton(const Formula& f, long n) {
  Formula g = fold_constants(drop_lattice_operations(f));
  Builder b;
  b.n = n;

  Builder::Signal out{};
  if (g.kind() == Kind::Zero) {
    out = {b.fresh(), 1, false};
  } else if (g.kind() == Kind::One) {
    int z = b.fresh();
    out = b.materialize({z, 0, true});
  } else {
    Builder::Signal s = b.operand(g.root());
    out = s.neg || s.depth == 0 ? b.materialize(s) : s;
  }

  CompiledFormula cf;
  cf.automaton.n = n;
  cf.automaton.states = b.states;
  cf.automaton.input_signs = b.input_signs;
  cf.automaton.outputs = {b.states[size_t(out.state)]};
  size_t s = b.states.size();
  cf.automaton.m0.assign(s, std::vector<char>(s, 0));
  cf.automaton.m1.assign(s, std::vector<char>(s, 0));
  for (size_t dst = 0; dst < s; ++dst)
    for (const auto& [src, label] : b.in_edges[dst])
      (label ? cf.automaton.m1 : cf.automaton.m0)[dst][size_t(src)] = 1;
  cf.automaton.init.assign(s, TruthValue::zero(n));
  cf.iterations = out.depth;
  cf.output_state = b.states[size_t(out.state)];
  cf.automaton.validate();
  return cf;
}

FuzzyWord CompiledFormula::word_for(
    const std::map<std::string, TruthValue>& assign) const {
  FuzzyWord w;
  w.resize(size_t(iterations));
  for (const auto& [state, sign] : automaton.input_signs) {
    auto it = assign.find(state);  // input states are named by variable
    w[0][sign] = it == assign.end() ? TruthValue::zero(automaton.n)
                                    : it->second;
  }
  return w;
}

TruthValue CompiledFormula::evaluate(
    const std::map<std::string, TruthValue>& assign) const {
  return run(automaton, word_for(assign)).output.at(0);
}

// ---------------------------------------------------------- parsing

namespace {

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw error("line " + std::to_string(line) + ": " + msg);
}

}  // namespace

OmegaAutomaton parse_automaton(const std::string& text, long n) {
  OmegaAutomaton aut;
  aut.n = n;
  struct Edge {
    std::string src, dst;
    int label;
  };
  std::vector<Edge> edges;
  bool have_states = false, have_init = false;

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t h = line.find('#');
    if (h != std::string::npos) line = line.substr(0, h);
    auto tokens = split_ws(line);
    if (tokens.empty()) continue;
    if (tokens[0] == "states:") {
      if (have_states) fail(lineno, "duplicate states section");
      have_states = true;
      for (size_t i = 1; i < tokens.size(); ++i) {
        if (std::count(aut.states.begin(), aut.states.end(), tokens[i]))
          fail(lineno, "duplicate state name '" + tokens[i] + "'");
        aut.states.push_back(tokens[i]);
      }
      if (aut.states.empty()) fail(lineno, "empty state list");
    } else if (tokens[0] == "inputs:") {
      for (size_t i = 1; i < tokens.size(); ++i) {
        size_t eq = tokens[i].find("=\"");
        if (eq == std::string::npos || tokens[i].back() != '"')
          fail(lineno, "expected state=\"sign\", got '" + tokens[i] + "'");
        std::string state = tokens[i].substr(0, eq);
        std::string sign =
            tokens[i].substr(eq + 2, tokens[i].size() - eq - 3);
        if (!std::count(aut.states.begin(), aut.states.end(), state))
          fail(lineno, "unknown state '" + state + "'");
        aut.input_signs[state] = sign;
      }
    } else if (tokens[0] == "outputs:") {
      for (size_t i = 1; i < tokens.size(); ++i) {
        if (!std::count(aut.states.begin(), aut.states.end(), tokens[i]))
          fail(lineno, "unknown state '" + tokens[i] + "'");
        aut.outputs.push_back(tokens[i]);
      }
    } else if (tokens[0] == "init:") {
      have_init = true;
      for (size_t i = 1; i < tokens.size(); ++i) {
        try {
          aut.init.push_back(TruthValue::parse(tokens[i], n));
        } catch (const error& e) {
          fail(lineno, e.what());
        }
      }
    } else {
      // edge: src -> dst : label
      if (tokens.size() != 5 || tokens[1] != "->" || tokens[3] != ":")
        fail(lineno, "expected 'src -> dst : 0|1'");
      if (tokens[4] != "0" && tokens[4] != "1")
        fail(lineno, "edge label must be 0 or 1");
      edges.push_back({tokens[0], tokens[2], tokens[4] == "1"});
      for (const auto& name : {tokens[0], tokens[2]})
        if (!std::count(aut.states.begin(), aut.states.end(), name))
          fail(lineno, "unknown state '" + name + "'");
    }
  }
  if (!have_states) throw error("missing states section");
  size_t s = aut.states.size();
  if (!have_init) aut.init.assign(s, TruthValue::zero(n));
  aut.m0.assign(s, std::vector<char>(s, 0));
  aut.m1.assign(s, std::vector<char>(s, 0));
  for (const auto& e : edges) {
    size_t src = aut.state_index(e.src), dst = aut.state_index(e.dst);
    (e.label ? aut.m1 : aut.m0)[dst][src] = 1;
  }
  aut.validate();
  return aut;
}

OmegaAutomaton load_automaton(const std::string& path, long n) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_automaton(buf.str(), n);
}

std::string print_automaton(const OmegaAutomaton& aut) {
  std::ostringstream out;
  out << "states:";
  for (const auto& s : aut.states) out << " " << s;
  out << "\n";
  bool any = false;
  for (const auto& s : aut.states)
    if (aut.input_signs.count(s)) any = true;
  if (any) {
    out << "inputs:";
    for (const auto& s : aut.states)
      if (auto it = aut.input_signs.find(s); it != aut.input_signs.end())
        out << " " << s << "=\"" << it->second << "\"";
    out << "\n";
  }
  if (!aut.outputs.empty()) {
    out << "outputs:";
    for (const auto& s : aut.outputs) out << " " << s;
    out << "\n";
  }
  out << "init:";
  for (const auto& v : aut.init) out << " " << v.to_string();
  out << "\n";
  for (size_t dst = 0; dst < aut.states.size(); ++dst)
    for (size_t src = 0; src < aut.states.size(); ++src) {
      if (aut.m0[dst][src])
        out << aut.states[src] << " -> " << aut.states[dst] << " : 0\n";
      if (aut.m1[dst][src])
        out << aut.states[src] << " -> " << aut.states[dst] << " : 1\n";
    }
  return out.str();
}

FuzzyWord load_word(const std::string& path, long n) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open '" + path + "'");
  std::string line;
  std::vector<std::string> signs;
  FuzzyWord word;
  int lineno = 0;
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(s);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (signs.empty()) {
      signs = split(line);
      continue;
    }
    auto cells = split(line);
    if (cells.size() != signs.size())
      fail(lineno, "expected " + std::to_string(signs.size()) + " cells");
    SignValues v;
    for (size_t i = 0; i < cells.size(); ++i)
      v[signs[i]] = TruthValue::parse(cells[i], n);
    word.push_back(std::move(v));
  }
  return word;
}

}  // namespace lukas
