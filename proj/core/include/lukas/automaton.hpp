#pragma once

#include <map>
#include <string>
#include <vector>

#include "lukas/dataset.hpp"
#include "lukas/formula.hpp"
#include "lukas/truth_value.hpp"

namespace lukas {

/// One word position: sign label -> uncertainty. Absent signs read 0.
using SignValues = std::map<std::string, TruthValue>;
using FuzzyWord = std::vector<SignValues>;

/// State machine over S_n whose vector evolves by
///   e' = M1(e) (+) M0(~e)
/// with input states overwritten by sign uncertainties before every
/// propagation. M0/M1 are boolean adjacency matrices, rows = destination.
struct OmegaAutomaton {
  std::vector<std::string> states;
  std::map<std::string, std::string> input_signs;  // state -> sign label
  std::vector<std::string> outputs;                // output state names
  std::vector<std::vector<char>> m0, m1;           // [dest][src]
  std::vector<TruthValue> init;
  long n = 1;

  size_t state_index(const std::string& name) const;
  bool is_input(size_t index) const;

  /// Shapes consistent, labels resolve, input states have no incoming
  /// edges. Output states that are also inputs are legal but flagged.
  void validate() const;
  bool outputs_overlap_inputs() const;

  /// Replaces input-state entries with the position's sign values
  /// (missing signs mean 0); throws on unknown sign labels.
  std::vector<TruthValue> overwrite(std::vector<TruthValue> e,
                                    const SignValues& signs) const;
  /// Pure transition: e'_i = (+)_{M1(i,j)} e_j (+) (+)_{M0(i,j)} ~e_j.
  std::vector<TruthValue> propagate(const std::vector<TruthValue>& e) const;
  /// overwrite followed by propagate.
  std::vector<TruthValue> step(const std::vector<TruthValue>& e,
                               const SignValues& signs) const;
};

struct RunResult {
  /// Post-overwrite vector per position, then the final propagated one.
  std::vector<std::vector<TruthValue>> trace;
  /// Final-vector entries at the output states.
  std::vector<TruthValue> output;
};

RunResult run(const OmegaAutomaton& aut, const FuzzyWord& word);

/// All (n+1)^length words over one binary attribute: position k carries
/// sign attr=1 with value v_k and attr=0 with ~v_k. First position
/// varies slowest.
std::vector<FuzzyWord> enumerate_words(long n, int length,
                                       const std::string& attribute = "a");

/// One row per word: the attr=1 value at each position, then the final
/// value of every state.
Dataset io_dataset(const OmegaAutomaton& aut,
                   const std::vector<FuzzyWord>& words,
                   const std::string& attribute = "a", int jobs = 1);

/// One row per word: the post-overwrite state vector at position k and
/// its pure propagation (primed attribute names). k = -1 means the last
/// position.
Dataset transition_dataset(const OmegaAutomaton& aut,
                           const std::vector<FuzzyWord>& words, int k = -1,
                           int jobs = 1);

/// A formula lowered to an automaton pipeline: feed the variable values
/// at position 1 and all-zero signs afterwards; after `iterations`
/// steps the output state holds the formula's value.
struct CompiledFormula {
  OmegaAutomaton automaton;
  int iterations = 0;
  std::string output_state;

  FuzzyWord word_for(const std::map<std::string, TruthValue>& assign) const;
  TruthValue evaluate(const std::map<std::string, TruthValue>& assign) const;
};

CompiledFormula formula_to_automaton(const Formula& f, long n);

/// Text format:
///   states: s1 s2 ...
///   inputs: s1="a=1" s2="a=0"
///   outputs: s6 s7 s8
///   init: 1/2 1/2 ...
///   src -> dst : 0|1
OmegaAutomaton parse_automaton(const std::string& text, long n);
OmegaAutomaton load_automaton(const std::string& path, long n);
std::string print_automaton(const OmegaAutomaton& aut);

/// Word CSV: one column per sign label, one row per position.
FuzzyWord load_word(const std::string& path, long n);

}  // namespace lukas
