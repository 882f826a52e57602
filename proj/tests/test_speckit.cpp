#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lukas/dataset.hpp"
#include "lukas/speckit.hpp"

using namespace lukas;

namespace {

const std::string kData = LUKAS_DATA_DIR;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

Attribute attr(const std::string& name, std::vector<std::string> dom) {
  return {name, std::move(dom)};
}

}  // namespace

TEST_CASE("the bundled specification round trips byte for byte") {
  std::string text = slurp(kData + "/structure.lspec");
  Specification spec = parse_spec(text);
  CHECK(print_spec(spec) == text);
  Specification again = parse_spec(print_spec(spec));
  CHECK(print_spec(again) == text);
  CHECK(spec.decls.size() == 24);
  CHECK(spec.marks().size() == 8);  // 2 similarity + 2 is_a + 4 commutativity
}

TEST_CASE("declarations must precede their uses") {
  CHECK_THROWS_AS(parse_spec("D : F * G;"), error);
  CHECK_THROWS_AS(parse_spec("A : { x -> y };"), error);  // sorts x, y unknown
  CHECK_THROWS_AS(parse_spec("S : { a, b };\nM : [S"), error);
  try {
    parse_spec("S : { a, b };\nT : { S -> Q };");
    CHECK(false);
  } catch (const error& e) {
    std::string msg = e.what();
    CHECK(msg.find("'Q'") != std::string::npos);
    CHECK(msg.find("line 2") != std::string::npos);
  }
}

TEST_CASE("the grammar covers every mark flavor") {
  std::string text =
      "B : { 0, 1 };\n"
      "F : { B -> B };\n"
      "G : { B -> B };\n"
      "Gamma : similarity;\n"
      "F : is_a(Gamma);\n"
      "D : F * G;\n"
      "C : [D]_0.85;\n"
      "E : [D];\n"
      "L : 0.9-lim D;\n"
      "K : lim D;\n"
      "J : colim D;\n"
      "F(x, y) : x -> y;\n"
      "G(x, y) : [x * y]_0.95;\n";
  Specification spec = parse_spec(text);
  auto marks = spec.marks();
  REQUIRE(marks.size() == 9);
  CHECK(marks[0].kind == Mark::Kind::Similarity);
  CHECK(marks[1].kind == Mark::Kind::IsA);
  CHECK(marks[1].gamma == "Gamma");
  CHECK(marks[2].kind == Mark::Kind::Commutative);
  CHECK(marks[2].lambda == doctest::Approx(0.85));
  CHECK(marks[3].lambda == doctest::Approx(1.0));
  CHECK(marks[4].kind == Mark::Kind::Lim);
  CHECK(marks[4].lambda == doctest::Approx(0.9));
  CHECK(marks[5].lambda == doctest::Approx(1.0));
  CHECK(marks[6].kind == Mark::Kind::Colim);
  CHECK(marks[7].kind == Mark::Kind::FormulaConstraint);
  CHECK(marks[7].params == std::vector<std::string>{"x", "y"});
  CHECK(marks[7].formula.to_string() == "x -> y");
  CHECK(marks[8].lambda == doctest::Approx(0.95));

  // printing normalizes whitespace but preserves every statement
  Specification again = parse_spec(print_spec(spec));
  CHECK(print_spec(again) == print_spec(spec));
  CHECK(again.marks().size() == 9);
}

TEST_CASE("comments and flexible whitespace are accepted") {
  Specification spec = parse_spec(
      "# header comment\nS : { a, b };  # trailing\n\n\nT :\n  { S -> S };");
  CHECK(spec.decls.size() == 2);
  CHECK(spec.find("T")->in == std::vector<std::string>{"S"});
}

namespace {

// a tiny concrete model: B = {0,1}, F = identity, G = negation
ModelBinding tiny_model() {
  ModelBinding model;
  model.n = 2;
  std::vector<std::string> dom = {"0", "1"};

  FiniteView f({attr("B", dom)}, {attr("B2", dom)}, 2);
  f.set({"0", "0"}, TruthValue::one(2));
  f.set({"1", "1"}, TruthValue::one(2));
  FiniteView g = f;  // parallel identity

  FiniteView gamma({attr("L", dom)}, {attr("R", dom)}, 2);
  gamma.set({"0", "0"}, TruthValue::one(2));
  gamma.set({"1", "1"}, TruthValue::one(2));

  model.views = {{"F", f}, {"G", g}, {"Gamma", gamma}};
  return model;
}

}  // namespace

TEST_CASE("checking marks against a concrete model") {
  std::string text =
      "B : { 0, 1 };\n"
      "B2 : { 0, 1 };\n"
      "F : { B -> B2 };\n"
      "G : { B -> B2 };\n"
      "Gamma : similarity;\n"
      "F : is_a(Gamma);\n"
      "D : F * G;\n"
      "C : [D]_0.9;\n";
  Specification spec = parse_spec(text);
  CheckReport report = check(spec, tiny_model());
  REQUIRE(report.items.size() == 3);
  CHECK(report.items[0].verdict == "pass");  // Gamma is a similarity
  CHECK(report.items[1].verdict == "pass");  // identity is_a identity
  CHECK(report.items[2].verdict == "pass");  // F and G agree
  CHECK(report.passed);
  CHECK(report.to_text().find("all marks pass") != std::string::npos);

  // perturbing G breaks commutativity at lambda = 0.9
  ModelBinding broken = tiny_model();
  FiniteView g = broken.views.at("G");
  g.set({"0", "0"}, TruthValue::zero(2));
  g.set({"0", "1"}, TruthValue::one(2));
  broken.views["G"] = g;
  CheckReport bad = check(spec, broken);
  CHECK_FALSE(bad.passed);
  CHECK(bad.items[2].verdict == "fail");
}

TEST_CASE("formula constraints compare the view against the formula grid") {
  std::string text =
      "B : { 0, 1 };\n"
      "B2 : { 0, 1 };\n"
      "F : { B -> B2 };\n"
      "F(x, y) : ~x * ~y + x * y;\n";  // the crisp identity relation
  Specification spec = parse_spec(text);
  CheckReport report = check(spec, tiny_model());
  REQUIRE(report.items.size() == 1);
  CHECK(report.items[0].passed);
  CHECK(report.items[0].value == doctest::Approx(1.0));
}

TEST_CASE("unsupported colimits are reported without failing") {
  std::string text =
      "B : { 0, 1 };\n"
      "B2 : { 0, 1 };\n"
      "F : { B -> B2 };\n"
      "G : { B -> B2 };\n"
      "D : F * G * F;\n"
      "Q : colim D;\n";
  Specification spec = parse_spec(text);
  ModelBinding model = tiny_model();
  model.views["Q"] = model.views.at("F");
  CheckReport report = check(spec, model);
  REQUIRE(report.items.size() == 1);
  CHECK(report.items[0].verdict == "unsupported");
  CHECK(report.passed);
}

TEST_CASE("limits can be queried and checked") {
  std::string text =
      "B : { 0, 1 };\n"
      "B2 : { 0, 1 };\n"
      "F : { B -> B2 };\n"
      "G : { B -> B2 };\n"
      "D : F * G;\n"
      "L : lim D;\n";
  Specification spec = parse_spec(text);
  ModelBinding model = tiny_model();
  FiniteView lim = query(spec, model, "D");
  model.views["L"] = lim;
  CheckReport report = check(spec, model);
  REQUIRE(report.items.size() == 1);
  CHECK(report.items[0].passed);
}

TEST_CASE("integrate appends a constraint once") {
  std::string text =
      "B : { 0, 1 };\n"
      "B2 : { 0, 1 };\n"
      "F : { B -> B2 };\n";
  Specification spec = parse_spec(text);
  bool dup = false;
  Specification with = integrate(spec, "F", parse_formula("B -> B2"), 0.95, &dup);
  CHECK_FALSE(dup);
  REQUIRE(with.marks().size() == 1);
  CHECK(with.marks()[0].params == std::vector<std::string>{"B", "B2"});

  Specification twice =
      integrate(with, "F", parse_formula("B -> B2"), 0.95, &dup);
  CHECK(dup);
  CHECK(twice.marks().size() == 1);

  // a formula naming a variable outside the arity is rejected
  CHECK_THROWS_AS(integrate(spec, "F", parse_formula("q * B"), 1.0, nullptr),
                  error);

  // the added constraint survives a print/parse cycle
  Specification back = parse_spec(print_spec(with));
  CHECK(back.marks().size() == 1);
  CHECK(back.marks()[0].formula.to_string() == "B -> B2");
}

TEST_CASE("models load from a manifest with relative paths") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "lukas_speckit_test";
  fs::create_directories(dir);

  ModelBinding model = tiny_model();
  save_view(model.views.at("F"), (dir / "f.csv").string());
  save_view(model.views.at("Gamma"), (dir / "gamma.csv").string());
  {
    std::ofstream out(dir / "model.manifest");
    out << "# tiny model\nn = 2\nF = f.csv\nGamma = gamma.csv\n";
  }
  ModelBinding loaded = load_model((dir / "model.manifest").string());
  CHECK(loaded.n == 2);
  CHECK(loaded.at("F").same_entries(model.views.at("F")));
  CHECK(loaded.at("Gamma").same_attributes(model.views.at("Gamma")));
  CHECK_THROWS_AS(loaded.at("Missing"), error);
  fs::remove_all(dir);
}
