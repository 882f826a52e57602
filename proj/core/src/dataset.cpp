#include "lukas/dataset.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace lukas {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> parts;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, sep)) {
    size_t a = cell.find_first_not_of(" \t\r");
    size_t b = cell.find_last_not_of(" \t\r");
    parts.push_back(a == std::string::npos ? "" : cell.substr(a, b - a + 1));
  }
  return parts;
}

std::vector<std::string> data_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open '" + path + "'");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    size_t a = line.find_first_not_of(" \t\r");
    if (a == std::string::npos || line[a] == '#') continue;
    lines.push_back(line);
  }
  return lines;
}

}  // namespace

size_t Dataset::column(const std::string& attribute) const {
  for (size_t i = 0; i < attributes.size(); ++i)
    if (attributes[i] == attribute) return i;
  throw error("dataset has no attribute '" + attribute + "'");
}

Dataset Dataset::load_csv(const std::string& path, long n) {
  auto lines = data_lines(path);
  if (lines.empty()) throw io_error("'" + path + "' has no header row");
  auto header = split(lines[0], ',');
  if (header.empty() || header[0] != "key")
    throw io_error("'" + path + "' must start with a 'key' column");
  Dataset d;
  d.n = n;
  d.attributes.assign(header.begin() + 1, header.end());
  for (size_t i = 1; i < lines.size(); ++i) {
    auto cells = split(lines[i], ',');
    if (cells.size() != header.size())
      throw io_error(path + ": row " + std::to_string(i + 1) + " has " +
                     std::to_string(cells.size()) + " cells, expected " +
                     std::to_string(header.size()));
    d.keys.push_back(cells[0]);
    std::vector<TruthValue> row;
    for (size_t c = 1; c < cells.size(); ++c)
      row.push_back(TruthValue::parse(cells[c], n));
    d.rows.push_back(std::move(row));
  }
  return d;
}

void Dataset::write_csv(std::ostream& out) const {
  out << "key";
  for (const auto& a : attributes) out << "," << a;
  out << "\n";
  for (size_t r = 0; r < rows.size(); ++r) {
    out << keys[r];
    for (const auto& v : rows[r]) out << "," << v.to_string();
    out << "\n";
  }
}

void Dataset::save_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw io_error("cannot write '" + path + "'");
  write_csv(out);
}

double column_similarity(const std::vector<TruthValue>& a,
                         const std::vector<TruthValue>& b,
                         SimilarityMode mode) {
  if (a.size() != b.size()) throw error("columns have different lengths");
  if (a.empty()) return 1.0;
  double total = 0, worst = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    double diff = std::abs(a[i].to_double() - b[i].to_double());
    total += diff;
    worst = std::max(worst, diff);
  }
  switch (mode) {
    case SimilarityMode::Exp:
      return total == 0 ? 1.0 : std::exp(-total / double(a.size()));
    case SimilarityMode::Inf:
      return 1.0 - worst;
    case SimilarityMode::And:
      return std::max(0.0, 1.0 - total);
  }
  throw error("bad similarity mode");
}

FiniteView load_view(const std::string& csv_path, long n) {
  std::vector<Attribute> inputs, outputs;
  for (const auto& line : data_lines(csv_path + ".meta")) {
    std::istringstream in(line);
    std::string side, name, colon;
    in >> side >> name >> colon;
    if ((side != "input" && side != "output") || colon != ":")
      throw io_error(csv_path + ".meta: expected 'input|output NAME : v...'");
    Attribute attr{name, {}};
    std::string v;
    while (in >> v) attr.domain.push_back(v);
    (side == "input" ? inputs : outputs).push_back(std::move(attr));
  }
  FiniteView view(inputs, outputs, n);
  auto lines = data_lines(csv_path);
  if (lines.empty()) throw io_error("'" + csv_path + "' has no header row");
  auto header = split(lines[0], ',');
  size_t arity = view.attributes().size();
  if (header.size() != arity + 1 || header.back() != "value")
    throw io_error("'" + csv_path +
                   "' header must list the attributes plus 'value'");
  for (size_t i = 0; i < arity; ++i)
    if (header[i] != view.attributes()[i].name)
      throw io_error("'" + csv_path + "' column '" + header[i] +
                     "' does not match the .meta attribute order");
  for (size_t i = 1; i < lines.size(); ++i) {
    auto cells = split(lines[i], ',');
    if (cells.size() != arity + 1)
      throw io_error(csv_path + ": row " + std::to_string(i + 1) +
                     " has the wrong arity");
    std::vector<std::string> tuple(cells.begin(), cells.end() - 1);
    view.set(tuple, TruthValue::parse(cells.back(), n));
  }
  return view;
}

void save_view(const FiniteView& view, const std::string& csv_path) {
  std::ofstream meta(csv_path + ".meta");
  if (!meta) throw io_error("cannot write '" + csv_path + ".meta'");
  for (const auto& a : view.inputs()) {
    meta << "input " << a.name << " :";
    for (const auto& v : a.domain) meta << " " << v;
    meta << "\n";
  }
  for (const auto& a : view.outputs()) {
    meta << "output " << a.name << " :";
    for (const auto& v : a.domain) meta << " " << v;
    meta << "\n";
  }
  std::ofstream out(csv_path);
  if (!out) throw io_error("cannot write '" + csv_path + "'");
  for (const auto& a : view.attributes()) out << a.name << ",";
  out << "value\n";
  for (const auto& [tuple, v] : view.entries()) {
    for (const auto& cell : tuple) out << cell << ",";
    out << v.to_string() << "\n";
  }
}

}  // namespace lukas
