#include "lukas/finite_view.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace lukas {

namespace {

int index_of(const std::vector<Attribute>& attrs, const std::string& name) {
  for (size_t i = 0; i < attrs.size(); ++i)
    if (attrs[i].name == name) return int(i);
  return -1;
}

}  // namespace

FiniteView::FiniteView(std::vector<Attribute> inputs,
                       std::vector<Attribute> outputs, long n)
    : inputs_(std::move(inputs)), outputs_(std::move(outputs)), n_(n) {
  if (n < 1) throw error("view resolution must be >= 1");
  all_ = inputs_;
  all_.insert(all_.end(), outputs_.begin(), outputs_.end());
  std::set<std::string> names;
  for (const auto& a : all_)
    if (!names.insert(a.name).second)
      throw error("duplicate attribute name '" + a.name + "'");
}

void FiniteView::check_tuple(const std::vector<std::string>& tuple) const {
  if (tuple.size() != all_.size())
    throw error("tuple arity " + std::to_string(tuple.size()) +
                " does not match view arity " + std::to_string(all_.size()));
  for (size_t i = 0; i < tuple.size(); ++i) {
    const auto& dom = all_[i].domain;
    if (std::find(dom.begin(), dom.end(), tuple[i]) == dom.end())
      throw error("value '" + tuple[i] + "' not in domain of attribute '" +
                  all_[i].name + "'");
  }
}

void FiniteView::set(const std::vector<std::string>& tuple, TruthValue v) {
  check_tuple(tuple);
  if (v.numerator() == 0) {
    entries_.erase(tuple);
    return;
  }
  if ((v.numerator() * n_) % v.denominator() != 0)
    throw resolution_mismatch("value " + v.to_string() +
                              " is not on the view's 1/" +
                              std::to_string(n_) + " grid");
  entries_.insert_or_assign(
      tuple, TruthValue(v.numerator() * n_ / v.denominator(), n_));
}

TruthValue FiniteView::at(const std::vector<std::string>& tuple) const {
  check_tuple(tuple);
  auto it = entries_.find(tuple);
  return it == entries_.end() ? TruthValue::zero(n_) : it->second;
}

TruthValue FiniteView::at_named(
    const std::map<std::string, std::string>& assign) const {
  std::vector<std::string> tuple;
  tuple.reserve(all_.size());
  for (const auto& a : all_) {
    auto it = assign.find(a.name);
    if (it == assign.end())
      throw error("missing value for attribute '" + a.name + "'");
    tuple.push_back(it->second);
  }
  return at(tuple);
}

bool FiniteView::same_attributes(const FiniteView& o) const {
  if (n_ != o.n_ || all_.size() != o.all_.size()) return false;
  for (const auto& a : all_) {
    int j = index_of(o.all_, a.name);
    if (j < 0 || o.all_[j].domain != a.domain) return false;
  }
  return true;
}

bool FiniteView::same_entries(const FiniteView& o) const {
  if (!same_attributes(o)) return false;
  // Reorder o's tuples into this view's attribute order.
  std::vector<int> perm(all_.size());
  for (size_t i = 0; i < all_.size(); ++i)
    perm[i] = index_of(o.all_, all_[i].name);
  std::map<std::vector<std::string>, TruthValue> theirs;
  for (const auto& [tuple, v] : o.entries_) {
    std::vector<std::string> re(tuple.size());
    for (size_t i = 0; i < tuple.size(); ++i) re[i] = tuple[perm[i]];
    theirs.emplace(std::move(re), v);
  }
  return entries_ == theirs;
}

std::vector<std::vector<std::string>> FiniteView::grid() const {
  return domain_grid(all_);
}

std::vector<std::vector<std::string>> domain_grid(
    const std::vector<Attribute>& attrs) {
  std::vector<std::vector<std::string>> out;
  size_t total = 1;
  for (const auto& a : attrs) total *= a.domain.size();
  out.reserve(total);
  std::vector<std::string> tuple(attrs.size());
  std::vector<size_t> idx(attrs.size(), 0);
  if (std::any_of(attrs.begin(), attrs.end(),
                  [](const Attribute& a) { return a.domain.empty(); }))
    return out;
  for (size_t count = 0; count < total; ++count) {
    for (size_t i = 0; i < attrs.size(); ++i)
      tuple[i] = attrs[i].domain[idx[i]];
    out.push_back(tuple);
    for (size_t i = attrs.size(); i-- > 0;) {
      if (++idx[i] < attrs[i].domain.size()) break;
      idx[i] = 0;
    }
  }
  return out;
}

FiniteView compose(const FiniteView& r, const FiniteView& g) {
  if (r.resolution() != g.resolution())
    throw resolution_mismatch("composed views have different resolutions");
  // Shared attributes: outputs of r that are inputs of g get summed
  // away; any other name collision must agree in value and is kept once.
  std::set<std::string> shared;
  for (const auto& a : r.outputs()) {
    int j = index_of(g.inputs(), a.name);
    if (j >= 0) {
      if (g.inputs()[j].domain != a.domain)
        throw error("shared attribute '" + a.name +
                    "' has mismatched domains");
      shared.insert(a.name);
    }
  }
  std::set<std::string> r_names, result_names;
  for (const auto& a : r.attributes()) r_names.insert(a.name);

  std::vector<Attribute> in, out;
  for (const auto& a : r.inputs()) in.push_back(a);
  for (const auto& a : g.inputs())
    if (!shared.count(a.name) && !r_names.count(a.name)) in.push_back(a);
  for (const auto& a : r.outputs())
    if (!shared.count(a.name)) out.push_back(a);
  for (const auto& a : g.outputs())
    if (!r_names.count(a.name)) out.push_back(a);
  for (const auto& a : in) result_names.insert(a.name);
  for (const auto& a : out) {
    if (result_names.count(a.name))
      throw error("attribute '" + a.name +
                  "' appears on both sides of the composite");
    result_names.insert(a.name);
  }

  FiniteView result(in, out, r.resolution());
  const auto& rattrs = r.attributes();
  const auto& gattrs = g.attributes();
  for (const auto& [rt, rv] : r.entries()) {
    for (const auto& [gt, gv] : g.entries()) {
      // All attributes common to both views must agree in value.
      bool match = true;
      for (size_t i = 0; i < gattrs.size() && match; ++i) {
        int j = index_of(rattrs, gattrs[i].name);
        if (j >= 0 && rt[size_t(j)] != gt[i]) match = false;
      }
      if (!match) continue;
      std::map<std::string, std::string> assign;
      for (size_t i = 0; i < rattrs.size(); ++i) assign[rattrs[i].name] = rt[i];
      for (size_t i = 0; i < gattrs.size(); ++i) assign[gattrs[i].name] = gt[i];
      std::vector<std::string> key;
      for (const auto& a : result.attributes()) key.push_back(assign[a.name]);
      result.set(key, strong_sum(result.at(key), fusion(rv, gv)));
    }
  }
  return result;
}

FiniteView project(const FiniteView& r, Side keep) {
  const auto& kept = keep == Side::Inputs ? r.inputs() : r.outputs();
  FiniteView result(keep == Side::Inputs ? kept : std::vector<Attribute>{},
                    keep == Side::Inputs ? std::vector<Attribute>{} : kept,
                    r.resolution());
  size_t offset = keep == Side::Inputs ? 0 : r.inputs().size();
  for (const auto& [tuple, v] : r.entries()) {
    std::vector<std::string> key(tuple.begin() + offset,
                                 tuple.begin() + offset + kept.size());
    result.set(key, strong_sum(result.at(key), v));
  }
  return result;
}

FiniteView conditional(const FiniteView& r,
                       const std::vector<std::string>& fixed_inputs,
                       bool* degenerate) {
  if (fixed_inputs.size() != r.inputs().size())
    throw error("conditional input tuple has wrong arity");
  FiniteView proj = project(r, Side::Inputs);
  TruthValue p = r.inputs().empty() ? TruthValue::one(r.resolution())
                                    : proj.at(fixed_inputs);
  if (degenerate) *degenerate = p.numerator() == 0;
  FiniteView result({}, r.outputs(), r.resolution());
  for (const auto& out_tuple : domain_grid(r.outputs())) {
    std::vector<std::string> full = fixed_inputs;
    full.insert(full.end(), out_tuple.begin(), out_tuple.end());
    result.set(out_tuple, residuum(p, r.at(full)));
  }
  return result;
}

bool independent(const FiniteView& r, const FiniteView& g) {
  FiniteView rg = compose(r, g);
  FiniteView gr = compose(g, r);
  if (!rg.same_attributes(gr))
    throw error("views are not composable both ways with matching shapes");
  return rg.same_entries(gr);
}

double view_similarity(const FiniteView& a, const FiniteView& b,
                       SimilarityMode mode) {
  if (!a.same_attributes(b)) throw error("views have different shapes");
  std::vector<int> perm(a.attributes().size());
  for (size_t i = 0; i < perm.size(); ++i)
    perm[i] = index_of(b.attributes(), a.attributes()[i].name);
  double total = 0, worst = 0;
  auto points = a.grid();
  for (const auto& tuple : points) {
    std::vector<std::string> other(tuple.size());
    for (size_t i = 0; i < tuple.size(); ++i) other[size_t(perm[i])] = tuple[i];
    double diff =
        std::abs(a.at(tuple).to_double() - b.at(other).to_double());
    total += diff;
    worst = std::max(worst, diff);
  }
  switch (mode) {
    case SimilarityMode::Exp:
      return total == 0 ? 1.0 : std::exp(-total / double(points.size()));
    case SimilarityMode::Inf:
      return 1.0 - worst;
    case SimilarityMode::And:
      return std::max(0.0, 1.0 - total);
  }
  throw error("bad similarity mode");
}

TruthValue OmegaSet::at(const std::string& a, const std::string& b) const {
  auto it = eq.find({a, b});
  return it == eq.end() ? TruthValue::zero(n) : it->second;
}

void OmegaSet::set(const std::string& a, const std::string& b, TruthValue v) {
  if (v.numerator() == 0) {
    eq.erase({a, b});
    return;
  }
  if ((v.numerator() * n) % v.denominator() != 0)
    throw resolution_mismatch("value " + v.to_string() +
                              " is not on the 1/" + std::to_string(n) +
                              " grid");
  eq.insert_or_assign({a, b},
                      TruthValue(v.numerator() * n / v.denominator(), n));
}

OmegaSet OmegaSet::identity(std::string tag, std::vector<std::string> support,
                            long n) {
  OmegaSet s;
  s.tag = std::move(tag);
  s.support = std::move(support);
  s.n = n;
  for (const auto& v : s.support) s.set(v, v, TruthValue::one(n));
  return s;
}

namespace {

std::vector<std::string> tagged_union(const OmegaSet& alpha,
                                      const OmegaSet& beta) {
  std::vector<std::string> u;
  for (const auto& v : alpha.support) u.push_back(alpha.tag + "." + v);
  for (const auto& v : beta.support) u.push_back(beta.tag + "." + v);
  return u;
}

// Equality degree of two tagged elements under one side's relation;
// 0 when either element lies outside that side's support.
TruthValue tagged_eq(const OmegaSet& s, const std::string& a,
                     const std::string& b) {
  std::string prefix = s.tag + ".";
  if (a.rfind(prefix, 0) != 0 || b.rfind(prefix, 0) != 0)
    return TruthValue::zero(s.n);
  return s.at(a.substr(prefix.size()), b.substr(prefix.size()));
}

}  // namespace

FiniteView coproduct(const OmegaSet& alpha, const OmegaSet& beta) {
  if (alpha.n != beta.n)
    throw resolution_mismatch("coproduct parts have different resolutions");
  auto u = tagged_union(alpha, beta);
  FiniteView result({{"x", u}}, {{"y", u}}, alpha.n);
  for (const auto& a : u)
    for (const auto& b : u)
      result.set({a, b},
                 strong_sum(tagged_eq(alpha, a, b), tagged_eq(beta, a, b)));
  return result;
}

namespace {

// f is a view A -> B with one input and one output attribute; value 0
// when either argument is outside the respective side.
TruthValue arrow_at(const FiniteView& f, const OmegaSet& alpha,
                    const OmegaSet& beta, const std::string& a,
                    const std::string& b) {
  std::string pa = alpha.tag + ".", pb = beta.tag + ".";
  if (a.rfind(pa, 0) != 0 || b.rfind(pb, 0) != 0)
    return TruthValue::zero(f.resolution());
  return f.at({a.substr(pa.size()), b.substr(pb.size())});
}

}  // namespace

FiniteView coequalize(const FiniteView& f, const FiniteView& g,
                      const OmegaSet& alpha, const OmegaSet& beta) {
  if (f.inputs().size() != 1 || f.outputs().size() != 1 ||
      g.inputs().size() != 1 || g.outputs().size() != 1)
    throw error("coequalizer expects single-attribute parallel views");
  if (f.inputs()[0].domain != g.inputs()[0].domain ||
      f.outputs()[0].domain != g.outputs()[0].domain)
    throw error("parallel views have mismatched endpoints");
  long n = f.resolution();
  auto u = tagged_union(alpha, beta);
  auto tagA = [&](const std::string& v) { return alpha.tag + "." + v; };
  auto tagB = [&](const std::string& v) { return beta.tag + "." + v; };
  FiniteView result({{"x", u}}, {{"y", u}}, n);
  for (const auto& a : u) {
    for (const auto& a2 : u) {
      TruthValue acc = TruthValue::zero(n);
      for (const auto& b : beta.support)
        for (const auto& b2 : beta.support) {
          acc = strong_sum(
              acc, strong_sum(
                       strong_sum(arrow_at(f, alpha, beta, a, tagB(b)),
                                  arrow_at(f, alpha, beta, a2, tagB(b2))),
                       beta.at(b, b2)));
          acc = strong_sum(
              acc, strong_sum(
                       strong_sum(arrow_at(g, alpha, beta, a, tagB(b)),
                                  arrow_at(g, alpha, beta, a2, tagB(b2))),
                       beta.at(b, b2)));
        }
      for (const auto& b : alpha.support)
        for (const auto& b2 : alpha.support)
          acc = strong_sum(
              acc, strong_sum(
                       strong_sum(arrow_at(f, alpha, beta, tagA(b), a),
                                  arrow_at(g, alpha, beta, tagA(b2), a2)),
                       alpha.at(b, b2)));
      acc = strong_sum(acc, tagged_eq(alpha, a, a2));
      acc = strong_sum(acc, tagged_eq(beta, a, a2));
      result.set({a, a2}, acc);
    }
  }
  return result;
}

TruthValue power_similarity(const OmegaSet& alpha, const OmegaSet& beta,
                            const FiniteView& t, const FiniteView& h) {
  if (t.attributes().size() != 2 || h.attributes().size() != 2)
    throw error("power similarity expects binary views");
  long n = alpha.n;
  TruthValue best = TruthValue::zero(n);
  for (const auto& b0 : beta.support) {
    for (const auto& b1 : beta.support) {
      TruthValue acc = TruthValue::zero(n);
      for (const auto& a : alpha.support) {
        TruthValue term = fusion(
            fusion(alpha.at(a, a), t.at({a, b0})),
            fusion(h.at({a, b1}), beta.at(b0, b1)));
        acc = strong_sum(acc, term);
      }
      best = join(best, acc);
    }
  }
  return best;
}

bool is_similarity(const FiniteView& gamma) {
  if (gamma.inputs().size() != gamma.outputs().size())
    throw error("similarity candidate must have a square shape");
  auto dom_in = domain_grid(gamma.inputs());
  long n = gamma.resolution();
  auto value = [&](const std::vector<std::string>& x,
                   const std::vector<std::string>& y) {
    std::vector<std::string> tuple = x;
    tuple.insert(tuple.end(), y.begin(), y.end());
    return gamma.at(tuple);
  };
  for (const auto& x : dom_in)
    if (value(x, x) != TruthValue::one(n)) return false;
  for (const auto& x : dom_in)
    for (const auto& y : dom_in) {
      if (value(x, y) != value(y, x)) return false;
      for (const auto& z : dom_in)
        if (!(fusion(value(x, y), value(y, z)) <= value(x, z))) return false;
    }
  return true;
}

TruthValue is_a_check(const FiniteView& r, const FiniteView& gamma) {
  long n = r.resolution();
  auto as = domain_grid(r.inputs());
  auto bs = domain_grid(r.outputs());
  TruthValue acc = TruthValue::one(n);
  for (const auto& a0 : as)
    for (const auto& a1 : as) {
      std::vector<std::string> pair = a0;
      pair.insert(pair.end(), a1.begin(), a1.end());
      TruthValue gv = gamma.at(pair);
      for (const auto& b : bs) {
        std::vector<std::string> t0 = a0, t1 = a1;
        t0.insert(t0.end(), b.begin(), b.end());
        t1.insert(t1.end(), b.begin(), b.end());
        acc = fusion(acc, residuum(fusion(r.at(t0), r.at(t1)), gv));
      }
    }
  return acc;
}

bool is_epi(const FiniteView& r) {
  long n = r.resolution();
  for (const auto& b : domain_grid(r.outputs())) {
    TruthValue acc = TruthValue::zero(n);
    for (const auto& a : domain_grid(r.inputs())) {
      std::vector<std::string> t = a;
      t.insert(t.end(), b.begin(), b.end());
      acc = strong_sum(acc, r.at(t));
    }
    if (acc != TruthValue::one(n)) return false;
  }
  return true;
}

}  // namespace lukas
