#include "commons/document.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "commons/contact.hpp"
#include "commons/families.hpp"

namespace commons {

namespace {

[[noreturn]] void fail(const YAML::Node& node, const std::string& field, const std::string& msg) {
  const int line = node.Mark().line;
  std::string where = line >= 0 ? "line " + std::to_string(line + 1) + ": " : "";
  throw DocumentError(where + field + ": " + msg);
}

void check_keys(const YAML::Node& node, const std::set<std::string>& allowed, const std::string& context) {
  if (!node.IsMap()) fail(node, context, "expected a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) {
      std::string list;
      for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
      fail(kv.first, context + "." + key, "unknown field (expected one of: " + list + ")");
    }
  }
}

template <class T>
T read(const YAML::Node& node, const std::string& field) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    fail(node, field, "has the wrong type");
  }
}

const YAML::Node require(const YAML::Node& parent, const std::string& key, const std::string& context) {
  const YAML::Node node = parent[key];
  if (!node) fail(parent, context, "missing field '" + key + "'");
  return node;
}

std::size_t read_count(const YAML::Node& node, const std::string& field) {
  const auto v = read<long long>(node, field);
  if (v < 0) fail(node, field, "must be nonnegative");
  return static_cast<std::size_t>(v);
}

std::vector<double> read_list(const YAML::Node& node, const std::string& field) {
  if (!node.IsSequence()) fail(node, field, "expected a list of numbers");
  return read<std::vector<double>>(node, field);
}

TypeInterval read_interval(const YAML::Node& node) {
  const auto v = read_list(node, "interval");
  if (v.size() != 2) fail(node, "interval", "expected [low, high]");
  try {
    return {v[0], v[1]};
  } catch (const std::exception& e) {
    fail(node, "interval", e.what());
  }
}

Function1D read_function(const YAML::Node& node, const std::string& field, TypeInterval domain) {
  try {
    return parse_function(read<std::string>(node, field), domain);
  } catch (const DocumentError&) {
    throw;
  } catch (const std::exception& e) {
    fail(node, field, e.what());
  }
}

TypeInterval sum_domain(TypeInterval iv, std::size_t n) {
  const double k = static_cast<double>(n);
  return {k * iv.low(), k * iv.high()};
}

WelfareSpec read_welfare(const YAML::Node& node, std::optional<TypeInterval> interval, std::size_t n,
                         const YAML::Node& root) {
  check_keys(node, {"preset", "params", "terms", "name"}, "welfare");
  const bool has_preset = static_cast<bool>(node["preset"]);
  const bool has_terms = static_cast<bool>(node["terms"]);
  if (has_preset == has_terms) fail(node, "welfare", "give exactly one of 'preset' or 'terms'");

  if (has_preset) {
    const auto preset = read<std::string>(node["preset"], "welfare.preset");
    const YAML::Node params = node["params"] ? node["params"] : YAML::Node(YAML::NodeType::Map);
    auto need_interval = [&]() {
      if (!interval) fail(root, "interval", "required for preset " + preset);
      return *interval;
    };
    auto no_params = [&]() { check_keys(params, {}, "welfare.params"); };
    if (preset == "public_bad") {
      check_keys(params, {"d"}, "welfare.params");
      const double d = read<double>(require(params, "d", "welfare.params"), "welfare.params.d");
      WelfareSpec spec = families::public_bad_spec(n, d);
      if (interval && !(*interval == spec.interval())) fail(root["interval"], "interval", "public_bad lives on [0, 2d]");
      return spec;
    }
    const TypeInterval iv = need_interval();
    static const std::map<std::string, WelfareSpec (*)(TypeInterval, std::size_t)> plain = {
        {"max", families::max_spec},         {"min", families::min_spec},
        {"spread", families::spread_spec},   {"queuing", families::queuing_spec},
        {"variance", families::variance_spec}, {"product", families::product_spec},
        {"exp_sum", families::exp_sum_spec},
    };
    if (auto it = plain.find(preset); it != plain.end()) {
      no_params();
      return it->second(iv, n);
    }
    if (preset == "pairwise_product") {
      no_params();
      if (n != 2) fail(node, "welfare.preset", "pairwise_product needs n = 2");
      return families::pairwise_product_spec(iv);
    }
    if (preset == "rank") {
      check_keys(params, {"k"}, "welfare.params");
      const auto k = read_count(require(params, "k", "welfare.params"), "welfare.params.k");
      if (k < 1 || k > n) fail(params["k"], "welfare.params.k", "must lie in [1, n]");
      return families::kth_rank_spec(iv, n, k);
    }
    if (preset == "quota") {
      check_keys(params, {"q", "f"}, "welfare.params");
      const auto q = read_count(require(params, "q", "welfare.params"), "welfare.params.q");
      if (q < 1 || q > n) fail(params["q"], "welfare.params.q", "must lie in [1, n]");
      const Function1D f = params["f"] ? read_function(params["f"], "welfare.params.f", iv) : Function1D::identity(iv);
      return families::quota_spec(iv, n, q, f);
    }
    if (preset == "substitute") {
      check_keys(params, {"f"}, "welfare.params");
      return families::substitute_spec(
          iv, n, read_function(require(params, "f", "welfare.params"), "welfare.params.f", sum_domain(iv, n)));
    }
    if (preset == "additive") {
      check_keys(params, {"w0"}, "welfare.params");
      return families::additive_spec(iv, n,
                                     read_function(require(params, "w0", "welfare.params"), "welfare.params.w0", iv));
    }
    fail(node["preset"], "welfare.preset", "unknown preset '" + preset + "'");
  }

  if (!interval) fail(root, "interval", "required");
  const TypeInterval iv = *interval;
  const YAML::Node terms = node["terms"];
  if (!terms.IsSequence() || terms.size() == 0) fail(terms, "welfare.terms", "expected a non-empty list");
  std::vector<WelfareTerm> out;
  for (const auto& t : terms) {
    check_keys(t, {"substitute", "rank", "additive"}, "welfare.terms[]");
    if (t.size() != 1) fail(t, "welfare.terms[]", "each term has exactly one kind");
    if (t["substitute"]) {
      out.push_back(SubstituteInputs{read_function(t["substitute"], "welfare.terms.substitute", sum_domain(iv, n))});
    } else if (t["additive"]) {
      out.push_back(SeparableAdditive{read_function(t["additive"], "welfare.terms.additive", iv)});
    } else {
      const YAML::Node ws = t["rank"];
      if (!ws.IsSequence() || ws.size() != n) fail(ws, "welfare.terms.rank", "expected n functions, largest rank first");
      RankSeparable r;
      for (const auto& w : ws) r.w.push_back(read_function(w, "welfare.terms.rank[]", iv));
      out.push_back(std::move(r));
    }
  }
  try {
    return WelfareSpec(iv, n, std::move(out), node["name"] ? read<std::string>(node["name"], "welfare.name") : "custom");
  } catch (const std::exception& e) {
    fail(node, "welfare", e.what());
  }
}

std::optional<Side> read_side(const YAML::Node& node, const std::string& field) {
  if (!node) return std::nullopt;
  const auto s = read<std::string>(node, field);
  if (s == "lower") return Side::Lower;
  if (s == "upper") return Side::Upper;
  fail(node, field, "expected 'lower' or 'upper'");
}

/// The single nonzero rank weight of a quota spec: (q, F).
std::pair<std::size_t, Function1D> quota_parts(const WelfareSpec& spec, const YAML::Node& node) {
  const auto w = spec.rank_weights();
  if (w) {
    std::optional<std::size_t> q;
    for (std::size_t k = 0; k < w->size(); ++k) {
      const auto& f = (*w)[k];
      const bool zero = f.is_piecewise_polynomial() && std::all_of(f.coefficients().begin(), f.coefficients().end(),
                                                                   [](const auto& c) {
                                                                     return std::all_of(c.begin(), c.end(),
                                                                                        [](double v) { return v == 0.0; });
                                                                   });
      if (zero) continue;
      if (q) fail(node, "family", "quota guarantees need W = F(x^q)");
      q = k + 1;
    }
    if (q) return {*q, (*w)[*q - 1]};
  }
  fail(node, "family", "quota guarantees need W = F(x^q)");
}

Guarantee read_guarantee(const YAML::Node& node, const WelfareSpec& spec, const ModularityClass& cls,
                         const std::map<std::string, Guarantee>& built) {
  check_keys(node, {"name", "family", "side", "c", "c0", "ell", "h", "a", "slope", "p", "of", "weights", "path"},
             "guarantees[]");
  const auto family = read<std::string>(require(node, "family", "guarantees[]"), "family");
  const auto side = read_side(node["side"], "side");
  auto with = [&](Guarantee g) { return side ? g.with_side(*side) : g; };
  auto num = [&](const char* key) { return read<double>(require(node, key, family), key); };
  auto count = [&](const char* key) { return read_count(require(node, key, family), key); };

  if (family == "una") return unanimity_guarantee(spec, cls, side);
  auto opposite_side = [&]() {
    if (side) return *side;
    try {
      return side_opposite_unanimity(cls);
    } catch (const std::exception& e) {
      fail(node, "side", std::string(e.what()) + "; give side explicitly");
    }
  };
  if (family == "stand_alone") return stand_alone_guarantee(spec, num("c0"), opposite_side());
  if (family == "low") return stand_alone_guarantee(spec, spec.interval().low(), opposite_side());
  if (family == "high") return stand_alone_guarantee(spec, spec.interval().high(), opposite_side());
  if (family == "simple") return simple_guarantee(spec, read_list(require(node, "c", family), "c"), opposite_side());
  if (family == "lh") return with(lh_guarantee(spec, count("ell"), count("h")));
  if (family == "tangent") {
    std::optional<double> slope;
    if (node["slope"]) slope = read<double>(node["slope"], "slope");
    return with(tangent_guarantee(spec, num("a"), slope));
  }
  if (family == "quota_lower" || family == "quota_upper") {
    const auto [q, f] = quota_parts(spec, node);
    const double p = num("p");
    auto pair = quota_guarantees(f, spec.n(), q, p, p);
    return family == "quota_lower" ? pair.lower : pair.upper;
  }
  if (family == "mixture") {
    const YAML::Node of = require(node, "of", family);
    if (!of.IsSequence()) fail(of, "of", "expected a list of guarantee names");
    std::vector<Guarantee> parts;
    for (const auto& name : of) {
      const auto key = read<std::string>(name, "of[]");
      auto it = built.find(key);
      if (it == built.end()) fail(name, "of", "unknown guarantee '" + key + "' (define it earlier)");
      parts.push_back(it->second);
    }
    return mixture(std::move(parts), read_list(require(node, "weights", family), "weights"));
  }
  if (family == "contact") {
    const YAML::Node path = require(node, "path", family);
    if (!path.IsSequence()) fail(path, "path", "expected a list of [x, y] vertices");
    std::vector<Point2> pts;
    for (const auto& v : path) {
      const auto xy = read_list(v, "path[]");
      if (xy.size() != 2) fail(v, "path[]", "expected [x, y]");
      pts.push_back({xy[0], xy[1]});
    }
    return integrate_guarantee(spec, cls, ContactCorrespondence::from_path(spec.interval(), std::move(pts)));
  }
  fail(node["family"], "family", "unknown guarantee family '" + family + "'");
}

SharingRule read_rule(const YAML::Node& node, const WelfareSpec& spec, const std::map<std::string, Guarantee>& built) {
  check_keys(node, {"name", "rule", "c", "lower", "upper"}, "rules[]");
  const auto kind = read<std::string>(require(node, "rule", "rules[]"), "rule");
  if (kind == "serial_up") return serial_up_rule(spec);
  if (kind == "serial_down") return serial_down_rule(spec);
  if (kind == "equal_split") return equal_split_rule(spec);
  if (kind == "proportional") return proportional_rule(spec);
  if (kind == "quadratic_transport") return quadratic_transport();
  if (kind == "spread") return spread(read_list(require(node, "c", kind), "c"));
  if (kind == "average_returns") {
    const Function1D* f = spec.substitute_function();
    if (!f) fail(node, "rule", "average_returns needs W = F(x_N)");
    return average_returns_rule(*f);
  }
  if (kind == "moving_average") {
    auto get = [&](const char* key) {
      const auto name = read<std::string>(require(node, key, kind), key);
      auto it = built.find(name);
      if (it == built.end()) fail(node[key], key, "unknown guarantee '" + name + "'");
      return it->second;
    };
    return moving_average(get("lower"), get("upper"), spec);
  }
  fail(node["rule"], "rule", "unknown rule '" + kind + "'");
}

}  // namespace

const Guarantee& ProblemDocument::guarantee(const std::string& name) const {
  for (const auto& g : guarantees)
    if (g.name == name) return g.guarantee;
  throw DocumentError("no guarantee named '" + name + "' in the document");
}

const SharingRule& ProblemDocument::rule(const std::string& name) const {
  for (const auto& r : rules)
    if (r.name == name) return r.rule;
  throw DocumentError("no rule named '" + name + "' in the document");
}

Function1D parse_function(const std::string& text, TypeInterval domain) {
  const auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\n");
    const auto e = s.find_last_not_of(" \t\n");
    return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
  };
  const std::string s = trim(text);
  if (s == "identity") return Function1D::identity(domain);
  if (s == "exp") return Function1D::exp(domain);
  if (s == "log") return Function1D::log(domain);
  const auto slash = s.find('/');
  if (slash == std::string::npos) {
    throw DocumentError("function '" + s + "': expected identity, exp, log or '[breakpoints] / [[coeffs], ...]'");
  }
  try {
    const auto breaks = YAML::Load(s.substr(0, slash)).as<std::vector<double>>();
    const auto coeffs = YAML::Load(s.substr(slash + 1)).as<std::vector<std::vector<double>>>();
    return Function1D::piecewise(breaks, coeffs);
  } catch (const YAML::Exception&) {
    throw DocumentError("function '" + s + "': malformed breakpoint or coefficient list");
  }
}

ProblemDocument parse_document(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw DocumentError("line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  if (!root.IsMap()) throw DocumentError("document must be a mapping");
  check_keys(root, {"interval", "n", "welfare", "guarantees", "rules", "grid", "tolerances"}, "document");

  std::optional<TypeInterval> interval;
  if (root["interval"]) interval = read_interval(root["interval"]);
  const auto n = read_count(require(root, "n", "document"), "n");
  if (n < 2) fail(root["n"], "n", "need at least two agents");
  const WelfareSpec spec = read_welfare(require(root, "welfare", "document"), interval, n, root);

  std::size_t m = 41;
  std::vector<double> anchors;
  if (const YAML::Node g = root["grid"]) {
    check_keys(g, {"m", "anchors"}, "grid");
    if (g["m"]) m = read_count(g["m"], "grid.m");
    if (g["anchors"]) anchors = read_list(g["anchors"], "grid.anchors");
  }
  if (m < 2) fail(root["grid"], "grid.m", "need at least two points");
  for (double a : anchors) {
    if (!spec.interval().contains(a)) fail(root["grid"]["anchors"], "grid.anchors", "anchor outside the interval");
  }

  Tolerances tol;
  if (const YAML::Node t = root["tolerances"]) {
    check_keys(t, {"feasibility", "tightness", "derivative", "ordering", "evaluation_cap"}, "tolerances");
    if (t["feasibility"]) tol.feasibility = read<double>(t["feasibility"], "tolerances.feasibility");
    if (t["tightness"]) tol.tightness = read<double>(t["tightness"], "tolerances.tightness");
    if (t["derivative"]) tol.derivative = read<double>(t["derivative"], "tolerances.derivative");
    if (t["ordering"]) tol.ordering = read<double>(t["ordering"], "tolerances.ordering");
    if (t["evaluation_cap"]) tol.evaluation_cap = read<std::uint64_t>(t["evaluation_cap"], "tolerances.evaluation_cap");
  }

  // Guarantee parameters and function breakpoints become grid anchors.
  auto grid_anchors = anchors;
  auto add_breaks = [&](const Function1D& f) {
    for (double b : f.interior_breakpoints())
      if (spec.interval().contains(b)) grid_anchors.push_back(b);
  };
  for (const auto& term : spec.terms()) {
    if (const auto* r = std::get_if<RankSeparable>(&term))
      for (const auto& w : r->w) add_breaks(w);
    if (const auto* a = std::get_if<SeparableAdditive>(&term)) add_breaks(a->w0);
  }
  if (const YAML::Node gs = root["guarantees"]) {
    if (!gs.IsSequence()) fail(gs, "guarantees", "expected a list");
    for (const auto& g : gs) {
      if (!g.IsMap()) continue;
      for (const char* key : {"c0", "a", "p"})
        if (g[key] && g[key].IsScalar()) grid_anchors.push_back(read<double>(g[key], key));
      if (g["c"] && g["c"].IsSequence())
        for (double c : read_list(g["c"], "c")) grid_anchors.push_back(c);
    }
  }
  grid_anchors.erase(std::remove_if(grid_anchors.begin(), grid_anchors.end(),
                                    [&](double a) { return !spec.interval().contains(a); }),
                     grid_anchors.end());

  Grid grid(spec.interval(), m, grid_anchors);
  // Classification scans every quadruple, so it uses a coarser grid on large problems.
  const Grid class_grid(spec.interval(), std::max<std::size_t>(3, std::min<std::size_t>(m, 21)), grid_anchors);
  ModularityClass cls = classify_modularity(spec, class_grid);

  ProblemDocument doc{spec, cls, grid, tol, {}, {}};
  std::map<std::string, Guarantee> built;
  if (const YAML::Node gs = root["guarantees"]) {
    for (const auto& g : gs) {
      const auto name = read<std::string>(require(g, "name", "guarantees[]"), "guarantees[].name");
      if (built.count(name)) fail(g["name"], "guarantees[].name", "duplicate name '" + name + "'");
      try {
        Guarantee built_g = read_guarantee(g, spec, cls, built).relabeled(name);
        built.emplace(name, built_g);
        doc.guarantees.push_back({name, built_g});
      } catch (const DocumentError&) {
        throw;
      } catch (const std::exception& e) {
        fail(g, "guarantee '" + name + "'", e.what());
      }
    }
  }
  if (const YAML::Node rs = root["rules"]) {
    if (!rs.IsSequence()) fail(rs, "rules", "expected a list");
    std::set<std::string> names;
    for (const auto& r : rs) {
      const auto name = read<std::string>(require(r, "name", "rules[]"), "rules[].name");
      if (!names.insert(name).second) fail(r["name"], "rules[].name", "duplicate name '" + name + "'");
      try {
        SharingRule rule = read_rule(r, spec, built);
        rule.name = name;
        doc.rules.push_back({name, std::move(rule)});
      } catch (const DocumentError&) {
        throw;
      } catch (const std::exception& e) {
        fail(r, "rule '" + name + "'", e.what());
      }
    }
  }
  return doc;
}

ProblemDocument load_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DocumentError("cannot open document '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_document(buf.str());
}

}  // namespace commons
