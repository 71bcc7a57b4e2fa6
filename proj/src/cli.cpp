#include "commons/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <random>

#include "commons/document.hpp"
#include "commons/families.hpp"
#include "commons/verify.hpp"

namespace commons::cli {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string short_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << text;
    return;
  }
  const std::filesystem::path p(out_path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream f(p);
  if (!f) throw std::runtime_error("cannot write " + out_path);
  f << text;
  out << "wrote " << out_path << "\n";
}

std::string curves_csv(const Grid& grid, const std::vector<const Guarantee*>& gs, const std::vector<std::string>& labels) {
  std::vector<std::vector<double>> cols;
  for (const auto* g : gs) {
    std::vector<double> col;
    for (double x : grid.points()) col.push_back((*g)(x));
    cols.push_back(std::move(col));
  }
  return format_csv(grid.points(), labels, cols);
}

std::string figure_one(double p, std::size_t m) {
  const TypeInterval iv(0.0, 1.0);
  const WelfareSpec spec = families::max_spec(iv, 3);
  const Grid grid(iv, m, {p});
  const Grid class_grid(iv, 11, {p});
  const auto cls = classify_modularity(spec, class_grid);
  const Guarantee una = unanimity_guarantee(spec, cls);
  const Guarantee g0 = low_guarantee(spec, cls);
  const Guarantee gh = high_guarantee(spec, cls);
  const Guarantee gp = stand_alone_guarantee(spec, p, cls);
  return curves_csv(grid, {&una, &g0, &gh, &gp}, {"una", "g_0", "g_H", "g_p=" + short_num(p)});
}

std::string figure_two(double lambda, std::size_t m) {
  const WelfareSpec spec = families::public_bad_spec(3, 1.0);
  const Grid grid(spec.interval(), m, {1.0});
  const Grid class_grid(spec.interval(), 9, {1.0});
  const auto cls = classify_modularity(spec, class_grid);
  const Guarantee una = unanimity_guarantee(spec, cls);
  const Guarantee gl = low_guarantee(spec, cls);
  const Guarantee gh = high_guarantee(spec, cls);
  const Guarantee g11 = lh_guarantee(spec, 1, 1);
  const Guarantee glam = tangent_guarantee(spec, 1.0, lambda);
  return curves_csv(grid, {&una, &gl, &gh, &g11, &glam}, {"una", "g_L", "g_H", "g_11", "g_lambda=" + short_num(lambda)});
}

struct CheckOutcome {
  bool passed;
  std::string text;
};

CheckOutcome run_check(const ProblemDocument& doc, const std::string& check, const std::vector<std::string>& names,
                       const std::string& lower, const std::string& upper, const std::string& rule_name,
                       std::uint64_t seed) {
  const auto& tol = doc.tolerances;
  std::vector<const NamedGuarantee*> targets;
  if (names.empty()) {
    for (const auto& g : doc.guarantees) targets.push_back(&g);
  } else {
    for (const auto& n : names) {
      doc.guarantee(n);  // throws on unknown names
      for (const auto& g : doc.guarantees)
        if (g.name == n) targets.push_back(&g);
    }
  }
  std::string text;
  bool ok = true;
  auto add = [&](const std::string& name, const VerificationReport& r) {
    text += (name.empty() ? "" : name + "  ") + r.summary() + "\n";
    ok = ok && r.passed;
  };
  auto per_guarantee = [&](auto fn) {
    if (targets.empty()) throw std::invalid_argument("the document defines no guarantees to check");
    for (const auto* g : targets) add(g->name, fn(g->guarantee));
  };
  std::mt19937_64 rng(seed);

  if (check == "modularity") {
    const auto& c = doc.modularity;
    text = std::string("modularity: ") + to_string(c.tag) + (c.strict ? " (strict)" : "") + "\n";
    if (c.witness) {
      const auto& w = *c.witness;
      text += "  quadruple x1=" + num(w.x1) + " x1*=" + num(w.x1_star) + " x2=" + num(w.x2) + " x2*=" + num(w.x2_star) +
              " rest=" + format_profile(w.rest) + " defect=" + num(w.defect) + "\n";
    }
    return {true, text};
  }
  if (check == "feasibility") {
    per_guarantee([&](const Guarantee& g) { return feasibility_gap(g, doc.spec, doc.grid, tol); });
  } else if (check == "tightness") {
    per_guarantee([&](const Guarantee& g) {
      const auto feas = feasibility_gap(g, doc.spec, doc.grid, tol);
      return feas.passed ? tightness_slack(g, doc.spec, doc.grid, tol) : feas;
    });
  } else if (check == "bracket") {
    per_guarantee([&](const Guarantee& g) { return bracket_check(g, doc.spec, doc.modularity, doc.grid, tol); });
  } else if (check == "growth") {
    per_guarantee([&](const Guarantee& g) { return growth_order_check(g, doc.spec, doc.modularity, doc.grid, tol); });
  } else if (check == "derivative") {
    per_guarantee([&](const Guarantee& g) { return contact_derivative_check(g, doc.spec, doc.grid, tol); });
  } else if (check == "touch") {
    if (targets.empty()) throw std::invalid_argument("the document defines no guarantees to check");
    for (const auto* g : targets) {
      text += g->name + "  unanimity touches: " + std::to_string(unanimity_touch_count(g->guarantee, doc.spec, doc.grid, tol)) + "\n";
    }
  } else if (check == "sandwich") {
    if (lower.empty() || upper.empty()) throw std::invalid_argument("sandwich needs --lower and --upper");
    add("", sandwich_check(doc.guarantee(lower), doc.guarantee(upper), doc.spec, doc.grid, tol));
  } else if (check == "dominates") {
    if (names.size() != 2) throw std::invalid_argument("dominates needs exactly two --guarantee names");
    const bool d = dominates(doc.guarantee(names[0]), doc.guarantee(names[1]), doc.grid);
    text = names[0] + (d ? " dominates " : " does not dominate ") + names[1] + "\n";
  } else if (check == "rank-growth") {
    const auto w = doc.spec.rank_weights();
    if (!w) throw std::invalid_argument("rank-growth needs a rank-separable welfare function");
    const auto sup = rank_growth_check(*w, doc.grid, ModularityTag::Supermodular);
    const auto sub = rank_growth_check(*w, doc.grid, ModularityTag::Submodular);
    text = sup.summary() + "\n" + sub.summary() + "\n";
    const bool agrees = (doc.modularity.tag == ModularityTag::Supermodular && sup.passed) ||
                        (doc.modularity.tag == ModularityTag::Submodular && sub.passed) ||
                        (doc.modularity.tag == ModularityTag::Additive && sup.passed && sub.passed) ||
                        (doc.modularity.tag == ModularityTag::Neither && !sup.passed && !sub.passed);
    text += std::string("agrees with modularity classification: ") + (agrees ? "yes" : "no") + "\n";
    ok = agrees;
  } else if (check == "symmetry") {
    add("", symmetry_audit(doc.spec, rng));
  } else if (check == "budget") {
    std::vector<const NamedRule*> rules;
    for (const auto& r : doc.rules)
      if (rule_name.empty() || r.name == rule_name) rules.push_back(&r);
    if (rules.empty()) throw std::invalid_argument("no matching rules in the document");
    for (const auto* r : rules) {
      add(r->name, budget_balance_check(r->rule, doc.spec, rng));
      add(r->name, rule_symmetry_check(r->rule, doc.spec, rng));
    }
  } else {
    throw std::invalid_argument("unknown check '" + check + "'");
  }
  return {ok, text};
}

Profile parse_profile(const std::string& s) {
  Profile p;
  std::string item;
  for (char ch : s + ",") {
    if (ch == ',') {
      if (!item.empty()) {
        std::size_t used = 0;
        const double v = std::stod(item, &used);
        if (used != item.size()) throw std::invalid_argument("bad number in profile: " + item);
        p.push_back(v);
      }
      item.clear();
    } else if (ch != ' ') {
      item += ch;
    }
  }
  if (p.empty()) throw std::invalid_argument("empty profile");
  return p;
}

}  // namespace

std::string format_csv(const std::vector<double>& xs, const std::vector<std::string>& labels,
                       const std::vector<std::vector<double>>& columns) {
  std::string s = "x";
  for (const auto& l : labels) s += "," + l;
  s += "\n";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    s += num(xs[i]);
    for (const auto& c : columns) s += "," + num(c[i]);
    s += "\n";
  }
  return s;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tight share guarantees for symmetric commons problems"};
  app.require_subcommand(1);

  std::string doc_path;
  std::string profile;
  std::string name;
  std::string out_path;
  std::string rule_name;
  std::string check;
  std::vector<std::string> names;
  std::string lower;
  std::string upper;
  std::uint64_t seed = 1;
  int figure = 0;
  double p = 0.5;
  double lambda = 0.5;
  std::size_t m = 101;

  auto* eval = app.add_subcommand("eval", "print W at a profile");
  eval->add_option("document", doc_path, "problem document")->required();
  eval->add_option("--profile", profile, "comma-separated types")->required();

  auto* guarantee = app.add_subcommand("guarantee", "sample one guarantee on the grid as CSV");
  guarantee->add_option("document", doc_path, "problem document")->required();
  guarantee->add_option("--name", name, "guarantee name from the document")->required();
  guarantee->add_option("--out", out_path, "CSV file (default stdout)");

  auto* rule = app.add_subcommand("rule", "print the shares of a rule at a profile");
  rule->add_option("document", doc_path, "problem document")->required();
  rule->add_option("--rule", rule_name, "rule name from the document")->required();
  rule->add_option("--profile", profile, "comma-separated types")->required();

  auto* verify = app.add_subcommand("verify", "run a named check and print a report");
  verify->add_option("document", doc_path, "problem document")->required();
  verify->add_option("check", check,
                     "feasibility | tightness | bracket | growth | derivative | touch | sandwich | dominates | "
                     "rank-growth | modularity | symmetry | budget")
      ->required();
  verify->add_option("--guarantee", names, "guarantee name (repeatable; default all)");
  verify->add_option("--lower", lower, "lower guarantee for sandwich");
  verify->add_option("--upper", upper, "upper guarantee for sandwich");
  verify->add_option("--rule", rule_name, "rule name for budget (default all)");
  verify->add_option("--seed", seed, "seed for randomized audits");

  auto* curve = app.add_subcommand("curve", "emit every guarantee and implied rule guarantee as CSV");
  curve->add_option("document", doc_path, "problem document")->required();
  curve->add_option("--out", out_path, "output directory (default stdout)");

  auto* fig = app.add_subcommand("figure", "emit the data of a reference figure as CSV");
  fig->add_option("number", figure, "1 or 2")->required()->check(CLI::IsMember({1, 2}));
  fig->add_option("--p", p, "benchmark type for figure 1");
  fig->add_option("--lambda", lambda, "tangent slope for figure 2, in [0, 1]");
  fig->add_option("--m", m, "grid points");
  fig->add_option("--out", out_path, "CSV file (default stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (*fig) {
      emit(figure == 1 ? figure_one(p, m) : figure_two(lambda, m), out_path, out);
      return kExitOk;
    }
    const ProblemDocument doc = load_document(doc_path);
    if (*eval) {
      out << num(doc.spec.evaluate(parse_profile(profile))) << "\n";
      return kExitOk;
    }
    if (*guarantee) {
      const Guarantee& g = doc.guarantee(name);
      emit(curves_csv(doc.grid, {&g}, {name}), out_path, out);
      return kExitOk;
    }
    if (*rule) {
      const Profile x = parse_profile(profile);
      const Shares s = doc.rule(rule_name)(x);
      double total = 0.0;
      for (std::size_t i = 0; i < s.size(); ++i) {
        out << (i ? "," : "") << num(s[i]);
        total += s[i];
      }
      out << "\nsum " << num(total) << "  W " << num(doc.spec.evaluate(x)) << "\n";
      return kExitOk;
    }
    if (*verify) {
      const auto outcome = run_check(doc, check, names, lower, upper, rule_name, seed);
      out << outcome.text;
      return outcome.passed ? kExitOk : kExitCheckFailed;
    }
    if (*curve) {
      std::vector<const Guarantee*> gs;
      std::vector<std::string> labels;
      for (const auto& g : doc.guarantees) {
        gs.push_back(&g.guarantee);
        labels.push_back(g.name);
      }
      const std::string dir = out_path;
      emit(curves_csv(doc.grid, gs, labels), dir.empty() ? "" : dir + "/curves.csv", out);
      for (const auto& r : doc.rules) {
        const auto implied = implied_guarantees(r.rule, doc.spec, doc.grid);
        std::vector<double> lo;
        std::vector<double> hi;
        for (const auto& [x, v] : implied.lower.points) lo.push_back(v);
        for (const auto& [x, v] : implied.upper.points) hi.push_back(v);
        emit(format_csv(doc.grid.points(), {r.name + "_lower", r.name + "_upper"}, {lo, hi}),
             dir.empty() ? "" : dir + "/rule_" + r.name + ".csv", out);
      }
      return kExitOk;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace commons::cli
