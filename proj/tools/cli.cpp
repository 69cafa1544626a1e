#include "cli.hpp"

#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gptlab/composites.hpp"
#include "gptlab/discrimination.hpp"
#include "gptlab/error.hpp"
#include "gptlab/json_io.hpp"
#include "gptlab/runner.hpp"

namespace gptlab::cli {

namespace {

using io::Json;

void write_out(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot write " + path);
  f << text;
}

Json witness_json(const DistinguishabilityWitness& w) {
  Json j;
  j["states"] = Json::array();
  j["effects"] = Json::array();
  for (const auto& s : w.states) j["states"].push_back(io::to_json(s.coords));
  for (const auto& e : w.measurement.effects) j["effects"].push_back(io::to_json(e.functional));
  return j;
}

int cmd_check(const std::string& theory, const std::string& partner, const std::string& rule,
              unsigned long long seed, const std::string& format, const std::string& out_path, std::ostream& out) {
  const auto fmt = runner::parse_format(format);
  const auto t = io::load_theory(theory);
  std::optional<io::TheoryDefinition> p;
  if (!partner.empty()) p = io::load_theory(partner);
  runner::CheckOptions opts;
  opts.seed = seed;
  if (!rule.empty()) opts.rule = parse_rule(rule);
  const auto report = runner::check_postulates(t, p ? &*p : nullptr, opts);
  write_out(runner::render(report, fmt), out_path, out);
  return kExitOk;
}

int cmd_capacity(const std::string& theory, std::ostream& out) {
  const auto t = io::load_theory(theory);
  const StateSpace s = io::build_space(t);
  const CapacityResult c = capacity(s);
  Json j;
  j["theory"] = t.name;
  j["K"] = s.ambient_dim();
  j["capacity"] = c.value;
  j["exact"] = c.exact;
  j["note"] = c.note;
  j["lps"] = c.lps;
  j["witness"] = witness_json(c.witness);
  out << io::dump(j);
  return c.exact ? kExitOk : kExitBudget;
}

int cmd_compose(const std::string& a_path, const std::string& b_path, const std::string& rule_s,
                const std::string& out_path, std::ostream& out) {
  const auto ta = io::load_theory(a_path);
  const auto tb = io::load_theory(b_path);
  const CompositionRule rule = parse_rule(rule_s);
  const Composite c = compose(io::build_space(ta), io::build_space(tb), rule);

  io::TheoryDefinition t;
  t.name = ta.name + " (x)" + to_string(rule) + " " + tb.name;
  t.rule = to_string(rule);
  if (c.space.has_finite_extreme_points()) {
    t.space["family"] = "polytope";
    t.space["vertices"] = Json::array();
    for (const auto& v : c.space.extreme_points()) t.space["vertices"].push_back(io::to_json(v.coords));
  } else {
    t.space["family"] = "tensor";
    t.space["rule"] = to_string(rule);
    t.space["parts"] = Json::array({ta.space, tb.space});
  }
  t.composite["rule"] = to_string(rule);
  t.composite["dims"] = Json::array({c.ka(), c.kb()});
  t.composite["parts"] = Json::array({io::theory_to_json(ta), io::theory_to_json(tb)});
  write_out(io::dump(io::theory_to_json(t)), out_path, out);
  return kExitOk;
}

Measurement binary_from(const Json& j, const StateSpace& part, const std::string& where) {
  Vector e;
  try {
    e = io::vector_from_json(j);
  } catch (const ValidationError& x) {
    throw ValidationError(where + ": " + x.what());
  }
  if (e.size() != part.ambient_dim()) throw ValidationError(where + ": wrong dimension");
  const Effect eff(e);
  if (!contains_effect(part, eff, 1e-7)) throw ValidationError(where + ": not a valid effect");
  return Measurement{{eff, eff.complement()}};
}

int cmd_chsh(const std::string& comp_path, const std::string& settings_path, std::ostream& out) {
  const auto t = io::load_theory(comp_path);
  if (!t.composite.is_object() || !t.composite.contains("parts"))
    throw ValidationError(comp_path + ": not a composite (no \"composite\" block)");
  const auto ta = io::parse_theory(t.composite["parts"][0]);
  const auto tb = io::parse_theory(t.composite["parts"][1]);
  const StateSpace a = io::build_space(ta);
  const StateSpace b = io::build_space(tb);
  const StateSpace s = io::build_space(t);
  const int ka = a.ambient_dim(), kb = b.ambient_dim();

  const Json sj = io::parse_json_text(io::read_file(settings_path), settings_path);
  for (const char* key : {"alice", "bob"})
    if (!sj.contains(key) || !sj[key].is_array() || sj[key].size() != 2)
      throw ValidationError(settings_path + ": \"" + key + "\" needs two effect vectors");
  ChshSettings st{{binary_from(sj["alice"][0], a, "alice[0]"), binary_from(sj["alice"][1], a, "alice[1]")},
                  {binary_from(sj["bob"][0], b, "bob[0]"), binary_from(sj["bob"][1], b, "bob[1]")}};

  Json j;
  j["composite"] = t.name;
  if (sj.contains("state")) {
    const StateVector w(io::vector_from_json(sj["state"]));
    if (w.dim() != ka * kb) throw ValidationError(settings_path + ": state has the wrong dimension");
    if (!contains_state(s, w, 1e-7)) throw ValidationError(settings_path + ": state is not in the composite");
    j["chsh"] = chsh_value(w, st, ka, kb);
    j["state"] = io::to_json(w.coords);
  } else {
    if (!s.has_finite_extreme_points())
      throw ValidationError(settings_path + ": a continuous composite needs an explicit \"state\"");
    double best = -1.0;
    StateVector arg;
    for (const auto& v : s.extreme_points()) {
      const double val = chsh_value(v, st, ka, kb);
      if (val > best) {
        best = val;
        arg = v;
      }
    }
    j["chsh"] = best;
    j["state"] = io::to_json(arg.coords);
    j["maximized_over_vertices"] = true;
  }
  out << io::dump(j);
  return kExitOk;
}

int cmd_report(const std::string& path, const std::string& format, std::ostream& out) {
  const auto fmt = runner::parse_format(format);
  const auto r = runner::report_from_json(io::parse_json_text(io::read_file(path), path));
  out << runner::render(r, fmt);
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"gptlab: convex state spaces and the reconstruction postulates"};
  app.require_subcommand(1);

  std::string theory, partner, rule, format = "json", out_path;
  unsigned long long seed = 0;
  auto* check = app.add_subcommand("check", "run every postulate check on a theory");
  check->add_option("theory", theory, "theory definition (JSON)")->required();
  check->add_option("--partner", partner, "partner theory for composite checks");
  check->add_option("--rule", rule, "composition rule")->check(CLI::IsMember({"min", "max"}));
  check->add_option("--seed", seed, "sampling seed");
  check->add_option("--format", format, "json or md")->check(CLI::IsMember({"json", "md", "markdown"}));
  check->add_option("--out", out_path, "write the report here instead of stdout");

  std::string cap_theory;
  auto* cap = app.add_subcommand("capacity", "largest set of perfectly distinguishable states");
  cap->add_option("theory", cap_theory, "theory definition (JSON)")->required();

  std::string ca, cb, crule = "max", cout_path;
  auto* comp = app.add_subcommand("compose", "build a bipartite composite");
  comp->add_option("a", ca, "first factor")->required();
  comp->add_option("b", cb, "second factor")->required();
  comp->add_option("--rule", crule, "composition rule")->check(CLI::IsMember({"min", "max"}));
  comp->add_option("--out", cout_path, "output theory file");

  std::string hc, hs;
  auto* chsh = app.add_subcommand("chsh", "CHSH value of a composite state");
  chsh->add_option("composite", hc, "composite theory written by compose")->required();
  chsh->add_option("--settings", hs, "settings JSON")->required();

  std::string rp, rformat = "md";
  auto* rep = app.add_subcommand("report", "re-render a saved JSON report");
  rep->add_option("report", rp, "report JSON")->required();
  rep->add_option("--format", rformat, "json or md")->check(CLI::IsMember({"json", "md", "markdown"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitValidation;
  }

  try {
    if (*check) return cmd_check(theory, partner, rule, seed, format, out_path, out);
    if (*cap) return cmd_capacity(cap_theory, out);
    if (*comp) return cmd_compose(ca, cb, crule, cout_path, out);
    if (*chsh) return cmd_chsh(hc, hs, out);
    if (*rep) return cmd_report(rp, rformat, out);
  } catch (const BudgetExceeded& e) {
    err << "budget exhausted (" << e.stage() << "): " << e.what() << "\n";
    return kExitBudget;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
  return kExitValidation;
}

}  // namespace gptlab::cli
