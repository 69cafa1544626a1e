#include "gptlab/runner.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>
#include <utility>

#include "gptlab/discrimination.hpp"
#include "gptlab/error.hpp"
#include "gptlab/lp.hpp"
#include "gptlab/models.hpp"
#include "gptlab/sampling.hpp"
#include "gptlab/symmetry.hpp"

namespace gptlab::runner {

using io::Json;

namespace {

Json coords_json(const StateVector& s) { return io::to_json(s.coords); }

PostulateResult result(const char* id, Status st, std::string detail, Json witness = nullptr) {
  return PostulateResult{id, st, std::move(detail), std::move(witness)};
}

PostulateResult indeterminate(const char* id, const BudgetExceeded& e) {
  return result(id, Status::Indeterminate, "budget exhausted in stage '" + e.stage() + "': " + e.what());
}

// Runs a check; budget and representation limits become Indeterminate.
template <class F>
PostulateResult guarded(const char* id, F&& f) {
  try {
    return f();
  } catch (const BudgetExceeded& e) {
    return indeterminate(id, e);
  } catch (const UnsupportedRepresentation& e) {
    return result(id, Status::Indeterminate, std::string("unsupported representation: ") + e.what());
  } catch (const lp::SolverError& e) {
    return result(id, Status::Indeterminate, std::string("LP breakdown: ") + e.what());
  }
}

// S_{N-1} for the families that have one; nullopt for user polytopes with N > 2.
std::optional<StateSpace> lower_level(const io::TheoryDefinition& t, int n) {
  const std::string fam = t.family();
  if (n - 1 == 1) return models::classical(1);
  if (fam == "classical") return models::classical(n - 1);
  if (fam == "quantum") return models::quantum(n - 1);
  return std::nullopt;
}

PostulateResult check_p1(const StateSpace& a, const StateSpace& b, CompositionRule rule, unsigned long long seed) {
  return guarded("P1", [&] {
    const Composite c = compose(a, b, rule);
    const TomographyResult t = local_tomography(c, seed);
    std::ostringstream d;
    d << "affine dimension of the " << to_string(rule) << "-tensor composite is " << t.affine_dim << ", K_A K_B - 1 = "
      << t.expected;
    if (t.ok) return result("P1", Status::Pass, d.str());
    Json w;
    w["affine_dim"] = t.affine_dim;
    w["expected"] = t.expected;
    w["rule"] = to_string(rule);
    return result("P1", Status::Fail, d.str(), w);
  });
}

PostulateResult check_p2(const io::TheoryDefinition& t, const StateSpace& s) {
  return guarded("P2", [&] {
    const CapacityResult cap = capacity(s);
    if (!cap.exact) return result("P2", Status::Indeterminate, "capacity is only bounded: " + cap.note);
    const int n = cap.value;
    if (n <= 1) return result("P2", Status::ProbesPass, "capacity 1: no proper face to compare");

    // Faces {E_i = 0} of the complete measurement; for a bit also every
    // two-outcome measurement built from an extremal effect.
    std::vector<Effect> zero_effects = cap.witness.measurement.effects;
    if (n == 2 && s.has_finite_extreme_points() && (s.as<PolytopeRep>() || s.as<SimplexRep>())) {
      const auto pts = s.extreme_points();
      for (const Effect& e : extremal_effects(s)) {
        double lo = 1.0, hi = 0.0;
        for (const auto& p : pts) {
          lo = std::min(lo, evaluate(e, p));
          hi = std::max(hi, evaluate(e, p));
        }
        if (lo < 1e-9 && hi > 1.0 - 1e-9) zero_effects.push_back(e);
      }
    }
    const auto ref = lower_level(t, n);
    std::optional<StateSpace> first_face;
    int probes = 0;
    for (const Effect& e : zero_effects) {
      const Effect face_effect = e.complement();
      const Face f = face_extract(s, face_effect);
      const StateSpace fs = f.as_space();
      EquivalenceResult eq;
      std::string against;
      if (ref) {
        eq = equivalence_probe(fs, *ref);
        against = ref->describe();
      } else if (first_face) {
        eq = equivalence_probe(fs, *first_face);
        against = "first face " + first_face->describe();
      } else {
        first_face = fs;
        ++probes;
        continue;
      }
      ++probes;
      if (!eq.consistent) {
        Json w;
        w["face_effect"] = io::to_json(face_effect.functional);
        w["invariant"] = eq.invariant;
        w["face_value"] = eq.left;
        w["reference_value"] = eq.right;
        w["reference"] = against;
        return result("P2", Status::Fail,
                      "face {E = 0} differs from " + against + " in " + eq.invariant + " (" + eq.left + " vs " +
                          eq.right + ")",
                      w);
      }
    }
    std::string detail = std::to_string(probes) + " face probe(s) consistent with ";
    detail += ref ? ref->describe() : std::string("each other");
    return result("P2", Status::ProbesPass, detail + "; invariants only, not an equivalence proof");
  });
}

PostulateResult check_p3(const StateSpace& s, unsigned long long seed) {
  return guarded("P3", [&] {
    const TransitivityResult r = transitivity_check(s, seed);
    if (r.ok) return result("P3", Status::Pass, r.detail);
    Json w;
    if (r.stranded) w["stranded"] = coords_json(*r.stranded);
    w["from"] = coords_json(r.from);
    return result("P3", Status::Fail, r.detail, w);
  });
}

PostulateResult check_p3c(const StateSpace& s, unsigned long long seed) {
  return guarded("P3C", [&] {
    const ContinuityResult r = continuity_check(s, seed);
    if (r.ok) return result("P3C", Status::Pass, r.detail);
    Json w;
    w["group"] = s.group().name();
    return result("P3C", Status::Fail, r.detail, w);
  });
}

PostulateResult check_p4(const io::TheoryDefinition& t, const StateSpace& s) {
  return guarded("P4", [&] {
    if (t.all_effects) return result("P4", Status::Pass, "every effect in [0, 1] is declared allowed");
    if (!(s.as<PolytopeRep>() || s.as<SimplexRep>()))
      return result("P4", Status::Indeterminate, "restricted effect list on a continuous state space");
    const int k = s.ambient_dim();
    std::size_t checked = 0;
    for (const Effect& e : extremal_effects(s)) {
      const bool trivial = e.functional.isZero(1e-9) || (e.functional - Effect::unit(k).functional).isZero(1e-9);
      if (trivial) continue;
      ++checked;
      bool listed = false;
      for (const auto& a : t.allowed_effects)
        if ((a - e.functional).lpNorm<Eigen::Infinity>() <= 1e-7) listed = true;
      if (!listed) {
        Json w;
        w["missing_effect"] = io::to_json(e.functional);
        return result("P4", Status::Fail, "an extremal effect of the dual cone is not in the allowed list", w);
      }
    }
    return result("P4", Status::Pass, "all " + std::to_string(checked) + " nontrivial extremal effects are allowed");
  });
}

PostulateResult check_p4prime(const StateSpace& s, unsigned long long seed, int samples) {
  return guarded("P4'", [&] {
    Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<StateVector> probe;
    if (s.has_finite_extreme_points()) probe = s.extreme_points();
    for (int i = 0; i < samples; ++i) probe.push_back(random_boundary_state(s, rng));
    int tested = 0;
    for (const auto& w : probe) {
      const ConeProbe cp = cone_probe(s, w.coords);
      if (cp.value > 1e-7) continue;  // numerically interior, nothing to claim
      ++tested;
      const StateOptimum far = minimize_over_states(s, -cp.minimizer.functional);
      const auto verdict = decide_distinguishable(s, {w, far.state}).verdict;
      if (verdict == Verdict::Unresolved)
        return result("P4'", Status::Indeterminate, "distinguishability LP unresolved for a boundary state");
      if (verdict == Verdict::NotDistinguishable) {
        Json wj;
        wj["state"] = coords_json(w);
        wj["candidate"] = coords_json(far.state);
        return result("P4'", Status::Fail, "boundary state with no perfectly distinguishable partner", wj);
      }
    }
    return result("P4'", Status::Pass,
                  std::to_string(tested) + " boundary states each have a perfectly distinguishable partner");
  });
}

std::optional<int> bit_dimension(const io::TheoryDefinition& t, const StateSpace& s, std::optional<int> n) {
  const std::string fam = t.family();
  if (fam == "classical") return 1;
  if (fam == "quantum") return 3;
  if (fam == "ball") return s.ambient_dim() - 1;
  if (fam == "square") return 2;
  if (fam == "polytope" && n && *n == 2) return s.ambient_dim() - 1;
  return std::nullopt;
}

std::optional<int> exponent(const io::TheoryDefinition& t, const StateSpace& s, std::optional<int> n) {
  std::vector<std::pair<int, int>> pairs;
  const std::string fam = t.family();
  if (fam == "classical" || fam == "quantum") {
    for (int m = 2; m <= 4; ++m) {
      const StateSpace x = fam == "classical" ? models::classical(m) : models::quantum(m);
      const auto c = capacity(x);
      if (c.exact) pairs.emplace_back(c.value, x.ambient_dim());
    }
  }
  if (n) pairs.emplace_back(*n, s.ambient_dim());
  return fit_capacity_exponent(pairs);
}

std::optional<double> chsh_metric(const StateSpace& a, const StateSpace& b, CompositionRule rule,
                                  std::vector<std::string>& notes) {
  try {
    if (a.has_finite_extreme_points() && b.has_finite_extreme_points()) {
      const Composite c = compose(a, b, rule);
      if (auto r = chsh_max_search(c)) return r->value;
      notes.push_back("CHSH search skipped: too many vertex and setting combinations");
      return std::nullopt;
    }
    const auto qa = a.as<QuantumRep>();
    const auto qb = b.as<QuantumRep>();
    if (qa && qb && qa->levels == 2 && qb->levels == 2) {
      notes.push_back("CHSH value found with the Bell state and Tsirelson settings (a lower bound on the maximum)");
      return chsh_value(models::bell_state(), models::tsirelson_settings(), 4, 4);
    }
    notes.push_back("CHSH maximum not searched for continuous factors");
  } catch (const BudgetExceeded& e) {
    notes.push_back(std::string("CHSH search skipped: ") + e.what());
  }
  return std::nullopt;
}

template <class T>
Json opt_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

template <class T>
std::optional<T> opt_from(const Json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  try {
    return j[key].get<T>();
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("report.metrics.") + key + ": " + e.what());
  }
}

std::string md_cell(std::string s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += "\\|";
    else if (c == '\n') out += ' ';
    else out += c;
  }
  return out;
}

template <class T>
std::string md_opt(const std::optional<T>& v) {
  if (!v) return "-";
  std::ostringstream o;
  if constexpr (std::is_same_v<T, bool>) o << (*v ? "yes" : "no");
  else if constexpr (std::is_same_v<T, double>) o << io::format_double(*v);
  else o << *v;
  return o.str();
}

}  // namespace

std::string to_string(Status s) {
  switch (s) {
    case Status::Pass: return "Pass";
    case Status::Fail: return "Fail";
    case Status::ProbesPass: return "ProbesPass";
    case Status::Indeterminate: return "Indeterminate";
  }
  return "Indeterminate";
}

Status parse_status(const std::string& s) {
  if (s == "Pass") return Status::Pass;
  if (s == "Fail") return Status::Fail;
  if (s == "ProbesPass") return Status::ProbesPass;
  if (s == "Indeterminate") return Status::Indeterminate;
  throw ValidationError("unknown postulate status \"" + s + "\"");
}

const PostulateResult& PostulateReport::at(const std::string& id) const {
  for (const auto& p : postulates)
    if (p.id == id) return p;
  throw ValidationError("report has no postulate " + id);
}

PostulateReport check_postulates(const io::TheoryDefinition& theory, const io::TheoryDefinition* partner,
                                 const CheckOptions& opts) {
  const io::TheoryDefinition& other = partner ? *partner : theory;
  const StateSpace s = io::build_space(theory);
  const StateSpace p = partner ? io::build_space(other) : s;
  CompositionRule rule = CompositionRule::MinTensor;
  if (opts.rule) rule = *opts.rule;
  else if (theory.rule) rule = parse_rule(*theory.rule);

  PostulateReport r;
  r.theory = theory.name;
  r.partner = other.name;
  r.rule = to_string(rule);
  r.seed = opts.seed;
  r.postulates.push_back(check_p1(s, p, rule, opts.seed));
  r.postulates.push_back(check_p2(theory, s));
  r.postulates.push_back(check_p3(s, opts.seed));
  r.postulates.push_back(check_p3c(s, opts.seed));
  r.postulates.push_back(check_p4(theory, s));
  r.postulates.push_back(check_p4prime(s, opts.seed, opts.boundary_samples));

  Metrics& m = r.metrics;
  m.k = s.ambient_dim();
  try {
    const auto c = capacity(s);
    if (c.exact) m.n = c.value;
    else r.notes.push_back("capacity: " + c.note);
  } catch (const BudgetExceeded& e) {
    r.notes.push_back(std::string("capacity: ") + e.what());
  }
  m.r = exponent(theory, s, m.n);
  m.d2 = bit_dimension(theory, s, m.n);
  if (m.d2) {
    m.d2_face_test = two_bit_face_dimension_test(*m.d2);
    const auto ladder = admissible_bit_dimensions(5);
    m.d2_in_ladder = std::find(ladder.begin(), ladder.end(), *m.d2) != ladder.end();
    m.g2_exception = g2_exception(*m.d2);
  }
  if (!s.as<TensorRep>()) m.strictly_convex = strict_convexity_check(s).strictly_convex;
  m.chsh_max = chsh_metric(s, p, rule, r.notes);

  r.notes.push_back("P2 compares affine invariants of faces; consistency is necessary, not sufficient");
  r.notes.push_back("tripartite composites are not checked");
  return r;
}

PostulateReport empty_report(const std::string& theory) {
  PostulateReport r;
  r.theory = theory;
  r.partner = theory;
  r.rule = "min";
  for (const char* id : kPostulateIds) r.postulates.push_back(result(id, Status::Indeterminate, "not run"));
  return r;
}

Format parse_format(const std::string& s) {
  if (s == "json") return Format::Json;
  if (s == "md" || s == "markdown") return Format::Markdown;
  throw ValidationError("unknown report format \"" + s + "\" (expected json or md)");
}

Json to_json(const PostulateReport& r) {
  Json j;
  j["theory"] = r.theory;
  j["partner"] = r.partner;
  j["rule"] = r.rule;
  j["seed"] = r.seed;
  j["postulates"] = Json::array();
  for (const auto& p : r.postulates) {
    Json x;
    x["id"] = p.id;
    x["status"] = to_string(p.status);
    x["detail"] = p.detail;
    x["witness"] = p.witness;
    j["postulates"].push_back(x);
  }
  const Metrics& m = r.metrics;
  Json mj;
  mj["K"] = opt_json(m.k);
  mj["N"] = opt_json(m.n);
  mj["r"] = opt_json(m.r);
  mj["d2"] = opt_json(m.d2);
  mj["d2_face_test"] = opt_json(m.d2_face_test);
  mj["d2_in_ladder"] = opt_json(m.d2_in_ladder);
  mj["g2_exception"] = opt_json(m.g2_exception);
  mj["strictly_convex"] = opt_json(m.strictly_convex);
  mj["chsh_max"] = opt_json(m.chsh_max);
  j["metrics"] = mj;
  j["notes"] = r.notes;
  return j;
}

PostulateReport report_from_json(const Json& j) {
  auto str = [&](const Json& o, const char* key, const std::string& where) {
    if (!o.is_object() || !o.contains(key) || !o[key].is_string())
      throw ValidationError(where + "." + key + ": missing or not a string");
    return o[key].get<std::string>();
  };
  PostulateReport r;
  r.theory = str(j, "theory", "report");
  r.partner = str(j, "partner", "report");
  r.rule = str(j, "rule", "report");
  if (!j.contains("seed") || !j["seed"].is_number_unsigned()) throw ValidationError("report.seed: expected an unsigned integer");
  r.seed = j["seed"].get<unsigned long long>();
  if (!j.contains("postulates") || !j["postulates"].is_array()) throw ValidationError("report.postulates: missing");
  for (const auto& p : j["postulates"]) {
    PostulateResult x;
    x.id = str(p, "id", "report.postulates[]");
    x.status = parse_status(str(p, "status", "report.postulates[]"));
    x.detail = str(p, "detail", "report.postulates[]");
    x.witness = p.contains("witness") ? p["witness"] : Json(nullptr);
    r.postulates.push_back(std::move(x));
  }
  if (!j.contains("metrics") || !j["metrics"].is_object()) throw ValidationError("report.metrics: missing");
  const Json& mj = j["metrics"];
  r.metrics.k = opt_from<int>(mj, "K");
  r.metrics.n = opt_from<int>(mj, "N");
  r.metrics.r = opt_from<int>(mj, "r");
  r.metrics.d2 = opt_from<int>(mj, "d2");
  r.metrics.d2_face_test = opt_from<bool>(mj, "d2_face_test");
  r.metrics.d2_in_ladder = opt_from<bool>(mj, "d2_in_ladder");
  r.metrics.g2_exception = opt_from<bool>(mj, "g2_exception");
  r.metrics.strictly_convex = opt_from<bool>(mj, "strictly_convex");
  r.metrics.chsh_max = opt_from<double>(mj, "chsh_max");
  if (j.contains("notes")) {
    if (!j["notes"].is_array()) throw ValidationError("report.notes: expected an array");
    for (const auto& n : j["notes"]) {
      if (!n.is_string()) throw ValidationError("report.notes: expected strings");
      r.notes.push_back(n.get<std::string>());
    }
  }
  return r;
}

std::string render(const PostulateReport& r, Format f) {
  if (f == Format::Json) return io::dump(to_json(r));
  std::ostringstream o;
  o << "# Postulate report: " << r.theory << "\n\n";
  o << "- partner: " << r.partner << "\n- composition rule: " << r.rule << "\n- seed: " << r.seed << "\n\n";
  o << "| Postulate | Status | Detail |\n|---|---|---|\n";
  for (const auto& p : r.postulates) o << "| " << p.id << " | " << to_string(p.status) << " | " << md_cell(p.detail) << " |\n";
  const Metrics& m = r.metrics;
  o << "\n## Metrics\n\n| Metric | Value |\n|---|---|\n";
  o << "| K | " << md_opt(m.k) << " |\n";
  o << "| N | " << md_opt(m.n) << " |\n";
  o << "| r | " << md_opt(m.r) << " |\n";
  o << "| d2 | " << md_opt(m.d2) << " |\n";
  o << "| d2 two-bit face test | " << md_opt(m.d2_face_test) << " |\n";
  o << "| d2 = 2^r - 1 | " << md_opt(m.d2_in_ladder) << " |\n";
  o << "| G2 exception | " << md_opt(m.g2_exception) << " |\n";
  o << "| strictly convex | " << md_opt(m.strictly_convex) << " |\n";
  o << "| CHSH max | " << md_opt(m.chsh_max) << " |\n";
  if (!r.notes.empty()) {
    o << "\n## Notes\n\n";
    for (const auto& n : r.notes) o << "- " << n << "\n";
  }
  return o.str();
}

std::optional<ChshSearch> chsh_max_search(const Composite& c, std::size_t budget) {
  if (!c.a->has_finite_extreme_points() || !c.b->has_finite_extreme_points()) return std::nullopt;
  if (!c.space.has_finite_extreme_points()) return std::nullopt;
  auto nontrivial = [](const StateSpace& s) {
    std::vector<Effect> out;
    const int k = s.ambient_dim();
    for (const Effect& e : extremal_effects(s)) {
      if (e.functional.isZero(1e-9) || (e.functional - Effect::unit(k).functional).isZero(1e-9)) continue;
      out.push_back(e);
    }
    return out;
  };
  const auto ea = nontrivial(*c.a);
  const auto eb = nontrivial(*c.b);
  const auto verts = c.space.extreme_points();
  const std::size_t na = ea.size(), nb = eb.size();
  if (na == 0 || nb == 0) return std::nullopt;
  const std::size_t work = verts.size() * na * na * nb * nb;
  if (work > budget) return std::nullopt;

  auto binary = [](const Effect& e) { return Measurement{{e, e.complement()}}; };
  ChshSearch best;
  best.value = -1.0;
  Matrix corr(na, nb);
  for (const auto& v : verts) {
    for (std::size_t i = 0; i < na; ++i)
      for (std::size_t j = 0; j < nb; ++j)
        corr(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            correlator(v, binary(ea[i]), binary(eb[j]), c.ka(), c.kb());
    for (std::size_t a0 = 0; a0 < na; ++a0)
      for (std::size_t a1 = 0; a1 < na; ++a1)
        for (std::size_t b0 = 0; b0 < nb; ++b0)
          for (std::size_t b1 = 0; b1 < nb; ++b1) {
            auto C = [&](std::size_t x, std::size_t y) {
              return corr(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y));
            };
            const double val = std::abs(C(a0, b0) + C(a0, b1) + C(a1, b0) - C(a1, b1));
            ++best.evaluated;
            if (val > best.value + 1e-12) {
              best.value = val;
              best.state = v;
              best.settings = ChshSettings{{binary(ea[a0]), binary(ea[a1])}, {binary(eb[b0]), binary(eb[b1])}};
            }
          }
  }
  return best;
}

}  // namespace gptlab::runner
