#include "gptlab/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include "gptlab/error.hpp"
#include "gptlab/models.hpp"
#include "gptlab/symmetry.hpp"

namespace gptlab::io {

namespace {

void escape_into(std::string& out, const std::string& s) {
  out += '"';
  for (unsigned char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += static_cast<char>(c);
        }
    }
  }
  out += '"';
}

bool is_scalar_array(const Json& j) {
  if (!j.is_array()) return false;
  for (const auto& x : j)
    if (x.is_array() || x.is_object()) return false;
  return true;
}

void write(std::string& out, const Json& j, int depth) {
  const std::string pad(static_cast<std::size_t>(depth + 1) * 2, ' ');
  const std::string close(static_cast<std::size_t>(depth) * 2, ' ');
  switch (j.type()) {
    case Json::value_t::null: out += "null"; break;
    case Json::value_t::boolean: out += j.get<bool>() ? "true" : "false"; break;
    case Json::value_t::number_integer: out += std::to_string(j.get<long long>()); break;
    case Json::value_t::number_unsigned: out += std::to_string(j.get<unsigned long long>()); break;
    case Json::value_t::number_float: out += format_double(j.get<double>()); break;
    case Json::value_t::string: escape_into(out, j.get<std::string>()); break;
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        break;
      }
      // numeric rows stay on one line so matrices remain readable
      if (is_scalar_array(j)) {
        out += '[';
        bool first = true;
        for (const auto& x : j) {
          if (!first) out += ", ";
          first = false;
          write(out, x, depth + 1);
        }
        out += ']';
        break;
      }
      out += "[\n";
      bool first = true;
      for (const auto& x : j) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        write(out, x, depth + 1);
      }
      out += '\n' + close + ']';
      break;
    }
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        break;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {  // std::map order: sorted
        if (!first) out += ",\n";
        first = false;
        out += pad;
        escape_into(out, it.key());
        out += ": ";
        write(out, it.value(), depth + 1);
      }
      out += '\n' + close + '}';
      break;
    }
    default: out += "null";
  }
}

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ValidationError(where + ": " + what);
}

int get_int(const Json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) fail(where, std::string("missing \"") + key + "\"");
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) fail(where + "." + key, "expected an integer");
  return v.get<int>();
}

std::vector<Vector> vectors_from(const Json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of vectors");
  std::vector<Vector> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    try {
      out.push_back(vector_from_json(j[i]));
    } catch (const ValidationError& e) {
      fail(where + "[" + std::to_string(i) + "]", e.what());
    }
  }
  return out;
}

}  // namespace

std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string dump(const Json& j) {
  std::string out;
  write(out, j, 0);
  out += '\n';
  return out;
}

Json to_json(const Vector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Json to_json(const Matrix& m) {
  Json a = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) a.push_back(to_json(Vector(m.row(r).transpose())));
  return a;
}

Vector vector_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw ValidationError("expected a non-empty array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ValidationError("entry " + std::to_string(i) + " is not a number");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw ValidationError("expected a non-empty array of rows");
  Matrix m;
  for (std::size_t r = 0; r < j.size(); ++r) {
    Vector row = vector_from_json(j[r]);
    if (r == 0) m.resize(static_cast<Eigen::Index>(j.size()), row.size());
    if (row.size() != m.cols()) throw ValidationError("ragged matrix rows");
    m.row(static_cast<Eigen::Index>(r)) = row.transpose();
  }
  return m;
}

std::string TheoryDefinition::family() const { return space.value("family", std::string()); }

int TheoryDefinition::parameter() const {
  if (space.contains("N") && space["N"].is_number_integer()) return space["N"].get<int>();
  if (space.contains("d") && space["d"].is_number_integer()) return space["d"].get<int>();
  return 0;
}

TheoryDefinition parse_theory(const Json& j) {
  if (!j.is_object()) fail("theory", "expected a JSON object");
  TheoryDefinition t;
  if (!j.contains("name") || !j["name"].is_string()) fail("theory.name", "missing or not a string");
  t.name = j["name"].get<std::string>();
  if (!j.contains("space") || !j["space"].is_object()) fail("theory.space", "missing or not an object");
  t.space = j["space"];
  if (!t.space.contains("family") || !t.space["family"].is_string()) fail("theory.space.family", "missing");

  if (j.contains("group")) {
    const auto& g = j["group"];
    if (!g.is_object() || !g.contains("kind") || !g["kind"].is_string()) fail("theory.group", "needs a \"kind\"");
    t.group_kind = g["kind"].get<std::string>();
    if (t.group_kind != "auto" && t.group_kind != "finite")
      fail("theory.group.kind", "expected \"auto\" or \"finite\", got \"" + t.group_kind + "\"");
    if (t.group_kind == "finite") {
      if (!g.contains("matrices") || !g["matrices"].is_array() || g["matrices"].empty())
        fail("theory.group.matrices", "a finite group needs a non-empty matrix list");
      for (std::size_t i = 0; i < g["matrices"].size(); ++i) {
        try {
          t.group_matrices.push_back(matrix_from_json(g["matrices"][i]));
        } catch (const ValidationError& e) {
          fail("theory.group.matrices[" + std::to_string(i) + "]", e.what());
        }
      }
    }
  }

  if (j.contains("allowed_effects")) {
    const auto& e = j["allowed_effects"];
    if (e.is_string()) {
      if (e.get<std::string>() != "all") fail("theory.allowed_effects", "expected \"all\" or a list");
    } else {
      t.all_effects = false;
      t.allowed_effects = vectors_from(e, "theory.allowed_effects");
    }
  }

  if (j.contains("rule")) {
    if (!j["rule"].is_string()) fail("theory.rule", "expected \"min\" or \"max\"");
    try {
      (void)parse_rule(j["rule"].get<std::string>());
    } catch (const Error& e) {
      fail("theory.rule", e.what());
    }
    t.rule = j["rule"].get<std::string>();
  }
  if (j.contains("composite")) t.composite = j["composite"];

  // Building the space is the real schema check for the space block.
  const StateSpace s = build_space(t);
  for (std::size_t i = 0; i < t.allowed_effects.size(); ++i) {
    if (t.allowed_effects[i].size() != s.ambient_dim())
      fail("theory.allowed_effects[" + std::to_string(i) + "]", "wrong dimension");
    if (!contains_effect(s, Effect(t.allowed_effects[i]), 1e-7))
      fail("theory.allowed_effects[" + std::to_string(i) + "]", "not a valid effect on the space");
  }
  return t;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json parse_json_text(const std::string& text, const std::string& where) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ValidationError(where + ": " + e.what());
  }
}

TheoryDefinition load_theory(const std::string& path) { return parse_theory(parse_json_text(read_file(path), path)); }

Json theory_to_json(const TheoryDefinition& t) {
  Json j;
  j["name"] = t.name;
  j["space"] = t.space;
  Json g;
  g["kind"] = t.group_kind;
  if (t.group_kind == "finite") {
    g["matrices"] = Json::array();
    for (const auto& m : t.group_matrices) g["matrices"].push_back(to_json(m));
  }
  j["group"] = g;
  if (t.all_effects) {
    j["allowed_effects"] = "all";
  } else {
    j["allowed_effects"] = Json::array();
    for (const auto& e : t.allowed_effects) j["allowed_effects"].push_back(to_json(e));
  }
  if (t.rule) j["rule"] = *t.rule;
  if (!t.composite.is_null()) j["composite"] = t.composite;
  return j;
}

StateSpace build_space_json(const Json& space, const std::string& where) {
  if (!space.is_object() || !space.contains("family") || !space["family"].is_string())
    fail(where, "needs a \"family\" string");
  const std::string fam = space["family"].get<std::string>();
  try {
    if (fam == "classical") return models::classical(get_int(space, "N", where));
    if (fam == "quantum") return models::quantum(get_int(space, "N", where));
    if (fam == "ball") return models::gbit_ball(get_int(space, "d", where));
    if (fam == "square") return models::square_gbit();
    if (fam == "polytope") {
      if (!space.contains("vertices")) fail(where, "a polytope needs \"vertices\"");
      std::vector<StateVector> v;
      for (auto& x : vectors_from(space["vertices"], where + ".vertices")) v.emplace_back(std::move(x));
      if (v.empty()) fail(where + ".vertices", "empty vertex list");
      const int k = v.front().dim();
      for (const auto& x : v)
        if (x.dim() != k) fail(where + ".vertices", "vertices of different dimension");
      return StateSpace::polytope(std::move(v));
    }
    if (fam == "tensor") {
      if (!space.contains("parts") || !space["parts"].is_array() || space["parts"].size() != 2)
        fail(where, "a tensor space needs two \"parts\"");
      if (!space.contains("rule") || !space["rule"].is_string()) fail(where, "a tensor space needs a \"rule\"");
      auto a = std::make_shared<const StateSpace>(build_space_json(space["parts"][0], where + ".parts[0]"));
      auto b = std::make_shared<const StateSpace>(build_space_json(space["parts"][1], where + ".parts[1]"));
      return StateSpace::tensor(a, b, parse_rule(space["rule"].get<std::string>()));
    }
  } catch (const DomainError& e) {
    fail(where, e.what());
  } catch (const DimensionError& e) {
    fail(where, e.what());
  }
  fail(where + ".family", "unknown family \"" + fam + "\"");
}

StateSpace build_space(const TheoryDefinition& t) {
  StateSpace s = build_space_json(t.space, "theory.space");
  if (t.group_kind == "finite") {
    for (std::size_t i = 0; i < t.group_matrices.size(); ++i) {
      const Matrix& m = t.group_matrices[i];
      if (m.rows() != s.ambient_dim() || m.cols() != s.ambient_dim())
        fail("theory.group.matrices[" + std::to_string(i) + "]", "must be " + std::to_string(s.ambient_dim()) +
                                                                    " x " + std::to_string(s.ambient_dim()));
    }
    s = s.with_group(GroupDescriptor{FiniteMatrixGroup{t.group_matrices}});
    validate_group(s);
    return s;
  }
  // Files written by compose carry their factors; the group acts factorwise.
  if (t.composite.is_object() && t.composite.contains("parts")) {
    const auto& parts = t.composite["parts"];
    if (!parts.is_array() || parts.size() != 2) fail("theory.composite.parts", "expected two theories");
    const StateSpace a = build_space(parse_theory(parts[0]));
    const StateSpace b = build_space(parse_theory(parts[1]));
    if (a.ambient_dim() * b.ambient_dim() != s.ambient_dim())
      fail("theory.composite.parts", "factor dimensions do not multiply to the composite dimension");
    return s.with_group(GroupDescriptor{LocalProductGroup{std::make_shared<const GroupDescriptor>(a.group()),
                                                          std::make_shared<const GroupDescriptor>(b.group()),
                                                          a.ambient_dim(), b.ambient_dim()}});
  }
  if (s.as<PolytopeRep>() && std::holds_alternative<TrivialGroup>(s.group().kind)) {
    const auto& v = s.as<PolytopeRep>()->vertices;
    // Past the search budget the polytope keeps the trivial group.
    if (v.size() <= SymmetryOptions{}.vertex_budget) {
      try {
        s = s.with_group(GroupDescriptor{polytope_symmetry_group(v)});
      } catch (const BudgetExceeded&) {
      }
    }
  }
  return s;
}

}  // namespace gptlab::io
