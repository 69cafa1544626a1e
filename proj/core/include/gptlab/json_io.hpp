#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gptlab/convex.hpp"

namespace gptlab::io {

using Json = nlohmann::json;

/// Deterministic text: sorted keys, two-space indent, doubles with 17
/// significant digits (always carrying a '.' or exponent), trailing newline.
std::string dump(const Json& j);
std::string format_double(double v);

Json to_json(const Vector& v);
Json to_json(const Matrix& m);
Vector vector_from_json(const Json& j);
Matrix matrix_from_json(const Json& j);

struct TheoryDefinition {
  std::string name;
  Json space;  // {"family": ..., parameters}
  std::string group_kind = "auto";
  std::vector<Matrix> group_matrices;
  bool all_effects = true;
  std::vector<Vector> allowed_effects;
  std::optional<std::string> rule;  // preferred composition rule
  Json composite;                   // present on files written by compose

  /// "classical", "ball", "square", "quantum", "polytope" or "tensor".
  std::string family() const;
  /// N or d for parametrized built-ins, 0 otherwise.
  int parameter() const;
};

/// Schema validation; throws ValidationError with the offending path.
TheoryDefinition parse_theory(const Json& j);
TheoryDefinition load_theory(const std::string& path);
Json theory_to_json(const TheoryDefinition& t);

/// Builds and validates the state space, attaching the declared group.
StateSpace build_space(const TheoryDefinition& t);
StateSpace build_space_json(const Json& space, const std::string& where = "space");

/// Reads a whole file; throws ValidationError if it cannot be opened.
std::string read_file(const std::string& path);
Json parse_json_text(const std::string& text, const std::string& where);

}  // namespace gptlab::io
