#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "gptlab/composites.hpp"
#include "gptlab/json_io.hpp"

namespace gptlab::runner {

enum class Status { Pass, Fail, ProbesPass, Indeterminate };

std::string to_string(Status s);
Status parse_status(const std::string& s);

inline constexpr std::array<const char*, 6> kPostulateIds{"P1", "P2", "P3", "P3C", "P4", "P4'"};

struct PostulateResult {
  std::string id;
  Status status = Status::Indeterminate;
  std::string detail;
  io::Json witness;  // null unless the check produced something to replay

  bool operator==(const PostulateResult& o) const {
    return id == o.id && status == o.status && detail == o.detail && witness == o.witness;
  }
};

struct Metrics {
  std::optional<int> k;
  std::optional<int> n;
  std::optional<int> r;
  std::optional<int> d2;
  std::optional<bool> d2_face_test;  // two-bit face dimension argument
  std::optional<bool> d2_in_ladder;  // d2 = 2^r - 1
  std::optional<bool> g2_exception;
  std::optional<bool> strictly_convex;
  std::optional<double> chsh_max;

  bool operator==(const Metrics& o) const = default;
};

struct PostulateReport {
  std::string theory;
  std::string partner;
  std::string rule;
  unsigned long long seed = 0;
  std::vector<PostulateResult> postulates;  // kPostulateIds order
  Metrics metrics;
  std::vector<std::string> notes;

  const PostulateResult& at(const std::string& id) const;
  bool operator==(const PostulateReport& o) const = default;
};

struct CheckOptions {
  unsigned long long seed = 0;
  std::optional<CompositionRule> rule;  // overrides the theory's preference
  int boundary_samples = 12;
};

/// Runs every postulate check. Budget exhaustion inside a check becomes an
/// Indeterminate status naming the stage; validation errors propagate.
PostulateReport check_postulates(const io::TheoryDefinition& theory, const io::TheoryDefinition* partner = nullptr,
                                 const CheckOptions& opts = {});

/// Every postulate present and Indeterminate, metrics empty.
PostulateReport empty_report(const std::string& theory);

enum class Format { Json, Markdown };
/// "json", "md" or "markdown"; throws ValidationError otherwise.
Format parse_format(const std::string& s);

io::Json to_json(const PostulateReport& r);
/// Throws ValidationError on malformed input.
PostulateReport report_from_json(const io::Json& j);
std::string render(const PostulateReport& r, Format f);

/// Exhaustive CHSH search over the vertices of a finite composite, with both
/// parties choosing binary measurements {E, 1 - E} from their extremal effects.
struct ChshSearch {
  double value = 0.0;
  StateVector state;
  ChshSettings settings;
  std::size_t evaluated = 0;
};
/// nullopt when a factor is continuous or the search exceeds the budget.
std::optional<ChshSearch> chsh_max_search(const Composite& c, std::size_t budget = 4000000);

}  // namespace gptlab::runner
