#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "catalyst/ids.hpp"

namespace catalyst {

using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;

enum class Stage { Summarize, Conceptualize, Synthesize };

std::string_view to_string(Stage stage) noexcept;
std::optional<Stage> parse_stage(std::string_view s) noexcept;

// --- summary -----------------------------------------------------------------

enum class SummarySource { Uploaded, Typed };

std::string_view to_string(SummarySource source) noexcept;

struct Summary {
  std::string text;
  SummarySource source = SummarySource::Typed;
  std::size_t word_count = 0;
  bool approved = false;
  std::int64_t revision = 0;

  friend bool operator==(const Summary&, const Summary&) = default;
};

// --- concept graph -----------------------------------------------------------

// Span in code points into the summary text as it was at `summary_revision`.
struct HighlightOrigin {
  std::size_t start = 0;
  std::size_t end = 0;
  std::int64_t summary_revision = 0;

  friend bool operator==(const HighlightOrigin&, const HighlightOrigin&) = default;
};

struct CustomOrigin {
  friend bool operator==(const CustomOrigin&, const CustomOrigin&) = default;
};

using ConceptOrigin = std::variant<HighlightOrigin, CustomOrigin>;

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

struct Concept {
  ConceptId id;
  std::string label;
  ConceptOrigin origin = CustomOrigin{};
  // nullopt while the concept sits in the waiting area.
  std::optional<Point> position;

  bool in_graph() const noexcept { return position.has_value(); }
  const HighlightOrigin* highlight() const noexcept { return std::get_if<HighlightOrigin>(&origin); }

  friend bool operator==(const Concept&, const Concept&) = default;
};

// Undirected: (a, b) and (b, a) denote the same line.
struct Edge {
  EdgeId id;
  ConceptId a;
  ConceptId b;

  bool touches(const ConceptId& c) const noexcept { return a == c || b == c; }
  bool joins(const ConceptId& x, const ConceptId& y) const noexcept {
    return (a == x && b == y) || (a == y && b == x);
  }

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct ConceptGraph {
  std::vector<Concept> concepts;
  std::vector<Edge> edges;

  Concept* find(const ConceptId& id) noexcept;
  const Concept* find(const ConceptId& id) const noexcept;
  const Edge* find_edge(const EdgeId& id) const noexcept;

  friend bool operator==(const ConceptGraph&, const ConceptGraph&) = default;
};

// --- questions ---------------------------------------------------------------

enum class QuestionStatus { Pending, Accepted, Rejected };

std::string_view to_string(QuestionStatus status) noexcept;

struct Question {
  QuestionId id;
  GroupId group;
  std::string original_text;
  std::string current_text;
  QuestionStatus status = QuestionStatus::Pending;
  // 1-based position in the bank while accepted.
  std::optional<std::uint64_t> accepted_at;

  friend bool operator==(const Question&, const Question&) = default;
};

struct QuestionGroup {
  GroupId id;
  std::vector<ConceptId> attached;
  std::vector<Question> questions;
  std::uint32_t generation_count = 0;

  bool is_attached(const ConceptId& c) const noexcept;

  friend bool operator==(const QuestionGroup&, const QuestionGroup&) = default;
};

struct QuestionBank {
  std::vector<QuestionId> entries;

  friend bool operator==(const QuestionBank&, const QuestionBank&) = default;
};

// --- session -----------------------------------------------------------------

// Next serial for each per-session id kind; persisted so restored sessions
// never hand out an id twice.
struct IdCounters {
  std::uint64_t concept_id = 1;
  std::uint64_t edge_id = 1;
  std::uint64_t group_id = 1;
  std::uint64_t question_id = 1;

  friend bool operator==(const IdCounters&, const IdCounters&) = default;
};

struct SessionState {
  SessionId id;
  Stage stage = Stage::Summarize;
  std::optional<Summary> summary;
  ConceptGraph graph;
  std::vector<QuestionGroup> groups;
  QuestionBank bank;
  IdCounters counters;
  Timestamp created_at{};
  Timestamp updated_at{};

  bool has_approved_summary() const noexcept { return summary && summary->approved; }

  QuestionGroup* find_group(const GroupId& id) noexcept;
  const QuestionGroup* find_group(const GroupId& id) const noexcept;
  Question* find_question(const QuestionId& id) noexcept;
  const Question* find_question(const QuestionId& id) const noexcept;

  ConceptId next_concept_id();
  EdgeId next_edge_id();
  GroupId next_group_id();
  QuestionId next_question_id();

  friend bool operator==(const SessionState&, const SessionState&) = default;
};

// Lists every violated SessionState invariant; empty means consistent.
std::vector<std::string> invariant_violations(const SessionState& state);

}  // namespace catalyst
