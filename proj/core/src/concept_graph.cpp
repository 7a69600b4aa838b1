#include "catalyst/concept_graph.hpp"

#include <algorithm>
#include <cmath>

#include "catalyst/error.hpp"
#include "catalyst/text.hpp"

namespace catalyst {

namespace {

Concept& require_concept(SessionState& state, const ConceptId& id) {
  Concept* c = state.graph.find(id);
  if (!c) throw Error(ErrorCode::NotFound, "concept '" + id.str() + "' not found");
  return *c;
}

void detach_everywhere(SessionState& state, const ConceptId& id) {
  std::erase_if(state.graph.edges, [&](const Edge& e) { return e.touches(id); });
  for (QuestionGroup& g : state.groups) std::erase(g.attached, id);
}

}  // namespace

Concept create_concept_from_highlight(SessionState& state, std::size_t start, std::size_t end) {
  if (!state.has_approved_summary()) {
    throw Error(ErrorCode::NoApprovedSummary, "highlighting requires an approved summary");
  }
  const std::string& summary = state.summary->text;
  if (start >= end) throw Error(ErrorCode::InvalidSpan, "highlight span is empty or reversed");
  auto b = text::utf8_byte_offset(summary, start);
  auto e = text::utf8_byte_offset(summary, end);
  if (!b || !e) throw Error(ErrorCode::InvalidSpan, "highlight span exceeds the summary length");
  std::string_view label = text::trim(std::string_view(summary).substr(*b, *e - *b));
  if (label.empty()) throw Error(ErrorCode::BlankSpan, "highlighted text is blank");

  Concept c{
      .id = state.next_concept_id(),
      .label = std::string(label),
      .origin = HighlightOrigin{start, end, state.summary->revision},
      .position = std::nullopt,
  };
  state.graph.concepts.push_back(c);
  return c;
}

Concept create_custom_concept(SessionState& state, std::string_view label) {
  std::string_view trimmed = text::trim(label);
  if (trimmed.empty()) throw Error(ErrorCode::BlankLabel, "concept label is blank");
  Concept c{
      .id = state.next_concept_id(),
      .label = std::string(trimmed),
      .origin = CustomOrigin{},
      .position = std::nullopt,
  };
  state.graph.concepts.push_back(c);
  return c;
}

Concept place_concept(SessionState& state, const ConceptId& id, double x, double y) {
  Concept& c = require_concept(state, id);
  if (!std::isfinite(x) || !std::isfinite(y)) {
    throw Error(ErrorCode::NonFiniteCoordinate, "coordinates must be finite");
  }
  c.position = Point{x, y};
  return c;
}

Concept return_to_waiting(SessionState& state, const ConceptId& id) {
  Concept& c = require_concept(state, id);
  if (!c.in_graph()) throw Error(ErrorCode::NotInGraph, "concept '" + id.str() + "' is already waiting");
  c.position.reset();
  Concept result = c;
  detach_everywhere(state, id);
  return result;
}

void remove_concept(SessionState& state, const ConceptId& id) {
  require_concept(state, id);
  detach_everywhere(state, id);
  std::erase_if(state.graph.concepts, [&](const Concept& c) { return c.id == id; });
}

Edge connect_concepts(SessionState& state, const ConceptId& a, const ConceptId& b) {
  if (a == b) throw Error(ErrorCode::SelfEdge, "a concept cannot be connected to itself");
  const Concept& ca = require_concept(state, a);
  const Concept& cb = require_concept(state, b);
  if (!ca.in_graph() || !cb.in_graph()) {
    throw Error(ErrorCode::NotInGraph, "both concepts must be placed on the graph");
  }
  auto& edges = state.graph.edges;
  if (std::any_of(edges.begin(), edges.end(), [&](const Edge& e) { return e.joins(a, b); })) {
    throw Error(ErrorCode::DuplicateEdge, "concepts '" + a.str() + "' and '" + b.str() + "' are already connected");
  }
  Edge e{state.next_edge_id(), a, b};
  edges.push_back(e);
  return e;
}

void disconnect(SessionState& state, const EdgeId& id) {
  auto removed = std::erase_if(state.graph.edges, [&](const Edge& e) { return e.id == id; });
  if (removed == 0) throw Error(ErrorCode::NotFound, "edge '" + id.str() + "' not found");
}

bool is_stale(const Concept& c, const SessionState& state) noexcept {
  const HighlightOrigin* h = c.highlight();
  if (!h) return false;
  return !state.summary || state.summary->revision != h->summary_revision;
}

}  // namespace catalyst
