#pragma once

#include <cstddef>
#include <string_view>

#include "catalyst/model.hpp"

namespace catalyst {

// Concept map operations for the Conceptualize stage.
//
// Cascades keep the graph consistent: a concept that leaves the graph area
// (return_to_waiting) or disappears (remove_concept) takes its incident edges
// with it and is detached from every question group. Questions already
// generated from it are kept.

// `start`/`end` are code-point offsets into the approved summary, end exclusive.
Concept create_concept_from_highlight(SessionState& state, std::size_t start, std::size_t end);
Concept create_custom_concept(SessionState& state, std::string_view label);

// Moves a concept onto the canvas or repositions it there. Edges are untouched.
Concept place_concept(SessionState& state, const ConceptId& id, double x, double y);
Concept return_to_waiting(SessionState& state, const ConceptId& id);
void remove_concept(SessionState& state, const ConceptId& id);

Edge connect_concepts(SessionState& state, const ConceptId& a, const ConceptId& b);
void disconnect(SessionState& state, const EdgeId& id);

// A highlight span goes stale once the summary it points into is rewritten.
// The concept keeps its label; only the span stops being meaningful.
bool is_stale(const Concept& c, const SessionState& state) noexcept;

}  // namespace catalyst
