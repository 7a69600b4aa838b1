#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "catalyst/model.hpp"

namespace catalyst {

struct Accept {};
struct Reject {};
struct Modify {
  std::string text;
};
using Verdict = std::variant<Accept, Reject, Modify>;

// What a question prompt is built from: the summary, the labels attached to
// a group (in attachment order), and the edges whose endpoints are both
// attached, as label pairs.
struct GenerationInput {
  std::string summary;
  std::vector<std::string> concepts;
  std::vector<std::pair<std::string, std::string>> relations;
};

QuestionGroup create_group(SessionState& state);

// Click semantics: attaches the concept if absent, detaches it if present.
QuestionGroup toggle_concept_in_group(SessionState& state, const GroupId& group, const ConceptId& concept_id);

GenerationInput generation_input(const SessionState& state, const GroupId& group);

// Appends freshly generated questions as pending and bumps generation_count.
std::vector<Question> append_generated_questions(SessionState& state, const GroupId& group,
                                                 const std::vector<std::string>& texts);

// Any status may move to any other. Accept appends to the bank (re-accepting
// an accepted question keeps its place); reject removes it and closes the gap
// so bank positions stay 1..k; modify rewrites current_text only.
Question review_question(SessionState& state, const QuestionId& question, const Verdict& verdict);

// Accepted questions in acceptance order.
std::vector<Question> question_bank(const SessionState& state);

}  // namespace catalyst
