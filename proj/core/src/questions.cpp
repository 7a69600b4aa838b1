#include "catalyst/questions.hpp"

#include <algorithm>

#include "catalyst/error.hpp"
#include "catalyst/text.hpp"

namespace catalyst {

namespace {

QuestionGroup& require_group(SessionState& state, const GroupId& id) {
  QuestionGroup* g = state.find_group(id);
  if (!g) throw Error(ErrorCode::NotFound, "question group '" + id.str() + "' not found");
  return *g;
}

void leave_bank(SessionState& state, Question& q) {
  if (!q.accepted_at) return;
  std::uint64_t seq = *q.accepted_at;
  q.accepted_at.reset();
  std::erase(state.bank.entries, q.id);
  for (auto& g : state.groups) {
    for (auto& other : g.questions) {
      if (other.accepted_at && *other.accepted_at > seq) --*other.accepted_at;
    }
  }
}

}  // namespace

QuestionGroup create_group(SessionState& state) {
  if (!state.has_approved_summary()) {
    throw Error(ErrorCode::NoApprovedSummary, "question groups require an approved summary");
  }
  QuestionGroup g;
  g.id = state.next_group_id();
  state.groups.push_back(g);
  return g;
}

QuestionGroup toggle_concept_in_group(SessionState& state, const GroupId& group, const ConceptId& concept_id) {
  QuestionGroup& g = require_group(state, group);
  const Concept* c = state.graph.find(concept_id);
  if (!c) throw Error(ErrorCode::NotFound, "concept '" + concept_id.str() + "' not found");
  if (g.is_attached(concept_id)) {
    std::erase(g.attached, concept_id);
  } else {
    if (!c->in_graph()) {
      throw Error(ErrorCode::ConceptNotInGraph, "concept '" + concept_id.str() + "' is not on the graph");
    }
    g.attached.push_back(concept_id);
  }
  return g;
}

GenerationInput generation_input(const SessionState& state, const GroupId& group) {
  const QuestionGroup* g = state.find_group(group);
  if (!g) throw Error(ErrorCode::NotFound, "question group '" + group.str() + "' not found");
  if (g->attached.empty()) throw Error(ErrorCode::EmptyGroup, "attach at least one concept before generating");

  GenerationInput in;
  if (state.summary) in.summary = state.summary->text;
  for (const ConceptId& id : g->attached) {
    if (const Concept* c = state.graph.find(id)) in.concepts.push_back(c->label);
  }
  for (const Edge& e : state.graph.edges) {
    if (g->is_attached(e.a) && g->is_attached(e.b)) {
      in.relations.emplace_back(state.graph.find(e.a)->label, state.graph.find(e.b)->label);
    }
  }
  return in;
}

std::vector<Question> append_generated_questions(SessionState& state, const GroupId& group,
                                                 const std::vector<std::string>& texts) {
  QuestionGroup& g = require_group(state, group);
  std::vector<Question> added;
  for (const std::string& t : texts) {
    std::string_view trimmed = text::trim(t);
    if (trimmed.empty()) throw Error(ErrorCode::TooFewQuestions, "generated question is empty");
    Question q{
        .id = state.next_question_id(),
        .group = group,
        .original_text = std::string(trimmed),
        .current_text = std::string(trimmed),
        .status = QuestionStatus::Pending,
        .accepted_at = std::nullopt,
    };
    added.push_back(q);
  }
  g.questions.insert(g.questions.end(), added.begin(), added.end());
  ++g.generation_count;
  return added;
}

Question review_question(SessionState& state, const QuestionId& question, const Verdict& verdict) {
  Question* q = state.find_question(question);
  if (!q) throw Error(ErrorCode::NotFound, "question '" + question.str() + "' not found");

  if (const Modify* m = std::get_if<Modify>(&verdict)) {
    std::string_view trimmed = text::trim(m->text);
    if (trimmed.empty()) throw Error(ErrorCode::EmptyText, "modified question text is empty");
    q->current_text = std::string(trimmed);
  } else if (std::holds_alternative<Accept>(verdict)) {
    if (q->status != QuestionStatus::Accepted) {
      q->status = QuestionStatus::Accepted;
      q->accepted_at = state.bank.entries.size() + 1;
      state.bank.entries.push_back(q->id);
    }
  } else {
    leave_bank(state, *q);
    q->status = QuestionStatus::Rejected;
  }
  return *q;
}

std::vector<Question> question_bank(const SessionState& state) {
  std::vector<Question> out;
  out.reserve(state.bank.entries.size());
  for (const QuestionId& id : state.bank.entries) {
    if (const Question* q = state.find_question(id)) out.push_back(*q);
  }
  return out;
}

}  // namespace catalyst
