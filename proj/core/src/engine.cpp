#include "catalyst/engine.hpp"

#include "catalyst/concept_graph.hpp"
#include "catalyst/session.hpp"
#include "catalyst/summary.hpp"

namespace catalyst {

Engine::InFlight::InFlight(Engine& engine, std::string key, ErrorCode busy_code, const std::string& busy_message)
    : engine_(engine), key_(std::move(key)) {
  std::lock_guard lock(engine_.in_flight_mu_);
  if (!engine_.in_flight_.insert(key_).second) throw Error(busy_code, busy_message);
}

Engine::InFlight::~InFlight() {
  std::lock_guard lock(engine_.in_flight_mu_);
  engine_.in_flight_.erase(key_);
}

Engine::Engine(SessionStore& store, LlmGateway gateway, EngineOptions options)
    : store_(store), gateway_(std::move(gateway)), options_(std::move(options)) {
  if (options_.summary_target_words == 0) throw Error(ErrorCode::InvalidConfig, "summary_target_words must be positive");
  if (options_.questions_per_group == 0) throw Error(ErrorCode::InvalidConfig, "questions_per_group must be positive");
}

SessionState Engine::create_session() { return store_.create(); }

SessionState Engine::get(const SessionId& id) const { return store_.get(id); }

void Engine::remove_session(const SessionId& id) { store_.remove(id); }

SessionState Engine::set_stage(const SessionId& id, Stage stage) {
  return store_.mutate(id, [&](SessionState& s) {
    catalyst::set_stage(s, stage);
    return s;
  });
}

Summary Engine::set_summary_text(const SessionId& id, std::string_view text) {
  return store_.mutate(id, [&](SessionState& s) { return catalyst::set_summary_text(s, text); });
}

Summary Engine::edit_summary(const SessionId& id, std::string_view text) {
  return store_.mutate(id, [&](SessionState& s) { return catalyst::edit_summary(s, text); });
}

SessionState Engine::approve_summary(const SessionId& id) {
  return store_.mutate(id, [&](SessionState& s) {
    catalyst::approve_summary(s);
    return s;
  });
}

Summary Engine::request_summary(const SessionId& id, std::string_view raw_text, std::optional<std::size_t> target_words,
                                bool* truncated) {
  if (!store_.contains(id)) throw Error(ErrorCode::NotFound, "no session " + id.str());
  PromptRequest request =
      build_summary_prompt(raw_text, target_words.value_or(options_.summary_target_words), options_.max_input_chars);
  if (truncated) *truncated = request.truncated;
  InFlight guard(*this, "summary:" + id.str(), ErrorCode::SummarizationInFlight,
                 "a summary is already being generated for this session");
  std::string text = gateway_.summarize(request);
  return store_.mutate(id, [&](SessionState& s) { return store_uploaded_summary(s, text); });
}

IngestResult Engine::ingest_document(const SessionId& id, const UploadedDocument& doc) {
  if (!store_.contains(id)) throw Error(ErrorCode::NotFound, "no session " + id.str());
  IngestResult result;
  result.extracted_text = extract_text(doc);
  result.summary = request_summary(id, result.extracted_text, std::nullopt, &result.truncated);
  return result;
}

Concept Engine::create_highlight_concept(const SessionId& id, std::size_t start, std::size_t end) {
  return store_.mutate(id, [&](SessionState& s) { return create_concept_from_highlight(s, start, end); });
}

Concept Engine::create_custom_concept(const SessionId& id, std::string_view label) {
  return store_.mutate(id, [&](SessionState& s) { return catalyst::create_custom_concept(s, label); });
}

Concept Engine::place_concept(const SessionId& id, const ConceptId& concept_id, double x, double y) {
  return store_.mutate(id, [&](SessionState& s) { return catalyst::place_concept(s, concept_id, x, y); });
}

Concept Engine::return_to_waiting(const SessionId& id, const ConceptId& concept_id) {
  return store_.mutate(id, [&](SessionState& s) { return catalyst::return_to_waiting(s, concept_id); });
}

void Engine::remove_concept(const SessionId& id, const ConceptId& concept_id) {
  store_.mutate(id, [&](SessionState& s) { catalyst::remove_concept(s, concept_id); });
}

Edge Engine::connect(const SessionId& id, const ConceptId& a, const ConceptId& b) {
  return store_.mutate(id, [&](SessionState& s) { return connect_concepts(s, a, b); });
}

void Engine::disconnect(const SessionId& id, const EdgeId& edge) {
  store_.mutate(id, [&](SessionState& s) { catalyst::disconnect(s, edge); });
}

QuestionGroup Engine::create_group(const SessionId& id) {
  return store_.mutate(id, [&](SessionState& s) { return catalyst::create_group(s); });
}

QuestionGroup Engine::toggle_concept(const SessionId& id, const GroupId& group, const ConceptId& concept_id) {
  return store_.mutate(id, [&](SessionState& s) { return toggle_concept_in_group(s, group, concept_id); });
}

QuestionGroup Engine::generate_questions(const SessionId& id, const GroupId& group) {
  InFlight guard(*this, "generate:" + id.str() + "/" + group.str(), ErrorCode::GenerationInFlight,
                 "questions are already being generated for group " + group.str());
  GenerationInput input = generation_input(store_.get(id), group);
  std::size_t n = options_.questions_per_group;
  PromptRequest request = build_question_prompt(input.summary, input.concepts, input.relations, n);
  ParsedQuestions parsed = gateway_.generate_questions(request, n);
  return store_.mutate(id, [&](SessionState& s) {
    append_generated_questions(s, group, parsed.questions);
    return *s.find_group(group);
  });
}

Question Engine::review(const SessionId& id, const QuestionId& question, const Verdict& verdict) {
  return store_.mutate(id, [&](SessionState& s) { return review_question(s, question, verdict); });
}

std::vector<Question> Engine::bank(const SessionId& id) const { return question_bank(store_.get(id)); }

ExportDocument Engine::preview(const SessionId& id) const {
  return build_preview(store_.get(id), options_.export_options, options_.export_clock());
}

std::string Engine::export_plaintext(const SessionId& id) const { return render_plaintext(preview(id)); }

std::string Engine::export_pdf(const SessionId& id) const { return render_pdf(preview(id), options_.pdf_options); }

std::string Engine::save_snapshot(const SessionId& id) const { return store_.save_snapshot(id); }

SessionState Engine::restore_snapshot(std::string_view blob) { return store_.restore_snapshot(blob); }

}  // namespace catalyst
