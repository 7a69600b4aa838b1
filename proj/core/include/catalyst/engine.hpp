#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "catalyst/document.hpp"
#include "catalyst/export.hpp"
#include "catalyst/gateway.hpp"
#include "catalyst/prompts.hpp"
#include "catalyst/questions.hpp"
#include "catalyst/session_store.hpp"

namespace catalyst {

struct EngineOptions {
  std::size_t summary_target_words = 200;
  std::size_t questions_per_group = 5;
  std::size_t max_input_chars = kDefaultMaxInputChars;
  ExportOptions export_options;
  PdfOptions pdf_options;
  // Timestamp written into exports; injectable for byte-stable output.
  Clock export_clock = system_now;
};

struct IngestResult {
  std::string extracted_text;
  Summary summary;
  bool truncated = false;
};

// Every workflow operation addressed by session id. Mutations go through
// the store's single-writer contract; LLM calls run outside the session lock
// so other requests on the same session stay responsive. At most one
// summarization per session and one generation per group may be in flight.
class Engine {
 public:
  Engine(SessionStore& store, LlmGateway gateway, EngineOptions options = {});

  SessionState create_session();
  SessionState get(const SessionId& id) const;
  void remove_session(const SessionId& id);
  SessionState set_stage(const SessionId& id, Stage stage);

  Summary set_summary_text(const SessionId& id, std::string_view text);
  Summary edit_summary(const SessionId& id, std::string_view text);
  SessionState approve_summary(const SessionId& id);
  // target_words defaults to options().summary_target_words.
  Summary request_summary(const SessionId& id, std::string_view raw_text,
                          std::optional<std::size_t> target_words = std::nullopt, bool* truncated = nullptr);
  IngestResult ingest_document(const SessionId& id, const UploadedDocument& doc);

  Concept create_highlight_concept(const SessionId& id, std::size_t start, std::size_t end);
  Concept create_custom_concept(const SessionId& id, std::string_view label);
  Concept place_concept(const SessionId& id, const ConceptId& concept_id, double x, double y);
  Concept return_to_waiting(const SessionId& id, const ConceptId& concept_id);
  void remove_concept(const SessionId& id, const ConceptId& concept_id);
  Edge connect(const SessionId& id, const ConceptId& a, const ConceptId& b);
  void disconnect(const SessionId& id, const EdgeId& edge);

  QuestionGroup create_group(const SessionId& id);
  QuestionGroup toggle_concept(const SessionId& id, const GroupId& group, const ConceptId& concept_id);
  // Returns the updated group with the new questions appended.
  QuestionGroup generate_questions(const SessionId& id, const GroupId& group);
  Question review(const SessionId& id, const QuestionId& question, const Verdict& verdict);
  std::vector<Question> bank(const SessionId& id) const;

  ExportDocument preview(const SessionId& id) const;
  std::string export_plaintext(const SessionId& id) const;
  std::string export_pdf(const SessionId& id) const;

  std::string save_snapshot(const SessionId& id) const;
  SessionState restore_snapshot(std::string_view blob);

  const EngineOptions& options() const noexcept { return options_; }
  const LlmGateway& gateway() const noexcept { return gateway_; }
  SessionStore& store() noexcept { return store_; }

 private:
  class InFlight {
   public:
    InFlight(Engine& engine, std::string key, ErrorCode busy_code, const std::string& busy_message);
    ~InFlight();
    InFlight(const InFlight&) = delete;
    InFlight& operator=(const InFlight&) = delete;

   private:
    Engine& engine_;
    std::string key_;
  };

  SessionStore& store_;
  LlmGateway gateway_;
  EngineOptions options_;
  std::mutex in_flight_mu_;
  std::set<std::string> in_flight_;
};

}  // namespace catalyst
