#include "catalyst/summary.hpp"

#include "catalyst/error.hpp"
#include "catalyst/text.hpp"

namespace catalyst {

namespace {

Summary write_summary(SessionState& state, std::string_view text, SummarySource source) {
  std::string_view trimmed = text::trim(text);
  if (trimmed.empty()) throw Error(ErrorCode::EmptyText, "summary text is empty");
  std::int64_t revision = state.summary ? state.summary->revision + 1 : 1;
  state.summary = Summary{
      .text = std::string(trimmed),
      .source = source,
      .word_count = text::word_count(trimmed),
      .approved = false,
      .revision = revision,
  };
  state.stage = Stage::Summarize;
  return *state.summary;
}

}  // namespace

Summary set_summary_text(SessionState& state, std::string_view text) {
  return write_summary(state, text, SummarySource::Typed);
}

Summary store_uploaded_summary(SessionState& state, std::string_view text) {
  if (text::is_blank(text)) throw Error(ErrorCode::EmptyCompletion, "summarizer returned no text");
  return write_summary(state, text, SummarySource::Uploaded);
}

Summary edit_summary(SessionState& state, std::string_view text) {
  if (!state.summary) throw Error(ErrorCode::NoSummary, "no summary to edit");
  return write_summary(state, text, state.summary->source);
}

void approve_summary(SessionState& state) {
  if (!state.summary || text::is_blank(state.summary->text)) {
    throw Error(ErrorCode::NoSummary, "no summary to approve");
  }
  state.summary->approved = true;
  state.stage = Stage::Conceptualize;
}

}  // namespace catalyst
