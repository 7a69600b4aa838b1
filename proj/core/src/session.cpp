#include "catalyst/session.hpp"

#include "catalyst/error.hpp"

namespace catalyst {

SessionState make_session(SessionId id, Timestamp now) {
  SessionState s;
  s.id = std::move(id);
  s.created_at = now;
  s.updated_at = now;
  return s;
}

void set_stage(SessionState& state, Stage target) {
  if (target != Stage::Summarize && !state.has_approved_summary()) {
    throw Error(ErrorCode::SummaryNotApproved,
                std::string("stage '") + std::string(to_string(target)) + "' requires an approved summary");
  }
  state.stage = target;
}

}  // namespace catalyst
