#include "catalyst/snapshot.hpp"

#include <charconv>
#include <cstdio>

#include "catalyst/concept_graph.hpp"
#include "catalyst/error.hpp"

namespace catalyst {

using nlohmann::json;

std::string format_timestamp(Timestamp t) {
  using namespace std::chrono;
  auto day = floor<days>(t);
  year_month_day ymd{day};
  hh_mm_ss hms{t - day};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d.%03dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()), static_cast<int>(hms.subseconds().count()));
  return buf;
}

Timestamp parse_timestamp(std::string_view s) {
  using namespace std::chrono;
  // YYYY-MM-DDTHH:MM:SS.mmmZ
  auto field = [&](std::size_t pos, std::size_t len) {
    int v = 0;
    if (pos + len > s.size()) throw Error(ErrorCode::CorruptBlob, "malformed timestamp");
    auto [p, ec] = std::from_chars(s.data() + pos, s.data() + pos + len, v);
    if (ec != std::errc{} || p != s.data() + pos + len) throw Error(ErrorCode::CorruptBlob, "malformed timestamp");
    return v;
  };
  if (s.size() != 24 || s[4] != '-' || s[7] != '-' || s[10] != 'T' || s[13] != ':' || s[16] != ':' ||
      s[19] != '.' || s[23] != 'Z') {
    throw Error(ErrorCode::CorruptBlob, "malformed timestamp '" + std::string(s) + "'");
  }
  year_month_day ymd{year{field(0, 4)}, month{static_cast<unsigned>(field(5, 2))},
                     day{static_cast<unsigned>(field(8, 2))}};
  if (!ymd.ok()) throw Error(ErrorCode::CorruptBlob, "invalid date in timestamp");
  int h = field(11, 2), m = field(14, 2), sec = field(17, 2), ms = field(20, 3);
  if (h > 23 || m > 59 || sec > 59) throw Error(ErrorCode::CorruptBlob, "invalid time in timestamp");
  return sys_days{ymd} + hours{h} + minutes{m} + seconds{sec} + milliseconds{ms};
}

json to_json(const Summary& s) {
  return {{"text", s.text},
          {"source", to_string(s.source)},
          {"word_count", s.word_count},
          {"approved", s.approved},
          {"revision", s.revision}};
}

json to_json(const Concept& c, const SessionState& owner) {
  json origin;
  if (const HighlightOrigin* h = c.highlight()) {
    origin = {{"kind", "highlight"},
              {"start", h->start},
              {"end", h->end},
              {"summary_revision", h->summary_revision},
              {"stale", is_stale(c, owner)}};
  } else {
    origin = {{"kind", "custom"}};
  }
  json area = c.position ? json{{"kind", "graph"}, {"x", c.position->x}, {"y", c.position->y}}
                         : json{{"kind", "waiting"}};
  return {{"id", c.id.str()}, {"label", c.label}, {"origin", origin}, {"area", area}};
}

json to_json(const Edge& e) { return {{"id", e.id.str()}, {"a", e.a.str()}, {"b", e.b.str()}}; }

json to_json(const Question& q) {
  return {{"id", q.id.str()},
          {"group", q.group.str()},
          {"original_text", q.original_text},
          {"current_text", q.current_text},
          {"status", to_string(q.status)},
          {"accepted_at", q.accepted_at ? json(*q.accepted_at) : json(nullptr)}};
}

json to_json(const QuestionGroup& g) {
  json attached = json::array();
  for (const auto& c : g.attached) attached.push_back(c.str());
  json questions = json::array();
  for (const auto& q : g.questions) questions.push_back(to_json(q));
  return {{"id", g.id.str()},
          {"attached", attached},
          {"questions", questions},
          {"generation_count", g.generation_count}};
}

json to_json(const SessionState& s) {
  json concepts = json::array();
  for (const auto& c : s.graph.concepts) concepts.push_back(to_json(c, s));
  json edges = json::array();
  for (const auto& e : s.graph.edges) edges.push_back(to_json(e));
  json groups = json::array();
  for (const auto& g : s.groups) groups.push_back(to_json(g));
  json bank = json::array();
  for (const auto& q : s.bank.entries) bank.push_back(q.str());
  return {
      {"id", s.id.str()},
      {"stage", to_string(s.stage)},
      {"summary", s.summary ? to_json(*s.summary) : json(nullptr)},
      {"graph", {{"concepts", concepts}, {"edges", edges}}},
      {"groups", groups},
      {"bank", bank},
      {"counters",
       {{"concept", s.counters.concept_id},
        {"edge", s.counters.edge_id},
        {"group", s.counters.group_id},
        {"question", s.counters.question_id}}},
      {"created_at", format_timestamp(s.created_at)},
      {"updated_at", format_timestamp(s.updated_at)},
  };
}

namespace {

[[noreturn]] void corrupt(const std::string& what) { throw Error(ErrorCode::CorruptBlob, "corrupt snapshot: " + what); }

Summary summary_from_json(const json& j) {
  Summary s;
  s.text = j.at("text").get<std::string>();
  std::string source = j.at("source").get<std::string>();
  if (source == "uploaded") {
    s.source = SummarySource::Uploaded;
  } else if (source == "typed") {
    s.source = SummarySource::Typed;
  } else {
    corrupt("unknown summary source '" + source + "'");
  }
  s.word_count = j.at("word_count").get<std::size_t>();
  s.approved = j.at("approved").get<bool>();
  s.revision = j.at("revision").get<std::int64_t>();
  return s;
}

Concept concept_from_json(const json& j) {
  Concept c;
  c.id = ConceptId(j.at("id").get<std::string>());
  c.label = j.at("label").get<std::string>();
  const json& origin = j.at("origin");
  std::string kind = origin.at("kind").get<std::string>();
  if (kind == "highlight") {
    c.origin = HighlightOrigin{origin.at("start").get<std::size_t>(), origin.at("end").get<std::size_t>(),
                               origin.at("summary_revision").get<std::int64_t>()};
  } else if (kind == "custom") {
    c.origin = CustomOrigin{};
  } else {
    corrupt("unknown concept origin '" + kind + "'");
  }
  const json& area = j.at("area");
  std::string area_kind = area.at("kind").get<std::string>();
  if (area_kind == "graph") {
    c.position = Point{area.at("x").get<double>(), area.at("y").get<double>()};
  } else if (area_kind != "waiting") {
    corrupt("unknown concept area '" + area_kind + "'");
  }
  return c;
}

Question question_from_json(const json& j) {
  Question q;
  q.id = QuestionId(j.at("id").get<std::string>());
  q.group = GroupId(j.at("group").get<std::string>());
  q.original_text = j.at("original_text").get<std::string>();
  q.current_text = j.at("current_text").get<std::string>();
  std::string status = j.at("status").get<std::string>();
  if (status == "pending") {
    q.status = QuestionStatus::Pending;
  } else if (status == "accepted") {
    q.status = QuestionStatus::Accepted;
  } else if (status == "rejected") {
    q.status = QuestionStatus::Rejected;
  } else {
    corrupt("unknown question status '" + status + "'");
  }
  const json& at = j.at("accepted_at");
  if (!at.is_null()) q.accepted_at = at.get<std::uint64_t>();
  return q;
}

}  // namespace

SessionState session_from_json(const json& j) {
  try {
    SessionState s;
    s.id = SessionId(j.at("id").get<std::string>());
    auto stage = parse_stage(j.at("stage").get<std::string>());
    if (!stage) corrupt("unknown stage");
    s.stage = *stage;
    if (!j.at("summary").is_null()) s.summary = summary_from_json(j.at("summary"));
    for (const json& c : j.at("graph").at("concepts")) s.graph.concepts.push_back(concept_from_json(c));
    for (const json& e : j.at("graph").at("edges")) {
      s.graph.edges.push_back(Edge{EdgeId(e.at("id").get<std::string>()), ConceptId(e.at("a").get<std::string>()),
                                   ConceptId(e.at("b").get<std::string>())});
    }
    for (const json& gj : j.at("groups")) {
      QuestionGroup g;
      g.id = GroupId(gj.at("id").get<std::string>());
      for (const json& c : gj.at("attached")) g.attached.emplace_back(c.get<std::string>());
      for (const json& q : gj.at("questions")) g.questions.push_back(question_from_json(q));
      g.generation_count = gj.at("generation_count").get<std::uint32_t>();
      s.groups.push_back(std::move(g));
    }
    for (const json& q : j.at("bank")) s.bank.entries.emplace_back(q.get<std::string>());
    const json& counters = j.at("counters");
    s.counters.concept_id = counters.at("concept").get<std::uint64_t>();
    s.counters.edge_id = counters.at("edge").get<std::uint64_t>();
    s.counters.group_id = counters.at("group").get<std::uint64_t>();
    s.counters.question_id = counters.at("question").get<std::uint64_t>();
    s.created_at = parse_timestamp(j.at("created_at").get<std::string>());
    s.updated_at = parse_timestamp(j.at("updated_at").get<std::string>());
    return s;
  } catch (const json::exception& e) {
    corrupt(e.what());
  }
}

json snapshot_document(const SessionState& s) {
  return {{"format_version", kSnapshotFormatVersion}, {"session", to_json(s)}};
}

std::string encode_snapshot(const SessionState& s) {
  try {
    return snapshot_document(s).dump(2);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SerializationFailure, std::string("cannot serialize session: ") + e.what());
  }
}

SessionState decode_snapshot(std::string_view blob) {
  json doc = json::parse(blob.begin(), blob.end(), nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) corrupt("not a JSON object");
  auto version = doc.find("format_version");
  if (version == doc.end() || !version->is_number_integer()) corrupt("missing format_version");
  if (version->get<int>() != kSnapshotFormatVersion) {
    throw Error(ErrorCode::VersionMismatch, "unsupported snapshot format_version " + version->dump());
  }
  auto session = doc.find("session");
  if (session == doc.end()) corrupt("missing session");
  SessionState s = session_from_json(*session);
  if (auto v = invariant_violations(s); !v.empty()) corrupt(v.front());
  return s;
}

}  // namespace catalyst
