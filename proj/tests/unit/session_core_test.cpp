#include <thread>

#include <nlohmann/json.hpp>

#include "catalyst/concept_graph.hpp"
#include "catalyst/questions.hpp"
#include "catalyst/session_store.hpp"
#include "catalyst/snapshot.hpp"
#include "test_support.hpp"

namespace catalyst {
namespace {

using testing::approved_session;
using testing::fixed_time;
using testing::for_all_seeds;
using testing::Rng;
using testing::TempDir;

StoreOptions counting_ids(std::optional<std::filesystem::path> dir = std::nullopt) {
  StoreOptions o;
  o.data_dir = std::move(dir);
  o.clock = [] { return fixed_time(); };
  auto next = std::make_shared<int>(0);
  o.id_source = [next] { return SessionId("sess" + std::to_string(++*next)); };
  return o;
}

// 10 concepts, 3 edges, 2 groups with generated and reviewed questions.
SessionState rich_session() {
  SessionState s = approved_session("Students build a cardboard bridge that spans thirty centimeters and holds weight.");
  std::vector<ConceptId> ids;
  for (int i = 0; i < 6; ++i) ids.push_back(create_custom_concept(s, "concept " + std::to_string(i)).id);
  ids.push_back(create_concept_from_highlight(s, 15, 24).id);  // "cardboard"
  ids.push_back(create_concept_from_highlight(s, 25, 31).id);  // "bridge"
  for (int i = 0; i < 2; ++i) ids.push_back(create_custom_concept(s, "waiting " + std::to_string(i)).id);
  for (int i = 0; i < 8; ++i) place_concept(s, ids[i], 10.5 * i, -3.25 * i);
  connect_concepts(s, ids[0], ids[1]);
  connect_concepts(s, ids[1], ids[6]);
  connect_concepts(s, ids[7], ids[2]);
  GroupId g1 = create_group(s).id;
  GroupId g2 = create_group(s).id;
  toggle_concept_in_group(s, g1, ids[0]);
  toggle_concept_in_group(s, g1, ids[1]);
  toggle_concept_in_group(s, g2, ids[6]);
  auto qs = append_generated_questions(s, g1, {"Why does a beam bend?", "How is load shared?", "What fails first?"});
  auto qs2 = append_generated_questions(s, g2, {"Which cardboard is strongest?", "How thick?"});
  review_question(s, qs[0].id, Accept{});
  review_question(s, qs2[1].id, Modify{"How thick should the deck be?"});
  review_question(s, qs2[1].id, Accept{});
  review_question(s, qs[2].id, Reject{});
  s.updated_at = fixed_time(1'700'000'123'456);
  return s;
}

TEST(Session, FreshSessionIsEmptyAtSummarize) {
  SessionState s = make_session(SessionId("x"), fixed_time());
  EXPECT_EQ(s.stage, Stage::Summarize);
  EXPECT_FALSE(s.summary.has_value());
  EXPECT_TRUE(s.graph.concepts.empty());
  EXPECT_TRUE(s.groups.empty());
  EXPECT_TRUE(s.bank.entries.empty());
  EXPECT_TRUE(invariant_violations(s).empty());
}

TEST(Session, StageGateRequiresApprovedSummary) {
  SessionState s = make_session(SessionId("x"), fixed_time());
  EXPECT_CATALYST_ERROR(set_stage(s, Stage::Synthesize), ErrorCode::SummaryNotApproved);
  EXPECT_CATALYST_ERROR(set_stage(s, Stage::Conceptualize), ErrorCode::SummaryNotApproved);
  set_stage(s, Stage::Summarize);
  set_summary_text(s, "text");
  EXPECT_CATALYST_ERROR(set_stage(s, Stage::Conceptualize), ErrorCode::SummaryNotApproved);
  approve_summary(s);
  set_stage(s, Stage::Synthesize);
  EXPECT_EQ(s.stage, Stage::Synthesize);
}

TEST(Session, BackwardNavigationLeavesWorkUntouched) {
  SessionState s = rich_session();
  set_stage(s, Stage::Synthesize);
  SessionState before = s;
  set_stage(s, Stage::Summarize);
  EXPECT_EQ(s.stage, Stage::Summarize);
  s.stage = before.stage;
  EXPECT_EQ(s, before);
}

TEST(Session, StageNavigationOnlyTouchesStage) {
  SessionState base = rich_session();
  const std::vector<Stage> stages = {Stage::Summarize, Stage::Conceptualize, Stage::Synthesize};
  for_all_seeds(21, 50, [&](Rng& rng) {
    SessionState s = base;
    for (int i = 0; i < 20; ++i) {
      Stage target = rng.pick(stages);
      set_stage(s, target);
      SessionState expected = base;
      expected.stage = target;
      ASSERT_EQ(s, expected);
    }
  });
}

TEST(Session, StageNamesRoundTrip) {
  for (Stage st : {Stage::Summarize, Stage::Conceptualize, Stage::Synthesize}) {
    EXPECT_EQ(parse_stage(to_string(st)), st);
  }
  EXPECT_FALSE(parse_stage("Done").has_value());
}

TEST(Snapshot, TimestampFormatIsIsoMilliseconds) {
  Timestamp t = fixed_time(1'700'000'000'123);
  EXPECT_EQ(format_timestamp(t), "2023-11-14T22:13:20.123Z");
  EXPECT_EQ(parse_timestamp("2023-11-14T22:13:20.123Z"), t);
  EXPECT_THROW(parse_timestamp("yesterday"), Error);
}

TEST(Snapshot, RoundTripPreservesEveryField) {
  SessionState s = rich_session();
  ASSERT_TRUE(invariant_violations(s).empty());
  SessionState back = decode_snapshot(encode_snapshot(s));
  EXPECT_EQ(back, s);
  EXPECT_EQ(back.graph.concepts.size(), 10u);
  EXPECT_EQ(back.graph.edges.size(), 3u);
  EXPECT_EQ(back.groups.size(), 2u);
  EXPECT_EQ(back.groups[0].questions[1].current_text, "How is load shared?");
  EXPECT_EQ(back.groups[1].questions[1].original_text, "How thick?");
}

TEST(Snapshot, FreshSessionRoundTrip) {
  SessionState s = make_session(SessionId("fresh"), fixed_time());
  EXPECT_EQ(decode_snapshot(encode_snapshot(s)), s);
}

TEST(Snapshot, DocumentCarriesFormatVersion) {
  auto j = nlohmann::json::parse(encode_snapshot(rich_session()));
  EXPECT_EQ(j.at("format_version"), 1);
  EXPECT_EQ(j.at("session").at("stage"), "conceptualize");
  EXPECT_EQ(j.at("session").at("graph").at("concepts").size(), 10u);
}

TEST(Snapshot, UnknownVersionIsRejected) {
  auto j = nlohmann::json::parse(encode_snapshot(rich_session()));
  j["format_version"] = 2;
  EXPECT_CATALYST_ERROR(decode_snapshot(j.dump()), ErrorCode::VersionMismatch);
  j.erase("format_version");
  EXPECT_CATALYST_ERROR(decode_snapshot(j.dump()), ErrorCode::CorruptBlob);
}

TEST(Snapshot, MalformedBlobsAreCorrupt) {
  EXPECT_CATALYST_ERROR(decode_snapshot(""), ErrorCode::CorruptBlob);
  EXPECT_CATALYST_ERROR(decode_snapshot("{not json"), ErrorCode::CorruptBlob);
  EXPECT_CATALYST_ERROR(decode_snapshot("[1,2]"), ErrorCode::CorruptBlob);
  auto j = nlohmann::json::parse(encode_snapshot(rich_session()));
  j["session"]["stage"] = "elsewhere";
  EXPECT_CATALYST_ERROR(decode_snapshot(j.dump()), ErrorCode::CorruptBlob);
}

TEST(Snapshot, InvariantBreakingBlobIsCorrupt) {
  auto j = nlohmann::json::parse(encode_snapshot(rich_session()));
  // An edge pointing at a concept that does not exist.
  j["session"]["graph"]["edges"][0]["b"] = "c999";
  EXPECT_CATALYST_ERROR(decode_snapshot(j.dump()), ErrorCode::CorruptBlob);

  auto k = nlohmann::json::parse(encode_snapshot(rich_session()));
  k["session"]["summary"]["approved"] = false;  // stage past Summarize without approval
  EXPECT_CATALYST_ERROR(decode_snapshot(k.dump()), ErrorCode::CorruptBlob);
}

TEST(Invariants, DetectsEachKindOfCorruption) {
  SessionState good = rich_session();
  {
    SessionState s = good;
    s.graph.edges.push_back(Edge{EdgeId("e99"), s.graph.edges[0].b, s.graph.edges[0].a});
    EXPECT_FALSE(invariant_violations(s).empty()) << "duplicate unordered pair";
  }
  {
    SessionState s = good;
    s.graph.edges.push_back(Edge{EdgeId("e99"), s.graph.edges[0].a, s.graph.edges[0].a});
    EXPECT_FALSE(invariant_violations(s).empty()) << "self edge";
  }
  {
    SessionState s = good;
    s.groups[0].attached.push_back(ConceptId("c9"));  // a waiting concept
    EXPECT_FALSE(invariant_violations(s).empty()) << "waiting attachment";
  }
  {
    SessionState s = good;
    s.bank.entries.clear();
    EXPECT_FALSE(invariant_violations(s).empty()) << "bank out of sync";
  }
  {
    SessionState s = good;
    s.summary->word_count += 1;
    EXPECT_FALSE(invariant_violations(s).empty()) << "word count";
  }
}

TEST(Store, CreateGetAndDistinctIds) {
  SessionStore store;
  SessionState a = store.create();
  SessionState b = store.create();
  EXPECT_NE(a.id, b.id);
  EXPECT_EQ(a.id.str().size(), 32u);
  EXPECT_EQ(store.get(a.id), a);
  EXPECT_EQ(store.size(), 2u);
}

TEST(Store, DeletedIdsAreNotFoundAndNeverReused) {
  StoreOptions o = counting_ids();
  // Always proposes the same id first.
  auto calls = std::make_shared<int>(0);
  o.id_source = [calls] { return SessionId(++*calls <= 2 ? "same" : "other" + std::to_string(*calls)); };
  SessionStore store(o);
  SessionState a = store.create();
  EXPECT_EQ(a.id.str(), "same");
  store.remove(a.id);
  EXPECT_CATALYST_ERROR(store.get(a.id), ErrorCode::NotFound);
  EXPECT_CATALYST_ERROR(store.remove(a.id), ErrorCode::NotFound);
  SessionState b = store.create();
  EXPECT_NE(b.id.str(), "same");
}

TEST(Store, CapacityLimit) {
  StoreOptions o = counting_ids();
  o.max_sessions = 2;
  SessionStore store(o);
  store.create();
  store.create();
  EXPECT_CATALYST_ERROR(store.create(), ErrorCode::StoreFull);
}

TEST(Store, FailedMutationLeavesStateUntouched) {
  SessionStore store(counting_ids());
  SessionId id = store.create().id;
  SessionState before = store.get(id);
  EXPECT_CATALYST_ERROR(store.mutate(id,
                                     [](SessionState& s) {
                                       set_summary_text(s, "partial");
                                       set_stage(s, Stage::Synthesize);  // throws: not approved
                                     }),
                        ErrorCode::SummaryNotApproved);
  EXPECT_EQ(store.get(id), before);
}

TEST(Store, MutationStampsUpdatedAt) {
  StoreOptions o = counting_ids();
  auto now = std::make_shared<std::int64_t>(1000);
  o.clock = [now] { return fixed_time(*now); };
  SessionStore store(o);
  SessionId id = store.create().id;
  *now = 5000;
  store.mutate(id, [](SessionState& s) { set_summary_text(s, "hello"); });
  SessionState s = store.get(id);
  EXPECT_EQ(s.created_at, fixed_time(1000));
  EXPECT_EQ(s.updated_at, fixed_time(5000));
}

TEST(Store, SnapshotRestoreUnderOriginalId) {
  SessionStore store(counting_ids());
  SessionState rich = rich_session();
  rich.id = SessionId("restored-1");
  SessionState back = store.restore_snapshot(encode_snapshot(rich));
  EXPECT_EQ(back, rich);
  EXPECT_EQ(store.get(SessionId("restored-1")), rich);
  EXPECT_CATALYST_ERROR(store.restore_snapshot(encode_snapshot(rich)), ErrorCode::IdCollision);
  EXPECT_EQ(decode_snapshot(store.save_snapshot(rich.id)), rich);
}

TEST(Store, WritesSnapshotFilesAndReloadsThem) {
  TempDir dir;
  SessionId id;
  {
    SessionStore store(counting_ids(dir.path()));
    id = store.create().id;
    store.mutate(id, [](SessionState& s) {
      set_summary_text(s, "Build a cardboard bridge.");
      approve_summary(s);
      create_custom_concept(s, "load");
    });
    EXPECT_TRUE(std::filesystem::exists(dir.path() / (id.str() + ".json")));
  }
  std::ofstream(dir.path() / "garbage.json") << "{]";
  SessionStore reloaded(counting_ids(dir.path()));
  std::vector<std::string> skipped;
  EXPECT_EQ(reloaded.load_data_dir(&skipped), 1u);
  ASSERT_EQ(skipped.size(), 1u);
  EXPECT_NE(skipped[0].find("garbage.json"), std::string::npos);
  SessionState s = reloaded.get(id);
  EXPECT_EQ(s.graph.concepts.size(), 1u);
  EXPECT_EQ(s.stage, Stage::Conceptualize);
}

TEST(Store, RemoveDeletesSnapshotFile) {
  TempDir dir;
  SessionStore store(counting_ids(dir.path()));
  SessionId id = store.create().id;
  store.remove(id);
  EXPECT_FALSE(std::filesystem::exists(dir.path() / (id.str() + ".json")));
}

TEST(Store, UnwritableDataDirIsReported) {
  TempDir dir;
  std::filesystem::path file = dir.path() / "plain-file";
  std::ofstream(file) << "x";
  StoreOptions o;
  o.data_dir = file / "nested";
  EXPECT_CATALYST_ERROR(SessionStore{o}, ErrorCode::DataDirUnwritable);
}

TEST(Store, WritersOnOneSessionAreSerialized) {
  SessionStore store(counting_ids());
  SessionId id = store.create().id;
  store.mutate(id, [](SessionState& s) {
    set_summary_text(s, "Bridges");
    approve_summary(s);
  });
  constexpr int kThreads = 8;
  constexpr int kPerThread = 50;
  std::vector<std::thread> threads;
  for (int t = 0; t < kThreads; ++t) {
    threads.emplace_back([&, t] {
      for (int i = 0; i < kPerThread; ++i) {
        store.mutate(id, [&](SessionState& s) { create_custom_concept(s, "t" + std::to_string(t)); });
        SessionState snapshot = store.get(id);
        EXPECT_TRUE(invariant_violations(snapshot).empty());
      }
    });
  }
  for (auto& th : threads) th.join();
  SessionState s = store.get(id);
  EXPECT_EQ(s.graph.concepts.size(), static_cast<std::size_t>(kThreads * kPerThread));
  std::set<std::string> ids;
  for (const auto& c : s.graph.concepts) ids.insert(c.id.str());
  EXPECT_EQ(ids.size(), s.graph.concepts.size());
}

}  // namespace
}  // namespace catalyst
