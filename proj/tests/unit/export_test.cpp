#include <regex>

#include "catalyst/export.hpp"
#include "catalyst/pdf_text.hpp"
#include "catalyst/questions.hpp"
#include "catalyst/text.hpp"
#include "test_support.hpp"

namespace catalyst {
namespace {

using testing::approved_session;
using testing::fixed_time;
using testing::for_all_seeds;
using testing::Rng;

ExportDocument make_doc(std::vector<std::string> questions, std::string summary = "Build a bridge.",
                        std::string title = "Scaffolding Questions") {
  ExportDocument d;
  d.title = std::move(title);
  d.summary_text = std::move(summary);
  d.generated_at = fixed_time();
  for (std::size_t i = 0; i < questions.size(); ++i) d.questions.push_back({i + 1, questions[i]});
  return d;
}

std::size_t page_count(const std::string& pdf) {
  std::regex page(R"(/Type /Page\b[^s])");
  return static_cast<std::size_t>(std::distance(std::sregex_iterator(pdf.begin(), pdf.end(), page), std::sregex_iterator()));
}

// Each xref entry must point at the start of the object it names.
void expect_valid_xref(const std::string& pdf) {
  std::size_t sx = pdf.rfind("startxref\n");
  ASSERT_NE(sx, std::string::npos);
  std::size_t xref = std::stoul(pdf.substr(sx + 10));
  ASSERT_EQ(pdf.compare(xref, 5, "xref\n"), 0);
  std::size_t p = pdf.find('\n', xref + 5);
  std::size_t count = std::stoul(pdf.substr(pdf.find(' ', xref + 5) + 1));
  p += 1 + 20;  // skip the free entry
  for (std::size_t obj = 1; obj < count; ++obj, p += 20) {
    std::size_t off = std::stoul(pdf.substr(p, 10));
    std::string head = std::to_string(obj) + " 0 obj";
    EXPECT_EQ(pdf.compare(off, head.size(), head), 0) << "object " << obj;
  }
}

TEST(Preview, UsesBankOrderAndCurrentText) {
  SessionState s = approved_session();
  GroupId g = create_group(s).id;
  auto qs = append_generated_questions(s, g, {"First?", "Second?", "Third?"});
  review_question(s, qs[2].id, Accept{});
  review_question(s, qs[0].id, Modify{"First, edited?"});
  review_question(s, qs[0].id, Accept{});
  ExportDocument d = build_preview(s, {}, fixed_time(5));
  EXPECT_EQ(d.title, "Scaffolding Questions");
  EXPECT_EQ(d.summary_text, s.summary->text);
  EXPECT_EQ(d.questions, (std::vector<ExportQuestion>{{1, "Third?"}, {2, "First, edited?"}}));
  EXPECT_EQ(d.generated_at, fixed_time(5));
  EXPECT_EQ(build_preview(s, {"", false}, fixed_time()).summary_text, "");
}

TEST(Preview, RequiresApprovedSummaryAndQuestions) {
  SessionState s = approved_session();
  EXPECT_CATALYST_ERROR(build_preview(s, {}, fixed_time()), ErrorCode::EmptyBank);
  SessionState fresh = make_session(SessionId("x"), fixed_time());
  EXPECT_CATALYST_ERROR(build_preview(fresh, {}, fixed_time()), ErrorCode::NoApprovedSummary);
}

TEST(Plaintext, LayoutRules) {
  ExportDocument d = make_doc({"Why?", "Line one\nline two\r\nthree\rfour"});
  EXPECT_EQ(render_plaintext(d),
            "Scaffolding Questions\n\nBuild a bridge.\n\n1. Why?\n2. Line one line two three four\n");
  d.title.clear();
  d.summary_text.clear();
  EXPECT_EQ(render_plaintext(d), "1. Why?\n2. Line one line two three four\n");
  d.questions[1].index = 3;
  EXPECT_CATALYST_ERROR(render_plaintext(d), ErrorCode::RenderFailure);
}

TEST(Pdf, ThreeQuestionsRoundTrip) {
  ExportDocument d = make_doc({"What is the span?", "How much load?", "Which material?"});
  std::string pdf = render_pdf(d);
  ASSERT_EQ(pdf.rfind("%PDF-1.4", 0), 0u);
  EXPECT_EQ(pdf.substr(pdf.size() - 6), "%%EOF\n");
  expect_valid_xref(pdf);
  EXPECT_EQ(page_count(pdf), 1u);
  EXPECT_NE(pdf.find("/MediaBox [0 0 595.00 842.00]"), std::string::npos);
  EXPECT_NE(pdf.find("/CreationDate (D:20231114221320Z)"), std::string::npos);
  EXPECT_EQ(pdf::extract_text(pdf),
            "Scaffolding Questions\nBuild a bridge.\n1. What is the span?\n2. How much load?\n3. Which material?");
}

TEST(Pdf, SixtyQuestionsSpanPagesInOrder) {
  std::vector<std::string> qs;
  for (int i = 1; i <= 60; ++i) qs.push_back("How would you test design number " + std::to_string(i) + "?");
  ExportDocument d = make_doc(qs);
  std::string pdf = render_pdf(d);
  expect_valid_xref(pdf);
  // Baselines start at 770pt; title and summary bring it to 708pt. Question
  // k sits at 694 - 20(k-1), which stays above the 72pt margin up to k = 32.
  EXPECT_EQ(page_count(pdf), 2u);
  std::size_t second = pdf.find("/Length", pdf.find("8 0 obj"));
  EXPECT_NE(pdf.find("(32. How would"), std::string::npos);
  EXPECT_LT(pdf.find("(32. How would"), second);
  EXPECT_GT(pdf.find("(33. How would"), second);
  std::string text = pdf::extract_text(pdf);
  EXPECT_EQ(text::flatten_whitespace(text), text::flatten_whitespace(render_plaintext(d)));
}

TEST(Pdf, LetterSizeAndNoTitle) {
  ExportDocument d = make_doc({"Only?"}, "", "");
  std::string pdf = render_pdf(d, {PageSize::Letter});
  EXPECT_NE(pdf.find("/MediaBox [0 0 612.00 792.00]"), std::string::npos);
  EXPECT_EQ(pdf::extract_text(pdf), "1. Only?");
  EXPECT_EQ(parse_page_size("LETTER"), PageSize::Letter);
  EXPECT_CATALYST_ERROR(parse_page_size("a5"), ErrorCode::InvalidConfig);
}

TEST(Pdf, NonWinAnsiCharactersBecomeQuestionMarks) {
  ExportDocument d = make_doc({"Café — 中 (x)"}, "", "");
  EXPECT_EQ(pdf::extract_text(render_pdf(d)), "1. Café — ? (x)");
}

TEST(Pdf, OutputIsDeterministic) {
  ExportDocument d = make_doc({"A?", "B?"});
  EXPECT_EQ(render_pdf(d), render_pdf(d));
  ExportDocument later = d;
  later.generated_at = fixed_time(1'800'000'000'000);
  EXPECT_NE(render_pdf(d), render_pdf(later));
}

TEST(PdfProperty, ExtractionMatchesPlaintextWords) {
  for_all_seeds(91, 60, [](Rng& rng) {
    std::vector<std::string> qs;
    std::size_t n = rng.between(1, 40);
    for (std::size_t i = 0; i < n; ++i) qs.push_back(rng.sentence(1, 45) + "?");
    ExportDocument d = make_doc(qs, rng.chance(0.7) ? rng.sentence(5, 200) : "", rng.chance(0.8) ? rng.sentence(1, 6) : "");
    PdfOptions opts{rng.chance(0.5) ? PageSize::A4 : PageSize::Letter};
    std::string pdf = render_pdf(d, opts);
    ASSERT_EQ(text::flatten_whitespace(pdf::extract_text(pdf)), text::flatten_whitespace(render_plaintext(d)));
  });
}

}  // namespace
}  // namespace catalyst
