#include "catalyst/export.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdio>

#include "catalyst/error.hpp"
#include "catalyst/questions.hpp"
#include "catalyst/text.hpp"
#include "helvetica_metrics.hpp"

namespace catalyst {

namespace {

std::string single_line(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\r') {
      if (i + 1 < s.size() && s[i + 1] == '\n') ++i;
      out.push_back(' ');
    } else if (s[i] == '\n') {
      out.push_back(' ');
    } else {
      out.push_back(s[i]);
    }
  }
  return out;
}

void check_indices(const ExportDocument& doc) {
  for (std::size_t i = 0; i < doc.questions.size(); ++i) {
    if (doc.questions[i].index != i + 1) {
      throw Error(ErrorCode::RenderFailure, "question indices must run 1.." + std::to_string(doc.questions.size()));
    }
  }
}

// --- PDF layout --------------------------------------------------------------

constexpr double kMargin = 72;
constexpr double kTitleSize = 16;
constexpr double kBodySize = 11;
constexpr double kLeading = 14;
constexpr double kParagraphGap = 6;

std::string to_winansi(std::string_view utf8) {
  std::string out;
  std::size_t pos = 0;
  while (pos < utf8.size()) {
    char32_t cp = text::next_code_point(utf8, pos);
    if (cp == '\t') cp = ' ';
    auto b = text::unicode_to_winansi(cp);
    out.push_back(b ? static_cast<char>(*b) : '?');
  }
  return out;
}

double width_of(std::string_view winansi, double size, bool bold) {
  double w = 0;
  for (char c : winansi) w += detail::helvetica_width(static_cast<unsigned char>(c), bold);
  return w * size / 1000.0;
}

// Greedy word wrap; a word wider than the line stays whole on its own line.
std::vector<std::string> wrap(std::string_view winansi, double first_width, double rest_width, double size, bool bold) {
  std::vector<std::string> lines;
  std::string current;
  double limit = first_width;
  for (std::string_view word : text::split_words(winansi)) {
    std::string candidate = current.empty() ? std::string(word) : current + " " + std::string(word);
    if (!current.empty() && width_of(candidate, size, bold) > limit) {
      lines.push_back(std::move(current));
      current = std::string(word);
      limit = rest_width;
    } else {
      current = std::move(candidate);
    }
  }
  if (!current.empty()) lines.push_back(std::move(current));
  return lines;
}

std::string pdf_literal(std::string_view s) {
  std::string out = "(";
  for (char c : s) {
    if (c == '(' || c == ')' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back(')');
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

class PageBuilder {
 public:
  PageBuilder(double width, double height) : width_(width), height_(height) { new_page(); }

  double text_width() const noexcept { return width_ - 2 * kMargin; }

  void line(std::string_view winansi, double x, double size, bool bold, double advance) {
    if (y_ - advance < kMargin) new_page();
    y_ -= advance;
    pages_.back() += "BT /" + std::string(bold ? "F2 " : "F1 ") + fmt(size) + " Tf 1 0 0 1 " + fmt(kMargin + x) + " " +
                     fmt(y_) + " Tm " + pdf_literal(winansi) + " Tj ET\n";
  }
  void gap(double amount) { y_ -= amount; }

  const std::vector<std::string>& pages() const noexcept { return pages_; }

 private:
  void new_page() {
    pages_.emplace_back();
    y_ = height_ - kMargin;
  }

  double width_;
  double height_;
  double y_ = 0;
  std::vector<std::string> pages_;
};

std::string pdf_date(Timestamp t) {
  auto days = std::chrono::floor<std::chrono::days>(t);
  std::chrono::year_month_day ymd{days};
  std::chrono::hh_mm_ss hms{std::chrono::floor<std::chrono::seconds>(t - days)};
  char buf[40];
  std::snprintf(buf, sizeof buf, "D:%04d%02u%02u%02d%02d%02lldZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                static_cast<long long>(hms.seconds().count()));
  return buf;
}

}  // namespace

ExportDocument build_preview(const SessionState& state, const ExportOptions& options, Timestamp generated_at) {
  if (!state.has_approved_summary()) throw Error(ErrorCode::NoApprovedSummary, "the summary has not been approved");
  std::vector<Question> bank = question_bank(state);
  if (bank.empty()) throw Error(ErrorCode::EmptyBank, "no questions have been accepted");
  ExportDocument doc;
  doc.title = options.title;
  if (options.include_summary) doc.summary_text = state.summary->text;
  doc.generated_at = generated_at;
  for (std::size_t i = 0; i < bank.size(); ++i) doc.questions.push_back({i + 1, bank[i].current_text});
  return doc;
}

std::string render_plaintext(const ExportDocument& doc) {
  check_indices(doc);
  std::string out;
  if (!doc.title.empty()) out += single_line(doc.title) + "\n\n";
  if (!doc.summary_text.empty()) out += doc.summary_text + "\n\n";
  for (const ExportQuestion& q : doc.questions) out += std::to_string(q.index) + ". " + single_line(q.text) + "\n";
  return out;
}

std::string_view to_string(PageSize p) noexcept { return p == PageSize::Letter ? "letter" : "a4"; }

PageSize parse_page_size(std::string_view s) {
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "a4") return PageSize::A4;
  if (lower == "letter") return PageSize::Letter;
  throw Error(ErrorCode::InvalidConfig, "unknown page size '" + std::string(s) + "' (expected a4 or letter)");
}

std::string render_pdf(const ExportDocument& doc, const PdfOptions& options) {
  check_indices(doc);
  const double page_w = options.page_size == PageSize::Letter ? 612 : 595;
  const double page_h = options.page_size == PageSize::Letter ? 792 : 842;
  PageBuilder pb(page_w, page_h);

  if (!doc.title.empty()) {
    for (const auto& l : wrap(to_winansi(single_line(doc.title)), pb.text_width(), pb.text_width(), kTitleSize, true)) {
      pb.line(l, 0, kTitleSize, true, kTitleSize + 4);
    }
    pb.gap(kLeading);
  }
  if (!doc.summary_text.empty()) {
    std::string_view rest = doc.summary_text;
    while (!rest.empty()) {
      auto nl = rest.find('\n');
      std::string_view para = rest.substr(0, nl);
      rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
      for (const auto& l : wrap(to_winansi(para), pb.text_width(), pb.text_width(), kBodySize, false)) {
        pb.line(l, 0, kBodySize, false, kLeading);
      }
      pb.gap(kParagraphGap);
    }
    pb.gap(kLeading - kParagraphGap);
  }
  for (const ExportQuestion& q : doc.questions) {
    std::string prefix = std::to_string(q.index) + ". ";
    double indent = width_of(prefix, kBodySize, false);
    auto lines = wrap(to_winansi(single_line(q.text)), pb.text_width() - indent, pb.text_width() - indent, kBodySize, false);
    if (lines.empty()) lines.emplace_back();
    for (std::size_t i = 0; i < lines.size(); ++i) {
      pb.line(i == 0 ? prefix + lines[i] : lines[i], i == 0 ? 0 : indent, kBodySize, false, kLeading);
    }
    pb.gap(kParagraphGap);
  }

  // Objects: 1 catalog, 2 page tree, 3/4 fonts, 5 info, then page + content pairs.
  const auto& pages = pb.pages();
  std::vector<std::string> objects;
  std::string kids;
  for (std::size_t i = 0; i < pages.size(); ++i) kids += std::to_string(6 + 2 * i) + " 0 R ";
  objects.push_back("<< /Type /Catalog /Pages 2 0 R >>");
  objects.push_back("<< /Type /Pages /Kids [" + kids + "] /Count " + std::to_string(pages.size()) + " >>");
  objects.push_back("<< /Type /Font /Subtype /Type1 /BaseFont /Helvetica /Encoding /WinAnsiEncoding >>");
  objects.push_back("<< /Type /Font /Subtype /Type1 /BaseFont /Helvetica-Bold /Encoding /WinAnsiEncoding >>");
  objects.push_back("<< /Producer (catalyst) /Title " + pdf_literal(to_winansi(single_line(doc.title))) +
                    " /CreationDate (" + pdf_date(doc.generated_at) + ") >>");
  for (std::size_t i = 0; i < pages.size(); ++i) {
    objects.push_back("<< /Type /Page /Parent 2 0 R /MediaBox [0 0 " + fmt(page_w) + " " + fmt(page_h) +
                      "] /Resources << /Font << /F1 3 0 R /F2 4 0 R >> >> /Contents " + std::to_string(7 + 2 * i) +
                      " 0 R >>");
    objects.push_back("<< /Length " + std::to_string(pages[i].size()) + " >>\nstream\n" + pages[i] + "endstream");
  }

  std::string out = "%PDF-1.4\n%\xE2\xE3\xCF\xD3\n";
  std::vector<std::size_t> offsets;
  for (std::size_t i = 0; i < objects.size(); ++i) {
    offsets.push_back(out.size());
    out += std::to_string(i + 1) + " 0 obj\n" + objects[i] + "\nendobj\n";
  }
  std::size_t xref = out.size();
  out += "xref\n0 " + std::to_string(objects.size() + 1) + "\n0000000000 65535 f \n";
  for (std::size_t off : offsets) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%010zu 00000 n \n", off);
    out += buf;
  }
  out += "trailer\n<< /Size " + std::to_string(objects.size() + 1) + " /Root 1 0 R /Info 5 0 R >>\nstartxref\n" +
         std::to_string(xref) + "\n%%EOF\n";
  return out;
}

}  // namespace catalyst
