#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "catalyst/model.hpp"

namespace catalyst {

struct ExportQuestion {
  std::size_t index = 0;  // 1-based, dense
  std::string text;

  bool operator==(const ExportQuestion&) const = default;
};

struct ExportDocument {
  std::string title;         // omitted from output when empty
  std::string summary_text;  // omitted from output when empty
  std::vector<ExportQuestion> questions;
  Timestamp generated_at{};

  bool operator==(const ExportDocument&) const = default;
};

struct ExportOptions {
  std::string title = "Scaffolding Questions";
  bool include_summary = true;
};

// Assembles the handout from the approved summary and the bank, in bank
// order, reading each question's current text. Throws NoApprovedSummary or
// EmptyBank.
ExportDocument build_preview(const SessionState& state, const ExportOptions& options, Timestamp generated_at);

// Title, blank line, summary, blank line, then one "N. question" line per
// entry; line breaks inside a question become single spaces.
std::string render_plaintext(const ExportDocument& doc);

enum class PageSize { A4, Letter };

std::string_view to_string(PageSize p) noexcept;
// Accepts "a4" / "letter" (case-insensitive); throws InvalidConfig.
PageSize parse_page_size(std::string_view s);

struct PdfOptions {
  PageSize page_size = PageSize::A4;
};

// Paginated PDF using the standard Helvetica faces. Characters outside the
// WinAnsi repertoire print as '?'. Output depends only on `doc` and
// `options`; generated_at becomes the document's CreationDate. Throws
// RenderFailure when question indices are not 1..n.
std::string render_pdf(const ExportDocument& doc, const PdfOptions& options = {});

}  // namespace catalyst
