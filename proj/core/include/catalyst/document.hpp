#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace catalyst {

enum class DocumentFormat { Pdf, Doc, Docx };

std::string_view to_string(DocumentFormat f) noexcept;

// Format implied by the file extension (case-insensitive), if any.
std::optional<DocumentFormat> format_from_filename(std::string_view filename);

struct UploadedDocument {
  std::string filename;
  DocumentFormat format = DocumentFormat::Pdf;
  std::string bytes;

  std::size_t byte_length() const noexcept { return bytes.size(); }
};

// Validates the extension and payload. Throws UnsupportedFormat for unknown
// extensions and EmptyDocument for a zero-byte payload.
UploadedDocument make_document(std::string filename, std::string bytes);

// Text of a pdf or docx upload, whitespace normalized, paragraphs on their
// own lines. Errors: UnsupportedFormat (.doc), UnreadableFile (parse failure
// or content that does not match the extension), EmptyDocument (no text).
std::string extract_text(const UploadedDocument& doc);

}  // namespace catalyst
