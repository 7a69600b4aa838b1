#include "catalyst/document.hpp"

#include <algorithm>
#include <cctype>

#include "catalyst/docx_text.hpp"
#include "catalyst/error.hpp"
#include "catalyst/pdf_text.hpp"

namespace catalyst {

std::string_view to_string(DocumentFormat f) noexcept {
  switch (f) {
    case DocumentFormat::Pdf: return "pdf";
    case DocumentFormat::Doc: return "doc";
    case DocumentFormat::Docx: return "docx";
  }
  return "pdf";
}

std::optional<DocumentFormat> format_from_filename(std::string_view filename) {
  auto dot = filename.rfind('.');
  if (dot == std::string_view::npos) return std::nullopt;
  std::string ext(filename.substr(dot + 1));
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  if (ext == "pdf") return DocumentFormat::Pdf;
  if (ext == "doc") return DocumentFormat::Doc;
  if (ext == "docx") return DocumentFormat::Docx;
  return std::nullopt;
}

UploadedDocument make_document(std::string filename, std::string bytes) {
  auto format = format_from_filename(filename);
  if (!format) {
    throw Error(ErrorCode::UnsupportedFormat,
                "unsupported file type for '" + filename + "'; supported types are .pdf and .docx");
  }
  if (bytes.empty()) throw Error(ErrorCode::EmptyDocument, "'" + filename + "' is empty");
  return UploadedDocument{std::move(filename), *format, std::move(bytes)};
}

std::string extract_text(const UploadedDocument& doc) {
  if (doc.bytes.empty()) throw Error(ErrorCode::EmptyDocument, "'" + doc.filename + "' is empty");
  std::string text;
  switch (doc.format) {
    case DocumentFormat::Doc:
      throw Error(ErrorCode::UnsupportedFormat,
                  "legacy .doc files are not supported ('" + doc.filename + "'); save the file as .docx and upload again");
    case DocumentFormat::Pdf:
      if (std::string_view(doc.bytes).substr(0, 1024).find("%PDF") == std::string_view::npos) {
        throw Error(ErrorCode::UnreadableFile, "'" + doc.filename + "' does not look like a PDF");
      }
      text = pdf::extract_text(doc.bytes);
      break;
    case DocumentFormat::Docx:
      if (doc.bytes.rfind("PK", 0) != 0) {
        throw Error(ErrorCode::UnreadableFile, "'" + doc.filename + "' does not look like a .docx package");
      }
      text = docx::extract_text(doc.bytes);
      break;
  }
  if (text.empty()) throw Error(ErrorCode::EmptyDocument, "no extractable text in '" + doc.filename + "'");
  return text;
}

}  // namespace catalyst
