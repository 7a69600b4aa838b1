#include "catalyst/docx_text.hpp"

#include <expat.h>

#include <memory>

#include "catalyst/error.hpp"
#include "catalyst/text.hpp"
#include "zip_archive.hpp"

namespace catalyst::docx {

namespace {

constexpr std::string_view kWordNs = "http://schemas.openxmlformats.org/wordprocessingml/2006/main";
constexpr std::string_view kCompatNs = "http://schemas.openxmlformats.org/markup-compatibility/2006";
constexpr char kSep = '|';

struct ParseState {
  std::string out;
  int text_depth = 0;      // inside w:t
  int fallback_depth = 0;  // inside mc:Fallback
};

// Splits "uri|local" as produced by the namespace-aware parser.
std::pair<std::string_view, std::string_view> split_name(const XML_Char* name) {
  std::string_view full(name);
  auto bar = full.rfind(kSep);
  if (bar == std::string_view::npos) return {{}, full};
  return {full.substr(0, bar), full.substr(bar + 1)};
}

void XMLCALL on_start(void* user, const XML_Char* name, const XML_Char**) {
  auto& st = *static_cast<ParseState*>(user);
  auto [ns, local] = split_name(name);
  if (ns == kCompatNs && local == "Fallback") {
    ++st.fallback_depth;
    return;
  }
  if (st.fallback_depth > 0 || ns != kWordNs) return;
  if (local == "t") {
    ++st.text_depth;
  } else if (local == "tab") {
    st.out.push_back(' ');
  } else if (local == "br" || local == "cr") {
    st.out.push_back('\n');
  }
}

void XMLCALL on_end(void* user, const XML_Char* name) {
  auto& st = *static_cast<ParseState*>(user);
  auto [ns, local] = split_name(name);
  if (ns == kCompatNs && local == "Fallback") {
    if (st.fallback_depth > 0) --st.fallback_depth;
    return;
  }
  if (st.fallback_depth > 0 || ns != kWordNs) return;
  if (local == "t") {
    if (st.text_depth > 0) --st.text_depth;
  } else if (local == "p") {
    st.out.push_back('\n');
  }
}

void XMLCALL on_chars(void* user, const XML_Char* s, int len) {
  auto& st = *static_cast<ParseState*>(user);
  if (st.text_depth > 0 && st.fallback_depth == 0) st.out.append(s, static_cast<std::size_t>(len));
}

}  // namespace

std::string extract_text(std::string_view bytes) {
  detail::ZipArchive zip(bytes);
  const auto* entry = zip.find("word/document.xml");
  if (!entry) throw Error(ErrorCode::UnreadableFile, "not a Word document: word/document.xml is missing");
  std::string xml = zip.read(*entry);

  std::unique_ptr<std::remove_pointer_t<XML_Parser>, decltype(&XML_ParserFree)> parser(
      XML_ParserCreateNS(nullptr, kSep), &XML_ParserFree);
  if (!parser) throw Error(ErrorCode::UnreadableFile, "XML parser allocation failed");
  ParseState st;
  XML_SetUserData(parser.get(), &st);
  XML_SetElementHandler(parser.get(), on_start, on_end);
  XML_SetCharacterDataHandler(parser.get(), on_chars);
  if (XML_Parse(parser.get(), xml.data(), static_cast<int>(xml.size()), XML_TRUE) == XML_STATUS_ERROR) {
    throw Error(ErrorCode::UnreadableFile,
                std::string("malformed document.xml: ") + XML_ErrorString(XML_GetErrorCode(parser.get())) + " at line " +
                    std::to_string(XML_GetCurrentLineNumber(parser.get())));
  }
  return text::normalize_whitespace(st.out);
}

}  // namespace catalyst::docx
