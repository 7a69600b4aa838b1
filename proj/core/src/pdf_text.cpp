#include "catalyst/pdf_text.hpp"

#include <zlib.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <set>
#include <unordered_map>

#include "catalyst/error.hpp"
#include "catalyst/text.hpp"
#include "helvetica_metrics.hpp"
#include "pdf_objects.hpp"

namespace catalyst::pdf {

using namespace detail;

namespace {

constexpr std::size_t kMaxDecodedStream = 64u << 20;
constexpr int kMaxResolveDepth = 32;
constexpr int kMaxFormDepth = 8;

[[noreturn]] void unreadable(const std::string& why) { throw Error(ErrorCode::UnreadableFile, "unreadable PDF: " + why); }

// --- stream filters ------------------------------------------------------------

std::string inflate_stream(std::string_view in) {
  z_stream zs{};
  if (inflateInit(&zs) != Z_OK) return {};
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(in.data()));
  zs.avail_in = static_cast<uInt>(in.size());
  std::string out;
  std::array<char, 16384> buf;
  int rc = Z_OK;
  while (rc == Z_OK) {
    zs.next_out = reinterpret_cast<Bytef*>(buf.data());
    zs.avail_out = buf.size();
    rc = inflate(&zs, Z_NO_FLUSH);
    out.append(buf.data(), buf.size() - zs.avail_out);
    if (out.size() > kMaxDecodedStream) break;
    if (rc == Z_BUF_ERROR && zs.avail_in == 0) break;
  }
  // Truncated or slightly corrupt streams still yield what was decoded.
  inflateEnd(&zs);
  return out;
}

std::string ascii85_decode(std::string_view in) {
  std::string out;
  std::uint32_t tuple = 0;
  int count = 0;
  std::size_t i = 0;
  if (in.substr(0, 2) == "<~") i = 2;
  for (; i < in.size(); ++i) {
    char c = in[i];
    if (c == '~') break;
    if (is_pdf_whitespace(c)) continue;
    if (c == 'z' && count == 0) {
      out.append(4, '\0');
      continue;
    }
    if (c < '!' || c > 'u') continue;
    tuple = tuple * 85 + static_cast<std::uint32_t>(c - '!');
    if (++count == 5) {
      for (int k = 3; k >= 0; --k) out.push_back(static_cast<char>((tuple >> (8 * k)) & 0xFF));
      tuple = 0;
      count = 0;
    }
  }
  if (count > 1) {
    for (int k = count; k < 5; ++k) tuple = tuple * 85 + 84;
    for (int k = 0; k < count - 1; ++k) out.push_back(static_cast<char>((tuple >> (8 * (3 - k))) & 0xFF));
  }
  return out;
}

std::string asciihex_decode(std::string_view in) {
  std::string out;
  int high = -1;
  for (char c : in) {
    if (c == '>') break;
    int v = (c >= '0' && c <= '9') ? c - '0' : (c >= 'a' && c <= 'f') ? c - 'a' + 10 : (c >= 'A' && c <= 'F') ? c - 'A' + 10 : -1;
    if (v < 0) continue;
    if (high < 0) {
      high = v;
    } else {
      out.push_back(static_cast<char>(high * 16 + v));
      high = -1;
    }
  }
  if (high >= 0) out.push_back(static_cast<char>(high * 16));
  return out;
}

// --- document ------------------------------------------------------------------

struct IndirectObject {
  Object value;
  // Raw stream payload (still encoded) when the object is a stream.
  std::optional<std::string_view> stream;
  // Set for objects unpacked from an object stream; their payload is owned here.
  std::shared_ptr<std::string> owned;
};

class Document {
 public:
  explicit Document(std::string_view bytes);

  const Object& resolve(const Object& o, int depth = 0) const;
  const IndirectObject* get(const Ref& r) const;
  const IndirectObject* get_stream_object(const Object& o) const;
  std::string decode_stream(const IndirectObject& obj) const;

  std::vector<std::pair<const Dict*, const Dict*>> pages() const;  // (page, inherited resources)

 private:
  void scan_objects();
  void unpack_object_streams();
  std::optional<std::string_view> stream_payload(const Dict& dict, std::size_t after_keyword) const;
  const Dict* find_root() const;

  std::string_view data_;
  std::unordered_map<int, IndirectObject> objects_;
  std::vector<std::string> owned_payloads_;
};

Document::Document(std::string_view bytes) : data_(bytes) {
  std::size_t header = bytes.substr(0, 1024).find("%PDF-");
  if (header == std::string_view::npos) unreadable("missing %PDF header");
  scan_objects();
  if (objects_.empty()) unreadable("no objects found");
  unpack_object_streams();
}

std::optional<std::string_view> Document::stream_payload(const Dict& dict, std::size_t after_keyword) const {
  std::size_t start = after_keyword;
  if (start < data_.size() && data_[start] == '\r') ++start;
  if (start < data_.size() && data_[start] == '\n') ++start;
  const Object& len = lookup(dict, "Length");
  if (const double* n = len.number()) {
    std::size_t length = static_cast<std::size_t>(*n);
    if (*n >= 0 && start + length <= data_.size()) {
      Lexer probe(data_, start + length);
      probe.skip_whitespace();
      if (data_.substr(probe.pos(), 9) == "endstream") return data_.substr(start, length);
    }
  }
  std::size_t end = data_.find("endstream", start);
  if (end == std::string_view::npos) return std::nullopt;
  std::size_t stop = end;
  if (stop > start && data_[stop - 1] == '\n') --stop;
  if (stop > start && data_[stop - 1] == '\r') --stop;
  return data_.substr(start, stop - start);
}

void Document::scan_objects() {
  auto is_digit = [](char c) { return c >= '0' && c <= '9'; };
  std::size_t pos = 0;
  while ((pos = data_.find("obj", pos)) != std::string_view::npos) {
    std::size_t kw = pos;
    pos += 3;
    if (pos < data_.size() && !is_pdf_whitespace(data_[pos]) && !is_pdf_delimiter(data_[pos])) continue;
    // Walk back over "<num> <gen> ".
    std::size_t p = kw;
    auto back_ws = [&] {
      std::size_t n = 0;
      while (p > 0 && is_pdf_whitespace(data_[p - 1])) --p, ++n;
      return n;
    };
    auto back_digits = [&] {
      std::size_t end = p;
      while (p > 0 && is_digit(data_[p - 1])) --p;
      return data_.substr(p, end - p);
    };
    if (back_ws() == 0) continue;
    std::string_view gen = back_digits();
    if (gen.empty() || back_ws() == 0) continue;
    std::string_view num = back_digits();
    if (num.empty() || num.size() > 9) continue;
    if (p > 0 && !is_pdf_whitespace(data_[p - 1]) && !is_pdf_delimiter(data_[p - 1])) continue;

    Lexer lx(data_, pos);
    auto value = lx.next();
    if (!value) continue;
    IndirectObject obj;
    obj.value = std::move(*value);
    std::size_t resume = lx.pos();
    auto after = lx.next();
    if (after && after->is_keyword("stream") && obj.value.dict()) {
      obj.stream = stream_payload(*obj.value.dict(), lx.pos());
      if (obj.stream) resume = static_cast<std::size_t>(obj.stream->data() + obj.stream->size() - data_.data());
    }
    int number = std::stoi(std::string(num));
    objects_[number] = std::move(obj);
    pos = std::max(pos, resume);
  }
}

void Document::unpack_object_streams() {
  std::vector<int> containers;
  for (const auto& [num, obj] : objects_) {
    const Dict* d = obj.value.dict();
    if (obj.stream && d) {
      const std::string* type = lookup(*d, "Type").name();
      if (type && *type == "ObjStm") containers.push_back(num);
    }
  }
  std::sort(containers.begin(), containers.end());
  for (int num : containers) {
    const IndirectObject& container = objects_.at(num);
    const Dict& d = *container.value.dict();
    const double* n = resolve(lookup(d, "N")).number();
    const double* first = resolve(lookup(d, "First")).number();
    if (!n || !first) continue;
    auto payload = std::make_shared<std::string>(decode_stream(container));
    Lexer header(*payload);
    std::vector<std::pair<int, std::size_t>> entries;
    for (int i = 0; i < static_cast<int>(*n); ++i) {
      auto a = header.next();
      auto b = header.next();
      if (!a || !b || !a->number() || !b->number()) break;
      entries.emplace_back(static_cast<int>(*a->number()), static_cast<std::size_t>(*first + *b->number()));
    }
    for (const auto& [objnum, offset] : entries) {
      if (objects_.contains(objnum) || offset >= payload->size()) continue;
      Lexer lx(*payload, offset);
      auto value = lx.next();
      if (!value) continue;
      IndirectObject obj;
      obj.value = std::move(*value);
      obj.owned = payload;
      objects_[objnum] = std::move(obj);
    }
  }
}

const IndirectObject* Document::get(const Ref& r) const {
  auto it = objects_.find(r.num);
  return it == objects_.end() ? nullptr : &it->second;
}

const Object& Document::resolve(const Object& o, int depth) const {
  static const Object null_object;
  const Ref* r = o.ref();
  if (!r) return o;
  if (depth > kMaxResolveDepth) return null_object;
  const IndirectObject* target = get(*r);
  if (!target) return null_object;
  return resolve(target->value, depth + 1);
}

const IndirectObject* Document::get_stream_object(const Object& o) const {
  const Ref* r = o.ref();
  if (!r) return nullptr;
  const IndirectObject* target = get(*r);
  return target && target->stream ? target : nullptr;
}

std::string Document::decode_stream(const IndirectObject& obj) const {
  if (!obj.stream || !obj.value.dict()) return {};
  const Dict& d = *obj.value.dict();
  std::vector<std::string> filters;
  const Object& f = resolve(lookup(d, "Filter"));
  if (const std::string* name = f.name()) {
    filters.push_back(*name);
  } else if (const Array* arr = f.array()) {
    for (const Object& item : *arr) {
      if (const std::string* name = resolve(item).name()) filters.push_back(*name);
    }
  }
  std::string data(*obj.stream);
  for (const std::string& filter : filters) {
    if (filter == "FlateDecode" || filter == "Fl") {
      data = inflate_stream(data);
    } else if (filter == "ASCII85Decode" || filter == "A85") {
      data = ascii85_decode(data);
    } else if (filter == "ASCIIHexDecode" || filter == "AHx") {
      data = asciihex_decode(data);
    } else {
      return {};  // image codecs and the like carry no text
    }
  }
  return data;
}

const Dict* Document::find_root() const {
  // Trailer dictionaries, newest last.
  const Dict* root = nullptr;
  std::size_t pos = 0;
  while ((pos = data_.find("trailer", pos)) != std::string_view::npos) {
    Lexer lx(data_, pos + 7);
    pos += 7;
    auto trailer = lx.next();
    if (!trailer || !trailer->dict()) continue;
    if (const Dict* r = resolve(lookup(*trailer->dict(), "Root")).dict()) root = r;
  }
  if (root) return root;
  // Cross-reference streams carry the trailer keys in their dictionary.
  int best = -1;
  for (const auto& [num, obj] : objects_) {
    const Dict* d = obj.value.dict();
    if (!d) continue;
    const std::string* type = lookup(*d, "Type").name();
    if (type && (*type == "XRef" || *type == "Catalog") && num > best) {
      const Dict* candidate = *type == "Catalog" ? d : resolve(lookup(*d, "Root")).dict();
      if (candidate) {
        root = candidate;
        best = num;
      }
    }
  }
  return root;
}

std::vector<std::pair<const Dict*, const Dict*>> Document::pages() const {
  std::vector<std::pair<const Dict*, const Dict*>> out;
  std::set<const Dict*> visited;
  std::function<void(const Dict*, const Dict*, int)> walk = [&](const Dict* node, const Dict* resources, int depth) {
    if (!node || depth > 64 || !visited.insert(node).second) return;
    if (const Dict* r = resolve(lookup(*node, "Resources")).dict()) resources = r;
    const std::string* type = lookup(*node, "Type").name();
    const Array* kids = resolve(lookup(*node, "Kids")).array();
    if (kids && (!type || *type != "Page")) {
      for (const Object& kid : *kids) walk(resolve(kid).dict(), resources, depth + 1);
    } else {
      out.emplace_back(node, resources);
    }
  };
  if (const Dict* root = find_root()) walk(resolve(lookup(*root, "Pages")).dict(), nullptr, 0);
  if (out.empty()) {
    std::vector<int> nums;
    for (const auto& [num, obj] : objects_) {
      const Dict* d = obj.value.dict();
      const std::string* type = d ? lookup(*d, "Type").name() : nullptr;
      if (type && *type == "Page") nums.push_back(num);
    }
    std::sort(nums.begin(), nums.end());
    for (int n : nums) {
      const Dict* d = objects_.at(n).value.dict();
      out.emplace_back(d, resolve(lookup(*d, "Resources")).dict());
    }
  }
  return out;
}

// --- fonts ---------------------------------------------------------------------

char32_t glyph_name_to_unicode(const std::string& name) {
  static const std::unordered_map<std::string, char32_t> kNames = {
      {"space", U' '},        {"exclam", U'!'},       {"quotedbl", U'"'},      {"numbersign", U'#'},
      {"dollar", U'$'},       {"percent", U'%'},      {"ampersand", U'&'},     {"quotesingle", U'\''},
      {"quoteright", 0x2019}, {"quoteleft", 0x2018},  {"parenleft", U'('},     {"parenright", U')'},
      {"asterisk", U'*'},     {"plus", U'+'},         {"comma", U','},         {"hyphen", U'-'},
      {"period", U'.'},       {"slash", U'/'},        {"zero", U'0'},          {"one", U'1'},
      {"two", U'2'},          {"three", U'3'},        {"four", U'4'},          {"five", U'5'},
      {"six", U'6'},          {"seven", U'7'},        {"eight", U'8'},         {"nine", U'9'},
      {"colon", U':'},        {"semicolon", U';'},    {"less", U'<'},          {"equal", U'='},
      {"greater", U'>'},      {"question", U'?'},     {"at", U'@'},            {"bracketleft", U'['},
      {"backslash", U'\\'},   {"bracketright", U']'}, {"asciicircum", U'^'},   {"underscore", U'_'},
      {"grave", U'`'},        {"braceleft", U'{'},    {"bar", U'|'},           {"braceright", U'}'},
      {"asciitilde", U'~'},   {"endash", 0x2013},     {"emdash", 0x2014},      {"bullet", 0x2022},
      {"quotedblleft", 0x201C}, {"quotedblright", 0x201D}, {"ellipsis", 0x2026}, {"fi", 0xFB01},
      {"fl", 0xFB02},         {"nbspace", 0xA0},      {"degree", 0xB0},        {"copyright", 0xA9},
      {"registered", 0xAE},   {"trademark", 0x2122},  {"minus", 0x2212},       {"multiply", 0xD7},
  };
  if (name.size() == 1) return static_cast<unsigned char>(name[0]);
  if (auto it = kNames.find(name); it != kNames.end()) return it->second;
  if (name.size() == 7 && name.rfind("uni", 0) == 0) {
    return static_cast<char32_t>(std::strtoul(name.c_str() + 3, nullptr, 16));
  }
  return 0;
}

void append_utf16be(std::string& out, std::string_view bytes) {
  for (std::size_t i = 0; i + 1 < bytes.size(); i += 2) {
    char32_t unit = (static_cast<unsigned char>(bytes[i]) << 8) | static_cast<unsigned char>(bytes[i + 1]);
    if (unit >= 0xD800 && unit <= 0xDBFF && i + 3 < bytes.size()) {
      char32_t low = (static_cast<unsigned char>(bytes[i + 2]) << 8) | static_cast<unsigned char>(bytes[i + 3]);
      if (low >= 0xDC00 && low <= 0xDFFF) {
        text::append_utf8(out, 0x10000 + ((unit - 0xD800) << 10) + (low - 0xDC00));
        i += 2;
        continue;
      }
    }
    text::append_utf8(out, unit);
  }
}

std::uint32_t bytes_to_code(std::string_view b) {
  std::uint32_t v = 0;
  for (char c : b) v = (v << 8) | static_cast<unsigned char>(c);
  return v;
}

class Font {
 public:
  Font() = default;
  Font(const Document& doc, const Dict& font);

  struct Glyph {
    std::string utf8;
    double width = 0;  // text-space units per 1 unit of font size
    bool is_space = false;
  };

  std::vector<Glyph> decode(std::string_view bytes) const;

 private:
  void parse_cmap(std::string_view cmap);
  std::size_t code_length(std::string_view bytes, std::size_t pos) const;

  bool two_byte_ = false;
  bool helvetica_metrics_ = true;
  std::vector<std::pair<std::string, std::string>> codespace_;  // [lo, hi] byte strings
  std::unordered_map<std::uint32_t, std::string> to_unicode_;
  std::array<char32_t, 256> encoding_{};
  std::unordered_map<std::uint32_t, double> widths_;
  double default_width_ = 0.5;
};

Font::Font(const Document& doc, const Dict& font) {
  for (int i = 0; i < 256; ++i) encoding_[i] = text::winansi_to_unicode(static_cast<unsigned char>(i));
  const std::string* subtype = doc.resolve(lookup(font, "Subtype")).name();
  two_byte_ = subtype && *subtype == "Type0";
  const std::string* base = doc.resolve(lookup(font, "BaseFont")).name();
  helvetica_metrics_ = !two_byte_ && base && base->find("Helvetica") != std::string::npos;

  const Object& enc = doc.resolve(lookup(font, "Encoding"));
  if (const Dict* ed = enc.dict()) {
    if (const Array* diffs = doc.resolve(lookup(*ed, "Differences")).array()) {
      int code = 0;
      for (const Object& item : *diffs) {
        const Object& v = doc.resolve(item);
        if (const double* n = v.number()) {
          code = static_cast<int>(*n);
        } else if (const std::string* glyph = v.name()) {
          if (code >= 0 && code < 256) {
            if (char32_t cp = glyph_name_to_unicode(*glyph)) encoding_[code] = cp;
          }
          ++code;
        }
      }
    }
  }

  if (const IndirectObject* cmap = doc.get_stream_object(lookup(font, "ToUnicode"))) parse_cmap(doc.decode_stream(*cmap));

  if (const Array* widths = doc.resolve(lookup(font, "Widths")).array()) {
    const double* first = doc.resolve(lookup(font, "FirstChar")).number();
    int code = first ? static_cast<int>(*first) : 0;
    for (const Object& w : *widths) {
      if (const double* n = doc.resolve(w).number()) widths_[code] = *n / 1000.0;
      ++code;
    }
    helvetica_metrics_ = false;
  }
  if (two_byte_) {
    const Array* descendants = doc.resolve(lookup(font, "DescendantFonts")).array();
    const Dict* cid = descendants && !descendants->empty() ? doc.resolve(descendants->front()).dict() : nullptr;
    if (cid) {
      if (const double* dw = doc.resolve(lookup(*cid, "DW")).number()) default_width_ = *dw / 1000.0;
      else default_width_ = 1.0;
      // W: [c [w1 w2 ...]] or [c_first c_last w]
      if (const Array* w = doc.resolve(lookup(*cid, "W")).array()) {
        for (std::size_t i = 0; i < w->size();) {
          const double* c = doc.resolve((*w)[i]).number();
          if (!c || i + 1 >= w->size()) break;
          const Object& next = doc.resolve((*w)[i + 1]);
          if (const Array* list = next.array()) {
            std::uint32_t code = static_cast<std::uint32_t>(*c);
            for (const Object& item : *list) {
              if (const double* n = doc.resolve(item).number()) widths_[code] = *n / 1000.0;
              ++code;
            }
            i += 2;
          } else if (i + 2 < w->size()) {
            const double* last = next.number();
            const double* width = doc.resolve((*w)[i + 2]).number();
            if (last && width && *last - *c < 65536) {
              for (auto code = static_cast<std::uint32_t>(*c); code <= static_cast<std::uint32_t>(*last); ++code) {
                widths_[code] = *width / 1000.0;
              }
            }
            i += 3;
          } else {
            break;
          }
        }
      }
    }
  }
}

void Font::parse_cmap(std::string_view cmap) {
  Lexer lx(cmap);
  std::vector<Object> operands;
  enum class Section { None, Codespace, BfChar, BfRange } section = Section::None;
  while (auto o = lx.next()) {
    if (const std::string* kw = o->keyword()) {
      if (*kw == "begincodespacerange") section = Section::Codespace;
      else if (*kw == "beginbfchar") section = Section::BfChar;
      else if (*kw == "beginbfrange") section = Section::BfRange;
      else if (kw->rfind("end", 0) == 0) section = Section::None;
      operands.clear();
      continue;
    }
    operands.push_back(std::move(*o));
    switch (section) {
      case Section::Codespace:
        if (operands.size() == 2) {
          if (operands[0].string() && operands[1].string()) codespace_.emplace_back(*operands[0].string(), *operands[1].string());
          operands.clear();
        }
        break;
      case Section::BfChar:
        if (operands.size() == 2) {
          if (operands[0].string() && operands[1].string()) {
            std::string utf8;
            append_utf16be(utf8, *operands[1].string());
            to_unicode_[bytes_to_code(*operands[0].string())] = utf8;
          }
          operands.clear();
        }
        break;
      case Section::BfRange:
        if (operands.size() == 3) {
          const std::string* lo = operands[0].string();
          const std::string* hi = operands[1].string();
          if (lo && hi) {
            std::uint32_t a = bytes_to_code(*lo);
            std::uint32_t b = bytes_to_code(*hi);
            if (b >= a && b - a < 65536) {
              if (const std::string* dst = operands[2].string()) {
                std::string base = *dst;
                for (std::uint32_t code = a; code <= b; ++code) {
                  std::string utf8;
                  append_utf16be(utf8, base);
                  to_unicode_[code] = utf8;
                  // Increment the last byte of the destination.
                  if (!base.empty()) base.back() = static_cast<char>(static_cast<unsigned char>(base.back()) + 1);
                }
              } else if (const Array* list = operands[2].array()) {
                std::uint32_t code = a;
                for (const Object& item : *list) {
                  if (code > b) break;
                  if (const std::string* s = item.string()) {
                    std::string utf8;
                    append_utf16be(utf8, *s);
                    to_unicode_[code] = utf8;
                  }
                  ++code;
                }
              }
            }
          }
          operands.clear();
        }
        break;
      case Section::None:
        if (operands.size() > 8) operands.clear();
        break;
    }
  }
}

std::size_t Font::code_length(std::string_view bytes, std::size_t pos) const {
  if (!codespace_.empty()) {
    for (std::size_t len = 1; len <= 4 && pos + len <= bytes.size(); ++len) {
      std::string_view candidate = bytes.substr(pos, len);
      for (const auto& [lo, hi] : codespace_) {
        if (lo.size() != len) continue;
        bool inside = true;
        for (std::size_t k = 0; k < len; ++k) {
          auto c = static_cast<unsigned char>(candidate[k]);
          if (c < static_cast<unsigned char>(lo[k]) || c > static_cast<unsigned char>(hi[k])) {
            inside = false;
            break;
          }
        }
        if (inside) return len;
      }
    }
  }
  return two_byte_ ? 2 : 1;
}

std::vector<Font::Glyph> Font::decode(std::string_view bytes) const {
  std::vector<Glyph> glyphs;
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    std::size_t len = std::min(code_length(bytes, pos), bytes.size() - pos);
    std::string_view raw = bytes.substr(pos, len);
    pos += len;
    std::uint32_t code = bytes_to_code(raw);
    Glyph g;
    if (auto it = to_unicode_.find(code); it != to_unicode_.end()) {
      g.utf8 = it->second;
    } else if (!two_byte_) {
      char32_t cp = encoding_[code & 0xFF];
      if (cp >= 0x20 || cp == '\t') text::append_utf8(g.utf8, cp);
    }
    if (auto it = widths_.find(code); it != widths_.end()) {
      g.width = it->second;
    } else if (helvetica_metrics_) {
      g.width = catalyst::detail::helvetica_width(static_cast<unsigned char>(code & 0xFF)) / 1000.0;
    } else {
      g.width = default_width_;
    }
    g.is_space = !two_byte_ && len == 1 && code == 32;
    glyphs.push_back(std::move(g));
  }
  return glyphs;
}

// --- content interpretation ----------------------------------------------------

struct Matrix {
  double a = 1, b = 0, c = 0, d = 1, e = 0, f = 0;

  // this × rhs (row-vector convention used by PDF).
  Matrix operator*(const Matrix& m) const {
    return {a * m.a + b * m.c,       a * m.b + b * m.d,       c * m.a + d * m.c,
            c * m.b + d * m.d,       e * m.a + f * m.c + m.e, e * m.b + f * m.d + m.f};
  }
  static Matrix translate(double tx, double ty) { return {1, 0, 0, 1, tx, ty}; }
};

Matrix matrix_from(const std::vector<Object>& ops, std::size_t from) {
  double v[6] = {1, 0, 0, 1, 0, 0};
  for (int i = 0; i < 6; ++i) {
    if (from + i < ops.size()) {
      if (const double* n = ops[from + i].number()) v[i] = *n;
    }
  }
  return {v[0], v[1], v[2], v[3], v[4], v[5]};
}

class TextCollector {
 public:
  void emit(const std::string& s, double x, double y, double end_x, double size) {
    if (s.empty()) return;
    double tol = std::max(size, 1.0) * 0.5;
    if (started_) {
      if (std::abs(y - last_y_) > tol || (x < last_start_x_ - size * 0.5 && x < last_end_x_ - size * 2)) {
        out_.push_back('\n');
      } else if (x > last_end_x_ + size * 0.15) {
        out_.push_back(' ');
      }
    }
    out_ += s;
    started_ = true;
    last_y_ = y;
    last_end_x_ = end_x;
    last_start_x_ = x;
  }
  void page_break() {
    if (started_) out_.push_back('\n');
    started_ = false;
  }
  const std::string& str() const noexcept { return out_; }

 private:
  std::string out_;
  bool started_ = false;
  double last_y_ = 0;
  double last_end_x_ = 0;
  double last_start_x_ = 0;
};

class ContentInterpreter {
 public:
  ContentInterpreter(const Document& doc, TextCollector& out) : doc_(doc), out_(out) {}

  void run(std::string_view content, const Dict* resources, const Matrix& base_ctm, int depth);

 private:
  struct GraphicsState {
    Matrix ctm;
    const Font* font = nullptr;
    double font_size = 12;
    double char_spacing = 0;
    double word_spacing = 0;
    double horizontal_scale = 1;
    double leading = 0;
  };

  const Font* font_for(const Dict* resources, const std::string& name);
  void show(const std::string& bytes);
  void next_line(double tx, double ty);

  const Document& doc_;
  TextCollector& out_;
  std::unordered_map<const Dict*, Font> fonts_;
  GraphicsState gs_;
  Matrix tm_;
  Matrix lm_;
};

const Font* ContentInterpreter::font_for(const Dict* resources, const std::string& name) {
  if (!resources) return nullptr;
  const Dict* fonts = doc_.resolve(lookup(*resources, "Font")).dict();
  if (!fonts) return nullptr;
  const Dict* font = doc_.resolve(lookup(*fonts, name)).dict();
  if (!font) return nullptr;
  auto it = fonts_.find(font);
  if (it == fonts_.end()) it = fonts_.emplace(font, Font(doc_, *font)).first;
  return &it->second;
}

void ContentInterpreter::next_line(double tx, double ty) {
  lm_ = Matrix::translate(tx, ty) * lm_;
  tm_ = lm_;
}

void ContentInterpreter::show(const std::string& bytes) {
  static const Font fallback;
  const Font& font = gs_.font ? *gs_.font : fallback;
  std::string run;
  Matrix start = tm_ * gs_.ctm;
  double scale = std::hypot(start.c, start.d);
  double size = gs_.font_size * (scale > 0 ? scale : 1);
  for (const Font::Glyph& g : font.decode(bytes)) {
    run += g.utf8;
    double advance = (g.width * gs_.font_size + gs_.char_spacing + (g.is_space ? gs_.word_spacing : 0)) *
                     gs_.horizontal_scale;
    tm_ = Matrix::translate(advance, 0) * tm_;
  }
  Matrix end = tm_ * gs_.ctm;
  out_.emit(run, start.e, start.f, end.e, std::abs(size));
}

void ContentInterpreter::run(std::string_view content, const Dict* resources, const Matrix& base_ctm, int depth) {
  if (depth > kMaxFormDepth) return;
  std::vector<GraphicsState> stack;
  gs_.ctm = base_ctm;
  Lexer lx(content);
  std::vector<Object> ops;
  auto num = [&](std::size_t i) {
    if (i < ops.size()) {
      if (const double* n = ops[i].number()) return *n;
    }
    return 0.0;
  };
  while (auto o = lx.next()) {
    const std::string* kw = o->keyword();
    if (!kw) {
      ops.push_back(std::move(*o));
      if (ops.size() > 64) ops.erase(ops.begin());
      continue;
    }
    const std::string& op = *kw;
    if (op == "q") {
      stack.push_back(gs_);
    } else if (op == "Q") {
      if (!stack.empty()) {
        gs_ = stack.back();
        stack.pop_back();
      }
    } else if (op == "cm" && ops.size() >= 6) {
      gs_.ctm = matrix_from(ops, ops.size() - 6) * gs_.ctm;
    } else if (op == "BT") {
      tm_ = lm_ = Matrix{};
    } else if (op == "Tf" && ops.size() >= 2) {
      if (const std::string* name = ops[ops.size() - 2].name()) gs_.font = font_for(resources, *name);
      gs_.font_size = num(ops.size() - 1);
    } else if (op == "Tc" && !ops.empty()) {
      gs_.char_spacing = num(ops.size() - 1);
    } else if (op == "Tw" && !ops.empty()) {
      gs_.word_spacing = num(ops.size() - 1);
    } else if (op == "Tz" && !ops.empty()) {
      gs_.horizontal_scale = num(ops.size() - 1) / 100.0;
    } else if (op == "TL" && !ops.empty()) {
      gs_.leading = num(ops.size() - 1);
    } else if (op == "Td" && ops.size() >= 2) {
      next_line(num(ops.size() - 2), num(ops.size() - 1));
    } else if (op == "TD" && ops.size() >= 2) {
      gs_.leading = -num(ops.size() - 1);
      next_line(num(ops.size() - 2), num(ops.size() - 1));
    } else if (op == "Tm" && ops.size() >= 6) {
      tm_ = lm_ = matrix_from(ops, ops.size() - 6);
    } else if (op == "T*") {
      next_line(0, -gs_.leading);
    } else if (op == "Tj" && !ops.empty()) {
      if (const std::string* s = ops.back().string()) show(*s);
    } else if (op == "'" && !ops.empty()) {
      next_line(0, -gs_.leading);
      if (const std::string* s = ops.back().string()) show(*s);
    } else if (op == "\"" && ops.size() >= 3) {
      gs_.word_spacing = num(ops.size() - 3);
      gs_.char_spacing = num(ops.size() - 2);
      next_line(0, -gs_.leading);
      if (const std::string* s = ops.back().string()) show(*s);
    } else if (op == "TJ" && !ops.empty()) {
      if (const Array* parts = ops.back().array()) {
        for (const Object& part : *parts) {
          if (const std::string* s = part.string()) {
            show(*s);
          } else if (const double* adj = part.number()) {
            tm_ = Matrix::translate(-*adj / 1000.0 * gs_.font_size * gs_.horizontal_scale, 0) * tm_;
          }
        }
      }
    } else if (op == "Do" && !ops.empty() && resources) {
      const std::string* name = ops.back().name();
      const Dict* xobjects = doc_.resolve(lookup(*resources, "XObject")).dict();
      if (name && xobjects) {
        const IndirectObject* form = doc_.get_stream_object(lookup(*xobjects, *name));
        const Dict* fd = form ? form->value.dict() : nullptr;
        const std::string* subtype = fd ? lookup(*fd, "Subtype").name() : nullptr;
        if (subtype && *subtype == "Form") {
          const Dict* form_resources = doc_.resolve(lookup(*fd, "Resources")).dict();
          Matrix form_matrix;
          if (const Array* m = doc_.resolve(lookup(*fd, "Matrix")).array()) {
            std::vector<Object> values(m->begin(), m->end());
            form_matrix = matrix_from(values, 0);
          }
          GraphicsState saved = gs_;
          Matrix saved_tm = tm_, saved_lm = lm_;
          run(doc_.decode_stream(*form), form_resources ? form_resources : resources, form_matrix * gs_.ctm, depth + 1);
          gs_ = saved;
          tm_ = saved_tm;
          lm_ = saved_lm;
        }
      }
    } else if (op == "BI") {
      // Inline image: skip binary data up to a whitespace-delimited EI.
      std::string_view data = lx.data();
      std::size_t p = data.find("ID", lx.pos());
      if (p == std::string_view::npos) break;
      p += 3;
      for (;;) {
        p = data.find("EI", p);
        if (p == std::string_view::npos) break;
        bool before = p > 0 && is_pdf_whitespace(data[p - 1]);
        bool after = p + 2 >= data.size() || is_pdf_whitespace(data[p + 2]);
        if (before && after) break;
        p += 2;
      }
      if (p == std::string_view::npos) break;
      lx.seek(p + 2);
    }
    ops.clear();
  }
}

}  // namespace

std::string extract_text(std::string_view bytes) {
  Document doc(bytes);
  auto pages = doc.pages();
  if (pages.empty()) unreadable("no pages found");
  TextCollector collector;
  ContentInterpreter interpreter(doc, collector);
  for (const auto& [page, resources] : pages) {
    std::string content;
    const Object& contents = lookup(*page, "Contents");
    if (const IndirectObject* stream = doc.get_stream_object(contents)) {
      content = doc.decode_stream(*stream);
    } else if (const Array* parts = doc.resolve(contents).array()) {
      for (const Object& part : *parts) {
        if (const IndirectObject* stream = doc.get_stream_object(part)) {
          content += doc.decode_stream(*stream);
          content.push_back('\n');
        }
      }
    }
    interpreter.run(content, resources, Matrix{}, 0);
    collector.page_break();
  }
  return text::normalize_whitespace(collector.str());
}

}  // namespace catalyst::pdf
