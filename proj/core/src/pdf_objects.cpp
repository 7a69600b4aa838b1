#include "pdf_objects.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>

namespace catalyst::pdf::detail {

namespace {

constexpr int kMaxDepth = 64;

int hex_value(char c) noexcept {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

bool is_pdf_whitespace(char c) noexcept {
  return c == ' ' || c == '\n' || c == '\r' || c == '\t' || c == '\f' || c == '\0';
}

bool is_pdf_delimiter(char c) noexcept {
  switch (c) {
    case '(': case ')': case '<': case '>': case '[': case ']': case '{': case '}': case '/': case '%':
      return true;
    default:
      return false;
  }
}

const Object& lookup(const Dict& d, std::string_view key) {
  static const Object null_object;
  auto it = d.find(key);
  return it == d.end() ? null_object : it->second;
}

void Lexer::skip_whitespace() {
  while (pos_ < data_.size()) {
    char c = data_[pos_];
    if (is_pdf_whitespace(c)) {
      ++pos_;
    } else if (c == '%') {
      while (pos_ < data_.size() && data_[pos_] != '\n' && data_[pos_] != '\r') ++pos_;
    } else {
      break;
    }
  }
}

std::string Lexer::literal_string() {
  // pos_ is just past '('.
  std::string out;
  int depth = 1;
  while (pos_ < data_.size()) {
    char c = data_[pos_++];
    if (c == '\\') {
      if (pos_ >= data_.size()) break;
      char e = data_[pos_++];
      switch (e) {
        case 'n': out.push_back('\n'); break;
        case 'r': out.push_back('\r'); break;
        case 't': out.push_back('\t'); break;
        case 'b': out.push_back('\b'); break;
        case 'f': out.push_back('\f'); break;
        case '\r':
          if (pos_ < data_.size() && data_[pos_] == '\n') ++pos_;
          break;
        case '\n':
          break;
        default:
          if (e >= '0' && e <= '7') {
            int v = e - '0';
            for (int k = 0; k < 2 && pos_ < data_.size() && data_[pos_] >= '0' && data_[pos_] <= '7'; ++k) {
              v = v * 8 + (data_[pos_++] - '0');
            }
            out.push_back(static_cast<char>(v & 0xFF));
          } else {
            out.push_back(e);
          }
      }
    } else if (c == '(') {
      ++depth;
      out.push_back(c);
    } else if (c == ')') {
      if (--depth == 0) return out;
      out.push_back(c);
    } else if (c == '\r') {
      if (pos_ < data_.size() && data_[pos_] == '\n') ++pos_;
      out.push_back('\n');
    } else {
      out.push_back(c);
    }
  }
  return out;
}

std::string Lexer::hex_string() {
  // pos_ is just past '<'.
  std::string out;
  int high = -1;
  while (pos_ < data_.size()) {
    char c = data_[pos_++];
    if (c == '>') break;
    int v = hex_value(c);
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

Lexer::Token Lexer::token() {
  skip_whitespace();
  Token t;
  if (pos_ >= data_.size()) return t;
  char c = data_[pos_];
  switch (c) {
    case '[': ++pos_; t.kind = Kind::ArrayOpen; return t;
    case ']': ++pos_; t.kind = Kind::ArrayClose; return t;
    case '(':
      ++pos_;
      t.kind = Kind::String;
      t.text = literal_string();
      return t;
    case '<':
      if (pos_ + 1 < data_.size() && data_[pos_ + 1] == '<') {
        pos_ += 2;
        t.kind = Kind::DictOpen;
        return t;
      }
      ++pos_;
      t.kind = Kind::String;
      t.text = hex_string();
      return t;
    case '>':
      if (pos_ + 1 < data_.size() && data_[pos_ + 1] == '>') {
        pos_ += 2;
        t.kind = Kind::DictClose;
        return t;
      }
      ++pos_;
      return token();
    case '/': {
      ++pos_;
      t.kind = Kind::Name;
      while (pos_ < data_.size() && !is_pdf_whitespace(data_[pos_]) && !is_pdf_delimiter(data_[pos_])) {
        char n = data_[pos_++];
        if (n == '#' && pos_ + 1 < data_.size() && hex_value(data_[pos_]) >= 0 && hex_value(data_[pos_ + 1]) >= 0) {
          t.text.push_back(static_cast<char>(hex_value(data_[pos_]) * 16 + hex_value(data_[pos_ + 1])));
          pos_ += 2;
        } else {
          t.text.push_back(n);
        }
      }
      return t;
    }
    case '{': case '}': case ')':
      ++pos_;
      return token();
    default:
      break;
  }
  std::size_t start = pos_;
  while (pos_ < data_.size() && !is_pdf_whitespace(data_[pos_]) && !is_pdf_delimiter(data_[pos_])) ++pos_;
  std::string_view word = data_.substr(start, pos_ - start);
  bool numeric = !word.empty();
  for (char w : word) {
    if (!((w >= '0' && w <= '9') || w == '.' || w == '-' || w == '+')) {
      numeric = false;
      break;
    }
  }
  if (numeric) {
    t.kind = Kind::Number;
    t.number = std::strtod(std::string(word).c_str(), nullptr);
    t.text = std::string(word);
    return t;
  }
  t.kind = Kind::Keyword;
  t.text = std::string(word);
  return t;
}

std::optional<Object> Lexer::from_token(Token t, int depth) {
  if (depth > kMaxDepth) return std::nullopt;
  switch (t.kind) {
    case Kind::End:
    case Kind::ArrayClose:
    case Kind::DictClose:
      return std::nullopt;
    case Kind::Name:
      return Object{Name{std::move(t.text)}};
    case Kind::String:
      return Object{String{std::move(t.text)}};
    case Kind::Keyword:
      if (t.text == "true") return Object{true};
      if (t.text == "false") return Object{false};
      if (t.text == "null") return Object{};
      return Object{Keyword{std::move(t.text)}};
    case Kind::Number: {
      bool integral = t.text.find('.') == std::string::npos;
      if (integral) {
        std::size_t save = pos_;
        Token gen = token();
        if (gen.kind == Kind::Number && gen.text.find('.') == std::string::npos) {
          Token r = token();
          if (r.kind == Kind::Keyword && r.text == "R") {
            return Object{Ref{static_cast<int>(t.number), static_cast<int>(gen.number)}};
          }
        }
        pos_ = save;
      }
      return Object{t.number};
    }
    case Kind::ArrayOpen: {
      auto arr = std::make_shared<Array>();
      for (;;) {
        Token inner = token();
        if (inner.kind == Kind::ArrayClose || inner.kind == Kind::End) break;
        if (inner.kind == Kind::DictClose) continue;
        if (auto o = from_token(std::move(inner), depth + 1)) arr->push_back(std::move(*o));
      }
      return Object{arr};
    }
    case Kind::DictOpen: {
      auto dict = std::make_shared<Dict>();
      for (;;) {
        Token key = token();
        if (key.kind == Kind::DictClose || key.kind == Kind::End) break;
        if (key.kind != Kind::Name) continue;
        Token value = token();
        if (value.kind == Kind::DictClose || value.kind == Kind::End) break;
        if (auto o = from_token(std::move(value), depth + 1)) (*dict)[key.text] = std::move(*o);
      }
      return Object{dict};
    }
  }
  return std::nullopt;
}

std::optional<Object> Lexer::next() {
  Token t = token();
  if (t.kind == Kind::End) return std::nullopt;
  if (t.kind == Kind::ArrayClose || t.kind == Kind::DictClose) return Object{Keyword{t.kind == Kind::ArrayClose ? "]" : ">>"}};
  return from_token(std::move(t), 0);
}

}  // namespace catalyst::pdf::detail
