#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

// PDF object model and tokenizer used by the text extractor.
namespace catalyst::pdf::detail {

struct Object;
using Array = std::vector<Object>;
using Dict = std::map<std::string, Object, std::less<>>;

struct Ref {
  int num = 0;
  int gen = 0;
};
struct Name {
  std::string value;
};
struct String {
  std::string bytes;
};
struct Keyword {
  std::string value;
};

struct Object {
  std::variant<std::monostate, bool, double, String, Name, std::shared_ptr<Array>, std::shared_ptr<Dict>, Ref, Keyword> v;

  bool is_null() const noexcept { return std::holds_alternative<std::monostate>(v); }
  const double* number() const noexcept { return std::get_if<double>(&v); }
  const std::string* name() const noexcept {
    auto* n = std::get_if<Name>(&v);
    return n ? &n->value : nullptr;
  }
  const std::string* string() const noexcept {
    auto* s = std::get_if<String>(&v);
    return s ? &s->bytes : nullptr;
  }
  const Array* array() const noexcept {
    auto* a = std::get_if<std::shared_ptr<Array>>(&v);
    return a ? a->get() : nullptr;
  }
  const Dict* dict() const noexcept {
    auto* d = std::get_if<std::shared_ptr<Dict>>(&v);
    return d ? d->get() : nullptr;
  }
  const Ref* ref() const noexcept { return std::get_if<Ref>(&v); }
  const std::string* keyword() const noexcept {
    auto* k = std::get_if<Keyword>(&v);
    return k ? &k->value : nullptr;
  }
  bool is_keyword(std::string_view k) const noexcept {
    auto* kw = keyword();
    return kw && *kw == k;
  }
};

// Looks up a key in a dictionary object; null Object when absent.
const Object& lookup(const Dict& d, std::string_view key);

class Lexer {
 public:
  explicit Lexer(std::string_view data, std::size_t pos = 0) : data_(data), pos_(pos) {}

  // Next complete object (arrays/dicts nested, `n g R` folded into Ref).
  // Bare keywords come back as Keyword objects; nullopt at end of input.
  std::optional<Object> next();

  std::size_t pos() const noexcept { return pos_; }
  void seek(std::size_t pos) noexcept { pos_ = pos; }
  std::string_view data() const noexcept { return data_; }
  void skip_whitespace();

 private:
  enum class Kind { End, Number, Name, String, ArrayOpen, ArrayClose, DictOpen, DictClose, Keyword };
  struct Token {
    Kind kind = Kind::End;
    std::string text;
    double number = 0;
  };

  Token token();
  std::string literal_string();
  std::string hex_string();
  std::optional<Object> from_token(Token t, int depth);

  std::string_view data_;
  std::size_t pos_;
};

bool is_pdf_whitespace(char c) noexcept;
bool is_pdf_delimiter(char c) noexcept;

}  // namespace catalyst::pdf::detail
