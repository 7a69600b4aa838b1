#pragma once

#include <compare>
#include <functional>
#include <string>
#include <utility>

namespace catalyst {

// Strongly typed opaque identifier. Tags keep a ConceptId from being passed
// where an EdgeId is expected.
template <typename Tag>
class Id {
 public:
  Id() = default;
  explicit Id(std::string value) : value_(std::move(value)) {}

  const std::string& str() const noexcept { return value_; }
  bool empty() const noexcept { return value_.empty(); }

  friend auto operator<=>(const Id&, const Id&) = default;
  friend bool operator==(const Id&, const Id&) = default;

 private:
  std::string value_;
};

struct SessionTag {};
struct ConceptTag {};
struct EdgeTag {};
struct GroupTag {};
struct QuestionTag {};

using SessionId = Id<SessionTag>;
using ConceptId = Id<ConceptTag>;
using EdgeId = Id<EdgeTag>;
using GroupId = Id<GroupTag>;
using QuestionId = Id<QuestionTag>;

}  // namespace catalyst

template <typename Tag>
struct std::hash<catalyst::Id<Tag>> {
  std::size_t operator()(const catalyst::Id<Tag>& id) const noexcept {
    return std::hash<std::string>{}(id.str());
  }
};
