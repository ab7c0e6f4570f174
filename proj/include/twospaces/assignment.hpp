#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "twospaces/common.hpp"

namespace twospaces {

/// A map from generator indices to elements of ℕ, described finitely as an
/// explicit table plus a rule for every index the table does not mention.
///
/// Text form: `<i>=<c>,<i>=<c>,...;<tail>` where tail is one of
/// `none`, `const(<c>)`, `pair-row[(<offset>)]`, `enumeration-of[(<offset>,<mult>)]`.
class Assignment {
 public:
  struct NoTail {};
  struct Constant {
    Code value;
  };
  // i >= offset  ↦  first coordinate of unpair(i - offset)
  struct PairRow {
    Index offset = 0;
  };
  // i >= offset  ↦  (i - offset) / multiplicity
  struct Enumeration {
    Index offset = 0;
    Code multiplicity = 1;
  };
  struct Custom {
    std::function<Code(Index)> rule;
    std::string label;
  };
  using Tail = std::variant<NoTail, Constant, PairRow, Enumeration, Custom>;

  Assignment() = default;
  explicit Assignment(std::map<Index, Code> table, Tail tail = NoTail{});

  /// x_i ↦ i.
  static Assignment identity();
  /// x_k ↦ first coordinate of unpair(k).
  static Assignment pair_row(Index offset = 0);
  static Assignment parse(std::string_view text);

  std::optional<Code> operator()(Index i) const;
  Code at(Index i) const;

  /// Post-composes with a map on ℕ (e.g. a conjugation of the target oracle).
  Assignment then(std::function<Code(Code)> post, std::string label) const;

  const std::map<Index, Code>& table() const { return table_; }
  const Tail& tail() const { return tail_; }
  bool has_post() const { return static_cast<bool>(post_); }

  /// Upper bound on how many generators share any one value, when finite.
  std::optional<std::uint64_t> fiber_bound() const;
  /// All values taken, when there are only finitely many.
  std::optional<std::vector<Code>> finite_image() const;

  /// Up to `count` indices the tail sends to `value`, read off the rule
  /// rather than scanned; nullopt when the rule cannot be inverted.
  std::optional<std::vector<Index>> fiber_candidates(Code value, std::size_t count) const;

  std::string str() const;

 private:
  std::map<Index, Code> table_;
  Tail tail_ = NoTail{};
  std::shared_ptr<const std::function<Code(Code)>> post_;
  std::string post_label_;
};

}  // namespace twospaces
