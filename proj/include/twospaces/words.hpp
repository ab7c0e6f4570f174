#pragma once

#include <compare>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "twospaces/common.hpp"

namespace twospaces {

struct Syllable {
  Index index = 0;
  Integer exponent = 0;

  friend bool operator==(const Syllable& a, const Syllable& b) {
    return a.index == b.index && a.exponent == b.exponent;
  }
};

/// A reduced word in the free group on x0, x1, ...
///
/// Stored as a syllable sequence: adjacent syllables never share an index and
/// no exponent is zero. The empty sequence is the identity `e`.
class Word {
 public:
  Word() = default;

  /// Freely reduces an arbitrary syllable sequence (zero exponents allowed).
  static Word reduce(const std::vector<Syllable>& raw);
  static Word generator(Index index, const Integer& exponent = 1);

  /// Parses `e` or `x<i>[^<n>]` terms separated by `*`. Whitespace is ignored.
  static Word parse(std::string_view text);

  const std::vector<Syllable>& syllables() const { return syllables_; }
  bool is_identity() const { return syllables_.empty(); }
  Integer letter_length() const;
  std::optional<Index> max_index() const;

  std::string str() const;

  // Structural order on syllables; cheap, used for containers. Not the
  // enumeration order (see enumeration_less).
  friend bool operator==(const Word& a, const Word& b) = default;
  friend bool operator<(const Word& a, const Word& b);

 private:
  explicit Word(std::vector<Syllable> reduced) : syllables_(std::move(reduced)) {}
  std::vector<Syllable> syllables_;
};

Word mul(const Word& u, const Word& v);
Word inv(const Word& u);
inline Word operator*(const Word& u, const Word& v) { return mul(u, v); }

std::ostream& operator<<(std::ostream& os, const Word& w);

/// letterLength(w) + maxIndex(w); the identity has weight 0.
Integer weight(const Word& w);

/// Letter serialization used for ordering: x_i ↦ 2i, x_i^-1 ↦ 2i+1.
std::vector<Code> letter_codes(const Word& w);

/// Strict order of the canonical enumeration: weight, then letter length,
/// then lexicographic on letter codes.
bool enumeration_less(const Word& a, const Word& b);

/// Canonical bijection ℕ → reduced words. With `index_bound = n` this is the
/// subsequence of words over x0..x_{n-1}, re-indexed from 0.
Word enumerate(const Integer& k, std::optional<Index> index_bound = std::nullopt);
Integer index_of(const Word& w, std::optional<Index> index_bound = std::nullopt);

/// Number of reduced words of the given weight (restricted to indices < bound).
Integer weight_class_size(std::uint64_t weight, std::optional<Index> index_bound = std::nullopt);

}  // namespace twospaces
