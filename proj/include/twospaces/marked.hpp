#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "twospaces/assignment.hpp"
#include "twospaces/oracles.hpp"
#include "twospaces/words.hpp"

namespace twospaces {

/// A normal subgroup N of F∞, realised as the kernel of a marking
/// x_i ↦ assignment(i) into a group oracle.
class MarkedGroup {
 public:
  MarkedGroup(GroupOracle oracle, Assignment assignment, std::uint64_t budget = kDefaultScanBudget);

  bool contains(const Word& w) const;

  /// Image of w in the oracle. uN = vN exactly when the images agree, so this
  /// is a canonical label for the coset of w.
  Code image(const Word& w) const;
  Code generator_image(Index i) const { return assignment_.at(i); }
  Code identity() const { return identity_; }

  const GroupOracle& oracle() const { return oracle_; }
  const Assignment& assignment() const { return assignment_; }
  std::uint64_t budget() const { return budget_; }

  /// "<group expr> [<assignment>]"
  std::string provenance() const;

 private:
  GroupOracle oracle_;
  Assignment assignment_;
  std::uint64_t budget_;
  Code identity_;
};

MarkedGroup kernel_of_marking(const GroupOracle& g, const Assignment& assignment);

/// uN = vN, decided as u v⁻¹ ∈ N.
bool same_coset(const MarkedGroup& n, const Word& u, const Word& v);

/// In ⊆ N and Out ∩ N = ∅.
bool eval_condition(const MarkedGroup& n, std::span<const Word> in, std::span<const Word> out);

/// Condition file: words one per line under `[in]` / `[out]`; an optional
/// `[witness]` section carries `group <expr>` and `assign <table;tail>` lines.
/// `#` starts a comment.
struct ConditionSpec {
  std::vector<Word> in;
  std::vector<Word> out;
  std::optional<std::string> group;
  std::optional<std::string> assign;
};

ConditionSpec parse_condition(std::string_view text);
std::string format_condition(const ConditionSpec& spec);

}  // namespace twospaces
