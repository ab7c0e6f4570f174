#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "twospaces/marked.hpp"
#include "twospaces/transfer.hpp"

namespace twospaces {

/// A basic clopen set {N : In ⊆ N, Out ∩ N = ∅} together with a marked group
/// that lies in it. Only constructible through certify / make.
class CertifiedCondition {
 public:
  /// Throws CertificateFailed naming the first word the witness gets wrong.
  static CertifiedCondition make(std::vector<Word> in, std::vector<Word> out, MarkedGroup witness);

  const std::vector<Word>& in() const { return in_; }
  const std::vector<Word>& out() const { return out_; }
  const MarkedGroup& witness() const { return witness_; }

  /// 1 + the largest generator index in In ∪ Out (0 if none).
  Index support() const;

  /// "IN:{...} OUT:{...}"
  std::string str() const;

  /// True when the witness is the output of a density step, i.e. already of
  /// the form W × ℤ with every element marked infinitely often.
  bool dense_witness() const { return dense_witness_; }

 private:
  CertifiedCondition(std::vector<Word> in, std::vector<Word> out, MarkedGroup witness);

  friend CertifiedCondition density_step(const CertifiedCondition&, std::uint64_t, std::uint64_t);
  friend CertifiedCondition adversary_move(const CertifiedCondition&, std::vector<Word>, std::vector<Word>,
                                           std::optional<MarkedGroup>);

  std::vector<Word> in_;
  std::vector<Word> out_;
  MarkedGroup witness_;
  bool dense_witness_ = false;
};

CertifiedCondition certify(std::vector<Word> in, std::vector<Word> out, const GroupOracle& g,
                           const Assignment& assignment);

/// In = Out = ∅ with the given witness.
CertifiedCondition vacuous(const MarkedGroup& witness);

/// One move of player II: re-mark witness × ℤ so that the first n generators
/// keep their old values and every element is hit infinitely often beyond
/// them. A witness that is already the output of a density step is re-marked
/// in place. Throws BudgetExhausted unless dm_check(result, m) comes back true.
CertifiedCondition density_step(const CertifiedCondition& cond, std::uint64_t m,
                                std::uint64_t budget = kDefaultProbeBudget);

/// A refinement In ⊆ In', Out ⊆ Out'; keeps the old witness when none is given.
CertifiedCondition adversary_move(const CertifiedCondition& cond, std::vector<Word> in, std::vector<Word> out,
                                  std::optional<MarkedGroup> witness = std::nullopt);

/// Refinement containing some x_i x_j^-1 with i ≠ j, so that no marked group
/// in it is of the form Φ(G).
CertifiedCondition nowhere_dense_phi_demo(const CertifiedCondition& cond,
                                          std::uint64_t budget = kDefaultProbeBudget);

struct GameMove {
  std::uint64_t round = 0;
  int player = 1;  // 1 = I, 2 = II
  std::optional<CertifiedCondition> condition;
  std::vector<Tri> dm;  // dm_check for m = 1 .. round
  std::string error;

  std::string str() const;
};

struct GameTranscript {
  std::uint64_t seed = 0;
  std::vector<GameMove> moves;

  std::string str() const;
  /// Every recorded condition is certified and contains the one before it.
  bool nested() const;
  /// The last condition recorded, if any.
  const CertifiedCondition* final_condition() const;
};

/// Player I refines with a seeded random word, classified by the current
/// witness; player II answers with density_step(m = round).
GameTranscript play_strategy(const CertifiedCondition& initial, std::uint64_t rounds,
                             std::uint64_t budget = kDefaultProbeBudget, std::uint64_t seed = 0);

struct ReplConfig {
  std::optional<CertifiedCondition> initial;  // default: vacuous with witness ker σ_ℤ
  std::uint64_t budget = kDefaultProbeBudget;
  bool prompt = false;
};

/// Reads commands from `in` until `quit` or end of input; the human is
/// player I, the machine answers each committed move with a density step.
GameTranscript game_repl(std::istream& in, std::ostream& out, const ReplConfig& config = {});

}  // namespace twospaces
