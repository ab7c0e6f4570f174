#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "twospaces/marked.hpp"
#include "twospaces/oracles.hpp"

namespace twospaces {

/// Fiber map of the surjection σ: x_k ↦ first coordinate of unpair(k).
/// Every fiber is infinite and the least element of fiber n is n(n+3)/2.
Code sigma(Index k);

/// Φ(G): kernel of x_i ↦ i.
MarkedGroup phi(const GroupOracle& g);

/// ker σ_G: kernel of x_k ↦ σ(k).
MarkedGroup sigma_kernel(const GroupOracle& g);

/// No two of x_0 .. x_{window-1} share a coset.
bool unique_generator_check(const MarkedGroup& n, Index window);

enum class Tri { False, True, Unknown };
std::string to_string(Tri t);

/// Bounded membership test for D_m: at least m cosets, and each of the
/// first m enumerated words has at least m generators in its coset.
Tri dm_check(const MarkedGroup& n, std::uint64_t m, std::uint64_t budget = kDefaultProbeBudget);

/// The enumerated transversal x_{i_0}, x_{i_1}, ... of least-indexed
/// generators, one per coset hit by a generator. Extended lazily; safe to
/// share between threads.
class Transversal {
 public:
  explicit Transversal(MarkedGroup source);

  const MarkedGroup& source() const { return source_; }

  /// i_k.
  Index index(std::size_t k, BudgetMeter& meter);
  /// Image (coset label) of x_{i_k}.
  Code image(std::size_t k, BudgetMeter& meter);
  /// Position p with image(p) == image; scans forward until found.
  std::size_t position_of_image(Code image, BudgetMeter& meter);
  /// Position of the coset of x_i, i.e. α(x_i).
  std::size_t position_of_generator(Index i, BudgetMeter& meter);

  std::vector<Index> known_indices() const;

 private:
  void scan_one(BudgetMeter& meter);
  std::optional<std::size_t> closed_form_position(Code image) const;

  MarkedGroup source_;
  mutable std::mutex mutex_;
  std::vector<Index> indices_;
  std::vector<Code> images_;
  std::unordered_map<Code, std::size_t> position_;
  Index next_ = 0;
};

/// i_k, scanning at most `budget` generators.
Index transversal_index(const MarkedGroup& n, std::size_t k, std::uint64_t budget = kDefaultProbeBudget);

/// f(N)(a, b) = c iff x_{i_a}N · x_{i_b}N = x_{i_c}N. The returned oracle
/// caches its transversal; each multiplication may scan `budget` generators.
GroupOracle f_map(const MarkedGroup& n, std::uint64_t budget = kDefaultProbeBudget);

/// W = {x_{i_a} x_{i_b} x_{i_c}^-1} ∪ {x_i x_j^-1 : i < j ≤ top}, kept in
/// factored form since the second part has quadratic size.
struct ContinuityModulus {
  Word product;
  Index top = 0;

  std::vector<Word> words() const;
  /// Whether two marked groups agree on every word of W. The pairwise words
  /// are compared through the partitions of x_0 .. x_top into cosets.
  bool agree(const MarkedGroup& n, const MarkedGroup& other) const;
};

ContinuityModulus continuity_modulus_of(const MarkedGroup& n, Code a, Code b,
                                        std::uint64_t budget = kDefaultProbeBudget);

/// Finite word set W such that any N' in D agreeing with N on W has
/// f(N')(a, b) = f(N)(a, b).
std::vector<Word> continuity_modulus(const MarkedGroup& n, Code a, Code b,
                                     std::uint64_t budget = kDefaultProbeBudget);

struct Anchor {
  MarkedGroup base;
  Index prefix = 0;          // K: constraints live on x_0 .. x_{K-1}
  std::vector<Word> words;   // empty: the first 50 words over x_0 .. x_{K-1}
};

/// The first `count` words of the enumeration over x_0 .. x_{K-1}.
std::vector<Word> anchor_words(Index prefix, std::size_t count = 50);

/// Builds M = ker of a marking x_i ↦ φ(i) into H with f(M) = H, where φ agrees
/// with the transversal positions of the anchor on x_0 .. x_{K-1}, has infinite
/// fibers and increasing fiber minima. Throws AnchorViolation if H is not in
/// the neighbourhood the anchor determines.
MarkedGroup openness_witness(const GroupOracle& h, const Anchor& anchor,
                             std::uint64_t budget = kDefaultProbeBudget);

}  // namespace twospaces
