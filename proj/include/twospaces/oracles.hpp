#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "twospaces/assignment.hpp"
#include "twospaces/common.hpp"
#include "twospaces/words.hpp"

namespace twospaces {

/// Multiplication of a countable group whose underlying set is ℕ.
///
/// Implementations must be pure. Optional hints let a concrete group answer
/// inverse queries without a scan; a hint is always checked against `mul`
/// before use, so it can only speed things up.
class OracleImpl {
 public:
  virtual ~OracleImpl() = default;
  virtual Code mul(Code a, Code b) const = 0;
  virtual std::optional<Code> inverse_hint(Code) const { return std::nullopt; }

  // Direct products expose their coordinates in expression order.
  virtual std::optional<std::pair<Code, Code>> split(Code) const { return std::nullopt; }
  virtual std::optional<Code> join(Code, Code) const { return std::nullopt; }
};

class GroupOracle {
 public:
  GroupOracle(std::string name, std::shared_ptr<const OracleImpl> impl,
              std::vector<Code> finite_factor_sizes = {});

  static GroupOracle from_function(std::string name, std::function<Code(Code, Code)> mul,
                                   std::function<std::optional<Code>(Code)> inverse_hint = {});

  Code mul(Code a, Code b) const { return impl_->mul(a, b); }
  const std::string& name() const { return name_; }
  const std::vector<Code>& finite_factor_sizes() const { return finite_factor_sizes_; }
  const OracleImpl& impl() const { return *impl_; }

  // Least n with mul(n, n) = n, memoized.
  Code identity(std::uint64_t budget = kDefaultScanBudget) const;
  // Least b with mul(a, b) = identity.
  Code inverse(Code a, std::uint64_t budget = kDefaultScanBudget) const;
  Code power(Code a, const Integer& exponent, std::uint64_t budget = kDefaultScanBudget) const;

 private:
  struct Memo;
  std::string name_;
  std::shared_ptr<const OracleImpl> impl_;
  std::vector<Code> finite_factor_sizes_;
  std::shared_ptr<Memo> memo_;
};

inline Code identity(const GroupOracle& g, std::uint64_t budget = kDefaultScanBudget) {
  return g.identity(budget);
}
inline Code inverse(const GroupOracle& g, Code a, std::uint64_t budget = kDefaultScanBudget) {
  return g.inverse(a, budget);
}

/// A bijection of ℕ moving finitely many points, built from swaps applied in order.
class FinitePermutation {
 public:
  FinitePermutation() = default;
  static FinitePermutation swap(Code i, Code j);
  static FinitePermutation from_swaps(const std::vector<std::pair<Code, Code>>& swaps);
  static FinitePermutation cycle(const std::vector<Code>& points);

  Code apply(Code x) const;
  Code apply_inverse(Code x) const;
  /// (*this) after `first`.
  FinitePermutation after(const FinitePermutation& first) const;
  bool is_identity() const { return forward_.empty(); }
  const std::vector<std::pair<Code, Code>>& swaps() const { return swaps_; }
  std::string str() const;

 private:
  std::map<Code, Code> forward_, backward_;
  std::vector<std::pair<Code, Code>> swaps_;
};

/// Parses a group expression:
/// `Z | Z^d | Free(n) | Prufer(p) | Q | QmodZ_sum | Prod(a,b) | Conj(a, swap(i,j), ...)`,
/// with `Cyclic(k)` allowed only as a factor of a product.
/// Throws IllegalFinite if the described group is finite.
GroupOracle named(std::string_view expr);

/// Direct product of two infinite oracles, coded by the antidiagonal pairing.
GroupOracle product(const GroupOracle& left, const GroupOracle& right);

/// Push-forward h_φ(G)(i, j) = φ(G(φ⁻¹ i, φ⁻¹ j)).
GroupOracle conjugate(const GroupOracle& g, const FinitePermutation& phi);

struct AxiomReport {
  bool ok = true;
  std::string failure;         // "identity", "identity-law", "associativity", "inverse"
  std::vector<Code> witness;   // offending elements
  std::string message;
};

AxiomReport check_axioms_window(const GroupOracle& g, Code window,
                                std::uint64_t budget = kDefaultScanBudget);

std::vector<std::vector<Code>> cayley_window(const GroupOracle& g, Code window);

/// Image of w under the homomorphism extending x_i ↦ assignment(i).
Code evaluate(const Word& w, const Assignment& assignment, const GroupOracle& g,
              std::uint64_t budget = kDefaultScanBudget);

struct GTerm {
  Word word;
  Assignment assignment;
  Code target = 0;
};

/// Basic clopen set of the space of group operations: all equalities hold and
/// no inequality target is hit.
bool eval_gcondition(const GroupOracle& g, std::span<const GTerm> equalities,
                     std::span<const GTerm> inequalities);

/// Element orders by repeated multiplication, bounded by `limit`.
std::optional<std::uint64_t> element_order(const GroupOracle& g, Code a, std::uint64_t limit = 10'000);

namespace codec {

// Fixed element codings of the named catalog.
Code rational_code(const Rational& q);     // Q
Rational rational_decode(Code c);
Code qmodz_code(const Rational& q);        // one ℚ/ℤ coordinate, q in [0,1)
Rational qmodz_decode(Code c);
Code prufer_code(Code p, const Rational& q);
Rational prufer_decode(Code p, Code c);
Code sequence_code(const std::vector<Code>& finite_support);  // trailing zeros ignored
std::vector<Code> sequence_decode(Code c);
Code zd_code(const std::vector<Integer>& v);
std::vector<Integer> zd_decode(Code c, std::size_t d);

}  // namespace codec

}  // namespace twospaces
