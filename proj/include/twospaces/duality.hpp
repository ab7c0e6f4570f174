#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "twospaces/abelian.hpp"

namespace twospaces {

using RationalVector = std::vector<Rational>;

/// A rationally generated closed subgroup of 𝕋ⁿ: the closure of the points
/// q mod ℤⁿ together with the subtori {t·v mod ℤⁿ}.
///
/// Always canonical: directions are the HNF of the saturated direction
/// lattice; torsion generators are supported off the direction pivots,
/// reduced mod 1, and redundant ones dropped. Equal subgroups compare equal.
class TorusSubgroup {
 public:
  TorusSubgroup() = default;
  TorusSubgroup(std::size_t ambient, std::vector<RationalVector> torsion, const Matrix& directions);

  static TorusSubgroup trivial(std::size_t ambient);
  static TorusSubgroup full(std::size_t ambient);

  std::size_t ambient() const { return ambient_; }
  const std::vector<RationalVector>& torsion() const { return torsion_; }
  const Matrix& directions() const { return directions_; }

  /// Text form: `ambient n`, then `t a1/b1 ...` and `d v1 ...` lines.
  static TorusSubgroup parse(std::string_view text);
  std::string str() const;

  bool operator==(const TorusSubgroup&) const = default;

 private:
  std::size_t ambient_ = 0;
  std::vector<RationalVector> torsion_;
  Matrix directions_;
};

Lattice annihilator(const TorusSubgroup& k);
TorusSubgroup annihilated_subgroup(const Lattice& l);

FGAbelianInvariants dual_invariants(const TorusSubgroup& k);
bool is_connected(const TorusSubgroup& k);
bool is_saturated(const Lattice& l);

/// q mod ℤⁿ ∈ K.
bool contains_point(const TorusSubgroup& k, const RationalVector& q);
/// {t·v} ⊆ K.
bool contains_direction(const TorusSubgroup& k, const Vector& v);
/// sub ⊆ k, via generator membership.
bool contains(const TorusSubgroup& k, const TorusSubgroup& sub);
/// sub ⊆ k, via ann(k) ⊆ ann(sub).
bool contains_by_annihilator(const TorusSubgroup& k, const TorusSubgroup& sub);

bool dual_of_product_check(const Lattice& l1, const Lattice& l2);

struct TowerReport {
  bool ok = true;
  std::vector<std::string> lines;
};

/// Levels j = 1..k of ⟨1/p^j⟩ ≤ 𝕋 and their annihilators p^jℤ.
TowerReport prufer_tower_report(const Integer& p, std::uint64_t k);
bool prufer_tower_check(const Integer& p, std::uint64_t k);

/// Stages m = 1..levels of ⟨1/m!⟩ ≤ 𝕋 with duals ℤ/m!; the inclusion of
/// stage m into stage m+1 dualizes to reduction ℤ/(m+1)! → ℤ/m!.
TowerReport solenoid_tower_report(std::uint64_t levels);
bool solenoid_tower_check(std::uint64_t levels);

}  // namespace twospaces
