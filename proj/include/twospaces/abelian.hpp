#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "twospaces/common.hpp"
#include "twospaces/marked.hpp"
#include "twospaces/words.hpp"

namespace twospaces {

using Vector = std::vector<Integer>;

/// Dense integer matrix, row-major.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols);
  static Matrix from_rows(const std::vector<Vector>& rows, std::size_t cols);
  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Integer& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Integer& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Vector row(std::size_t i) const;
  Vector col(std::size_t j) const;
  Matrix transpose() const;
  /// First `n` rows.
  Matrix top(std::size_t n) const;
  Matrix select_rows(const std::vector<std::size_t>& which) const;

  void swap_rows(std::size_t a, std::size_t b);
  void swap_cols(std::size_t a, std::size_t b);
  /// row[dst] += factor * row[src]
  void add_row(std::size_t dst, std::size_t src, const Integer& factor);
  void add_col(std::size_t dst, std::size_t src, const Integer& factor);
  void negate_row(std::size_t i);

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Integer> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Vector operator*(const Vector& v, const Matrix& m);  // row vector times matrix

/// `rows cols` followed by whitespace-separated entries, row-major.
Matrix parse_matrix(std::string_view text);
std::string format_matrix(const Matrix& m);
/// [[a,b],[c,d]]
std::string bracket_matrix(const Matrix& m);
Vector parse_vector(std::string_view text);  // "a,b,..."
std::string format_vector(const Vector& v);

struct HnfResult {
  Matrix h;          // U·A, zero rows last
  Matrix u;          // unimodular
  std::size_t rank;  // number of nonzero rows of h
};
HnfResult hnf_with_transform(const Matrix& a);

struct SnfResult {
  Matrix d;  // U·A·V, diagonal with d_1 | d_2 | ..., nonnegative
  Matrix u;
  Matrix v;
  std::vector<Integer> diagonal;  // nonzero diagonal entries
};
SnfResult snf_with_transform(const Matrix& a);
std::vector<Integer> snf(const Matrix& a);

/// Basis (HNF rows) of {x ∈ ℤ^cols : A·x = 0}.
Matrix integer_kernel(const Matrix& a);

Matrix block_diagonal(const Matrix& a, const Matrix& b);

/// A sublattice of ℤⁿ stored as its Hermite normal form.
class Lattice {
 public:
  Lattice() = default;
  /// Row span of `generators`.
  explicit Lattice(const Matrix& generators);
  static Lattice zero(std::size_t ambient);
  static Lattice full(std::size_t ambient);

  std::size_t ambient() const { return basis_.cols(); }
  std::size_t rank() const { return basis_.rows(); }
  const Matrix& basis() const { return basis_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }

  /// Coordinates beyond the ambient rank must vanish.
  bool contains(const Vector& v) const;
  bool contains(const Lattice& sub) const;
  /// Coefficients c with c·basis = v.
  std::optional<Vector> solve(const Vector& v) const;
  /// Canonical coset representative: pivot coordinates reduced into [0, pivot).
  Vector reduce(Vector v) const;

  std::string str() const { return bracket_matrix(basis_); }
  bool operator==(const Lattice&) const = default;

 private:
  Matrix basis_;
  std::vector<std::size_t> pivots_;
};

Lattice hnf(const Matrix& a);

struct FGAbelianInvariants {
  std::uint64_t rank = 0;
  std::vector<Integer> torsion;  // d_1 | d_2 | ..., each ≥ 2
  bool operator==(const FGAbelianInvariants&) const = default;
  std::string str() const;
};

FGAbelianInvariants quotient_invariants(const Lattice& l);
bool fg_iso(const FGAbelianInvariants& a, const FGAbelianInvariants& b);
/// Invariants of A ⊕ B.
FGAbelianInvariants merge_invariants(const FGAbelianInvariants& a, const FGAbelianInvariants& b);

/// Exponent-sum vector of w in ℤⁿ.
Vector abelianize(const Word& w, std::size_t n);

/// Oracle for (ℤⁿ/L) ⊕ ⊕_{i≥n} ℤ.
GroupOracle lattice_quotient_oracle(const Lattice& l);
/// Element code of the coset of (v, extras).
Code lattice_quotient_code(const Lattice& l, const Vector& v, const std::vector<Integer>& extras = {});

/// Ψ(L) = ψ⁻¹(L), the kernel of x_i ↦ e_i + L.
MarkedGroup psi_preimage_marked(const Lattice& l);

/// Distinct cosets v + L for v ∈ [−B, B]^ambient.
std::uint64_t coset_count_window(const Lattice& l, std::uint64_t b);
/// Distinct Ψ(L)-cosets among x_0^{a_0}⋯x_{n-1}^{a_{n-1}}, |a_i| ≤ B.
std::uint64_t coset_count_window_marked(const Lattice& l, std::uint64_t b);

}  // namespace twospaces
