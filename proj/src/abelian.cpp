#include "twospaces/abelian.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace twospaces {

namespace {

Integer floor_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

Integer abs_of(const Integer& a) { return a < 0 ? Integer(-a) : a; }

}  // namespace

// ---------------------------------------------------------------------------
// Matrix

Matrix::Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

Matrix Matrix::from_rows(const std::vector<Vector>& rows, std::size_t cols) {
  Matrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw Error("ragged matrix rows");
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Vector Matrix::row(std::size_t i) const { return Vector(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_); }

Vector Matrix::col(std::size_t j) const {
  Vector v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix Matrix::top(std::size_t n) const {
  std::vector<std::size_t> which(std::min(n, rows_));
  for (std::size_t i = 0; i < which.size(); ++i) which[i] = i;
  return select_rows(which);
}

Matrix Matrix::select_rows(const std::vector<std::size_t>& which) const {
  Matrix m(which.size(), cols_);
  for (std::size_t i = 0; i < which.size(); ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(which[i], j);
  return m;
}

void Matrix::swap_rows(std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
}

void Matrix::swap_cols(std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
}

void Matrix::add_row(std::size_t dst, std::size_t src, const Integer& factor) {
  if (factor == 0) return;
  for (std::size_t j = 0; j < cols_; ++j) (*this)(dst, j) += factor * (*this)(src, j);
}

void Matrix::add_col(std::size_t dst, std::size_t src, const Integer& factor) {
  if (factor == 0) return;
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, dst) += factor * (*this)(i, src);
}

void Matrix::negate_row(std::size_t i) {
  for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = -(*this)(i, j);
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw Error("matrix shape mismatch");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
    }
  return c;
}

Vector operator*(const Vector& v, const Matrix& m) {
  if (v.size() != m.rows()) throw Error("vector shape mismatch");
  Vector out(m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (v[i] == 0) continue;
    for (std::size_t j = 0; j < m.cols(); ++j) out[j] += v[i] * m(i, j);
  }
  return out;
}

Matrix parse_matrix(std::string_view text) {
  std::istringstream is{std::string(text)};
  long long rows = -1, cols = -1;
  if (!(is >> rows >> cols) || rows < 0 || cols < 0) throw ParseError("matrix header must be 'rows cols'");
  Matrix m(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      std::string tok;
      if (!(is >> tok)) throw ParseError("matrix has too few entries");
      try {
        m(i, j) = Integer(tok);
      } catch (const std::invalid_argument&) {
        throw ParseError("bad matrix entry '" + tok + "'");
      }
    }
  std::string extra;
  if (is >> extra) throw ParseError("matrix has too many entries");
  return m;
}

std::string format_matrix(const Matrix& m) {
  std::ostringstream os;
  os << m.rows() << ' ' << m.cols() << '\n';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? " " : "") << m(i, j);
    os << '\n';
  }
  return os.str();
}

std::string bracket_matrix(const Matrix& m) {
  std::string s = "[";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (i) s += ",";
    s += "[";
    for (std::size_t j = 0; j < m.cols(); ++j) s += (j ? "," : "") + m(i, j).get_str();
    s += "]";
  }
  return s + "]";
}

Vector parse_vector(std::string_view text) {
  std::string s(text);
  auto first = s.find_first_not_of(" \t\n");
  auto last = s.find_last_not_of(" \t\n");
  if (first == std::string::npos) throw ParseError("empty vector");
  s = s.substr(first, last - first + 1);
  if (s.size() >= 2 && s.front() == '(' && s.back() == ')') s = s.substr(1, s.size() - 2);
  Vector v;
  std::istringstream is(s);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    std::istringstream one(tok);
    std::string entry, extra;
    if (!(one >> entry) || (one >> extra)) throw ParseError("bad vector entry '" + tok + "'");
    try {
      v.emplace_back(entry);
    } catch (const std::invalid_argument&) {
      throw ParseError("bad vector entry '" + entry + "'");
    }
  }
  if (v.empty() || s.back() == ',') throw ParseError("bad vector '" + std::string(text) + "'");
  return v;
}

std::string format_vector(const Vector& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i].get_str();
  return s + ")";
}

// ---------------------------------------------------------------------------
// Normal forms

HnfResult hnf_with_transform(const Matrix& a) {
  Matrix h = a;
  Matrix u = Matrix::identity(a.rows());
  std::size_t r = 0;
  for (std::size_t c = 0; c < h.cols() && r < h.rows(); ++c) {
    for (std::size_t i = r + 1; i < h.rows(); ++i) {
      if (h(i, c) == 0) continue;
      Integer g, s, t;
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), h(r, c).get_mpz_t(), h(i, c).get_mpz_t());
      const Integer x = h(r, c) / g, y = h(i, c) / g;
      // [s t; -y x] has determinant 1.
      for (Matrix* m : {&h, &u}) {
        for (std::size_t j = 0; j < m->cols(); ++j) {
          Integer top = s * (*m)(r, j) + t * (*m)(i, j);
          Integer bottom = -y * (*m)(r, j) + x * (*m)(i, j);
          (*m)(r, j) = std::move(top);
          (*m)(i, j) = std::move(bottom);
        }
      }
    }
    if (h(r, c) == 0) continue;
    if (h(r, c) < 0) {
      h.negate_row(r);
      u.negate_row(r);
    }
    for (std::size_t i = 0; i < r; ++i) {
      Integer q = floor_div(h(i, c), h(r, c));
      h.add_row(i, r, -q);
      u.add_row(i, r, -q);
    }
    ++r;
  }
  return {std::move(h), std::move(u), r};
}

SnfResult snf_with_transform(const Matrix& a) {
  Matrix d = a;
  Matrix u = Matrix::identity(a.rows());
  Matrix v = Matrix::identity(a.cols());
  const std::size_t n = std::min(a.rows(), a.cols());
  std::vector<Integer> diagonal;

  for (std::size_t t = 0; t < n; ++t) {
    auto move_smallest = [&](bool whole) -> bool {
      std::size_t bi = 0, bj = 0;
      bool found = false;
      for (std::size_t i = t; i < d.rows(); ++i)
        for (std::size_t j = t; j < d.cols(); ++j) {
          if (!whole && i != t && j != t) continue;
          if (d(i, j) == 0) continue;
          if (!found || abs_of(d(i, j)) < abs_of(d(bi, bj))) {
            bi = i;
            bj = j;
            found = true;
          }
        }
      if (!found) return false;
      d.swap_rows(t, bi);
      u.swap_rows(t, bi);
      d.swap_cols(t, bj);
      v.swap_cols(t, bj);
      return true;
    };

    if (!move_smallest(true)) break;
    while (true) {
      bool clean = true;
      for (std::size_t i = t + 1; i < d.rows(); ++i) {
        if (d(i, t) == 0) continue;
        Integer q = floor_div(d(i, t), d(t, t));
        d.add_row(i, t, -q);
        u.add_row(i, t, -q);
        if (d(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < d.cols(); ++j) {
        if (d(t, j) == 0) continue;
        Integer q = floor_div(d(t, j), d(t, t));
        d.add_col(j, t, -q);
        v.add_col(j, t, -q);
        if (d(t, j) != 0) clean = false;
      }
      if (!clean) {
        move_smallest(false);
        continue;
      }
      // Pivot must divide the rest of the block.
      bool divides = true;
      for (std::size_t i = t + 1; i < d.rows() && divides; ++i)
        for (std::size_t j = t + 1; j < d.cols(); ++j)
          if (d(i, j) % d(t, t) != 0) {
            d.add_row(t, i, 1);
            u.add_row(t, i, 1);
            divides = false;
            break;
          }
      if (divides) break;
    }
    if (d(t, t) < 0) {
      d.negate_row(t);
      u.negate_row(t);
    }
    diagonal.push_back(d(t, t));
  }
  return {std::move(d), std::move(u), std::move(v), std::move(diagonal)};
}

std::vector<Integer> snf(const Matrix& a) { return snf_with_transform(a).diagonal; }

Matrix integer_kernel(const Matrix& a) {
  HnfResult r = hnf_with_transform(a.transpose());
  std::vector<std::size_t> zero_rows;
  for (std::size_t i = r.rank; i < r.h.rows(); ++i) zero_rows.push_back(i);
  return hnf(r.u.select_rows(zero_rows)).basis();
}

Matrix block_diagonal(const Matrix& a, const Matrix& b) {
  Matrix m(a.rows() + b.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) m(a.rows() + i, a.cols() + j) = b(i, j);
  return m;
}

// ---------------------------------------------------------------------------
// Lattice

Lattice::Lattice(const Matrix& generators) {
  HnfResult r = hnf_with_transform(generators);
  basis_ = r.h.top(r.rank);
  for (std::size_t i = 0; i < basis_.rows(); ++i) {
    std::size_t j = 0;
    while (basis_(i, j) == 0) ++j;
    pivots_.push_back(j);
  }
}

Lattice Lattice::zero(std::size_t ambient) { return Lattice(Matrix(0, ambient)); }
Lattice Lattice::full(std::size_t ambient) { return Lattice(Matrix::identity(ambient)); }

Lattice hnf(const Matrix& a) { return Lattice(a); }

std::optional<Vector> Lattice::solve(const Vector& target) const {
  Vector v = target;
  for (std::size_t j = ambient(); j < v.size(); ++j)
    if (v[j] != 0) return std::nullopt;
  v.resize(ambient());
  Vector coeffs(rank());
  for (std::size_t k = 0; k < rank(); ++k) {
    const std::size_t p = pivots_[k];
    for (std::size_t j = k ? pivots_[k - 1] + 1 : 0; j < p; ++j)
      if (v[j] != 0) return std::nullopt;
    if (v[p] % basis_(k, p) != 0) return std::nullopt;
    coeffs[k] = v[p] / basis_(k, p);
    for (std::size_t j = p; j < ambient(); ++j) v[j] -= coeffs[k] * basis_(k, j);
  }
  for (const Integer& x : v)
    if (x != 0) return std::nullopt;
  return coeffs;
}

bool Lattice::contains(const Vector& v) const { return solve(v).has_value(); }

bool Lattice::contains(const Lattice& sub) const {
  for (std::size_t i = 0; i < sub.rank(); ++i)
    if (!contains(sub.basis().row(i))) return false;
  return true;
}

Vector Lattice::reduce(Vector v) const {
  v.resize(ambient());
  for (std::size_t k = 0; k < rank(); ++k) {
    const std::size_t p = pivots_[k];
    Integer q = floor_div(v[p], basis_(k, p));
    if (q == 0) continue;
    for (std::size_t j = p; j < ambient(); ++j) v[j] -= q * basis_(k, j);
  }
  return v;
}

// ---------------------------------------------------------------------------
// Invariants

std::string FGAbelianInvariants::str() const {
  std::string s = "rank " + std::to_string(rank) + ", torsion (";
  for (std::size_t i = 0; i < torsion.size(); ++i) s += (i ? "," : "") + torsion[i].get_str();
  return s + ")";
}

FGAbelianInvariants quotient_invariants(const Lattice& l) {
  FGAbelianInvariants inv;
  auto diag = snf(l.basis());
  inv.rank = l.ambient() - diag.size();
  for (const Integer& d : diag)
    if (d > 1) inv.torsion.push_back(d);
  return inv;
}

bool fg_iso(const FGAbelianInvariants& a, const FGAbelianInvariants& b) { return a == b; }

FGAbelianInvariants merge_invariants(const FGAbelianInvariants& a, const FGAbelianInvariants& b) {
  std::vector<Integer> all = a.torsion;
  all.insert(all.end(), b.torsion.begin(), b.torsion.end());
  Matrix m(all.size(), all.size());
  for (std::size_t i = 0; i < all.size(); ++i) m(i, i) = all[i];
  FGAbelianInvariants out;
  out.rank = a.rank + b.rank;
  for (const Integer& d : snf(m))
    if (d > 1) out.torsion.push_back(d);
  return out;
}

Vector abelianize(const Word& w, std::size_t n) {
  Vector v(n);
  for (const Syllable& s : w.syllables()) {
    if (s.index >= n)
      throw IndexOutOfAmbient("x" + std::to_string(s.index) + " is outside ambient rank " + std::to_string(n));
    v[s.index] += s.exponent;
  }
  return v;
}

// ---------------------------------------------------------------------------
// Ψ

namespace {

// Elements of (ℤⁿ/L) ⊕ ⊕ℤ: residues on pivot coordinates (mixed radix R),
// then zigzag free and extra coordinates as a finite-support sequence I.
// Code = I·F + R with F the product of the pivots.
class LatticeQuotientOracle final : public OracleImpl {
 public:
  explicit LatticeQuotientOracle(Lattice l) : l_(std::move(l)) {
    std::vector<bool> is_pivot(l_.ambient(), false);
    for (std::size_t k = 0; k < l_.rank(); ++k) {
      const std::size_t p = l_.pivots()[k];
      is_pivot[p] = true;
      radix_.push_back(to_code(l_.basis()(k, p)));
      finite_ = checked_mul(finite_, radix_.back());
    }
    for (std::size_t j = 0; j < l_.ambient(); ++j)
      if (!is_pivot[j]) free_.push_back(j);
  }

  struct Element {
    Vector v;                     // reduced, ambient coordinates
    std::vector<Integer> extras;  // coordinates ≥ ambient
  };

  Code encode(Element e) const {
    e.v = l_.reduce(std::move(e.v));
    Code r = 0;
    for (std::size_t k = l_.rank(); k-- > 0;)
      r = checked_add(checked_mul(r, radix_[k]), to_code(e.v[l_.pivots()[k]]));
    std::vector<Code> seq;
    for (std::size_t j : free_) seq.push_back(zigzag_encode(e.v[j]));
    for (const Integer& x : e.extras) seq.push_back(zigzag_encode(x));
    return checked_add(checked_mul(codec::sequence_code(seq), finite_), r);
  }

  Element decode(Code c) const {
    Element e;
    e.v.assign(l_.ambient(), Integer(0));
    Code r = c % finite_;
    for (std::size_t k = 0; k < l_.rank(); ++k) {
      e.v[l_.pivots()[k]] = Integer(static_cast<unsigned long>(r % radix_[k]));
      r /= radix_[k];
    }
    auto seq = codec::sequence_decode(c / finite_);
    for (std::size_t s = 0; s < seq.size(); ++s) {
      Integer z = zigzag_decode_integer(seq[s]);
      if (s < free_.size()) e.v[free_[s]] = z;
      else e.extras.push_back(z);
    }
    return e;
  }

  Code mul(Code a, Code b) const override {
    Element x = decode(a), y = decode(b);
    for (std::size_t j = 0; j < x.v.size(); ++j) x.v[j] += y.v[j];
    if (x.extras.size() < y.extras.size()) x.extras.resize(y.extras.size());
    for (std::size_t j = 0; j < y.extras.size(); ++j) x.extras[j] += y.extras[j];
    return encode(std::move(x));
  }

  std::optional<Code> inverse_hint(Code a) const override {
    Element x = decode(a);
    for (auto& z : x.v) z = -z;
    for (auto& z : x.extras) z = -z;
    return encode(std::move(x));
  }

 private:
  Lattice l_;
  std::vector<Code> radix_;
  std::vector<std::size_t> free_;
  Code finite_ = 1;
};

}  // namespace

Code lattice_quotient_code(const Lattice& l, const Vector& v, const std::vector<Integer>& extras) {
  LatticeQuotientOracle o(l);
  return o.encode({v, extras});
}

GroupOracle lattice_quotient_oracle(const Lattice& l) {
  return GroupOracle("Z^" + std::to_string(l.ambient()) + "/" + l.str() + "+Z^(inf)",
                     std::make_shared<LatticeQuotientOracle>(l));
}

MarkedGroup psi_preimage_marked(const Lattice& l) {
  auto impl = std::make_shared<LatticeQuotientOracle>(l);
  GroupOracle oracle("Z^" + std::to_string(l.ambient()) + "/" + l.str() + "+Z^(inf)", impl);
  const std::size_t n = l.ambient();
  auto rule = [impl, n](Index i) -> Code {
    LatticeQuotientOracle::Element e;
    e.v.assign(n, Integer(0));
    if (i < n) {
      e.v[i] = 1;
    } else {
      e.extras.assign(i - n + 1, Integer(0));
      e.extras.back() = 1;
    }
    return impl->encode(std::move(e));
  };
  return MarkedGroup(oracle, Assignment({}, Assignment::Custom{rule, "psi"}));
}

namespace {

void check_guard(const Lattice& l, std::uint64_t b) {
  if (l.ambient() > 4 || b > 4)
    throw GuardExceeded("coset window needs ambient <= 4 and B <= 4");
}

// Calls f on every vector in [−B, B]^n.
template <class F>
void for_box(std::size_t n, std::uint64_t b, F&& f) {
  const long bound = static_cast<long>(b);
  std::vector<long> a(n, -bound);
  while (true) {
    f(a);
    std::size_t k = 0;
    while (k < n && a[k] == bound) a[k++] = -bound;
    if (k == n) return;
    ++a[k];
  }
}

}  // namespace

std::uint64_t coset_count_window(const Lattice& l, std::uint64_t b) {
  check_guard(l, b);
  std::set<Vector> reps;
  for_box(l.ambient(), b, [&](const std::vector<long>& a) {
    Vector v(a.begin(), a.end());
    reps.insert(l.reduce(std::move(v)));
  });
  return reps.size();
}

std::uint64_t coset_count_window_marked(const Lattice& l, std::uint64_t b) {
  check_guard(l, b);
  MarkedGroup n = psi_preimage_marked(l);
  std::set<Code> keys;
  for_box(l.ambient(), b, [&](const std::vector<long>& a) {
    Word w;
    for (std::size_t i = 0; i < a.size(); ++i) w = w * Word::generator(i, Integer(a[i]));
    keys.insert(n.image(w));
  });
  return keys.size();
}

}  // namespace twospaces
