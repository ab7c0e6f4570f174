#pragma once

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "twospaces/abelian.hpp"
#include "twospaces/genericity.hpp"

namespace fixtures {

using namespace twospaces;

using Rows = std::vector<std::vector<std::int64_t>>;

inline Matrix mat(const Rows& rows, std::size_t cols) {
  Matrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = static_cast<long>(rows[i][j]);
  return m;
}

inline Rows rows_of(const Matrix& m) {
  Rows out(m.rows(), std::vector<std::int64_t>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = m(i, j).get_si();
  return out;
}

inline Rows random_rows(std::mt19937_64& rng, std::size_t r, std::size_t n, int bound = 5) {
  std::uniform_int_distribution<int> e(-bound, bound);
  Rows out(r, std::vector<std::int64_t>(n));
  for (auto& row : out)
    for (auto& x : row) x = e(rng);
  return out;
}

/// HNF of 0..n random rows with entries in [-bound, bound].
inline Lattice random_lattice(std::mt19937_64& rng, std::size_t n, int bound = 6) {
  const std::size_t r = rng() % (n + 1);
  return r ? hnf(mat(random_rows(rng, r, n, bound), n)) : Lattice::zero(n);
}

inline const std::vector<std::string> kNamed = {
    "Z", "Z^2", "Z^3", "Free(2)", "Free(3)", "Prufer(2)", "Prufer(3)", "Q", "QmodZ_sum",
    "Prod(Cyclic(2),Z)", "Prod(Z,Cyclic(3))", "Prod(Z,Q)", "Conj(Z,swap(0,5))"};

inline const std::vector<std::string> kSix = {"Z", "Z^2", "Free(2)", "Prufer(2)", "Q", "Prod(Cyclic(2),Z)"};

/// A certified condition over x0..x2: a σ-kernel of one of the six groups,
/// with 1..4 short random words sorted into In or Out by that kernel.
inline CertifiedCondition random_condition(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const MarkedGroup n = sigma_kernel(named(kSix[rng() % kSix.size()]));
  std::vector<Word> in, out;
  for (std::uint64_t count = 1 + rng() % 4; count > 0; --count) {
    std::vector<Syllable> raw;
    for (std::uint64_t len = 1 + rng() % 3; len > 0; --len) {
      const long e = static_cast<long>(rng() % 6) - 3;
      raw.push_back({rng() % 3, Integer(e >= 0 ? e + 1 : e)});
    }
    const Word w = Word::reduce(raw);
    (n.contains(w) ? in : out).push_back(w);
  }
  return CertifiedCondition::make(in, out, n);
}

/// Whether a and b contain the same reduced words over x0..x_{n-1} of letter
/// length ≤ len. Images are extended one letter at a time.
inline bool agree_on_short_words(const MarkedGroup& a, const MarkedGroup& b, Index n, int len,
                                 std::uint64_t* visited = nullptr) {
  struct Side {
    const MarkedGroup& g;
    std::vector<Code> letter;  // x_i ↦ letter[2i], x_i^-1 ↦ letter[2i+1]
  };
  std::vector<Side> sides{{a, {}}, {b, {}}};
  for (auto& s : sides)
    for (Index i = 0; i < n; ++i) {
      const Code x = s.g.generator_image(i);
      s.letter.push_back(x);
      s.letter.push_back(s.g.oracle().inverse(x));
    }
  bool ok = true;
  std::uint64_t count = 0;
  std::function<void(Code, Code, int, int)> walk = [&](Code ia, Code ib, int left, int last) {
    ++count;
    if ((ia == a.identity()) != (ib == b.identity())) ok = false;
    if (!ok || left == 0) return;
    for (int c = 0; c < static_cast<int>(2 * n); ++c) {
      if (last >= 0 && (c ^ 1) == last) continue;
      walk(a.oracle().mul(ia, sides[0].letter[c]), b.oracle().mul(ib, sides[1].letter[c]), left - 1, c);
    }
  };
  walk(a.identity(), b.identity(), len, -1);
  if (visited) *visited = count;
  return ok;
}

}  // namespace fixtures
