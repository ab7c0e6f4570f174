#include <random>

#include "brute.hpp"
#include "doctest.h"
#include "twospaces/duality.hpp"

using namespace twospaces;

namespace {

using Rows = std::vector<std::vector<std::int64_t>>;

Matrix mat(const Rows& rows, std::size_t cols) {
  Matrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = static_cast<long>(rows[i][j]);
  return m;
}

Rows rows_of(const Matrix& m) {
  Rows out(m.rows(), std::vector<std::int64_t>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = m(i, j).get_si();
  return out;
}

Lattice random_lattice(std::mt19937_64& rng, std::size_t n, int bound = 6) {
  const std::size_t r = rng() % (n + 1);
  std::uniform_int_distribution<int> e(-bound, bound);
  Rows rows(r, std::vector<std::int64_t>(n));
  for (auto& row : rows)
    for (auto& x : row) x = e(rng);
  return r ? hnf(mat(rows, n)) : Lattice::zero(n);
}

// l·q ≡ 0 mod 1 for every basis row l.
bool annihilates(const Lattice& l, const RationalVector& q) {
  for (std::size_t i = 0; i < l.rank(); ++i) {
    Rational s = 0;
    for (std::size_t j = 0; j < q.size(); ++j) s += Rational(l.basis()(i, j)) * q[j];
    s.canonicalize();
    if (s.get_den() != 1) return false;
  }
  return true;
}

RationalVector random_point(std::mt19937_64& rng, std::size_t n, long max_den = 6) {
  RationalVector q(n);
  const long den = 1 + static_cast<long>(rng() % max_den);
  for (auto& x : q) {
    x = Rational(static_cast<long>(rng() % den), den);
    x.canonicalize();
  }
  return q;
}

}  // namespace

TEST_CASE("annihilator examples") {
  TorusSubgroup k(2, {{Rational(1, 2), Rational(0)}}, mat({{0, 1}}, 2));
  CHECK(annihilator(k) == hnf(mat({{2, 0}}, 2)));
  for (std::size_t n = 1; n <= 4; ++n) {
    CHECK(annihilator(TorusSubgroup::full(n)) == Lattice::zero(n));
    CHECK(annihilator(TorusSubgroup::trivial(n)) == Lattice::full(n));
  }
}

TEST_CASE("annihilated subgroup examples") {
  TorusSubgroup k = annihilated_subgroup(hnf(mat({{2, 0}}, 2)));
  REQUIRE(k.torsion().size() == 1);
  CHECK(k.torsion()[0] == RationalVector{Rational(1, 2), Rational(0)});
  CHECK(k.directions() == mat({{0, 1}}, 2));
  CHECK(annihilated_subgroup(Lattice::zero(3)) == TorusSubgroup::full(3));
  TorusSubgroup line = annihilated_subgroup(hnf(mat({{1, 1}}, 2)));
  CHECK(line.torsion().empty());
  REQUIRE(line.directions().rows() == 1);
  // Canonical direction is ±(1,-1).
  CHECK(abs(line.directions()(0, 0)) == 1);
  CHECK(line.directions()(0, 0) == -line.directions()(0, 1));
  CHECK(annihilated_subgroup(Lattice::full(2)) == TorusSubgroup::trivial(2));
}

TEST_CASE("dual invariants and connectedness examples") {
  TorusSubgroup k(2, {{Rational(1, 2), Rational(0)}}, mat({{0, 1}}, 2));
  CHECK(dual_invariants(k) == FGAbelianInvariants{1, {2}});
  for (std::size_t n = 1; n <= 4; ++n) {
    CHECK(dual_invariants(TorusSubgroup::full(n)) == FGAbelianInvariants{n, {}});
    CHECK(dual_invariants(TorusSubgroup::trivial(n)) == FGAbelianInvariants{0, {}});
    CHECK(is_connected(TorusSubgroup::full(n)));
  }
  TorusSubgroup line = annihilated_subgroup(hnf(mat({{1, 1}}, 2)));
  CHECK(is_connected(line));
  CHECK(is_saturated(annihilator(line)));
  CHECK_FALSE(is_connected(k));
  CHECK_FALSE(is_saturated(annihilator(k)));
  // A torsion point already on a subtorus does not disconnect it.
  TorusSubgroup on_line(2, {{Rational(1, 3), Rational(2, 3)}}, mat({{1, -1}}, 2));
  CHECK(is_connected(on_line));
  CHECK(on_line == line);
}

TEST_CASE("annihilator matches its definition on a box") {
  std::mt19937_64 rng(61);
  for (int t = 0; t < 60; ++t) {
    const std::size_t n = 1 + rng() % 3;
    std::vector<RationalVector> tors;
    for (int g = rng() % 3; g > 0; --g) tors.push_back(random_point(rng, n));
    Rows dirs;
    for (int g = rng() % 2; g > 0; --g) {
      std::vector<std::int64_t> v(n);
      for (auto& x : v) x = static_cast<std::int64_t>(rng() % 5) - 2;
      dirs.push_back(v);
    }
    TorusSubgroup k(n, tors, mat(dirs, n));
    Lattice ann = annihilator(k);
    std::vector<std::int64_t> l(n, -4);
    while (true) {
      bool kills = true;
      for (const auto& q : tors) {
        Rational s = 0;
        for (std::size_t j = 0; j < n; ++j) s += Rational(static_cast<long>(l[j])) * q[j];
        s.canonicalize();
        kills = kills && s.get_den() == 1;
      }
      for (const auto& v : dirs) {
        std::int64_t s = 0;
        for (std::size_t j = 0; j < n; ++j) s += l[j] * v[j];
        kills = kills && s == 0;
      }
      Vector lv;
      for (auto x : l) lv.emplace_back(static_cast<long>(x));
      CHECK(ann.contains(lv) == kills);
      std::size_t c = 0;
      while (c < n && l[c] == 4) l[c++] = -4;
      if (c == n) break;
      ++l[c];
    }
  }
}

TEST_CASE("annihilated subgroup matches its definition on rational points") {
  std::mt19937_64 rng(67);
  for (int t = 0; t < 60; ++t) {
    const std::size_t n = 1 + rng() % 3;
    Lattice l = random_lattice(rng, n);
    TorusSubgroup k = annihilated_subgroup(l);
    for (const auto& q : k.torsion()) CHECK(annihilates(l, q));
    for (std::size_t i = 0; i < k.directions().rows(); ++i) {
      Vector v = k.directions().row(i);
      for (std::size_t r = 0; r < l.rank(); ++r) {
        Integer s = 0;
        for (std::size_t j = 0; j < n; ++j) s += l.basis()(r, j) * v[j];
        CHECK(s == 0);
      }
    }
    for (int s = 0; s < 40; ++s) {
      RationalVector q = random_point(rng, n, 12);
      CHECK(contains_point(k, q) == annihilates(l, q));
    }
  }
}

TEST_CASE("double annihilator") {
  std::mt19937_64 rng(71);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + rng() % 4;
    Lattice l = random_lattice(rng, n);
    INFO(l.str());
    CHECK(annihilator(annihilated_subgroup(l)) == l);
  }
}

TEST_CASE("canonical form is independent of the generators") {
  std::mt19937_64 rng(73);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 1 + rng() % 3;
    Lattice l = random_lattice(rng, n);
    TorusSubgroup k = annihilated_subgroup(l);
    // Add redundant generators: sums of existing torsion points and integer shifts.
    std::vector<RationalVector> tors = k.torsion();
    if (!tors.empty()) {
      RationalVector extra = tors[0];
      for (std::size_t j = 0; j < n; ++j) extra[j] += tors.back()[j] + 1;
      tors.push_back(extra);
    }
    Rows dirs = rows_of(k.directions());
    if (!dirs.empty()) {
      auto doubled = dirs[0];
      for (auto& x : doubled) x *= 2;
      dirs.push_back(doubled);
    }
    TorusSubgroup again(n, tors, mat(dirs, n));
    CHECK(again == k);
    CHECK(TorusSubgroup::parse(k.str()) == k);
  }
}

TEST_CASE("inclusion reversal") {
  std::mt19937_64 rng(79);
  int pairs = 0;
  while (pairs < 50) {
    const std::size_t n = 1 + rng() % 4;
    Lattice small = random_lattice(rng, n);
    Lattice extra = random_lattice(rng, n);
    Matrix both(small.rank() + extra.rank(), n);
    for (std::size_t i = 0; i < small.rank(); ++i)
      for (std::size_t j = 0; j < n; ++j) both(i, j) = small.basis()(i, j);
    for (std::size_t i = 0; i < extra.rank(); ++i)
      for (std::size_t j = 0; j < n; ++j) both(small.rank() + i, j) = extra.basis()(i, j);
    Lattice big = both.rows() ? hnf(both) : Lattice::zero(n);
    REQUIRE(big.contains(small));
    ++pairs;
    TorusSubgroup ks = annihilated_subgroup(small), kb = annihilated_subgroup(big);
    CHECK(contains(ks, kb));
    CHECK(contains_by_annihilator(ks, kb));
    CHECK(contains(kb, ks) == (big == small));
    CHECK(contains_by_annihilator(kb, ks) == (big == small));
    // Larger K has the larger dual: the smaller dual is a quotient of it.
    FGAbelianInvariants ds = dual_invariants(ks), db = dual_invariants(kb);
    CHECK(db.rank <= ds.rank);
    CHECK(db.torsion.size() <= ds.torsion.size() + ds.rank);
    if (ds.rank == 0) {
      Integer os = 1, ob = 1;
      for (const auto& d : ds.torsion) os *= d;
      for (const auto& d : db.torsion) ob *= d;
      CHECK(os % ob == 0);
    }
  }
}

TEST_CASE("torsion-free duals are exactly the connected subgroups") {
  std::mt19937_64 rng(71);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + rng() % 4;
    Lattice l = random_lattice(rng, n);
    CHECK(is_saturated(l) == is_connected(annihilated_subgroup(l)));
    CHECK(is_saturated(l) == quotient_invariants(l).torsion.empty());
  }
}

TEST_CASE("dual of a product") {
  CHECK(dual_of_product_check(hnf(mat({{2}}, 1)), hnf(mat({{3}}, 1))));
  CHECK(quotient_invariants(hnf(block_diagonal(mat({{2}}, 1), mat({{3}}, 1)))) == FGAbelianInvariants{0, {6}});
  CHECK(dual_of_product_check(Lattice::zero(1), Lattice::zero(1)));
  CHECK(quotient_invariants(Lattice::zero(2)).rank == 2);
  CHECK(dual_of_product_check(hnf(mat({{2}}, 1)), hnf(mat({{2}}, 1))));
  CHECK(quotient_invariants(hnf(block_diagonal(mat({{2}}, 1), mat({{2}}, 1)))) == FGAbelianInvariants{0, {2, 2}});
  std::mt19937_64 rng(83);
  for (int t = 0; t < 50; ++t) {
    Lattice a = random_lattice(rng, 1 + rng() % 3), b = random_lattice(rng, 1 + rng() % 3);
    CHECK(dual_of_product_check(a, b));
  }
}

TEST_CASE("Prufer towers") {
  for (long p : {2L, 3L, 5L}) CHECK(prufer_tower_check(p, 6));
  TowerReport r = prufer_tower_report(2, 3);
  REQUIRE(r.lines.size() >= 3);
  CHECK(r.lines[0].find("(2)") != std::string::npos);
  CHECK(r.lines[1].find("(4)") != std::string::npos);
  CHECK(r.lines[2].find("(8)") != std::string::npos);
  CHECK(prufer_tower_report(3, 1).lines[0].find("(3)") != std::string::npos);
  // Annihilators of <1/p^j> strictly decrease.
  for (long j = 1; j < 5; ++j) {
    Lattice a = annihilator(TorusSubgroup(1, {{Rational(1, 1L << j)}}, Matrix(0, 1)));
    Lattice b = annihilator(TorusSubgroup(1, {{Rational(1, 1L << (j + 1))}}, Matrix(0, 1)));
    CHECK(a.contains(b));
    CHECK_FALSE(b.contains(a));
    CHECK(a == hnf(mat({{1L << j}}, 1)));
  }
  CHECK_THROWS_AS(prufer_tower_check(4, 2), Error);
  CHECK_THROWS_AS(prufer_tower_check(2, 0), Error);
}

TEST_CASE("solenoid tower") {
  CHECK(solenoid_tower_check(5));
  TowerReport r = solenoid_tower_report(4);
  REQUIRE(r.lines.size() == 4);
  CHECK(r.lines[0].find("dual Z/1") != std::string::npos);
  CHECK(r.lines[1].find("Z/2->Z/1") != std::string::npos);
  CHECK(r.lines[2].find("Z/6->Z/2 kernel 3 surjective") != std::string::npos);
  CHECK(r.lines[3].find("Z/24->Z/6 kernel 4 surjective") != std::string::npos);
  CHECK(solenoid_tower_check(2));
  CHECK_THROWS_AS(solenoid_tower_check(1), Error);
  // Restriction of characters along <1/(m-1)!> ⊆ <1/m!> is reduction, checked on values.
  for (long m = 2; m <= 5; ++m) {
    long big = 1;
    for (long i = 2; i <= m; ++i) big *= i;
    const long small = big / m;
    for (long l = 0; l < big; ++l) {
      Rational on_small_gen = Rational(l, small);
      on_small_gen -= Rational(l / small);
      Rational reduced(l % small, small);
      on_small_gen.canonicalize();
      reduced.canonicalize();
      CHECK(on_small_gen == reduced);
    }
  }
}

TEST_CASE("torus subgroup text format") {
  TorusSubgroup k = TorusSubgroup::parse(
      "# example\n"
      "ambient 2\n"
      "t 1/2 0\n"
      "d 0 1\n");
  CHECK(k == TorusSubgroup(2, {{Rational(1, 2), Rational(0)}}, mat({{0, 1}}, 2)));
  CHECK(TorusSubgroup::parse(k.str()) == k);
  CHECK(TorusSubgroup::parse("ambient 1\nt 3/2\n") == TorusSubgroup::parse("ambient 1\nt 1/2\n"));
  CHECK_THROWS_AS(TorusSubgroup::parse("t 1/2\n"), ParseError);
  CHECK_THROWS_AS(TorusSubgroup::parse("ambient 2\nt 1/2\n"), ParseError);
  CHECK_THROWS_AS(TorusSubgroup::parse("ambient 1\nt 1/0\n"), ParseError);
}
