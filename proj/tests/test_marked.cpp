#include <random>

#include "brute.hpp"
#include "doctest.h"
#include "twospaces/marked.hpp"

using namespace twospaces;

namespace {

MarkedGroup z_identity() { return kernel_of_marking(named("Z"), Assignment::identity()); }

MarkedGroup free2_mod2() {
  const Code x0 = index_of(Word::generator(0), 2).get_ui();
  const Code x1 = index_of(Word::generator(1), 2).get_ui();
  Assignment a({}, Assignment::Custom{[=](Index i) { return i % 2 ? x1 : x0; }, "mod2"});
  return kernel_of_marking(named("Free(2)"), a);
}

MarkedGroup free2_standard() {
  std::map<Index, Code> t{{0, index_of(Word::generator(0), 2).get_ui()},
                          {1, index_of(Word::generator(1), 2).get_ui()}};
  return kernel_of_marking(named("Free(2)"), Assignment(t, Assignment::Constant{0}));
}

std::vector<MarkedGroup> samples() {
  return {z_identity(), free2_mod2(), free2_standard(),
          kernel_of_marking(named("Prod(Cyclic(2),Z)"), Assignment::pair_row()),
          kernel_of_marking(named("QmodZ_sum"), Assignment::identity()),
          kernel_of_marking(named("Prufer(3)"), Assignment::parse("0=1,1=4;const(2)"))};
}

}  // namespace

TEST_CASE("kernel membership examples") {
  CHECK(z_identity().contains(Word::parse("x1*x2")));
  CHECK(free2_mod2().contains(Word::parse("x0*x2^-1")));
  CHECK_FALSE(free2_mod2().contains(Word::parse("x0*x1^-1")));
  for (const auto& n : samples()) CHECK(n.contains(Word()));
}

TEST_CASE("membership agrees with evaluation") {
  std::mt19937_64 rng(21);
  for (const auto& n : samples()) {
    INFO(n.provenance());
    for (int t = 0; t < 100; ++t) {
      Word w = brute::random_word(rng, 5, 4, 2);
      CHECK(n.contains(w) == (evaluate(w, n.assignment(), n.oracle()) == identity(n.oracle())));
    }
  }
}

TEST_CASE("same_coset examples") {
  MarkedGroup n = z_identity();
  CHECK(same_coset(n, Word::parse("x4*x1"), Word::parse("x4*x1")));
  CHECK(same_coset(n, Word::parse("x1"), Word::parse("x3*x2")));
  CHECK_FALSE(same_coset(free2_standard(), Word::parse("x0"), Word::parse("x1")));
}

TEST_CASE("eval_condition examples") {
  MarkedGroup n = z_identity();
  std::vector<Word> eps{Word()}, none;
  for (const auto& m : samples()) CHECK(eval_condition(m, eps, none));
  std::vector<Word> in{Word::parse("x1*x2")}, out{Word::parse("x1")};
  CHECK(eval_condition(n, in, out));
  std::vector<Word> x0{Word::parse("x0")};
  for (const auto& m : samples()) CHECK_FALSE(eval_condition(m, x0, x0));
}

TEST_CASE("kernels are normal subgroups on samples") {
  std::mt19937_64 rng(31);
  for (const auto& n : samples()) {
    INFO(n.provenance());
    // Collect members by rejection sampling, then test closure.
    std::vector<Word> members{Word()};
    for (int t = 0; t < 4000 && members.size() < 40; ++t) {
      Word w = brute::random_word(rng, 4, 4, 2);
      if (n.contains(w)) members.push_back(w);
    }
    std::uniform_int_distribution<std::size_t> pick(0, members.size() - 1);
    for (int t = 0; t < 500; ++t) {
      const Word& u = members[pick(rng)];
      const Word& v = members[pick(rng)];
      const Index i = rng() % 10;
      CHECK(n.contains(Word::generator(i) * u * inv(Word::generator(i))));
      CHECK(n.contains(u * v));
      CHECK(n.contains(inv(u)));
    }
  }
}

TEST_CASE("same_coset is an equivalence and matches image labels") {
  std::mt19937_64 rng(41);
  for (const auto& n : samples()) {
    INFO(n.provenance());
    std::vector<Word> ws;
    for (int t = 0; t < 25; ++t) ws.push_back(brute::random_word(rng, 3, 3, 2));
    for (const auto& a : ws) {
      CHECK(same_coset(n, a, a));
      for (const auto& b : ws) {
        const bool ab = same_coset(n, a, b);
        CHECK(ab == same_coset(n, b, a));
        CHECK(ab == (n.image(a) == n.image(b)));
        for (const auto& c : ws)
          if (ab && same_coset(n, b, c)) CHECK(same_coset(n, a, c));
      }
    }
  }
}

TEST_CASE("post-composing with a conjugation leaves the kernel unchanged") {
  std::mt19937_64 rng(51);
  for (const char* spec : {"Z", "Free(2)", "Prod(Cyclic(2),Z)"}) {
    GroupOracle g = named(spec);
    auto perm = FinitePermutation::from_swaps({{0, 3}, {1, 6}, {2, 9}});
    GroupOracle h = conjugate(g, perm);
    Assignment a = Assignment::pair_row();
    MarkedGroup n = kernel_of_marking(g, a);
    MarkedGroup m = kernel_of_marking(h, a.then([perm](Code c) { return perm.apply(c); }, "conj"));
    for (int t = 0; t < 1000; ++t) {
      Word w = brute::random_word(rng, 6, 4, 2);
      CHECK(n.contains(w) == m.contains(w));
    }
  }
}

TEST_CASE("condition files round-trip") {
  const char* text =
      "# a condition\n"
      "[in]\n"
      "x1*x2\n"
      "e\n"
      "[out]\n"
      "x1\n"
      "[witness]\n"
      "group Z\n"
      "assign 0=0;pair-row\n";
  ConditionSpec spec = parse_condition(text);
  REQUIRE(spec.in.size() == 2);
  REQUIRE(spec.out.size() == 1);
  CHECK(spec.in[0] == Word::parse("x1*x2"));
  CHECK(spec.in[1].is_identity());
  CHECK(spec.group == "Z");
  CHECK(spec.assign == "0=0;pair-row");
  ConditionSpec again = parse_condition(format_condition(spec));
  CHECK(again.in == spec.in);
  CHECK(again.out == spec.out);
  CHECK(again.group == spec.group);
  CHECK(again.assign == spec.assign);
  CHECK_THROWS_AS(parse_condition("x0\n"), ParseError);
  CHECK_THROWS_AS(parse_condition("[in]\nx0**\n"), ParseError);
}
