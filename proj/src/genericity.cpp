#include "twospaces/genericity.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

namespace twospaces {

namespace {

void normalize(std::vector<Word>& ws) {
  std::sort(ws.begin(), ws.end(), enumeration_less);
  ws.erase(std::unique(ws.begin(), ws.end()), ws.end());
}

bool includes(const std::vector<Word>& big, const std::vector<Word>& small) {
  return std::all_of(small.begin(), small.end(),
                     [&](const Word& w) { return std::find(big.begin(), big.end(), w) != big.end(); });
}

std::string join_words(const std::vector<Word>& ws) {
  std::string s;
  for (std::size_t i = 0; i < ws.size(); ++i) s += (i ? "," : "") + ws[i].str();
  return s;
}

// x_i x_j^-1 with i ≠ j.
bool is_generator_relator(const Word& w) {
  const auto& s = w.syllables();
  return s.size() == 2 && s[0].exponent == 1 && s[1].exponent == -1;
}

std::string error_name(const std::exception& e) {
  if (dynamic_cast<const NotNested*>(&e)) return "NotNested";
  if (dynamic_cast<const CertificateFailed*>(&e)) return "CertificateFailed";
  if (dynamic_cast<const BudgetExhausted*>(&e)) return "BudgetExhausted";
  if (dynamic_cast<const ParseError*>(&e)) return "ParseError";
  if (dynamic_cast<const MissingAssignment*>(&e)) return "MissingAssignment";
  return "Error";
}

std::vector<Tri> dm_profile(const MarkedGroup& n, std::uint64_t rounds, std::uint64_t budget) {
  std::vector<Tri> out;
  for (std::uint64_t m = 1; m <= rounds; ++m) out.push_back(dm_check(n, m, budget));
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Conditions

CertifiedCondition::CertifiedCondition(std::vector<Word> in, std::vector<Word> out, MarkedGroup witness)
    : in_(std::move(in)), out_(std::move(out)), witness_(std::move(witness)) {}

CertifiedCondition CertifiedCondition::make(std::vector<Word> in, std::vector<Word> out, MarkedGroup witness) {
  normalize(in);
  normalize(out);
  for (const Word& w : in)
    if (std::find(out.begin(), out.end(), w) != out.end()) throw CertificateFailed(w.str());
  for (const Word& w : in)
    if (!witness.contains(w)) throw CertificateFailed(w.str());
  for (const Word& w : out)
    if (witness.contains(w)) throw CertificateFailed(w.str());
  return CertifiedCondition(std::move(in), std::move(out), std::move(witness));
}

Index CertifiedCondition::support() const {
  Index n = 0;
  for (const auto* ws : {&in_, &out_})
    for (const Word& w : *ws)
      if (auto top = w.max_index()) n = std::max(n, *top + 1);
  return n;
}

std::string CertifiedCondition::str() const { return "IN:{" + join_words(in_) + "} OUT:{" + join_words(out_) + "}"; }

CertifiedCondition certify(std::vector<Word> in, std::vector<Word> out, const GroupOracle& g,
                           const Assignment& assignment) {
  return CertifiedCondition::make(std::move(in), std::move(out), kernel_of_marking(g, assignment));
}

CertifiedCondition vacuous(const MarkedGroup& witness) { return CertifiedCondition::make({}, {}, witness); }

// ---------------------------------------------------------------------------
// Moves

CertifiedCondition density_step(const CertifiedCondition& cond, std::uint64_t m, std::uint64_t budget) {
  const MarkedGroup& old = cond.witness();
  const Index n = cond.support();
  const bool reuse = cond.dense_witness();
  GroupOracle h = reuse ? old.oracle() : product(old.oracle(), named("Z"));
  const Code zero = named("Z").identity();

  // x_i ↦ (α(x_i), 0) below n: the old quotient embeds, so words over
  // x_0 .. x_{n-1} keep their membership. Nesting another factor on top of
  // an earlier step would square the codes each round.
  std::map<Index, Code> table;
  for (Index i = 0; i < n; ++i) {
    const Code a = old.assignment()(i).value_or(old.identity());
    if (reuse) {
      table[i] = a;
      continue;
    }
    auto joined = h.impl().join(a, zero);
    if (!joined) throw Error("product oracle cannot embed its first factor");
    table[i] = *joined;
  }
  // x_{n + <c, j>} ↦ c: every element of H infinitely often.
  Assignment marking(std::move(table), Assignment::PairRow{n});
  CertifiedCondition result = CertifiedCondition::make(cond.in(), cond.out(), kernel_of_marking(h, marking));
  result.dense_witness_ = true;
  const Tri dm = dm_check(result.witness(), m, budget);
  if (dm != Tri::True)
    throw BudgetExhausted("density step: dm_check(" + std::to_string(m) + ") is " + to_string(dm));
  return result;
}

CertifiedCondition adversary_move(const CertifiedCondition& cond, std::vector<Word> in, std::vector<Word> out,
                                  std::optional<MarkedGroup> witness) {
  normalize(in);
  normalize(out);
  if (!includes(in, cond.in())) throw NotNested("new In drops a word of the current In");
  if (!includes(out, cond.out())) throw NotNested("new Out drops a word of the current Out");
  CertifiedCondition result =
      CertifiedCondition::make(std::move(in), std::move(out), witness ? *witness : cond.witness());
  result.dense_witness_ = !witness && cond.dense_witness();
  return result;
}

CertifiedCondition nowhere_dense_phi_demo(const CertifiedCondition& cond, std::uint64_t budget) {
  if (std::any_of(cond.in().begin(), cond.in().end(), is_generator_relator)) return cond;
  CertifiedCondition doubled = density_step(cond, 2, budget);
  const MarkedGroup& w = doubled.witness();
  BudgetMeter meter(budget);
  std::map<Code, Index> first;
  for (Index j = cond.support();; ++j) {
    meter.charge("cohabiting generator scan");
    auto [it, fresh] = first.emplace(w.generator_image(j), j);
    if (!fresh) {
      std::vector<Word> in = doubled.in();
      in.push_back(Word::generator(it->second) * inv(Word::generator(j)));
      return adversary_move(doubled, std::move(in), doubled.out());
    }
  }
}

// ---------------------------------------------------------------------------
// Transcripts

std::string GameMove::str() const {
  std::ostringstream os;
  os << "ROUND " << round << " | PLAYER " << (player == 1 ? "I" : "II") << " | ";
  if (!condition) {
    os << "ERROR: " << error;
    return os.str();
  }
  os << condition->str() << " | DM:";
  for (std::size_t m = 0; m < dm.size(); ++m)
    os << " m=" << m + 1 << ':' << (dm[m] == Tri::True ? "ok" : to_string(dm[m]));
  os << " | WITNESS: " << condition->witness().provenance();
  return os.str();
}

std::string GameTranscript::str() const {
  std::string s;
  for (const auto& m : moves) s += m.str() + "\n";
  return s;
}

bool GameTranscript::nested() const {
  const CertifiedCondition* prev = nullptr;
  for (const auto& m : moves) {
    if (!m.condition) continue;
    const CertifiedCondition& c = *m.condition;
    if (!eval_condition(c.witness(), c.in(), c.out())) return false;
    if (prev && !(includes(c.in(), prev->in()) && includes(c.out(), prev->out()))) return false;
    prev = &c;
  }
  return true;
}

const CertifiedCondition* GameTranscript::final_condition() const {
  for (auto it = moves.rbegin(); it != moves.rend(); ++it)
    if (it->condition) return &*it->condition;
  return nullptr;
}

GameTranscript play_strategy(const CertifiedCondition& initial, std::uint64_t rounds, std::uint64_t budget,
                             std::uint64_t seed) {
  if (rounds == 0) throw Error("play_strategy needs at least one round");
  GameTranscript t;
  t.seed = seed;
  std::mt19937_64 rng(seed);
  CertifiedCondition cur = initial;
  for (std::uint64_t k = 1; k <= rounds; ++k) {
    try {
      // Player I: a random short word, put on whichever side the witness allows.
      const Index span = std::max<Index>(cur.support() + 1, 2);
      std::vector<Syllable> raw;
      for (std::uint64_t len = 1 + rng() % 3; len > 0; --len) {
        const long e = static_cast<long>(rng() % 4);
        raw.push_back({rng() % span, Integer(e < 2 ? e - 2 : e - 1)});
      }
      Word w = Word::reduce(raw);
      std::vector<Word> in = cur.in(), out = cur.out();
      (cur.witness().contains(w) ? in : out).push_back(w);
      cur = adversary_move(cur, std::move(in), std::move(out));
      t.moves.push_back({k, 1, cur, dm_profile(cur.witness(), k, budget), {}});

      cur = density_step(cur, k, budget);
      t.moves.push_back({k, 2, cur, dm_profile(cur.witness(), k, budget), {}});
    } catch (const Error& e) {
      t.moves.push_back({k, t.moves.size() % 2 ? 2 : 1, std::nullopt, {}, error_name(e) + ": " + e.what()});
      break;
    }
  }
  return t;
}

// ---------------------------------------------------------------------------
// REPL

GameTranscript game_repl(std::istream& in, std::ostream& out, const ReplConfig& config) {
  GameTranscript t;
  CertifiedCondition cur = config.initial ? *config.initial : vacuous(sigma_kernel(named("Z")));
  std::uint64_t round = 1;
  std::vector<Word> add_in, add_out, retract;
  std::optional<MarkedGroup> witness;
  auto clear = [&] {
    add_in.clear();
    add_out.clear();
    retract.clear();
    witness.reset();
  };

  std::string line;
  while (true) {
    if (config.prompt) out << "> " << std::flush;
    if (!std::getline(in, line)) break;
    std::istringstream is(line);
    std::string cmd;
    if (!(is >> cmd) || cmd[0] == '#') continue;
    std::string rest;
    std::getline(is, rest);
    rest.erase(0, rest.find_first_not_of(" \t"));
    rest.erase(rest.find_last_not_of(" \t\r") + 1);

    try {
      if (cmd == "quit") {
        break;
      } else if (cmd == "in" || cmd == "out" || cmd == "retract") {
        Word w = Word::parse(rest);
        (cmd == "in" ? add_in : cmd == "out" ? add_out : retract).push_back(w);
        out << "pending " << cmd << ' ' << w.str() << '\n';
      } else if (cmd == "witness") {
        const auto cut = rest.find_last_of(" \t");
        if (cut == std::string::npos) throw ParseError("usage: witness <group> <assignment>");
        witness = kernel_of_marking(named(rest.substr(0, cut)), Assignment::parse(rest.substr(cut + 1)));
        out << "pending witness " << witness->provenance() << '\n';
      } else if (cmd == "pass") {
        std::vector<Word> new_in = cur.in(), new_out = cur.out();
        new_in.insert(new_in.end(), add_in.begin(), add_in.end());
        new_out.insert(new_out.end(), add_out.begin(), add_out.end());
        for (const Word& w : retract) {
          std::erase(new_in, w);
          std::erase(new_out, w);
        }
        CertifiedCondition moved = adversary_move(cur, new_in, new_out, witness);
        CertifiedCondition answered = density_step(moved, round, config.budget);
        t.moves.push_back({round, 1, moved, dm_profile(moved.witness(), round, config.budget), {}});
        t.moves.push_back({round, 2, answered, dm_profile(answered.witness(), round, config.budget), {}});
        out << t.moves[t.moves.size() - 2].str() << '\n' << t.moves.back().str() << '\n';
        cur = std::move(answered);
        ++round;
        clear();
      } else if (cmd == "status") {
        out << "round " << round << '\n' << cur.str() << '\n' << "DM:";
        const auto dm = dm_profile(cur.witness(), std::max<std::uint64_t>(round - 1, 1), config.budget);
        for (std::size_t m = 0; m < dm.size(); ++m)
          out << " m=" << m + 1 << ':' << (dm[m] == Tri::True ? "ok" : to_string(dm[m]));
        out << '\n' << "WITNESS: " << cur.witness().provenance() << '\n';
      } else {
        out << "error: unknown command '" << cmd << "'\n";
      }
    } catch (const Error& e) {
      out << "rejected: " << error_name(e) << ": " << e.what() << '\n';
      clear();
    }
  }
  return t;
}

}  // namespace twospaces
