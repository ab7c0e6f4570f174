#include "cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <map>
#include <sstream>

#include "twospaces/abelian.hpp"
#include "twospaces/duality.hpp"
#include "twospaces/genericity.hpp"
#include "twospaces/marked.hpp"
#include "twospaces/oracles.hpp"
#include "twospaces/transfer.hpp"
#include "twospaces/words.hpp"

namespace twospaces::cli {

using Json = nlohmann::ordered_json;

Config default_config() {
  Config c{kDefaultProbeBudget, kDefaultScanBudget};
  if (const char* env = std::getenv("TWOSPACES_BUDGET")) {
    std::uint64_t v = 0;
    std::istringstream is(env);
    if (!(is >> v) || !is.eof() || v == 0)
      throw ParseError(std::string("TWOSPACES_BUDGET must be a positive integer, got '") + env + "'");
    c.probe_budget = c.scan_budget = v;
  }
  return c;
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::vector<std::string> word_strings(const std::vector<Word>& ws) {
  std::vector<std::string> out;
  for (const Word& w : ws) out.push_back(w.str());
  return out;
}

Json integers(const std::vector<Integer>& v) {
  Json a = Json::array();
  for (const Integer& x : v) a.push_back(x.get_str());
  return a;
}

// One record per line: `text` in text mode, `json` in json-lines mode.
class Emitter {
 public:
  Emitter(std::ostream& out, bool json) : out_(out), json_(json) {}
  void operator()(const std::string& text, const Json& json) {
    if (json_)
      out_ << json.dump() << '\n';
    else
      out_ << text.substr(0, text.find_last_not_of('\n') + 1) << '\n';
  }
  bool json() const { return json_; }

 private:
  std::ostream& out_;
  bool json_;
};

int verdict(Emitter& emit, bool value, Json record) {
  record["result"] = value;
  emit(value ? "true" : "false", record);
  return value ? kTrue : kFalse;
}

int print_window(Emitter& emit, const GroupOracle& g, Code window) {
  const auto rows = cayley_window(g, window);
  for (std::size_t a = 0; a < rows.size(); ++a) {
    std::string line;
    for (std::size_t b = 0; b < rows[a].size(); ++b) line += (b ? " " : "") + std::to_string(rows[a][b]);
    emit(line, Json{{"row", a}, {"values", rows[a]}});
  }
  return kTrue;
}

int print_report(Emitter& emit, const TowerReport& r) {
  for (const auto& line : r.lines) emit(line, Json{{"line", line}});
  emit(r.ok ? "ok" : "FAILED", Json{{"result", r.ok}});
  return r.ok ? kTrue : kFalse;
}

Json matrix_json(const Matrix& m) { return Json{{"matrix", format_matrix(m)}}; }

std::optional<MarkedGroup> witness_of(const ConditionSpec& spec) {
  if (!spec.group && !spec.assign) return std::nullopt;
  if (!spec.group || !spec.assign) throw ParseError("a [witness] section needs both 'group' and 'assign'");
  return kernel_of_marking(named(*spec.group), Assignment::parse(*spec.assign));
}

Json move_json(const GameMove& m) {
  Json j{{"round", m.round}, {"player", m.player == 1 ? "I" : "II"}};
  if (!m.condition) {
    j["error"] = m.error;
    return j;
  }
  j["in"] = word_strings(m.condition->in());
  j["out"] = word_strings(m.condition->out());
  Json dm = Json::array();
  for (Tri t : m.dm) dm.push_back(to_string(t));
  j["dm"] = dm;
  j["witness"] = m.condition->witness().provenance();
  return j;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  Config cfg;
  try {
    cfg = default_config();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  std::optional<std::uint64_t> budget_flag;

  CLI::App app{"Exact computations on marked groups and group operations on the naturals", "twospaces"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--budget", budget_flag, "Search budget (probes or scan steps)")->check(CLI::PositiveNumber);
  app.add_option("--window", cfg.window, "Cayley window size B")->capture_default_str();
  app.add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  app.add_option("--format", cfg.format, "Output format")
      ->check(CLI::IsMember({"text", "json-lines"}))
      ->capture_default_str();

  // Leaf subcommands register their action here; the parsed one runs.
  std::vector<std::pair<CLI::App*, std::function<int(Emitter&)>>> actions;
  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help) {
    return parent->add_subcommand(name, help);
  };
  auto probe = [&] { return budget_flag.value_or(cfg.probe_budget); };
  auto scan = [&] { return budget_flag.value_or(cfg.scan_budget); };

  // words
  std::string k_text, word_text, spec, group_text, assign_text, file, vector_text, condition_file;
  std::optional<Index> bound;
  auto* words = app.add_subcommand("words", "Reduced words and their canonical enumeration");
  words->require_subcommand(1);
  {
    auto* c = leaf(words, "enum", "Print the k-th word");
    c->add_option("--k", k_text, "Position")->required();
    c->add_option("--bound", bound, "Restrict to generators below this index");
    actions.emplace_back(c, [&](Emitter& emit) {
      const Word w = enumerate(Integer(k_text), bound);
      emit(w.str(), Json{{"k", k_text}, {"word", w.str()}});
      return kTrue;
    });
  }
  {
    auto* c = leaf(words, "index", "Print the position of a word");
    c->add_option("--word", word_text)->required();
    c->add_option("--bound", bound);
    actions.emplace_back(c, [&](Emitter& emit) {
      const Word w = Word::parse(word_text);
      const std::string k = index_of(w, bound).get_str();
      emit(k, Json{{"word", w.str()}, {"k", k}});
      return kTrue;
    });
  }
  {
    auto* c = leaf(words, "reduce", "Print the reduced form and weight");
    c->add_option("--word", word_text)->required();
    actions.emplace_back(c, [&](Emitter& emit) {
      const Word w = Word::parse(word_text);
      emit(w.str() + " weight " + weight(w).get_str(), Json{{"word", w.str()}, {"weight", weight(w).get_str()}});
      return kTrue;
    });
  }

  // group
  auto* group = app.add_subcommand("group", "Group operations on the naturals");
  group->require_subcommand(1);
  {
    auto* c = leaf(group, "check", "Check the group axioms on [0,B)");
    c->add_option("--spec", spec)->required();
    actions.emplace_back(c, [&](Emitter& emit) {
      const AxiomReport r = check_axioms_window(named(spec), cfg.window, scan());
      Json j{{"spec", spec}, {"window", cfg.window}, {"result", r.ok}};
      if (r.ok) {
        emit("ok", j);
        return kTrue;
      }
      j["failure"] = r.failure;
      j["witness"] = r.witness;
      emit("fail " + r.failure + ": " + r.message, j);
      return kFalse;
    });
  }
  {
    auto* c = leaf(group, "table", "Print the B x B Cayley window");
    c->add_option("--spec", spec)->required();
    actions.emplace_back(c, [&](Emitter& emit) { return print_window(emit, named(spec), cfg.window); });
  }

  // marked
  auto* marked = app.add_subcommand("marked", "Normal subgroups given by markings");
  marked->require_subcommand(1);
  {
    auto* c = leaf(marked, "contains", "Membership of a word, or of a condition file");
    c->add_option("--group", group_text);
    c->add_option("--assign", assign_text);
    auto* w = c->add_option("--word", word_text);
    auto* f = c->add_option("--condition", condition_file, "File with [in]/[out] sections");
    w->excludes(f);
    c->require_option(1, 3);
    actions.emplace_back(c, [&](Emitter& emit) {
      ConditionSpec cond;
      if (!condition_file.empty()) cond = parse_condition(read_file(condition_file));
      if (!group_text.empty()) cond.group = group_text;
      if (!assign_text.empty()) cond.assign = assign_text;
      const auto n = witness_of(cond);
      if (!n) throw ParseError("need --group and --assign (or a [witness] section)");
      if (condition_file.empty()) {
        if (word_text.empty()) throw ParseError("need --word or --condition");
        const Word word = Word::parse(word_text);
        return verdict(emit, n->contains(word), Json{{"word", word.str()}});
      }
      return verdict(emit, eval_condition(*n, cond.in, cond.out), Json{{"in", word_strings(cond.in)},
                                                                      {"out", word_strings(cond.out)}});
    });
  }

  // transfer
  {
    auto* c = app.add_subcommand("phi", "Membership in the kernel Phi(G)");
    c->add_option("--spec", spec)->required();
    c->add_option("--word", word_text)->required();
    actions.emplace_back(c, [&](Emitter& emit) {
      const Word word = Word::parse(word_text);
      return verdict(emit, phi(named(spec)).contains(word), Json{{"spec", spec}, {"word", word.str()}});
    });
  }
  {
    auto* c = app.add_subcommand("f", "Cayley window of f(ker sigma_G)");
    c->add_option("--spec", spec)->required();
    actions.emplace_back(
        c, [&](Emitter& emit) { return print_window(emit, f_map(sigma_kernel(named(spec)), probe()), cfg.window); });
  }
  {
    auto* c = app.add_subcommand("roundtrip", "Compare f(ker sigma_G) with G on [0,B)^2");
    c->add_option("--spec", spec)->required();
    actions.emplace_back(c, [&](Emitter& emit) {
      const GroupOracle g = named(spec);
      const GroupOracle fg = f_map(sigma_kernel(g), probe());
      for (Code a = 0; a < cfg.window; ++a)
        for (Code b = 0; b < cfg.window; ++b) {
          const Code x = fg.mul(a, b), y = g.mul(a, b);
          if (x != y) {
            emit("mismatch at (" + std::to_string(a) + "," + std::to_string(b) + "): f=" + std::to_string(x) +
                     " G=" + std::to_string(y),
                 Json{{"spec", spec}, {"result", false}, {"a", a}, {"b", b}, {"f", x}, {"g", y}});
            return kFalse;
          }
        }
      emit("match on window " + std::to_string(cfg.window),
           Json{{"spec", spec}, {"window", cfg.window}, {"result", true}});
      return kTrue;
    });
  }
  std::string phi_spec;
  std::uint64_t m = 2;
  {
    auto* c = app.add_subcommand("dm", "Decide membership in D_m within budget");
    auto* s = c->add_option("--spec", spec, "Use ker sigma_G");
    auto* p = c->add_option("--spec-phi", phi_spec, "Use Phi(G)");
    s->excludes(p);
    c->add_option("--m", m)->required()->check(CLI::PositiveNumber);
    actions.emplace_back(c, [&](Emitter& emit) {
      if (spec.empty() == phi_spec.empty()) throw ParseError("exactly one of --spec / --spec-phi is required");
      const MarkedGroup n = spec.empty() ? phi(named(phi_spec)) : sigma_kernel(named(spec));
      const Tri t = dm_check(n, m, probe());
      emit(to_string(t), Json{{"group", n.provenance()}, {"m", m}, {"result", to_string(t)}});
      return t == Tri::True ? kTrue : t == Tri::False ? kFalse : kBudget;
    });
  }

  // abelian
  auto* abelian = app.add_subcommand("abelian", "Integer lattices and their quotients");
  abelian->require_subcommand(1);
  const std::map<std::string, std::string> abelian_help = {
      {"hnf", "Hermite normal form of the row span"},
      {"snf", "Smith diagonal"},
      {"invariants", "Rank and torsion of Z^n / row span"},
      {"contains", "Whether a vector lies in the row span"}};
  for (const char* name : {"hnf", "snf", "invariants", "contains"}) {
    auto* c = leaf(abelian, name, abelian_help.at(name));
    c->add_option("--matrix", file, "Matrix file: 'rows cols' then entries")->required();
    if (std::string(name) == "contains") c->add_option("--vector", vector_text, "a,b,...")->required();
    actions.emplace_back(c, [&, what = std::string(name)](Emitter& emit) {
      const Matrix a = parse_matrix(read_file(file));
      if (what == "hnf") {
        const Lattice l = hnf(a);
        emit(format_matrix(l.basis()), matrix_json(l.basis()));
      } else if (what == "snf") {
        const auto d = snf(a);
        std::string line;
        for (std::size_t i = 0; i < d.size(); ++i) line += (i ? " " : "") + d[i].get_str();
        emit(line, Json{{"diagonal", integers(d)}});
      } else if (what == "invariants") {
        const auto inv = quotient_invariants(hnf(a));
        emit(inv.str(), Json{{"rank", inv.rank}, {"torsion", integers(inv.torsion)}});
      } else {
        const Vector v = parse_vector(vector_text);
        return verdict(emit, hnf(a).contains(v), Json{{"vector", format_vector(v)}});
      }
      return kTrue;
    });
  }

  // dual
  auto* dual = app.add_subcommand("dual", "Closed subgroups of tori and their annihilators");
  dual->require_subcommand(1);
  const std::map<std::string, std::string> dual_help = {
      {"ann", "Annihilator lattice of a torus subgroup"},
      {"unann", "Torus subgroup annihilated by a lattice"},
      {"invariants", "Invariants of the dual group"},
      {"check", "Double annihilator check"}};
  for (const char* name : {"ann", "unann", "invariants", "check"}) {
    auto* c = leaf(dual, name, dual_help.at(name));
    c->add_option("--file", file, std::string(name) == "unann" ? "Matrix file" : "Torus subgroup file")->required();
    actions.emplace_back(c, [&, what = std::string(name)](Emitter& emit) {
      const std::string text = read_file(file);
      if (what == "unann") {
        const TorusSubgroup k = annihilated_subgroup(hnf(parse_matrix(text)));
        emit(k.str(), Json{{"subgroup", k.str()}});
        return kTrue;
      }
      const TorusSubgroup k = TorusSubgroup::parse(text);
      if (what == "ann") {
        emit(format_matrix(annihilator(k).basis()), matrix_json(annihilator(k).basis()));
      } else if (what == "invariants") {
        const auto inv = dual_invariants(k);
        emit(inv.str(), Json{{"rank", inv.rank}, {"torsion", integers(inv.torsion)}});
      } else {
        const Lattice l = annihilator(k);
        const bool twice = annihilated_subgroup(l) == k && annihilator(annihilated_subgroup(l)) == l;
        const bool connected = is_connected(k), saturated = is_saturated(l);
        const bool ok = twice && connected == saturated;
        emit(std::string("double annihilator ") + (twice ? "ok" : "FAILED") + ", connected " +
                 (connected ? "yes" : "no") + ", saturated " + (saturated ? "yes" : "no"),
             Json{{"double_annihilator", twice}, {"connected", connected}, {"saturated", saturated}, {"result", ok}});
        return ok ? kTrue : kFalse;
      }
      return kTrue;
    });
  }
  std::string p_text = "2";
  std::uint64_t k_levels = 6, levels = 5;
  {
    auto* c = leaf(dual, "prufer", "Prufer tower check");
    c->add_option("--p", p_text)->required();
    c->add_option("--k", k_levels)->required();
    actions.emplace_back(
        c, [&](Emitter& emit) { return print_report(emit, prufer_tower_report(Integer(p_text), k_levels)); });
  }
  {
    auto* c = leaf(dual, "solenoid", "Solenoid tower check");
    c->add_option("--levels", levels)->required();
    actions.emplace_back(c, [&](Emitter& emit) { return print_report(emit, solenoid_tower_report(levels)); });
  }

  // game
  auto* game = app.add_subcommand("game", "The density game on marked groups");
  game->require_subcommand(1);
  std::uint64_t rounds = 4;
  bool prompt = false;
  auto initial = [&]() -> std::optional<CertifiedCondition> {
    if (condition_file.empty()) return std::nullopt;
    const ConditionSpec c = parse_condition(read_file(condition_file));
    return CertifiedCondition::make(c.in, c.out, witness_of(c).value_or(sigma_kernel(named("Z"))));
  };
  {
    auto* c = leaf(game, "play", "Scripted game");
    c->add_option("--rounds", rounds)->required()->check(CLI::PositiveNumber);
    c->add_option("--initial", condition_file, "Condition file");
    actions.emplace_back(c, [&](Emitter& emit) {
      const CertifiedCondition start = initial().value_or(vacuous(sigma_kernel(named("Z"))));
      const GameTranscript t = play_strategy(start, rounds, probe(), cfg.seed);
      for (const auto& mv : t.moves) emit(mv.str(), move_json(mv));
      if (t.moves.empty() || t.moves.back().error.empty()) return kTrue;
      return t.moves.back().error.starts_with("BudgetExhausted") ? kBudget : kFalse;
    });
  }
  {
    auto* c = leaf(game, "repl", "Interactive game; you are player I");
    c->add_option("--initial", condition_file, "Condition file");
    c->add_flag("--prompt", prompt, "Print a prompt before each command");
    actions.emplace_back(c, [&](Emitter& emit) {
      std::ostringstream log;
      ReplConfig rc{initial(), probe(), prompt};
      if (!emit.json()) {
        game_repl(in, out, rc);
        return kTrue;
      }
      const GameTranscript t = game_repl(in, log, rc);
      for (const auto& mv : t.moves) emit(mv.str(), move_json(mv));
      return kTrue;
    });
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kTrue : kUsage;
  }

  Emitter emit(out, cfg.format == "json-lines");
  for (auto& [sub, action] : actions) {
    if (!sub->parsed()) continue;
    try {
      return action(emit);
    } catch (const BudgetExhausted& e) {
      err << "budget exhausted: " << e.what() << '\n';
      return kBudget;
    } catch (const Error& e) {
      err << "error: " << e.what() << '\n';
      return kUsage;
    }
  }
  err << app.help();
  return kUsage;
}

}  // namespace twospaces::cli
