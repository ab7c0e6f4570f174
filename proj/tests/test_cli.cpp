#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "twospaces/abelian.hpp"
#include "twospaces/duality.hpp"
#include "twospaces/marked.hpp"
#include "twospaces/oracles.hpp"
#include "twospaces/words.hpp"

using namespace twospaces;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(const std::vector<std::string>& args, const std::string& input = "") {
  std::istringstream in(input);
  std::ostringstream out, err;
  const int code = cli::dispatch(args, in, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  for (std::string line; std::getline(is, line);) out.push_back(line);
  return out;
}

std::string temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / ("twospaces_cli_" + name);
  std::ofstream(path) << content;
  return path.string();
}

}  // namespace

TEST_CASE("documented examples") {
  auto e = run({"words", "enum", "--k", "0"});
  CHECK(e.code == 0);
  CHECK(e.out == "e\n");

  CHECK(run({"roundtrip", "--spec", "Z", "--window", "12"}).code == 0);

  const int phi_dm = run({"dm", "--spec-phi", "Z", "--m", "2"}).code;
  CHECK((phi_dm == 1 || phi_dm == 3));
}

TEST_CASE("exit codes") {
  CHECK(run({}).code == cli::kUsage);
  CHECK(run({"nonsense"}).code == cli::kUsage);
  CHECK(run({"words"}).code == cli::kUsage);
  CHECK(run({"words", "enum"}).code == cli::kUsage);
  CHECK(run({"--format", "xml", "words", "enum", "--k", "1"}).code == cli::kUsage);
  CHECK(run({"group", "table", "--spec", "Cyclic(3)"}).code == cli::kUsage);
  CHECK(run({"words", "reduce", "--word", "x0^"}).code == cli::kUsage);
  CHECK(run({"abelian", "hnf", "--matrix", "/nonexistent/file"}).code == cli::kUsage);
  CHECK(run({"dm", "--m", "2"}).code == cli::kUsage);
  CHECK(run({"--budget", "0", "dm", "--spec", "Z", "--m", "2"}).code == cli::kUsage);

  auto help = run({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("roundtrip") != std::string::npos);
  CHECK(run({"abelian", "--help"}).code == 0);

  CHECK(run({"f", "--spec", "Z", "--window", "3", "--budget", "1"}).code == cli::kBudget);
  CHECK(run({"dm", "--spec", "Z", "--m", "3"}).code == cli::kTrue);
  CHECK(run({"phi", "--spec", "Z", "--word", "x0*x1^-1"}).code == cli::kFalse);
  CHECK(run({"phi", "--spec", "Z", "--word", "x3*x5*x3^-1*x5^-1"}).code == cli::kTrue);
  CHECK(run({"marked", "contains", "--group", "Z", "--assign", "0=1;const(0)", "--word", "x0^2"}).code ==
        cli::kFalse);
  CHECK(run({"marked", "contains", "--group", "Z", "--assign", "0=1;const(0)", "--word", "x5^2"}).code ==
        cli::kTrue);
  CHECK(run({"marked", "contains", "--group", "Z", "--assign", "0=1;none", "--word", "x1"}).code == cli::kUsage);
}

TEST_CASE("global flags may follow the subcommand") {
  auto a = run({"--window", "3", "group", "table", "--spec", "Z"});
  auto b = run({"group", "table", "--spec", "Z", "--window", "3"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(lines(a.out).size() == 3);
}

TEST_CASE("group table matches the oracle") {
  for (const char* spec : {"Z", "Q", "Free(2)", "Prod(Cyclic(2),Z)"}) {
    auto r = run({"group", "table", "--spec", spec, "--window", "5"});
    REQUIRE(r.code == 0);
    const auto rows = lines(r.out);
    const auto table = cayley_window(named(spec), 5);
    REQUIRE(rows.size() == 5);
    for (std::size_t a = 0; a < 5; ++a) {
      std::istringstream is(rows[a]);
      for (std::size_t b = 0; b < 5; ++b) {
        Code c = 0;
        is >> c;
        CHECK(c == table[a][b]);
      }
    }
  }
  CHECK(run({"group", "check", "--spec", "Prufer(3)", "--window", "8"}).code == 0);
}

TEST_CASE("f window reproduces the group") {
  auto f = run({"f", "--spec", "Prod(Cyclic(2),Z)", "--window", "6"});
  auto g = run({"group", "table", "--spec", "Prod(Cyclic(2),Z)", "--window", "6"});
  CHECK(f.code == 0);
  CHECK(f.out == g.out);
}

TEST_CASE("json-lines round-trips through the text parsers") {
  SUBCASE("words") {
    for (const char* k : {"0", "1", "17", "12345"}) {
      auto r = run({"--format", "json-lines", "words", "enum", "--k", k});
      REQUIRE(r.code == 0);
      const json j = json::parse(r.out);
      const Word w = Word::parse(j.at("word").get<std::string>());
      CHECK(w == enumerate(Integer(k)));
      auto back = run({"words", "index", "--word", w.str()});
      CHECK(back.out == std::string(k) + "\n");
    }
  }
  SUBCASE("matrices") {
    const std::string m = temp_file("m.txt", "3 3\n2 4 4\n-6 6 12\n10 -4 -16\n");
    auto r = run({"--format", "json-lines", "abelian", "hnf", "--matrix", m});
    REQUIRE(r.code == 0);
    const Matrix basis = parse_matrix(json::parse(r.out).at("matrix").get<std::string>());
    CHECK(basis == hnf(parse_matrix("3 3\n2 4 4\n-6 6 12\n10 -4 -16\n")).basis());
    CHECK(run({"abelian", "snf", "--matrix", m}).out == "2 6 12\n");
    CHECK(run({"abelian", "invariants", "--matrix", m}).out == quotient_invariants(hnf(basis)).str() + "\n");
  }
  SUBCASE("conditions") {
    const std::string cond = temp_file("c.txt", "[in]\nx0^2\n[out]\nx0\nx1\n[witness]\ngroup Prod(Cyclic(2),Z)\n"
                                                "assign 0=1,1=2;const(0)\n");
    auto r = run({"--format", "json-lines", "marked", "contains", "--condition", cond});
    CHECK(r.code == 0);
    const json j = json::parse(r.out);
    ConditionSpec spec;
    for (const auto& w : j.at("in")) spec.in.push_back(Word::parse(w.get<std::string>()));
    for (const auto& w : j.at("out")) spec.out.push_back(Word::parse(w.get<std::string>()));
    const ConditionSpec again = parse_condition(format_condition(spec));
    CHECK(again.in == std::vector<Word>{Word::parse("x0^2")});
    CHECK(again.out == std::vector<Word>{Word::parse("x0"), Word::parse("x1")});
  }
  SUBCASE("transcripts") {
    auto r = run({"--format", "json-lines", "game", "play", "--rounds", "3", "--seed", "5"});
    REQUIRE(r.code == 0);
    auto text = lines(run({"game", "play", "--rounds", "3", "--seed", "5"}).out);
    auto records = lines(r.out);
    REQUIRE(records.size() == text.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
      const json j = json::parse(records[i]);
      std::string in;
      for (const auto& w : j.at("in")) in += (in.empty() ? "" : ",") + Word::parse(w.get<std::string>()).str();
      CHECK(text[i].find("IN:{" + in + "}") != std::string::npos);
      CHECK(text[i].find(j.at("witness").get<std::string>()) != std::string::npos);
    }
  }
}

TEST_CASE("abelian and dual commands") {
  const std::string m = temp_file("d.txt", "2 2\n2 0\n0 3\n");
  CHECK(run({"abelian", "contains", "--matrix", m, "--vector", "4,3"}).code == 0);
  CHECK(run({"abelian", "contains", "--matrix", m, "--vector", "1,3"}).code == 1);
  CHECK(run({"abelian", "contains", "--matrix", m, "--vector", "1,,3"}).code == cli::kUsage);

  auto un = run({"dual", "unann", "--file", m});
  REQUIRE(un.code == 0);
  const std::string torus = temp_file("t.txt", un.out);
  CHECK(TorusSubgroup::parse(un.out) == annihilated_subgroup(hnf(parse_matrix("2 2\n2 0\n0 3\n"))));
  auto ann = run({"dual", "ann", "--file", torus});
  CHECK(parse_matrix(ann.out) == hnf(parse_matrix("2 2\n2 0\n0 3\n")).basis());
  CHECK(run({"dual", "check", "--file", torus}).code == 0);
  CHECK(run({"dual", "invariants", "--file", torus}).out == "rank 0, torsion (6)\n");

  CHECK(run({"dual", "prufer", "--p", "3", "--k", "4"}).code == 0);
  auto sol = run({"dual", "solenoid", "--levels", "4"});
  CHECK(sol.code == 0);
  CHECK(lines(sol.out).size() == 5);
}

TEST_CASE("game commands") {
  auto a = run({"game", "play", "--rounds", "4", "--seed", "11"});
  auto b = run({"game", "play", "--rounds", "4", "--seed", "11"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(lines(a.out).size() == 8);
  CHECK(run({"game", "play", "--rounds", "4", "--seed", "11", "--budget", "1"}).code == cli::kBudget);

  const std::string cond =
      temp_file("g.txt", "[in]\nx0^2\n[witness]\ngroup Prod(Cyclic(2),Z)\nassign 0=1;pair-row(1)\n");
  auto c = run({"game", "play", "--rounds", "2", "--initial", cond});
  CHECK(c.code == 0);
  CHECK(lines(c.out)[0].find("x0^2") != std::string::npos);
  const std::string bad = temp_file("b.txt", "[in]\nx0\n[witness]\ngroup Z\nassign 0=1;const(0)\n");
  CHECK(run({"game", "play", "--rounds", "2", "--initial", bad}).code == cli::kUsage);

  auto repl = run({"game", "repl"}, "in x0^2\nwitness Prod(Cyclic(2),Z) 0=1;pair-row(1)\npass\nquit\n");
  CHECK(repl.code == 0);
  CHECK(repl.out.find("ROUND 1 | PLAYER II") != std::string::npos);
  auto jrepl = run({"--format", "json-lines", "game", "repl"}, "pass\nquit\n");
  CHECK(lines(jrepl.out).size() == 2);
  CHECK(json::parse(lines(jrepl.out)[1]).at("player") == "II");
}

TEST_CASE("budget from the environment") {
  ::setenv("TWOSPACES_BUDGET", "1", 1);
  const int tiny = run({"f", "--spec", "Z", "--window", "3"}).code;
  const int flag = run({"--budget", "100000", "f", "--spec", "Z", "--window", "3"}).code;
  ::setenv("TWOSPACES_BUDGET", "many", 1);
  const int bad = run({"words", "enum", "--k", "0"}).code;
  ::unsetenv("TWOSPACES_BUDGET");
  CHECK(tiny == cli::kBudget);
  CHECK(flag == 0);
  CHECK(bad == cli::kUsage);
}

TEST_CASE("outputs are deterministic") {
  const std::vector<std::vector<std::string>> commands = {
      {"roundtrip", "--spec", "Q", "--window", "8"},
      {"f", "--spec", "Free(2)", "--window", "6"},
      {"--format", "json-lines", "dm", "--spec", "Prufer(2)", "--m", "3"},
      {"--format", "json-lines", "game", "play", "--rounds", "3", "--seed", "42"},
      {"dual", "solenoid", "--levels", "5"},
  };
  for (const auto& c : commands) {
    auto a = run(c), b = run(c);
    CHECK(a.code == b.code);
    CHECK(a.out == b.out);
  }
}
