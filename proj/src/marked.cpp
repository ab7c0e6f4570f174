#include "twospaces/marked.hpp"

#include <sstream>

namespace twospaces {

MarkedGroup::MarkedGroup(GroupOracle oracle, Assignment assignment, std::uint64_t budget)
    : oracle_(std::move(oracle)),
      assignment_(std::move(assignment)),
      budget_(budget),
      identity_(oracle_.identity(budget)) {}

bool MarkedGroup::contains(const Word& w) const { return image(w) == identity_; }

Code MarkedGroup::image(const Word& w) const { return evaluate(w, assignment_, oracle_, budget_); }

std::string MarkedGroup::provenance() const { return oracle_.name() + " [" + assignment_.str() + "]"; }

MarkedGroup kernel_of_marking(const GroupOracle& g, const Assignment& assignment) {
  return MarkedGroup(g, assignment);
}

bool same_coset(const MarkedGroup& n, const Word& u, const Word& v) { return n.contains(mul(u, inv(v))); }

bool eval_condition(const MarkedGroup& n, std::span<const Word> in, std::span<const Word> out) {
  for (const Word& w : in)
    if (!n.contains(w)) return false;
  for (const Word& w : out)
    if (n.contains(w)) return false;
  return true;
}

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

ConditionSpec parse_condition(std::string_view text) {
  ConditionSpec spec;
  enum class Section { None, In, Out, Witness } section = Section::None;
  std::istringstream is{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line == "[in]") {
      section = Section::In;
    } else if (line == "[out]") {
      section = Section::Out;
    } else if (line == "[witness]") {
      section = Section::Witness;
    } else if (section == Section::In || section == Section::Out) {
      (section == Section::In ? spec.in : spec.out).push_back(Word::parse(line));
    } else if (section == Section::Witness) {
      if (line.rfind("group", 0) == 0) spec.group = trim(line.substr(5));
      else if (line.rfind("assign", 0) == 0) spec.assign = trim(line.substr(6));
      else throw ParseError("line " + std::to_string(lineno) + ": expected 'group' or 'assign'");
    } else {
      throw ParseError("line " + std::to_string(lineno) + ": word outside [in]/[out] section");
    }
  }
  return spec;
}

std::string format_condition(const ConditionSpec& spec) {
  std::ostringstream os;
  os << "[in]\n";
  for (const auto& w : spec.in) os << w << '\n';
  os << "[out]\n";
  for (const auto& w : spec.out) os << w << '\n';
  if (spec.group || spec.assign) {
    os << "[witness]\n";
    if (spec.group) os << "group " << *spec.group << '\n';
    if (spec.assign) os << "assign " << *spec.assign << '\n';
  }
  return os.str();
}

}  // namespace twospaces
