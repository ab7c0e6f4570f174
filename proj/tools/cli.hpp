#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace twospaces::cli {

inline constexpr int kTrue = 0, kFalse = 1, kUsage = 2, kBudget = 3;

struct Config {
  std::uint64_t probe_budget;  // coset probes per f-multiplication, dm searches
  std::uint64_t scan_budget;   // identity/inverse searches in axiom checks
  std::uint64_t window = 12;
  std::uint64_t seed = 0;
  std::string format = "text";  // text | json-lines
};

/// Library defaults, with TWOSPACES_BUDGET (if set) overriding both budgets.
/// Throws ParseError on a malformed or zero value.
Config default_config();

/// Runs one command line (without the program name).
int dispatch(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace twospaces::cli
