#include "twospaces/assignment.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace twospaces {

namespace {

std::string strip(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  return s;
}

std::uint64_t parse_u64(const std::string& s, const char* what) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), ::isdigit))
    throw ParseError(std::string("expected a natural number for ") + what + ", got '" + s + "'");
  Integer v(s);
  if (!v.fits_ulong_p()) throw ParseError(std::string(what) + " out of range");
  return v.get_ui();
}

// Splits "name(a,b)" into name and argument list; a bare name has no args.
std::pair<std::string, std::vector<std::string>> split_call(const std::string& s) {
  auto open = s.find('(');
  if (open == std::string::npos) return {s, {}};
  if (s.back() != ')') throw ParseError("unbalanced parenthesis in '" + s + "'");
  std::string inner = s.substr(open + 1, s.size() - open - 2);
  std::vector<std::string> args;
  std::size_t pos = 0;
  while (pos <= inner.size() && !inner.empty()) {
    auto comma = inner.find(',', pos);
    args.push_back(inner.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return {s.substr(0, open), args};
}

}  // namespace

Assignment::Assignment(std::map<Index, Code> table, Tail tail)
    : table_(std::move(table)), tail_(std::move(tail)) {}

Assignment Assignment::identity() { return Assignment({}, Enumeration{0, 1}); }

Assignment Assignment::pair_row(Index offset) { return Assignment({}, PairRow{offset}); }

Assignment Assignment::parse(std::string_view text) {
  std::string s = strip(text);
  std::string table_part = s, tail_part = "none";
  if (auto semi = s.find(';'); semi != std::string::npos) {
    table_part = s.substr(0, semi);
    tail_part = s.substr(semi + 1);
  }
  std::map<Index, Code> table;
  std::size_t pos = 0;
  while (pos < table_part.size()) {
    auto comma = table_part.find(',', pos);
    std::string entry = table_part.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    auto eq = entry.find('=');
    if (eq == std::string::npos) throw ParseError("assignment entry '" + entry + "' lacks '='");
    std::string lhs = entry.substr(0, eq);
    if (!lhs.empty() && lhs[0] == 'x') lhs = lhs.substr(1);
    table[parse_u64(lhs, "generator index")] = parse_u64(entry.substr(eq + 1), "assigned value");
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }

  auto [name, args] = split_call(tail_part);
  Tail tail;
  if (name.empty() || name == "none") {
    tail = NoTail{};
  } else if (name == "const" || name == "constant") {
    if (args.size() != 1) throw ParseError("const(<c>) takes one argument");
    tail = Constant{parse_u64(args[0], "constant")};
  } else if (name == "pair-row") {
    if (args.size() > 1) throw ParseError("pair-row takes at most one argument");
    tail = PairRow{args.empty() ? 0 : parse_u64(args[0], "offset")};
  } else if (name == "enumeration-of" || name == "identity") {
    if (args.size() != 0 && args.size() != 2)
      throw ParseError("enumeration-of takes (<offset>,<multiplicity>) or nothing");
    Enumeration e{0, 1};
    if (args.size() == 2) e = {parse_u64(args[0], "offset"), parse_u64(args[1], "multiplicity")};
    if (e.multiplicity == 0) throw ParseError("multiplicity must be positive");
    tail = e;
  } else {
    throw ParseError("unknown tail rule '" + tail_part + "'");
  }
  return Assignment(std::move(table), std::move(tail));
}

std::optional<Code> Assignment::operator()(Index i) const {
  std::optional<Code> raw;
  if (auto it = table_.find(i); it != table_.end()) {
    raw = it->second;
  } else {
    raw = std::visit(
        [i](const auto& t) -> std::optional<Code> {
          using T = std::decay_t<decltype(t)>;
          if constexpr (std::is_same_v<T, NoTail>) {
            return std::nullopt;
          } else if constexpr (std::is_same_v<T, Constant>) {
            return t.value;
          } else if constexpr (std::is_same_v<T, PairRow>) {
            if (i < t.offset) return std::nullopt;
            return unpair(i - t.offset).first;
          } else if constexpr (std::is_same_v<T, Enumeration>) {
            if (i < t.offset) return std::nullopt;
            return (i - t.offset) / t.multiplicity;
          } else {
            return t.rule(i);
          }
        },
        tail_);
  }
  if (raw && post_) return (*post_)(*raw);
  return raw;
}

Code Assignment::at(Index i) const {
  if (auto v = (*this)(i)) return *v;
  throw MissingAssignment(i);
}

Assignment Assignment::then(std::function<Code(Code)> post, std::string label) const {
  Assignment out = *this;
  if (post_) {
    auto inner = post_;
    out.post_ = std::make_shared<const std::function<Code(Code)>>(
        [inner, post = std::move(post)](Code c) { return post((*inner)(c)); });
    out.post_label_ = label + "∘" + post_label_;
  } else {
    out.post_ = std::make_shared<const std::function<Code(Code)>>(std::move(post));
    out.post_label_ = std::move(label);
  }
  return out;
}

std::optional<std::uint64_t> Assignment::fiber_bound() const {
  if (post_) return std::nullopt;
  const std::uint64_t extra = table_.size();
  if (std::holds_alternative<NoTail>(tail_)) return extra;
  if (const auto* e = std::get_if<Enumeration>(&tail_)) return e->multiplicity + extra;
  return std::nullopt;
}

std::optional<std::vector<Code>> Assignment::finite_image() const {
  if (!std::holds_alternative<NoTail>(tail_) && !std::holds_alternative<Constant>(tail_)) return std::nullopt;
  std::set<Code> values;
  for (const auto& [i, c] : table_) values.insert(c);
  if (const auto* c = std::get_if<Constant>(&tail_)) values.insert(c->value);
  std::vector<Code> out;
  for (Code c : values) out.push_back(post_ ? (*post_)(c) : c);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::optional<std::vector<Index>> Assignment::fiber_candidates(Code value, std::size_t count) const {
  if (post_ || std::holds_alternative<Custom>(tail_)) return std::nullopt;
  std::vector<Index> out;
  for (const auto& [i, c] : table_)
    if (c == value && out.size() < count) out.push_back(i);
  auto push = [&](Index i) {
    if (!table_.count(i)) out.push_back(i);
  };
  if (const auto* p = std::get_if<PairRow>(&tail_)) {
    for (Code j = 0; out.size() < count; ++j) push(checked_add(p->offset, pair(value, j)));
  } else if (const auto* e = std::get_if<Enumeration>(&tail_)) {
    const Index first = checked_add(e->offset, checked_mul(value, e->multiplicity));
    for (Code r = 0; r < e->multiplicity && out.size() < count; ++r) push(first + r);
  } else if (const auto* c = std::get_if<Constant>(&tail_)) {
    if (c->value == value)
      for (Index i = 0; out.size() < count; ++i) push(i);
  }
  return out;
}

std::string Assignment::str() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [i, c] : table_) {
    if (!first) os << ',';
    first = false;
    os << i << '=' << c;
  }
  os << ';';
  std::visit(
      [&os](const auto& t) {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, NoTail>) {
          os << "none";
        } else if constexpr (std::is_same_v<T, Constant>) {
          os << "const(" << t.value << ')';
        } else if constexpr (std::is_same_v<T, PairRow>) {
          os << "pair-row";
          if (t.offset) os << '(' << t.offset << ')';
        } else if constexpr (std::is_same_v<T, Enumeration>) {
          os << "enumeration-of";
          if (t.offset || t.multiplicity != 1) os << '(' << t.offset << ',' << t.multiplicity << ')';
        } else {
          os << t.label;
        }
      },
      tail_);
  if (post_) os << " then " << post_label_;
  return os.str();
}

}  // namespace twospaces
