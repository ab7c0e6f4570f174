#include "twospaces/words.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace twospaces {

namespace {

// Letter codes: x_i -> 2i, x_i^-1 -> 2i+1; a letter's inverse is code ^ 1.
constexpr Code inverse_letter(Code c) { return c ^ 1U; }

Integer power(const Integer& base, std::uint64_t e) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

// Reduced words of length `len` over an alphabet of `letters` letters
// (closed under inversion).
Integer reduced_count(std::uint64_t len, std::uint64_t letters) {
  if (len == 0) return 1;
  if (letters == 0) return 0;
  return Integer(static_cast<unsigned long>(letters)) *
         power(Integer(static_cast<unsigned long>(letters - 1)), len - 1);
}

// Words of letter length `len` whose largest index is exactly `m`.
Integer class_size(std::uint64_t len, std::uint64_t m) {
  return reduced_count(len, 2 * m + 2) - reduced_count(len, 2 * m);
}

// Reduced completions of `rem` more letters after a non-empty prefix, such
// that the finished word uses some letter of index m.
Integer completions(std::uint64_t rem, bool prefix_has_max, std::uint64_t m) {
  if (rem == 0) return prefix_has_max ? 1 : 0;
  Integer all = power(Integer(static_cast<unsigned long>(2 * m + 1)), rem);
  if (prefix_has_max) return all;
  if (m == 0) return 0;
  return all - power(Integer(static_cast<unsigned long>(2 * m - 1)), rem);
}

bool class_allowed(std::uint64_t m, std::optional<Index> bound) { return !bound || m < *bound; }

std::uint64_t small_length(const Word& w) {
  Integer len = w.letter_length();
  if (!len.fits_ulong_p() || len > 1'000'000) throw Error("word too long to enumerate: " + w.str());
  return len.get_ui();
}

Word from_letters(const std::vector<Code>& letters) {
  std::vector<Syllable> raw;
  raw.reserve(letters.size());
  for (Code c : letters) raw.push_back({c / 2, (c % 2 == 0) ? Integer(1) : Integer(-1)});
  return Word::reduce(raw);
}

}  // namespace

Word Word::reduce(const std::vector<Syllable>& raw) {
  std::vector<Syllable> out;
  out.reserve(raw.size());
  for (const Syllable& s : raw) {
    if (s.exponent == 0) continue;
    if (!out.empty() && out.back().index == s.index) {
      out.back().exponent += s.exponent;
      if (out.back().exponent == 0) out.pop_back();
    } else {
      out.push_back(s);
    }
  }
  return Word(std::move(out));
}

Word Word::generator(Index index, const Integer& exponent) { return reduce({{index, exponent}}); }

Word Word::parse(std::string_view text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  if (s.empty()) throw ParseError("empty word");
  if (s == "e") return Word();

  std::vector<Syllable> raw;
  std::size_t pos = 0;
  while (true) {
    std::size_t end = s.find('*', pos);
    std::string term = s.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
    if (term.empty()) throw ParseError("empty term in word '" + std::string(text) + "'");
    if (term != "e") {
      if (term[0] != 'x') throw ParseError("bad term '" + term + "'");
      std::size_t caret = term.find('^');
      std::string digits = term.substr(1, caret == std::string::npos ? std::string::npos : caret - 1);
      if (digits.empty() || !std::all_of(digits.begin(), digits.end(), ::isdigit))
        throw ParseError("bad generator index in '" + term + "'");
      Integer idx(digits);
      if (!idx.fits_ulong_p()) throw ParseError("generator index too large in '" + term + "'");
      Integer exponent = 1;
      if (caret != std::string::npos) {
        std::string e = term.substr(caret + 1);
        std::string body = (!e.empty() && (e[0] == '-' || e[0] == '+')) ? e.substr(1) : e;
        if (body.empty() || !std::all_of(body.begin(), body.end(), ::isdigit))
          throw ParseError("bad exponent in '" + term + "'");
        exponent = Integer(body);
        if (e[0] == '-') exponent = -exponent;
      }
      raw.push_back({idx.get_ui(), exponent});
    }
    if (end == std::string::npos) break;
    pos = end + 1;
  }
  return reduce(raw);
}

Integer Word::letter_length() const {
  Integer n = 0;
  for (const auto& s : syllables_) n += abs(s.exponent);
  return n;
}

std::optional<Index> Word::max_index() const {
  if (syllables_.empty()) return std::nullopt;
  Index m = 0;
  for (const auto& s : syllables_) m = std::max(m, s.index);
  return m;
}

std::string Word::str() const {
  if (syllables_.empty()) return "e";
  std::ostringstream os;
  for (std::size_t k = 0; k < syllables_.size(); ++k) {
    if (k) os << '*';
    os << 'x' << syllables_[k].index;
    if (syllables_[k].exponent != 1) os << '^' << syllables_[k].exponent.get_str();
  }
  return os.str();
}

bool operator<(const Word& a, const Word& b) {
  return std::lexicographical_compare(
      a.syllables_.begin(), a.syllables_.end(), b.syllables_.begin(), b.syllables_.end(),
      [](const Syllable& x, const Syllable& y) {
        if (x.index != y.index) return x.index < y.index;
        return x.exponent < y.exponent;
      });
}

Word mul(const Word& u, const Word& v) {
  std::vector<Syllable> raw = u.syllables();
  raw.insert(raw.end(), v.syllables().begin(), v.syllables().end());
  return Word::reduce(raw);
}

Word inv(const Word& u) {
  std::vector<Syllable> raw(u.syllables().rbegin(), u.syllables().rend());
  for (auto& s : raw) s.exponent = -s.exponent;
  return Word::reduce(raw);
}

std::ostream& operator<<(std::ostream& os, const Word& w) { return os << w.str(); }

Integer weight(const Word& w) {
  if (w.is_identity()) return 0;
  return w.letter_length() + Integer(static_cast<unsigned long>(*w.max_index()));
}

std::vector<Code> letter_codes(const Word& w) {
  std::vector<Code> out;
  std::uint64_t len = small_length(w);
  out.reserve(len);
  for (const auto& s : w.syllables()) {
    Code c = 2 * s.index + (s.exponent < 0 ? 1 : 0);
    Integer n = abs(s.exponent);
    for (Integer k = 0; k < n; ++k) out.push_back(c);
  }
  return out;
}

bool enumeration_less(const Word& a, const Word& b) {
  Integer wa = weight(a), wb = weight(b);
  if (wa != wb) return wa < wb;
  Integer la = a.letter_length(), lb = b.letter_length();
  if (la != lb) return la < lb;
  auto ca = letter_codes(a), cb = letter_codes(b);
  return ca < cb;
}

Integer weight_class_size(std::uint64_t w, std::optional<Index> index_bound) {
  if (w == 0) return 1;
  Integer total = 0;
  for (std::uint64_t len = 1; len <= w; ++len) {
    std::uint64_t m = w - len;
    if (class_allowed(m, index_bound)) total += class_size(len, m);
  }
  return total;
}

Word enumerate(const Integer& k_in, std::optional<Index> index_bound) {
  if (k_in < 0) throw Error("negative enumeration index");
  if (k_in == 0) return Word();
  if (index_bound && *index_bound == 0) throw Error("the trivial free group has only the identity");
  Integer k = k_in - 1;

  std::uint64_t len = 0, m = 0;
  for (std::uint64_t w = 1;; ++w) {
    bool found = false;
    for (std::uint64_t l = 1; l <= w; ++l) {
      std::uint64_t mm = w - l;
      if (!class_allowed(mm, index_bound)) continue;
      Integer size = class_size(l, mm);
      if (k < size) {
        len = l;
        m = mm;
        found = true;
        break;
      }
      k -= size;
    }
    if (found) break;
  }

  std::vector<Code> letters;
  letters.reserve(len);
  bool has_max = false;
  for (std::uint64_t t = 0; t < len; ++t) {
    bool chosen = false;
    for (Code c = 0; c < 2 * m + 2; ++c) {
      if (!letters.empty() && c == inverse_letter(letters.back())) continue;
      bool hm = has_max || (c / 2 == m);
      Integer cnt = completions(len - t - 1, hm, m);
      if (k < cnt) {
        letters.push_back(c);
        has_max = hm;
        chosen = true;
        break;
      }
      k -= cnt;
    }
    if (!chosen) throw Error("enumeration invariant violated");
  }
  return from_letters(letters);
}

Integer index_of(const Word& w, std::optional<Index> index_bound) {
  if (w.is_identity()) return 0;
  std::uint64_t len = small_length(w);
  std::uint64_t m = *w.max_index();
  if (!class_allowed(m, index_bound)) throw Error("word " + w.str() + " uses a generator outside the bound");
  std::uint64_t wt = len + m;

  Integer idx = 1;
  for (std::uint64_t v = 1; v < wt; ++v) idx += weight_class_size(v, index_bound);
  for (std::uint64_t l = 1; l < len; ++l)
    if (class_allowed(wt - l, index_bound)) idx += class_size(l, wt - l);

  std::vector<Code> letters = letter_codes(w);
  bool has_max = false;
  for (std::uint64_t t = 0; t < len; ++t) {
    for (Code c = 0; c < letters[t]; ++c) {
      if (t > 0 && c == inverse_letter(letters[t - 1])) continue;
      idx += completions(len - t - 1, has_max || (c / 2 == m), m);
    }
    has_max = has_max || (letters[t] / 2 == m);
  }
  return idx;
}

}  // namespace twospaces
