#include "twospaces/oracles.hpp"

#include <algorithm>
#include <cctype>
#include <mutex>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <variant>

namespace twospaces {

// ---------------------------------------------------------------------------
// GroupOracle

struct GroupOracle::Memo {
  std::mutex mutex;
  std::optional<Code> identity;
};

GroupOracle::GroupOracle(std::string name, std::shared_ptr<const OracleImpl> impl,
                         std::vector<Code> finite_factor_sizes)
    : name_(std::move(name)),
      impl_(std::move(impl)),
      finite_factor_sizes_(std::move(finite_factor_sizes)),
      memo_(std::make_shared<Memo>()) {}

namespace {

class FunctionOracle final : public OracleImpl {
 public:
  FunctionOracle(std::function<Code(Code, Code)> mul, std::function<std::optional<Code>(Code)> inv)
      : mul_(std::move(mul)), inv_(std::move(inv)) {}
  Code mul(Code a, Code b) const override { return mul_(a, b); }
  std::optional<Code> inverse_hint(Code a) const override {
    if (inv_) return inv_(a);
    return std::nullopt;
  }

 private:
  std::function<Code(Code, Code)> mul_;
  std::function<std::optional<Code>(Code)> inv_;
};

}  // namespace

GroupOracle GroupOracle::from_function(std::string name, std::function<Code(Code, Code)> mul,
                                       std::function<std::optional<Code>(Code)> inverse_hint) {
  return GroupOracle(std::move(name),
                     std::make_shared<FunctionOracle>(std::move(mul), std::move(inverse_hint)));
}

Code GroupOracle::identity(std::uint64_t budget) const {
  {
    std::lock_guard lock(memo_->mutex);
    if (memo_->identity) return *memo_->identity;
  }
  BudgetMeter meter(budget);
  for (Code n = 0;; ++n) {
    meter.charge("identity scan");
    if (mul(n, n) == n) {
      std::lock_guard lock(memo_->mutex);
      memo_->identity = n;
      return n;
    }
  }
}

Code GroupOracle::inverse(Code a, std::uint64_t budget) const {
  const Code e = identity(budget);
  if (auto hint = impl_->inverse_hint(a); hint && mul(a, *hint) == e) return *hint;
  BudgetMeter meter(budget);
  for (Code b = 0;; ++b) {
    meter.charge("inverse scan");
    if (mul(a, b) == e) return b;
  }
}

Code GroupOracle::power(Code a, const Integer& exponent, std::uint64_t budget) const {
  Code base = exponent < 0 ? inverse(a, budget) : a;
  Integer e = abs(exponent);
  Code result = identity(budget);
  if (e == 0) return result;
  // Square-and-multiply over the bits of e.
  const std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  for (std::size_t k = bits; k-- > 0;) {
    result = mul(result, result);
    if (mpz_tstbit(e.get_mpz_t(), k)) result = mul(result, base);
  }
  return result;
}

// ---------------------------------------------------------------------------
// FinitePermutation

FinitePermutation FinitePermutation::swap(Code i, Code j) { return from_swaps({{i, j}}); }

FinitePermutation FinitePermutation::from_swaps(const std::vector<std::pair<Code, Code>>& swaps) {
  FinitePermutation p;
  for (auto [i, j] : swaps) {
    if (i == j) continue;
    // Post-compose the transposition (i j).
    std::map<Code, Code> next;
    std::vector<Code> support{i, j};
    for (auto& [k, v] : p.forward_) support.push_back(k);
    for (Code x : support) {
      Code y = p.apply(x);
      if (y == i) y = j;
      else if (y == j) y = i;
      if (y != x) next[x] = y;
    }
    p.forward_ = std::move(next);
  }
  for (auto& [k, v] : p.forward_) p.backward_[v] = k;
  p.swaps_ = swaps;
  return p;
}

FinitePermutation FinitePermutation::cycle(const std::vector<Code>& points) {
  // p0 -> p1 -> ... -> pk -> p0 as the swaps (p0 p1), (p0 p2), ... applied in order.
  std::vector<std::pair<Code, Code>> swaps;
  for (std::size_t k = 1; k < points.size(); ++k) swaps.emplace_back(points[0], points[k]);
  return from_swaps(swaps);
}

Code FinitePermutation::apply(Code x) const {
  auto it = forward_.find(x);
  return it == forward_.end() ? x : it->second;
}

Code FinitePermutation::apply_inverse(Code x) const {
  auto it = backward_.find(x);
  return it == backward_.end() ? x : it->second;
}

FinitePermutation FinitePermutation::after(const FinitePermutation& first) const {
  FinitePermutation out;
  std::vector<Code> support;
  for (auto& [k, v] : first.forward_) support.push_back(k);
  for (auto& [k, v] : forward_) support.push_back(k);
  for (Code x : support) {
    Code y = apply(first.apply(x));
    if (y != x) {
      out.forward_[x] = y;
      out.backward_[y] = x;
    }
  }
  out.swaps_ = first.swaps_;
  out.swaps_.insert(out.swaps_.end(), swaps_.begin(), swaps_.end());
  return out;
}

std::string FinitePermutation::str() const {
  std::ostringstream os;
  for (std::size_t k = 0; k < swaps_.size(); ++k) {
    if (k) os << ',';
    os << "swap(" << swaps_[k].first << ',' << swaps_[k].second << ')';
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Codecs

namespace codec {

namespace {

Code totient(Code n) {
  Code result = n;
  for (Code p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      while (n % p == 0) n /= p;
      result -= result / p;
    }
  }
  if (n > 1) result -= result / n;
  return result;
}

Code gcd(Code a, Code b) { return std::gcd(a, b); }

Rational make_rational(const Integer& num, const Integer& den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

// Fractional part in [0, 1).
Rational frac(const Rational& q) {
  Integer fl;
  mpz_fdiv_q(fl.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return Rational(q - Rational(fl));
}

}  // namespace

// Q: 0 ↦ 0; positive fractions grouped by height max(a, b), each level in
// increasing value, then signs interleaved (+q, -q).
Code rational_code(const Rational& q_in) {
  Rational q = q_in;
  q.canonicalize();
  if (q == 0) return 0;
  bool negative = q < 0;
  Integer a_big = abs(q.get_num()), b_big = q.get_den();
  Code a = to_code(a_big), b = to_code(b_big);
  Code h = std::max(a, b);
  Code before = 0;  // positive fractions of height < h
  for (Code j = 1; j < h; ++j) before = checked_add(before, j == 1 ? 1 : 2 * totient(j));
  Code rank = 0;
  if (h == 1) {
    rank = 0;
  } else if (b == h) {  // a/h with a < h
    for (Code x = 1; x < a; ++x)
      if (gcd(x, h) == 1) ++rank;
  } else {  // h/b with b < h, listed with b descending
    rank = totient(h);
    for (Code y = h - 1; y > b; --y)
      if (gcd(y, h) == 1) ++rank;
  }
  Code t = checked_add(before, rank);
  return checked_add(checked_add(checked_mul(2, t), 1), negative ? 1 : 0);
}

Rational rational_decode(Code c) {
  if (c == 0) return 0;
  Code t = (c - 1) / 2;
  bool negative = (c - 1) % 2 == 1;
  Code h = 1, before = 0;
  while (true) {
    Code level = h == 1 ? 1 : 2 * totient(h);
    if (t < before + level) break;
    before += level;
    ++h;
  }
  Code r = t - before;
  Code a = 1, b = 1;
  if (h > 1) {
    Code phi = totient(h);
    if (r < phi) {
      b = h;
      for (Code x = 1;; ++x)
        if (gcd(x, h) == 1 && r-- == 0) {
          a = x;
          break;
        }
    } else {
      r -= phi;
      a = h;
      for (Code y = h - 1;; --y)
        if (gcd(y, h) == 1 && r-- == 0) {
          b = y;
          break;
        }
    }
  }
  Rational q = make_rational(Integer(static_cast<unsigned long>(a)), Integer(static_cast<unsigned long>(b)));
  return negative ? Rational(-q) : q;
}

// ℚ/ℤ coordinate: 0 ↦ 0, then by denominator d = 2, 3, ..., numerators
// coprime to d in increasing order.
Code qmodz_code(const Rational& q_in) {
  Rational q = frac(q_in);
  if (q == 0) return 0;
  Code a = to_code(q.get_num()), d = to_code(q.get_den());
  Code code = 1;
  for (Code j = 2; j < d; ++j) code = checked_add(code, totient(j));
  for (Code x = 1; x < a; ++x)
    if (gcd(x, d) == 1) ++code;
  return code;
}

Rational qmodz_decode(Code c) {
  if (c == 0) return 0;
  Code r = c - 1, d = 2;
  while (r >= totient(d)) r -= totient(d++);
  for (Code x = 1;; ++x)
    if (gcd(x, d) == 1 && r-- == 0)
      return make_rational(Integer(static_cast<unsigned long>(x)), Integer(static_cast<unsigned long>(d)));
}

// ℤ[p^∞]: 0 ↦ 0; level k ≥ 1 holds a/p^k (p ∤ a) at codes p^(k-1) + rank(a).
Code prufer_code(Code p, const Rational& q_in) {
  Rational q = frac(q_in);
  if (q == 0) return 0;
  Code a = to_code(q.get_num()), den = to_code(q.get_den());
  Code level_start = 1;
  for (Code pk = p; pk != den; pk = checked_mul(pk, p)) {
    if (pk > den) throw Error("not an element of the Prufer group");
    level_start = checked_mul(level_start, p);
  }
  return checked_add(level_start, a - a / p - 1);
}

Rational prufer_decode(Code p, Code c) {
  if (c == 0) return 0;
  Code level_start = 1, den = p;  // level_start = p^(k-1), den = p^k
  while (c >= checked_mul(level_start, p)) {
    level_start = checked_mul(level_start, p);
    den = checked_mul(den, p);
  }
  Code r = c - level_start;
  Code a = r + r / (p - 1) + 1;
  return make_rational(Integer(static_cast<unsigned long>(a)), Integer(static_cast<unsigned long>(den)));
}

namespace {

// Balanced pairing of a fixed-length tuple, so codes grow like max^L.
Code tuple_code(const Code* s, std::size_t n) {
  if (n == 1) return s[0];
  const std::size_t half = n / 2;
  return pair(tuple_code(s, half), tuple_code(s + half, n - half));
}

void tuple_decode(Code c, std::size_t n, Code* out) {
  if (n == 1) {
    out[0] = c;
    return;
  }
  const std::size_t half = n / 2;
  auto [left, right] = unpair(c);
  tuple_decode(left, half, out);
  tuple_decode(right, n - half, out + half);
}

}  // namespace

// Finite-support sequences, trailing zeros dropped: [] ↦ 0, and
// (s0..s_{L-1}) with s_{L-1} ≠ 0 ↦ 1 + <L-1, tuple(s0, ..., s_{L-1}-1)>.
Code sequence_code(const std::vector<Code>& seq) {
  std::size_t n = seq.size();
  while (n > 0 && seq[n - 1] == 0) --n;
  if (n == 0) return 0;
  std::vector<Code> shifted(seq.begin(), seq.begin() + static_cast<std::ptrdiff_t>(n));
  --shifted.back();
  return checked_add(pair(static_cast<Code>(n - 1), tuple_code(shifted.data(), n)), 1);
}

std::vector<Code> sequence_decode(Code c) {
  if (c == 0) return {};
  auto [len_minus_one, code] = unpair(c - 1);
  if (len_minus_one >= (Code(1) << 20)) throw CodeOverflow("sequence code too long");
  std::vector<Code> out(len_minus_one + 1);
  tuple_decode(code, out.size(), out.data());
  ++out.back();
  return out;
}

// ℤ^d: <z(v1), <z(v2), ... z(vd)>> with zigzag coordinates.
Code zd_code(const std::vector<Integer>& v) {
  if (v.empty()) throw Error("empty vector");
  Code code = zigzag_encode(v.back());
  for (std::size_t k = v.size() - 1; k-- > 0;) code = pair(zigzag_encode(v[k]), code);
  return code;
}

std::vector<Integer> zd_decode(Code c, std::size_t d) {
  std::vector<Integer> out;
  for (std::size_t k = 0; k + 1 < d; ++k) {
    auto [head, rest] = unpair(c);
    out.push_back(zigzag_decode_integer(head));
    c = rest;
  }
  out.push_back(zigzag_decode_integer(c));
  return out;
}

}  // namespace codec

// ---------------------------------------------------------------------------
// Named oracles

namespace {

class IntegerOracle final : public OracleImpl {
 public:
  Code mul(Code a, Code b) const override {
    return zigzag_encode(zigzag_decode_integer(a) + zigzag_decode_integer(b));
  }
  std::optional<Code> inverse_hint(Code a) const override {
    return zigzag_encode(Integer(-zigzag_decode_integer(a)));
  }
};

class LatticeZdOracle final : public OracleImpl {
 public:
  explicit LatticeZdOracle(std::size_t d) : d_(d) {}
  Code mul(Code a, Code b) const override {
    auto x = codec::zd_decode(a, d_), y = codec::zd_decode(b, d_);
    for (std::size_t k = 0; k < d_; ++k) x[k] += y[k];
    return codec::zd_code(x);
  }
  std::optional<Code> inverse_hint(Code a) const override {
    auto x = codec::zd_decode(a, d_);
    for (auto& v : x) v = -v;
    return codec::zd_code(x);
  }

 private:
  std::size_t d_;
};

class FreeOracle final : public OracleImpl {
 public:
  explicit FreeOracle(Index rank) : rank_(rank) {}

  Code mul(Code a, Code b) const override { return encode(twospaces::mul(decode(a), decode(b))); }
  std::optional<Code> inverse_hint(Code a) const override { return encode(inv(decode(a))); }

 private:
  static constexpr std::size_t kCacheLimit = 1 << 16;

  Word decode(Code c) const {
    {
      std::lock_guard lock(mutex_);
      if (auto it = decoded_.find(c); it != decoded_.end()) return it->second;
    }
    Word w = enumerate(Integer(static_cast<unsigned long>(c)), rank_);
    std::lock_guard lock(mutex_);
    if (decoded_.size() >= kCacheLimit) decoded_.clear();
    decoded_.emplace(c, w);
    return w;
  }

  Code encode(const Word& w) const {
    {
      std::lock_guard lock(mutex_);
      if (auto it = encoded_.find(w); it != encoded_.end()) return it->second;
    }
    Code c = to_code(index_of(w, rank_));
    std::lock_guard lock(mutex_);
    if (encoded_.size() >= kCacheLimit) encoded_.clear();
    encoded_.emplace(w, c);
    return c;
  }

  Index rank_;
  mutable std::mutex mutex_;
  mutable std::unordered_map<Code, Word> decoded_;
  mutable std::map<Word, Code> encoded_;
};

class PruferOracle final : public OracleImpl {
 public:
  explicit PruferOracle(Code p) : p_(p) {}
  Code mul(Code a, Code b) const override {
    return codec::prufer_code(p_, codec::prufer_decode(p_, a) + codec::prufer_decode(p_, b));
  }
  std::optional<Code> inverse_hint(Code a) const override {
    return codec::prufer_code(p_, Rational(-codec::prufer_decode(p_, a)));
  }

 private:
  Code p_;
};

class RationalOracle final : public OracleImpl {
 public:
  Code mul(Code a, Code b) const override {
    return codec::rational_code(codec::rational_decode(a) + codec::rational_decode(b));
  }
  std::optional<Code> inverse_hint(Code a) const override {
    return codec::rational_code(Rational(-codec::rational_decode(a)));
  }
};

class QmodZSumOracle final : public OracleImpl {
 public:
  Code mul(Code a, Code b) const override { return combine(a, b, false); }
  std::optional<Code> inverse_hint(Code a) const override { return combine(a, a, true); }

 private:
  static Code combine(Code a, Code b, bool negate_only) {
    auto x = codec::sequence_decode(a);
    auto y = codec::sequence_decode(b);
    std::vector<Code> out(std::max(x.size(), y.size()), 0);
    for (std::size_t k = 0; k < out.size(); ++k) {
      Rational qa = k < x.size() ? codec::qmodz_decode(x[k]) : Rational(0);
      Rational qb = k < y.size() ? codec::qmodz_decode(y[k]) : Rational(0);
      out[k] = codec::qmodz_code(negate_only ? Rational(-qa) : Rational(qa + qb));
    }
    return codec::sequence_code(out);
  }
};

// Finite groups appear only as product factors.
struct FiniteGroup {
  Code size;
  std::function<Code(Code, Code)> mul;
  std::function<Code(Code)> inv;
  std::string name;
};

class InfiniteProduct final : public OracleImpl {
 public:
  InfiniteProduct(GroupOracle left, GroupOracle right) : left_(std::move(left)), right_(std::move(right)) {}
  Code mul(Code a, Code b) const override {
    auto [a1, a2] = unpair(a);
    auto [b1, b2] = unpair(b);
    return pair(left_.mul(a1, b1), right_.mul(a2, b2));
  }
  std::optional<Code> inverse_hint(Code a) const override {
    auto [a1, a2] = unpair(a);
    return pair(left_.inverse(a1), right_.inverse(a2));
  }
  std::optional<std::pair<Code, Code>> split(Code c) const override { return unpair(c); }
  std::optional<Code> join(Code l, Code r) const override { return pair(l, r); }

 private:
  GroupOracle left_, right_;
};

// Infinite × finite of size k: code = infinite * k + finite.
class MixedProduct final : public OracleImpl {
 public:
  MixedProduct(GroupOracle infinite, FiniteGroup finite, bool finite_first)
      : inf_(std::move(infinite)), fin_(std::move(finite)), finite_first_(finite_first) {}
  Code mul(Code a, Code b) const override {
    Code k = fin_.size;
    return join_parts(inf_.mul(a / k, b / k), fin_.mul(a % k, b % k));
  }
  std::optional<Code> inverse_hint(Code a) const override {
    Code k = fin_.size;
    return join_parts(inf_.inverse(a / k), fin_.inv(a % k));
  }
  std::optional<std::pair<Code, Code>> split(Code c) const override {
    Code k = fin_.size;
    if (finite_first_) return std::pair{c % k, c / k};
    return std::pair{c / k, c % k};
  }
  std::optional<Code> join(Code l, Code r) const override {
    if (finite_first_) return join_parts(r, l);
    return join_parts(l, r);
  }

 private:
  Code join_parts(Code infinite, Code finite) const {
    return checked_add(checked_mul(infinite, fin_.size), finite);
  }
  GroupOracle inf_;
  FiniteGroup fin_;
  bool finite_first_;
};

class ConjugateOracle final : public OracleImpl {
 public:
  ConjugateOracle(GroupOracle base, FinitePermutation phi) : base_(std::move(base)), phi_(std::move(phi)) {}
  Code mul(Code a, Code b) const override {
    return phi_.apply(base_.mul(phi_.apply_inverse(a), phi_.apply_inverse(b)));
  }
  std::optional<Code> inverse_hint(Code a) const override {
    return phi_.apply(base_.inverse(phi_.apply_inverse(a)));
  }

 private:
  GroupOracle base_;
  FinitePermutation phi_;
};

// -- expression parser ------------------------------------------------------

using GroupValue = std::variant<FiniteGroup, GroupOracle>;

bool is_prime(Code p) {
  if (p < 2) return false;
  for (Code d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

class ExprParser {
 public:
  explicit ExprParser(std::string_view text) {
    for (char c : text)
      if (!std::isspace(static_cast<unsigned char>(c))) s_.push_back(c);
  }

  GroupValue parse_all() {
    GroupValue v = parse_expr();
    if (pos_ != s_.size()) fail("trailing input");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw ParseError("group expression '" + s_ + "': " + why + " at offset " + std::to_string(pos_));
  }

  bool eat(std::string_view tok) {
    if (s_.compare(pos_, tok.size(), tok) == 0) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (pos_ >= s_.size() || s_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  Code number() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a number");
    Integer v(s_.substr(start, pos_ - start));
    if (!v.fits_ulong_p()) fail("number out of range");
    return v.get_ui();
  }

  GroupOracle as_oracle(GroupValue v, const char* context) {
    if (auto* g = std::get_if<GroupOracle>(&v)) return *g;
    throw IllegalFinite(std::string("finite group not allowed ") + context);
  }

  GroupValue parse_expr() {
    if (eat("Prod(")) {
      GroupValue a = parse_expr();
      expect(',');
      GroupValue b = parse_expr();
      expect(')');
      return make_product(std::move(a), std::move(b));
    }
    if (eat("Conj(")) {
      GroupOracle base = as_oracle(parse_expr(), "under conjugation");
      std::vector<std::pair<Code, Code>> swaps;
      while (eat(",")) {
        if (!eat("swap(")) fail("expected swap(i,j)");
        Code i = number();
        expect(',');
        Code j = number();
        expect(')');
        swaps.emplace_back(i, j);
      }
      expect(')');
      return conjugate(base, FinitePermutation::from_swaps(swaps));
    }
    if (eat("Free(")) {
      Code n = number();
      expect(')');
      if (n == 0) throw IllegalFinite("Free(0) is trivial");
      return GroupOracle("Free(" + std::to_string(n) + ")", std::make_shared<FreeOracle>(n));
    }
    if (eat("Prufer(")) {
      Code p = number();
      expect(')');
      if (!is_prime(p)) fail("Prufer needs a prime");
      return GroupOracle("Prufer(" + std::to_string(p) + ")", std::make_shared<PruferOracle>(p));
    }
    if (eat("Cyclic(")) {
      Code k = number();
      expect(')');
      if (k == 0) fail("Cyclic(0) is not a finite cyclic group");
      return FiniteGroup{k, [k](Code a, Code b) { return (a + b) % k; },
                         [k](Code a) { return (k - a % k) % k; }, "Cyclic(" + std::to_string(k) + ")"};
    }
    if (eat("QmodZ_sum")) return GroupOracle("QmodZ_sum", std::make_shared<QmodZSumOracle>());
    if (eat("Q")) return GroupOracle("Q", std::make_shared<RationalOracle>());
    if (eat("Z^")) {
      Code d = number();
      if (d == 0) throw IllegalFinite("Z^0 is trivial");
      if (d == 1) return GroupOracle("Z", std::make_shared<IntegerOracle>());
      return GroupOracle("Z^" + std::to_string(d), std::make_shared<LatticeZdOracle>(d));
    }
    if (eat("Z")) return GroupOracle("Z", std::make_shared<IntegerOracle>());
    fail("unknown group");
  }

  static GroupValue make_product(GroupValue a, GroupValue b) {
    auto* fa = std::get_if<FiniteGroup>(&a);
    auto* fb = std::get_if<FiniteGroup>(&b);
    if (fa && fb) {
      FiniteGroup x = *fa, y = *fb;
      Code k = checked_mul(x.size, y.size);
      // Mixed radix: (u, v) ↦ u + |x| v.
      return FiniteGroup{k,
                         [x, y](Code s, Code t) {
                           return x.mul(s % x.size, t % x.size) + x.size * y.mul(s / x.size, t / x.size);
                         },
                         [x, y](Code s) { return x.inv(s % x.size) + x.size * y.inv(s / x.size); },
                         "Prod(" + x.name + "," + y.name + ")"};
    }
    if (fa || fb) {
      bool finite_first = fa != nullptr;
      FiniteGroup fin = finite_first ? *fa : *fb;
      GroupOracle inf = std::get<GroupOracle>(finite_first ? b : a);
      std::string name = finite_first ? "Prod(" + fin.name + "," + inf.name() + ")"
                                      : "Prod(" + inf.name() + "," + fin.name + ")";
      std::vector<Code> sizes = inf.finite_factor_sizes();
      sizes.push_back(fin.size);
      return GroupOracle(name, std::make_shared<MixedProduct>(inf, fin, finite_first), sizes);
    }
    return product(std::get<GroupOracle>(a), std::get<GroupOracle>(b));
  }

  std::string s_;
  std::size_t pos_ = 0;
};

}  // namespace

GroupOracle named(std::string_view expr) {
  ExprParser parser(expr);
  GroupValue v = parser.parse_all();
  if (auto* g = std::get_if<GroupOracle>(&v)) return *g;
  throw IllegalFinite("group expression '" + std::string(expr) + "' describes a finite group");
}

GroupOracle product(const GroupOracle& left, const GroupOracle& right) {
  std::vector<Code> sizes = left.finite_factor_sizes();
  sizes.insert(sizes.end(), right.finite_factor_sizes().begin(), right.finite_factor_sizes().end());
  return GroupOracle("Prod(" + left.name() + "," + right.name() + ")",
                     std::make_shared<InfiniteProduct>(left, right), sizes);
}

GroupOracle conjugate(const GroupOracle& g, const FinitePermutation& phi) {
  if (phi.is_identity() && phi.swaps().empty()) return g;
  return GroupOracle("Conj(" + g.name() + "," + phi.str() + ")", std::make_shared<ConjugateOracle>(g, phi),
                     g.finite_factor_sizes());
}

// ---------------------------------------------------------------------------
// Window checks and evaluation

AxiomReport check_axioms_window(const GroupOracle& g, Code window, std::uint64_t budget) {
  AxiomReport r;
  auto fail = [&r](std::string kind, std::vector<Code> witness, std::string message) {
    r.ok = false;
    r.failure = std::move(kind);
    r.witness = std::move(witness);
    r.message = std::move(message);
    return r;
  };
  if (window == 0) return fail("window", {}, "window must be at least 1");

  Code e;
  try {
    e = g.identity(budget);
  } catch (const BudgetExhausted& ex) {
    return fail("identity", {}, ex.what());
  }
  for (Code a = 0; a < window; ++a)
    if (g.mul(e, a) != a || g.mul(a, e) != a)
      return fail("identity-law", {a}, "identity " + std::to_string(e) + " fails on " + std::to_string(a));

  for (Code a = 0; a < window; ++a)
    for (Code b = 0; b < window; ++b) {
      Code ab = g.mul(a, b);
      for (Code c = 0; c < window; ++c)
        if (g.mul(ab, c) != g.mul(a, g.mul(b, c)))
          return fail("associativity", {a, b, c}, "associativity fails");
    }

  for (Code a = 0; a < window; ++a) {
    try {
      Code b = g.inverse(a, budget);
      if (g.mul(b, a) != e) return fail("inverse", {a}, "right inverse is not a left inverse");
    } catch (const BudgetExhausted& ex) {
      return fail("inverse", {a}, "no inverse of " + std::to_string(a) + " found: " + ex.what());
    }
  }
  return r;
}

std::vector<std::vector<Code>> cayley_window(const GroupOracle& g, Code window) {
  std::vector<std::vector<Code>> table(window, std::vector<Code>(window));
  for (Code a = 0; a < window; ++a)
    for (Code b = 0; b < window; ++b) table[a][b] = g.mul(a, b);
  return table;
}

Code evaluate(const Word& w, const Assignment& assignment, const GroupOracle& g, std::uint64_t budget) {
  Code result = g.identity(budget);
  for (const auto& s : w.syllables()) result = g.mul(result, g.power(assignment.at(s.index), s.exponent, budget));
  return result;
}

bool eval_gcondition(const GroupOracle& g, std::span<const GTerm> equalities, std::span<const GTerm> inequalities) {
  for (const auto& t : equalities)
    if (evaluate(t.word, t.assignment, g) != t.target) return false;
  for (const auto& t : inequalities)
    if (evaluate(t.word, t.assignment, g) == t.target) return false;
  return true;
}

std::optional<std::uint64_t> element_order(const GroupOracle& g, Code a, std::uint64_t limit) {
  const Code e = g.identity();
  Code x = a;
  for (std::uint64_t n = 1; n <= limit; ++n) {
    if (x == e) return n;
    x = g.mul(x, a);
  }
  return std::nullopt;
}

}  // namespace twospaces
