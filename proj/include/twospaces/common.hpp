#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace twospaces {

// Exact integers (word exponents, lattice entries, enumeration indices).
using Integer = mpz_class;
using Rational = mpq_class;

// An element of ℕ as seen by a group oracle.
using Code = std::uint64_t;
// Index of a free generator x_i.
using Index = std::uint64_t;

inline constexpr std::uint64_t kDefaultScanBudget = 1'000'000;
inline constexpr std::uint64_t kDefaultProbeBudget = 100'000;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class BudgetExhausted : public Error {
 public:
  using Error::Error;
};

class MissingAssignment : public Error {
 public:
  explicit MissingAssignment(Index index)
      : Error("no assignment for generator x" + std::to_string(index)), index_(index) {}
  Index index() const { return index_; }

 private:
  Index index_;
};

class IllegalFinite : public Error {
 public:
  using Error::Error;
};

// A code left the 64-bit range while encoding a group element.
class CodeOverflow : public Error {
 public:
  using Error::Error;
};

class CertificateFailed : public Error {
 public:
  explicit CertificateFailed(std::string word)
      : Error("certificate failed on word " + word), word_(std::move(word)) {}
  const std::string& word() const { return word_; }

 private:
  std::string word_;
};

class NotNested : public Error {
 public:
  using Error::Error;
};

class AnchorViolation : public Error {
 public:
  using Error::Error;
};

class IndexOutOfAmbient : public Error {
 public:
  using Error::Error;
};

class GuardExceeded : public Error {
 public:
  using Error::Error;
};

// Counts probes against a fixed allowance.
class BudgetMeter {
 public:
  explicit BudgetMeter(std::uint64_t limit) : limit_(limit) {}

  void charge(const char* what, std::uint64_t n = 1) {
    if (n > limit_ - used_) {
      used_ = limit_;
      throw BudgetExhausted(std::string("budget of ") + std::to_string(limit_) +
                            " exhausted: " + what);
    }
    used_ += n;
  }
  bool exhausted() const { return used_ >= limit_; }
  std::uint64_t used() const { return used_; }
  std::uint64_t limit() const { return limit_; }

 private:
  std::uint64_t limit_;
  std::uint64_t used_ = 0;
};

// Antidiagonal pairing <i,j> = (i+j)(i+j+1)/2 + i and its inverse.
Code pair(Code i, Code j);
std::pair<Code, Code> unpair(Code k);

// Zigzag coding of ℤ: 0,+1,-1,+2,-2,... ↦ 0,1,2,3,4,...
Code zigzag_encode(std::int64_t z);
std::int64_t zigzag_decode(Code c);
Code zigzag_encode(const Integer& z);
Integer zigzag_decode_integer(Code c);

Code checked_add(Code a, Code b);
Code checked_mul(Code a, Code b);
Code to_code(const Integer& value);
std::int64_t to_int64(const Integer& value);

}  // namespace twospaces
