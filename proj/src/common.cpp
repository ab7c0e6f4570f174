#include "twospaces/common.hpp"

#include <cmath>
#include <limits>

namespace twospaces {

namespace {

using u128 = unsigned __int128;

constexpr Code kMaxCode = std::numeric_limits<Code>::max();

u128 triangle(u128 s) { return s * (s + 1) / 2; }

}  // namespace

Code pair(Code i, Code j) {
  u128 s = static_cast<u128>(i) + j;
  u128 k = triangle(s) + i;
  if (k > kMaxCode) throw CodeOverflow("pairing overflow");
  return static_cast<Code>(k);
}

std::pair<Code, Code> unpair(Code k) {
  auto s = static_cast<u128>((std::sqrt(8.0L * static_cast<long double>(k) + 1.0L) - 1.0L) / 2.0L);
  while (s > 0 && triangle(s) > k) --s;
  while (triangle(s + 1) <= k) ++s;
  Code i = static_cast<Code>(k - triangle(s));
  Code j = static_cast<Code>(s - i);
  return {i, j};
}

Code zigzag_encode(std::int64_t z) {
  if (z > 0) return 2 * static_cast<Code>(z) - 1;
  // -z may not be representable for INT64_MIN; go through unsigned negation.
  return 2 * (0 - static_cast<Code>(z));
}

std::int64_t zigzag_decode(Code c) {
  if (c % 2 == 1) return static_cast<std::int64_t>((c + 1) / 2);
  return -static_cast<std::int64_t>(c / 2);
}

Code zigzag_encode(const Integer& z) {
  Integer c = z > 0 ? Integer(2 * z - 1) : Integer(-2 * z);
  return to_code(c);
}

Integer zigzag_decode_integer(Code c) {
  Integer v(static_cast<unsigned long>(c));
  if (c % 2 == 1) return (v + 1) / 2;
  return -(v / 2);
}

Code checked_add(Code a, Code b) {
  Code r;
  if (__builtin_add_overflow(a, b, &r)) throw CodeOverflow("addition overflow");
  return r;
}

Code checked_mul(Code a, Code b) {
  Code r;
  if (__builtin_mul_overflow(a, b, &r)) throw CodeOverflow("multiplication overflow");
  return r;
}

Code to_code(const Integer& value) {
  static_assert(sizeof(unsigned long) == sizeof(Code));
  if (value < 0 || !value.fits_ulong_p()) throw CodeOverflow("value does not fit a code: " + value.get_str());
  return value.get_ui();
}

std::int64_t to_int64(const Integer& value) {
  static_assert(sizeof(long) == sizeof(std::int64_t));
  if (!value.fits_slong_p()) throw CodeOverflow("value does not fit 64 bits: " + value.get_str());
  return value.get_si();
}

}  // namespace twospaces
