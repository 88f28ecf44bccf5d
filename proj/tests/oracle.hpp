// Independent reference arithmetic for tests: exact rationals and an exact
// sign test for a + b*sqrt2 written directly from the squaring argument.
#ifndef TREELIKE_TESTS_ORACLE_HPP
#define TREELIKE_TESTS_ORACLE_HPP

#include <random>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "treelike/exactnum.hpp"
#include "treelike/plcurve.hpp"

namespace oracle {

using Rat = boost::multiprecision::cpp_rational;
using Float = boost::multiprecision::cpp_bin_float_100;

inline Rat rat(const treelike::Dyadic& d) {
  Rat den = 1;
  for (std::uint32_t i = 0; i < d.exp(); ++i) den *= 2;
  return Rat(d.num()) / den;
}

inline Float flt(const treelike::Quad& q) {
  return Float(rat(q.rat())) + Float(rat(q.irr())) * boost::multiprecision::sqrt(Float(2));
}

inline int sgn(const Rat& r) { return r > 0 ? 1 : (r < 0 ? -1 : 0); }

// sign(a + b sqrt2)
inline int sign(const Rat& a, const Rat& b) {
  int sa = sgn(a), sb = sgn(b);
  if (sa == 0) return sb;
  if (sb == 0 || sa == sb) return sa;
  // opposite signs: compare a^2 with 2 b^2
  Rat d = a * a - 2 * b * b;
  return sgn(d) * sa;
}

inline int sign(const treelike::Quad& q) { return sign(rat(q.rat()), rat(q.irr())); }

// sign(sqrt(n) - (a + b sqrt2)), n >= 0
inline int cmp_sqrt(const Rat& n, const Rat& a, const Rat& b) {
  if (sign(a, b) < 0) return 1;
  // both sides nonnegative: compare n with a^2 + 2b^2 + 2ab sqrt2
  return sign(n - a * a - 2 * b * b, -2 * a * b);
}

inline Rat sqdist(const treelike::Point2& p, const treelike::Point2& q) {
  Rat dx = rat(p.x) - rat(q.x), dy = rat(p.y) - rat(q.y);
  return dx * dx + dy * dy;
}

// Random dyadic with |num| < 2^bits and exponent in [0, max_exp].
inline treelike::Dyadic random_dyadic(std::mt19937_64& rng, int bits = 12, int max_exp = 8) {
  std::uniform_int_distribution<long long> num(-(1LL << bits) + 1, (1LL << bits) - 1);
  std::uniform_int_distribution<int> exp(0, max_exp);
  return treelike::Dyadic(treelike::BigInt(num(rng)), exp(rng));
}

inline treelike::Quad random_quad(std::mt19937_64& rng, int bits = 12, int max_exp = 8) {
  return {random_dyadic(rng, bits, max_exp), random_dyadic(rng, bits, max_exp)};
}

}  // namespace oracle

#endif  // TREELIKE_TESTS_ORACLE_HPP
