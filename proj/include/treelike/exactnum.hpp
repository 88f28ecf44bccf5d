#ifndef TREELIKE_EXACTNUM_HPP
#define TREELIKE_EXACTNUM_HPP

#include <compare>
#include <cstdint>
#include <optional>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace treelike {

using BigInt = boost::multiprecision::cpp_int;

/*
 * Dyadic rational num / 2^exp.
 *
 * Canonical form: exp >= 0, and either exp == 0 or num is odd. Zero is
 * stored as 0 / 2^0. Two Dyadics are equal iff their (num, exp) agree.
 */
class Dyadic {
 public:
  Dyadic() = default;
  Dyadic(long long value) : num_(value) {}  // NOLINT: integers convert
  Dyadic(BigInt num, std::int64_t exp);

  // 2^k for any integer k.
  static Dyadic pow2(std::int64_t k);
  // Parses "p", "-p", "p/2^k" or "p/q" with q a power of two.
  static Dyadic parse(const std::string& text);

  const BigInt& num() const { return num_; }
  std::uint32_t exp() const { return exp_; }

  int sign() const { return num_.sign(); }
  bool is_zero() const { return num_.is_zero(); }
  bool is_integer() const { return exp_ == 0; }

  Dyadic operator-() const;
  Dyadic& operator+=(const Dyadic& o);
  Dyadic& operator-=(const Dyadic& o);
  Dyadic& operator*=(const Dyadic& o);
  friend Dyadic operator+(Dyadic a, const Dyadic& b) { return a += b; }
  friend Dyadic operator-(Dyadic a, const Dyadic& b) { return a -= b; }
  friend Dyadic operator*(Dyadic a, const Dyadic& b) { return a *= b; }

  // Multiplies by 2^k (k may be negative).
  Dyadic scaled(std::int64_t k) const;
  Dyadic half() const { return scaled(-1); }

  friend bool operator==(const Dyadic& a, const Dyadic& b) {
    return a.exp_ == b.exp_ && a.num_ == b.num_;
  }
  friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b);

  // floor(value * 2^k) as an integer.
  BigInt floor_scaled(std::int64_t k) const;

  std::string to_string() const;  // "-3/8", "5", "0"
  double to_double() const;       // rendering only

 private:
  void normalize();

  BigInt num_ = 0;
  std::uint32_t exp_ = 0;
};

Dyadic abs(const Dyadic& x);
Dyadic midpoint(const Dyadic& a, const Dyadic& b);
// x / y when the quotient is dyadic; nullopt otherwise (or when y == 0).
std::optional<Dyadic> divide_exact(const Dyadic& x, const Dyadic& y);

/*
 * rat + irr * sqrt(2) with dyadic coefficients. The representation is
 * unique because sqrt(2) is irrational, so equality is componentwise.
 */
class Quad {
 public:
  Quad() = default;
  Quad(Dyadic rat) : rat_(std::move(rat)) {}  // NOLINT: dyadics embed
  Quad(long long rat) : rat_(rat) {}          // NOLINT
  Quad(Dyadic rat, Dyadic irr) : rat_(std::move(rat)), irr_(std::move(irr)) {}

  static Quad sqrt2() { return {Dyadic(0), Dyadic(1)}; }

  const Dyadic& rat() const { return rat_; }
  const Dyadic& irr() const { return irr_; }
  bool is_rational() const { return irr_.is_zero(); }
  bool is_zero() const { return rat_.is_zero() && irr_.is_zero(); }

  // Exact sign of rat + irr*sqrt(2).
  int sign() const;

  Quad operator-() const { return {-rat_, -irr_}; }
  Quad& operator+=(const Quad& o);
  Quad& operator-=(const Quad& o);
  Quad& operator*=(const Quad& o);
  friend Quad operator+(Quad a, const Quad& b) { return a += b; }
  friend Quad operator-(Quad a, const Quad& b) { return a -= b; }
  friend Quad operator*(Quad a, const Quad& b) { return a *= b; }
  Quad scaled(std::int64_t k) const { return {rat_.scaled(k), irr_.scaled(k)}; }
  Quad half() const { return scaled(-1); }
  Quad squared() const;

  friend bool operator==(const Quad& a, const Quad& b) = default;
  friend std::strong_ordering operator<=>(const Quad& a, const Quad& b);

  std::string to_string() const;  // "1/2 + 3/4*sqrt2"
  double to_double() const;       // rendering only

 private:
  Dyadic rat_;
  Dyadic irr_;
};

Quad abs(const Quad& x);
const Quad& min(const Quad& a, const Quad& b);
const Quad& max(const Quad& a, const Quad& b);

// a = lambda * b for a dyadic lambda, if one exists (b != 0).
std::optional<Dyadic> quad_ratio(const Quad& a, const Quad& b);

enum class QuadOp { kAdd, kSub, kMul, kNeg };

// Field operation on two Quads; kNeg ignores y.
Quad quad_arith(QuadOp op, const Quad& x, const Quad& y);
int quad_sign(const Quad& x);

// Sign of sqrt(n) - q. Throws std::invalid_argument when n < 0.
int cmp_sqrt_vs_quad(const Dyadic& n, const Quad& q);

}  // namespace treelike

#endif  // TREELIKE_EXACTNUM_HPP
