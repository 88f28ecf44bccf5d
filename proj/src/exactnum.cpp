#include "treelike/exactnum.hpp"

#include <cmath>
#include <stdexcept>

namespace treelike {

namespace {

BigInt shifted(const BigInt& v, std::uint64_t k) { return k == 0 ? v : BigInt(v << k); }

std::size_t trailing_zeros(const BigInt& v) {
  // v != 0
  return static_cast<std::size_t>(boost::multiprecision::lsb(v.sign() < 0 ? BigInt(-v) : v));
}

}  // namespace

Dyadic::Dyadic(BigInt num, std::int64_t exp) : num_(std::move(num)) {
  if (exp < 0) {
    num_ <<= static_cast<std::uint64_t>(-exp);
    exp_ = 0;
  } else {
    exp_ = static_cast<std::uint32_t>(exp);
  }
  normalize();
}

void Dyadic::normalize() {
  if (num_.is_zero()) {
    exp_ = 0;
    return;
  }
  if (exp_ == 0 || boost::multiprecision::bit_test(num_, 0)) return;
  auto tz = std::min<std::size_t>(trailing_zeros(num_), exp_);
  num_ >>= tz;  // exact: the low tz bits are zero
  exp_ -= static_cast<std::uint32_t>(tz);
}

Dyadic Dyadic::pow2(std::int64_t k) {
  if (k >= 0) return Dyadic(BigInt(1) << static_cast<std::uint64_t>(k), 0);
  return Dyadic(BigInt(1), -k);
}

Dyadic Dyadic::parse(const std::string& text) {
  auto slash = text.find('/');
  auto parse_int = [&](const std::string& s) {
    if (s.empty()) throw std::invalid_argument("bad dyadic literal: '" + text + "'");
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) throw std::invalid_argument("bad dyadic literal: '" + text + "'");
    for (std::size_t j = i; j < s.size(); ++j) {
      if (s[j] < '0' || s[j] > '9') throw std::invalid_argument("bad dyadic literal: '" + text + "'");
    }
    return BigInt(s[0] == '+' ? s.substr(1) : s);
  };
  if (slash == std::string::npos) return Dyadic(parse_int(text), 0);
  BigInt num = parse_int(text.substr(0, slash));
  std::string den_text = text.substr(slash + 1);
  if (den_text.rfind("2^", 0) == 0) {
    return Dyadic(std::move(num), std::stoll(den_text.substr(2)));
  }
  BigInt den = parse_int(den_text);
  if (den <= 0 || (den & (den - 1)) != 0) {
    throw std::invalid_argument("denominator is not a power of two: '" + text + "'");
  }
  return Dyadic(std::move(num), static_cast<std::int64_t>(boost::multiprecision::msb(den)));
}

Dyadic Dyadic::operator-() const {
  Dyadic r = *this;
  r.num_ = -r.num_;
  return r;
}

Dyadic& Dyadic::operator+=(const Dyadic& o) {
  if (o.num_.is_zero()) return *this;
  if (num_.is_zero()) return *this = o;
  if (exp_ >= o.exp_) {
    num_ += shifted(o.num_, exp_ - o.exp_);
  } else {
    num_ = shifted(num_, o.exp_ - exp_) + o.num_;
    exp_ = o.exp_;
  }
  normalize();
  return *this;
}

Dyadic& Dyadic::operator-=(const Dyadic& o) { return *this += -o; }

Dyadic& Dyadic::operator*=(const Dyadic& o) {
  num_ *= o.num_;
  exp_ += o.exp_;
  normalize();
  return *this;
}

Dyadic Dyadic::scaled(std::int64_t k) const {
  if (num_.is_zero() || k == 0) return *this;
  return Dyadic(num_, static_cast<std::int64_t>(exp_) - k);
}

std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
  int sa = a.sign();
  int sb = b.sign();
  if (sa != sb) return sa <=> sb;
  if (a.exp_ == b.exp_) return a.num_.compare(b.num_) <=> 0;
  if (a.exp_ > b.exp_) return a.num_.compare(shifted(b.num_, a.exp_ - b.exp_)) <=> 0;
  return shifted(a.num_, b.exp_ - a.exp_).compare(b.num_) <=> 0;
}

BigInt Dyadic::floor_scaled(std::int64_t k) const {
  std::int64_t shift = k - static_cast<std::int64_t>(exp_);
  if (shift >= 0) return shifted(num_, static_cast<std::uint64_t>(shift));
  BigInt den = BigInt(1) << static_cast<std::uint64_t>(-shift);
  BigInt q = num_ / den;
  if (num_.sign() < 0 && q * den != num_) q -= 1;
  return q;
}

std::string Dyadic::to_string() const {
  if (exp_ == 0) return num_.str();
  return num_.str() + "/" + (BigInt(1) << exp_).str();
}

double Dyadic::to_double() const {
  return std::ldexp(num_.convert_to<double>(), -static_cast<int>(exp_));
}

Dyadic abs(const Dyadic& x) { return x.sign() < 0 ? -x : x; }

Dyadic midpoint(const Dyadic& a, const Dyadic& b) { return (a + b).half(); }

std::optional<Dyadic> divide_exact(const Dyadic& x, const Dyadic& y) {
  if (y.is_zero()) return std::nullopt;
  if (x.is_zero()) return Dyadic(0);
  // y = m * 2^(tz - e) with m odd; x / y = (x.num / m) * 2^(e - tz - x.exp)
  std::size_t tz = trailing_zeros(y.num());
  BigInt odd = y.num() >> tz;
  BigInt q;
  BigInt r;
  boost::multiprecision::divide_qr(x.num(), odd, q, r);
  if (!r.is_zero()) return std::nullopt;
  return Dyadic(std::move(q), static_cast<std::int64_t>(x.exp()) - static_cast<std::int64_t>(y.exp()) +
                                  static_cast<std::int64_t>(tz));
}

int Quad::sign() const {
  int r = rat_.sign();
  int i = irr_.sign();
  if (i == 0) return r;
  if (r == 0 || r == i) return i;
  // opposite signs: compare rat^2 with 2 irr^2
  auto c = rat_ * rat_ <=> (irr_ * irr_).scaled(1);
  if (c == std::strong_ordering::greater) return r;
  return i;  // equality would make sqrt(2) rational
}

Quad& Quad::operator+=(const Quad& o) {
  rat_ += o.rat_;
  irr_ += o.irr_;
  return *this;
}

Quad& Quad::operator-=(const Quad& o) {
  rat_ -= o.rat_;
  irr_ -= o.irr_;
  return *this;
}

Quad& Quad::operator*=(const Quad& o) {
  if (irr_.is_zero() && o.irr_.is_zero()) {
    rat_ *= o.rat_;
    return *this;
  }
  Dyadic r = rat_ * o.rat_ + (irr_ * o.irr_).scaled(1);
  Dyadic i = rat_ * o.irr_ + irr_ * o.rat_;
  rat_ = std::move(r);
  irr_ = std::move(i);
  return *this;
}

Quad Quad::squared() const {
  if (irr_.is_zero()) return Quad(rat_ * rat_);
  return {rat_ * rat_ + (irr_ * irr_).scaled(1), (rat_ * irr_).scaled(1)};
}

std::strong_ordering operator<=>(const Quad& a, const Quad& b) {
  if (a.irr_ == b.irr_) return a.rat_ <=> b.rat_;
  return (a - b).sign() <=> 0;
}

std::string Quad::to_string() const {
  if (irr_.is_zero()) return rat_.to_string();
  auto term = [](const Dyadic& k) { return k == Dyadic(1) ? std::string("sqrt2") : k.to_string() + "*sqrt2"; };
  if (rat_.is_zero()) return term(irr_);
  if (irr_.sign() < 0) return rat_.to_string() + " - " + term(-irr_);
  return rat_.to_string() + " + " + term(irr_);
}

double Quad::to_double() const { return rat_.to_double() + irr_.to_double() * std::sqrt(2.0); }

Quad abs(const Quad& x) { return x.sign() < 0 ? -x : x; }
const Quad& min(const Quad& a, const Quad& b) { return b < a ? b : a; }
const Quad& max(const Quad& a, const Quad& b) { return a < b ? b : a; }

std::optional<Dyadic> quad_ratio(const Quad& a, const Quad& b) {
  if (b.is_zero()) return std::nullopt;
  if (!b.rat().is_zero()) {
    auto lambda = divide_exact(a.rat(), b.rat());
    if (!lambda || *lambda * b.irr() != a.irr()) return std::nullopt;
    return lambda;
  }
  if (!a.rat().is_zero()) return std::nullopt;
  return divide_exact(a.irr(), b.irr());
}

Quad quad_arith(QuadOp op, const Quad& x, const Quad& y) {
  switch (op) {
    case QuadOp::kAdd: return x + y;
    case QuadOp::kSub: return x - y;
    case QuadOp::kMul: return x * y;
    case QuadOp::kNeg: return -x;
  }
  throw std::invalid_argument("unknown QuadOp");
}

int quad_sign(const Quad& x) { return x.sign(); }

int cmp_sqrt_vs_quad(const Dyadic& n, const Quad& q) {
  if (n.sign() < 0) throw std::invalid_argument("cmp_sqrt_vs_quad: negative radicand " + n.to_string());
  int qs = q.sign();
  if (qs < 0) return 1;
  if (qs == 0) return n.sign();
  // both sides nonnegative: compare squares
  return (Quad(n) - q.squared()).sign();
}

}  // namespace treelike
