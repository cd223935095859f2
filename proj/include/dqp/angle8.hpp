#pragma once
// Angles restricted to the eight multiples of pi/4, represented exactly as an
// integer k in Z_8. All angle bookkeeping in the protocols happens in this
// integer ring; conversion to radians is deferred to gate construction so no
// floating-point drift can enter the classical side.

#include <compare>
#include <numbers>

namespace dqp {

class Angle8 {
 public:
  constexpr Angle8() = default;
  constexpr explicit Angle8(int k) : k_(mod8(k)) {}

  constexpr int k() const { return k_; }
  double radians() const { return static_cast<double>(k_) * (std::numbers::pi / 4.0); }

  constexpr Angle8 operator+(Angle8 o) const { return Angle8(k_ + o.k_); }
  constexpr Angle8 operator-(Angle8 o) const { return Angle8(k_ - o.k_); }
  constexpr Angle8 negated() const { return Angle8(-k_); }
  constexpr Angle8 plus_pi() const { return Angle8(k_ + 4); }

  friend constexpr bool operator==(Angle8, Angle8) = default;

 private:
  static constexpr int mod8(int k) { return ((k % 8) + 8) % 8; }
  int k_ = 0;
};

}  // namespace dqp
