#pragma once

#include <compare>
#include <string>
#include <string_view>
#include <vector>

#include <boost/rational.hpp>

namespace phasemod {

using Rational = boost::rational<long long>;

// Lebesgue exponent p in [1, inf], stored exactly as its reciprocal u = 1/p in [0, 1].
class ExtExponent {
 public:
  ExtExponent() = default;
  static ExtExponent from_reciprocal(Rational u);
  static ExtExponent from_value(Rational p);
  static ExtExponent infinity() { return from_reciprocal(Rational(0)); }
  // Accepts "inf", integers, fractions "a/b" and finite decimals "1.5".
  static ExtExponent parse(std::string_view text);
  // Exact conversion of a double that is a ratio with denominator <= 10^6.
  static ExtExponent from_double(double p);

  const Rational& reciprocal() const { return u_; }
  Rational conjugate_reciprocal() const { return Rational(1) - u_; }
  ExtExponent conjugate() const { return from_reciprocal(conjugate_reciprocal()); }
  bool is_infinite() const { return u_ == Rational(0); }
  double value() const;
  std::string to_string() const;

  // Ordered by the exponent p (so larger u compares smaller).
  friend bool operator==(const ExtExponent& a, const ExtExponent& b) { return a.u_ == b.u_; }
  friend std::strong_ordering operator<=>(const ExtExponent& a, const ExtExponent& b) {
    if (a.u_ == b.u_) return std::strong_ordering::equal;
    return a.u_ > b.u_ ? std::strong_ordering::less : std::strong_ordering::greater;
  }

 private:
  Rational u_{1, 2};
};

struct ExponentConfig {
  ExtExponent p1, q1, p2, q2;  // operator domain M^{p1 q1} and range M^{p2 q2}
  ExtExponent p3, p4, q3, q4;  // symbol class over phase space
};

struct Condition {
  std::string name;
  bool holds = false;
};

struct AdmissibilityReport {
  bool admissible = false;
  std::vector<Condition> conditions;
  std::vector<std::string> failed() const;
};

// Side constraint on (u3, u4) = (1/e3, 1/e4): u3 + u4 >= sum_bound and u4 >= u4_lower.
struct SideConstraint {
  Rational sum_bound;
  Rational u4_lower;
  bool satisfied_by(const Rational& u3, const Rational& u4) const {
    return u3 + u4 >= sum_bound && u4 >= u4_lower;
  }
};

// Constraint on the symbol exponents induced by domain exponent a and range exponent b.
SideConstraint side_constraint(const ExtExponent& domain, const ExtExponent& range);

// Condition names: p_sum, p4_le_p1_conj, p4_le_p2, q_sum, q4_le_q1_conj, q4_le_q2.
AdmissibilityReport admissible(const ExponentConfig& cfg);

enum class Side { p, q };

struct RationalPoint {
  Rational u3, u4;
  friend bool operator==(const RationalPoint&, const RationalPoint&) = default;
};

struct Region {
  enum class Shape { polygon, segment, point, empty };
  Shape shape = Shape::empty;
  std::vector<RationalPoint> vertices;  // counterclockwise
  SideConstraint constraint;

  // Closed-region membership computed from the vertex list alone.
  bool contains(const RationalPoint& point) const;
};

std::string to_string(Region::Shape shape);

// Admissible (1/e3, 1/e4) region in the unit square for a domain/range exponent pair.
Region region_boundary(const ExtExponent& domain, const ExtExponent& range, Side side);

enum class LpBranch { both_at_most_2, p_at_most_2_at_most_q, both_at_least_2, q_at_most_2_at_most_p };

struct LpCase {
  LpBranch branch;
  std::string tag;
  SideConstraint p_side;  // on (1/p3, 1/p4)
  SideConstraint q_side;  // on (1/q3, 1/q4)
};

// Symbol conditions for boundedness L^p -> L^q; overlapping branches resolve to the first listed.
LpCase lp_case_conditions(const ExtExponent& p, const ExtExponent& q);

}  // namespace phasemod
