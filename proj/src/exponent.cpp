#include "phasemod/exponent.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace phasemod {
namespace {

const Rational kZero(0);
const Rational kOne(1);

long long parse_integer(std::string_view text, std::string_view whole) {
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw std::invalid_argument("exponent: cannot parse '" + std::string(whole) + "'");
  }
  return value;
}

std::string trim(std::string_view text) {
  std::size_t b = 0, e = text.size();
  while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
  std::string out(text.substr(b, e - b));
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

Rational parse_rational(std::string_view text) {
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const long long num = parse_integer(text.substr(0, slash), text);
    const long long den = parse_integer(text.substr(slash + 1), text);
    if (den == 0) throw std::invalid_argument("exponent: zero denominator");
    return Rational(num, den);
  }
  if (const auto dot = text.find('.'); dot != std::string_view::npos) {
    const std::string_view frac = text.substr(dot + 1);
    if (frac.size() > 12) throw std::invalid_argument("exponent: too many decimals");
    const long long whole = dot == 0 ? 0 : parse_integer(text.substr(0, dot), text);
    long long scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    const long long digits = frac.empty() ? 0 : parse_integer(frac, text);
    return Rational(whole) + Rational(digits, scale);
  }
  return Rational(parse_integer(text, text));
}

Rational max_of(const Rational& a, const Rational& b) { return a < b ? b : a; }

// Signed area test: > 0 when c lies left of the directed line a -> b.
Rational cross(const RationalPoint& a, const RationalPoint& b, const RationalPoint& c) {
  return (b.u3 - a.u3) * (c.u4 - a.u4) - (b.u4 - a.u4) * (c.u3 - a.u3);
}

// Half-plane alpha * u3 + beta * u4 >= gamma.
struct HalfPlane {
  Rational alpha, beta, gamma;
  Rational eval(const RationalPoint& p) const { return alpha * p.u3 + beta * p.u4 - gamma; }
};

std::vector<RationalPoint> clip(const std::vector<RationalPoint>& polygon, const HalfPlane& h) {
  std::vector<RationalPoint> out;
  const std::size_t n = polygon.size();
  for (std::size_t i = 0; i < n; ++i) {
    const RationalPoint& cur = polygon[i];
    const RationalPoint& next = polygon[(i + 1) % n];
    const Rational a = h.eval(cur);
    const Rational b = h.eval(next);
    if (a >= kZero) out.push_back(cur);
    if ((a > kZero && b < kZero) || (a < kZero && b > kZero)) {
      const Rational s = a / (a - b);
      out.push_back({cur.u3 + s * (next.u3 - cur.u3), cur.u4 + s * (next.u4 - cur.u4)});
    }
  }
  return out;
}

std::vector<RationalPoint> simplify(const std::vector<RationalPoint>& in) {
  std::vector<RationalPoint> pts;
  for (const auto& p : in) {
    if (std::find(pts.begin(), pts.end(), p) == pts.end()) pts.push_back(p);
  }
  bool changed = true;
  while (changed && pts.size() > 2) {
    changed = false;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto& prev = pts[(i + pts.size() - 1) % pts.size()];
      const auto& next = pts[(i + 1) % pts.size()];
      if (cross(prev, pts[i], next) == kZero) {
        pts.erase(pts.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
    }
  }
  return pts;
}

bool on_segment(const RationalPoint& a, const RationalPoint& b, const RationalPoint& p) {
  if (cross(a, b, p) != kZero) return false;
  return std::min(a.u3, b.u3) <= p.u3 && p.u3 <= std::max(a.u3, b.u3) &&
         std::min(a.u4, b.u4) <= p.u4 && p.u4 <= std::max(a.u4, b.u4);
}

}  // namespace

ExtExponent ExtExponent::from_reciprocal(Rational u) {
  if (u < kZero || u > kOne) throw std::invalid_argument("exponent: reciprocal must lie in [0, 1]");
  ExtExponent e;
  e.u_ = u;
  return e;
}

ExtExponent ExtExponent::from_value(Rational p) {
  if (p < kOne) throw std::invalid_argument("exponent: p must be at least 1");
  return from_reciprocal(Rational(1) / p);
}

ExtExponent ExtExponent::parse(std::string_view text) {
  const std::string t = trim(text);
  if (t == "inf" || t == "infinity" || t == "∞") return infinity();
  return from_value(parse_rational(t));
}

ExtExponent ExtExponent::from_double(double p) {
  if (std::isinf(p) && p > 0) return infinity();
  if (!std::isfinite(p) || p < 1) throw std::invalid_argument("exponent: p must lie in [1, inf]");
  // Continued-fraction convergents until the value is reproduced.
  long long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double x = p;
  for (int iter = 0; iter < 40; ++iter) {
    const double a = std::floor(x);
    const auto ai = static_cast<long long>(a);
    const long long h2 = ai * h1 + h0;
    const long long k2 = ai * k1 + k0;
    if (k2 > 1'000'000) break;
    h0 = h1, h1 = h2, k0 = k1, k1 = k2;
    if (std::abs(static_cast<double>(h1) / static_cast<double>(k1) - p) <= 1e-12 * p) {
      return from_value(Rational(h1, k1));
    }
    const double frac = x - a;
    if (frac <= 0) break;
    x = 1.0 / frac;
  }
  throw std::invalid_argument("exponent: value is not a simple rational");
}

double ExtExponent::value() const {
  if (is_infinite()) return std::numeric_limits<double>::infinity();
  return static_cast<double>(u_.denominator()) / static_cast<double>(u_.numerator());
}

std::string ExtExponent::to_string() const {
  if (is_infinite()) return "inf";
  const Rational p = Rational(1) / u_;
  if (p.denominator() == 1) return std::to_string(p.numerator());
  return std::to_string(p.numerator()) + "/" + std::to_string(p.denominator());
}

std::vector<std::string> AdmissibilityReport::failed() const {
  std::vector<std::string> out;
  for (const auto& c : conditions) {
    if (!c.holds) out.push_back(c.name);
  }
  return out;
}

SideConstraint side_constraint(const ExtExponent& domain, const ExtExponent& range) {
  const Rational a = domain.conjugate_reciprocal();
  const Rational b = range.reciprocal();
  return {a + b, max_of(a, b)};
}

AdmissibilityReport admissible(const ExponentConfig& cfg) {
  AdmissibilityReport r;
  const auto add = [&](std::string name, bool holds) { r.conditions.push_back({std::move(name), holds}); };
  const Rational up1c = cfg.p1.conjugate_reciprocal();
  const Rational uq1c = cfg.q1.conjugate_reciprocal();
  add("p_sum", up1c + cfg.p2.reciprocal() <= cfg.p3.reciprocal() + cfg.p4.reciprocal());
  add("p4_le_p1_conj", cfg.p4 <= cfg.p1.conjugate());
  add("p4_le_p2", cfg.p4 <= cfg.p2);
  add("q_sum", uq1c + cfg.q2.reciprocal() <= cfg.q3.reciprocal() + cfg.q4.reciprocal());
  add("q4_le_q1_conj", cfg.q4 <= cfg.q1.conjugate());
  add("q4_le_q2", cfg.q4 <= cfg.q2);
  r.admissible = std::all_of(r.conditions.begin(), r.conditions.end(),
                             [](const Condition& c) { return c.holds; });
  return r;
}

std::string to_string(Region::Shape shape) {
  switch (shape) {
    case Region::Shape::polygon: return "polygon";
    case Region::Shape::segment: return "segment";
    case Region::Shape::point: return "point";
    case Region::Shape::empty: return "empty";
  }
  return "unknown";
}

bool Region::contains(const RationalPoint& p) const {
  switch (shape) {
    case Shape::empty: return false;
    case Shape::point: return p == vertices.front();
    case Shape::segment: return on_segment(vertices[0], vertices[1], p);
    case Shape::polygon:
      for (std::size_t i = 0; i < vertices.size(); ++i) {
        if (cross(vertices[i], vertices[(i + 1) % vertices.size()], p) < kZero) return false;
      }
      return true;
  }
  return false;
}

Region region_boundary(const ExtExponent& domain, const ExtExponent& range, Side) {
  Region region;
  region.constraint = side_constraint(domain, range);
  std::vector<RationalPoint> poly{{Rational(0), Rational(0)},
                                  {Rational(1), Rational(0)},
                                  {Rational(1), Rational(1)},
                                  {Rational(0), Rational(1)}};
  poly = clip(poly, {Rational(1), Rational(1), region.constraint.sum_bound});
  poly = clip(poly, {Rational(0), Rational(1), region.constraint.u4_lower});
  region.vertices = simplify(poly);
  // Start from the lowest vertex, leftmost on ties.
  const auto first = std::min_element(region.vertices.begin(), region.vertices.end(),
                                      [](const RationalPoint& a, const RationalPoint& b) {
                                        return a.u4 != b.u4 ? a.u4 < b.u4 : a.u3 < b.u3;
                                      });
  std::rotate(region.vertices.begin(), first, region.vertices.end());
  switch (region.vertices.size()) {
    case 0: region.shape = Region::Shape::empty; break;
    case 1: region.shape = Region::Shape::point; break;
    case 2: region.shape = Region::Shape::segment; break;
    default: region.shape = Region::Shape::polygon; break;
  }
  return region;
}

LpCase lp_case_conditions(const ExtExponent& p, const ExtExponent& q) {
  const ExtExponent two = ExtExponent::from_value(Rational(2));
  const Rational up = p.reciprocal();
  const Rational uq = q.reciprocal();
  const Rational upc = p.conjugate_reciprocal();
  const Rational uqc = q.conjugate_reciprocal();
  const auto constraint = [](const Rational& a, const Rational& b) {
    return SideConstraint{a + b, max_of(a, b)};
  };
  LpCase c{};
  c.p_side = constraint(upc, uq);
  if (p <= two && q <= two) {
    c.branch = LpBranch::both_at_most_2;
    c.tag = "a";
    c.q_side = constraint(up, uq);
  } else if (p <= two && two <= q) {
    c.branch = LpBranch::p_at_most_2_at_most_q;
    c.tag = "b";
    c.q_side = constraint(up, uqc);
  } else if (two <= p && two <= q) {
    c.branch = LpBranch::both_at_least_2;
    c.tag = "c";
    c.q_side = constraint(upc, uqc);
  } else {
    c.branch = LpBranch::q_at_most_2_at_most_p;
    c.tag = "d";
    c.q_side = constraint(upc, uq);
  }
  return c;
}

}  // namespace phasemod
