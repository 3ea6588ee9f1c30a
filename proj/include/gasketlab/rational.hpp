#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace gasketlab {

/// Exact rational, always kept in lowest terms.
using Frac = mpq_class;

/// n/d in lowest terms. mpq_class(n, d) alone does not reduce, and
/// comparisons on unreduced values are wrong.
inline Frac make_frac(long n, long d) {
  Frac f(n, d);
  f.canonicalize();
  return f;
}

/// Parses "n", "-n" or "n/d" (d > 0 after sign handling).
inline Frac parse_frac(std::string_view text) {
  std::string s(text);
  const auto first = s.find_first_not_of(" \t");
  const auto last = s.find_last_not_of(" \t");
  if (first == std::string::npos) throw std::invalid_argument("empty rational");
  s = s.substr(first, last - first + 1);
  auto digits = [](std::string_view part, bool allow_sign) {
    if (!part.empty() && allow_sign && (part.front() == '-' || part.front() == '+')) part.remove_prefix(1);
    if (part.empty()) return false;
    for (char c : part) {
      if (c < '0' || c > '9') return false;
    }
    return true;
  };
  const auto slash = s.find('/');
  std::string_view num = std::string_view(s).substr(0, slash);
  std::string_view den = slash == std::string::npos ? std::string_view("1")
                                                     : std::string_view(s).substr(slash + 1);
  if (!digits(num, true) || !digits(den, false)) {
    throw std::invalid_argument("malformed rational '" + s + "'");
  }
  Frac out;
  mpz_class n(std::string(num.front() == '+' ? num.substr(1) : num), 10);
  mpz_class d(std::string(den), 10);
  if (d == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
  out = Frac(n, d);
  out.canonicalize();
  return out;
}

inline std::string to_string(const Frac& f) { return f.get_str(); }

/// A point in the oblique basis {(1,0), ω}, ω = (1/2, √3/2).
struct ObliquePoint {
  Frac p;
  Frac q;

  friend bool operator==(const ObliquePoint& a, const ObliquePoint& b) { return a.p == b.p && a.q == b.q; }
  friend bool operator!=(const ObliquePoint& a, const ObliquePoint& b) { return !(a == b); }
  friend bool operator<(const ObliquePoint& a, const ObliquePoint& b) {
    if (a.p != b.p) return a.p < b.p;
    return a.q < b.q;
  }
};

/// Euclidean inner product of two oblique vectors.
inline Frac dot(const ObliquePoint& u, const ObliquePoint& v) {
  Frac out = u.p * v.p + u.q * v.q + (u.p * v.q + u.q * v.p) / 2;
  return out;
}

inline ObliquePoint operator-(const ObliquePoint& a, const ObliquePoint& b) { return {a.p - b.p, a.q - b.q}; }
inline ObliquePoint operator+(const ObliquePoint& a, const ObliquePoint& b) { return {a.p + b.p, a.q + b.q}; }
inline ObliquePoint operator*(const Frac& s, const ObliquePoint& a) { return {s * a.p, s * a.q}; }

/// Squared Euclidean distance; rational because (Δp + Δq/2)² + 3Δq²/4 is.
inline Frac sq_dist(const ObliquePoint& a, const ObliquePoint& b) {
  const ObliquePoint d = a - b;
  return dot(d, d);
}

/// Cartesian image, for output only.
inline std::pair<double, double> cartesian(const ObliquePoint& z) {
  const double p = z.p.get_d();
  const double q = z.q.get_d();
  return {p + q / 2.0, q * 0.8660254037844386};
}

inline std::string to_string(const ObliquePoint& z) {
  return "(" + z.p.get_str() + ", " + z.q.get_str() + ")";
}

}  // namespace gasketlab
