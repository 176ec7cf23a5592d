#pragma once

#include <complex>
#include <cstdint>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace mono {

using cpx = std::complex<double>;

inline constexpr double PI = 3.14159265358979323846;

// A point on the Riemann sphere: a finite complex number or the point at infinity.
struct SpherePt {
  cpx z{0.0, 0.0};
  bool inf = false;

  SpherePt() = default;
  SpherePt(cpx v) : z(v) {}
  SpherePt(double re, double im) : z(re, im) {}
  static SpherePt infinity() {
    SpherePt p;
    p.inf = true;
    return p;
  }
  bool is_inf() const { return inf; }
};

inline bool operator==(const SpherePt& a, const SpherePt& b) {
  if (a.inf || b.inf) return a.inf == b.inf;
  return a.z == b.z;
}

// Chordal metric on the sphere, diameter 2.
inline double chordal(const SpherePt& a, const SpherePt& b) {
  if (a.inf && b.inf) return 0.0;
  if (a.inf) return 2.0 / std::sqrt(1.0 + std::norm(b.z));
  if (b.inf) return 2.0 / std::sqrt(1.0 + std::norm(a.z));
  return 2.0 * std::abs(a.z - b.z) /
         std::sqrt((1.0 + std::norm(a.z)) * (1.0 + std::norm(b.z)));
}

// Canonical display/label order for sphere points: infinity first, then by
// descending real part, ties by descending imaginary part.
inline bool sphere_less(const SpherePt& a, const SpherePt& b) {
  if (a.inf != b.inf) return a.inf;
  if (a.inf) return false;
  if (a.z.real() != b.z.real()) return a.z.real() > b.z.real();
  return a.z.imag() > b.z.imag();
}

struct Tolerances {
  double root_residual = 1e-12;  // relative residual bound for accepted roots
  double cluster = 1e-7;         // merge radius for root clusters, scaled by 1+|r|
  double tracking = 1e-10;       // corrector residual during path lifting
  double clearance = 1e-4;       // minimal distance of a path to forbidden values
};

// Error carrying a stable machine-readable code next to the human message.
class CalcError : public std::runtime_error {
 public:
  CalcError(std::string code, const std::string& msg)
      : std::runtime_error(code + ": " + msg), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

[[noreturn]] inline void fail(const std::string& code, const std::string& msg) {
  throw CalcError(code, msg);
}

enum class Orientation { CCW, CW };

struct Options {
  Tolerances tol;
  uint64_t seed = 12345;
  Orientation orientation = Orientation::CCW;
  uint64_t label_shuffle = 0;  // nonzero: pseudo-randomly permute fiber labels (testing aid)
};

// splitmix64 step, used to combine seeds deterministically.
inline uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::string fmt_num(double x);
std::string fmt_cpx(cpx z);
std::string fmt_pt(const SpherePt& p);

}  // namespace mono
