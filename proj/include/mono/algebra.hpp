#pragma once

#include <utility>
#include <vector>

#include "mono/types.hpp"

namespace mono {

// Dense polynomial over C, coefficients in ascending degree order.
class Poly {
 public:
  Poly() : c_{} {}
  explicit Poly(std::vector<cpx> coeffs) : c_(std::move(coeffs)) { trim(); }
  static Poly constant(cpx v) { return Poly({v}); }
  static Poly var() { return Poly({cpx(0), cpx(1)}); }
  static Poly from_roots(const std::vector<cpx>& roots, cpx lead = cpx(1));

  // degree of the zero polynomial is -1
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<cpx>& coeffs() const { return c_; }
  cpx coeff(int i) const {
    return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[i] : cpx(0);
  }
  cpx lead() const { return c_.empty() ? cpx(0) : c_.back(); }

  cpx operator()(cpx z) const;
  std::pair<cpx, cpx> eval_d(cpx z) const;  // (value, derivative)
  Poly derivative() const;
  // z^d p(1/z) for d = degree(); the coefficient vector reversed.
  Poly reversed() const;
  double norm1() const;

  Poly operator-() const;
  Poly& operator*=(cpx s);
  Poly pow(int k) const;
  // drop leading coefficients below rel_eps * max |c_i|
  Poly pruned(double rel_eps) const;

  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(cpx s, Poly p) {
    p *= s;
    return p;
  }

 private:
  void trim();
  std::vector<cpx> c_;
};

struct RootCluster {
  cpx root;
  int multiplicity;
};

// All complex roots of p, with nearby numerical roots merged into multiple
// roots. Clusters of radius tol.cluster*(1+|r|) count as one root. Throws
// NonConvergence if no restart attains the residual bound.
std::vector<RootCluster> poly_roots(const Poly& p, const Tolerances& tol = {},
                                    uint64_t seed = 0);

// Rational map num/den on the Riemann sphere. The constructor only prunes and
// rejects degenerate input; use normalized() to cancel common roots.
class RationalMap {
 public:
  RationalMap(Poly num, Poly den);
  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  int degree() const { return std::max(num_.degree(), den_.degree()); }

  SpherePt eval(const SpherePt& z) const;
  // numerator of the derivative: num' * den - num * den'
  Poly wronskian() const;

 private:
  Poly num_, den_;
};

struct CriticalPoint {
  SpherePt point;
  int local_degree;  // >= 2
};

struct CriticalPortrait {
  std::vector<CriticalPoint> points;  // canonical sphere order
  std::vector<SpherePt> values;       // distinct critical values, same order
};

CriticalPortrait critical_portrait(const RationalMap& f,
                                   const Tolerances& tol = {},
                                   uint64_t seed = 0);

// Solved fiber f^{-1}(w). Points carry multiplicities (local degrees); labels
// are the indices into points, assigned in canonical sphere order.
struct Fiber {
  SpherePt base;
  std::vector<SpherePt> points;
  std::vector<int> mult;
  int size() const { return static_cast<int>(points.size()); }
  // index of the point nearest to q in the chordal metric
  int nearest(const SpherePt& q) const;
};

Fiber fiber_solve(const RationalMap& f, const SpherePt& w,
                  const Tolerances& tol = {}, uint64_t seed = 0);

// outer(inner), reduced to lowest terms. Throws DegreeOverflow if the product
// of degrees exceeds max_degree.
RationalMap compose(const RationalMap& outer, const RationalMap& inner,
                    const Tolerances& tol = {}, int max_degree = 64);

// Cancel common roots (within cluster radius) and rescale: leading denominator
// coefficient 1, or monic numerator when the denominator is constant.
RationalMap normalized(const RationalMap& f, const Tolerances& tol = {},
                       uint64_t seed = 0);

// True if numerator and denominator have no roots closer than 1e-8 apart.
bool coprime(const RationalMap& f, const Tolerances& tol = {});

}  // namespace mono
