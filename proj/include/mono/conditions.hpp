#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "mono/ctp.hpp"

namespace mono {

// Cyclic group of affine maps lambda with f(lambda(z)) = f(z). Always a
// rotation group about a single center; order 1 means only the identity,
// with the center fixed to 0 by convention.
struct SymmetryGroup {
  int order = 1;
  cpx center{0.0, 0.0};
  cpx zeta{1.0, 0.0};  // primitive root; generator z -> zeta*(z-center)+center
  std::string text() const;
};

// All affine symmetries of f, found by matching fiber points over a generic
// base and filtering candidates by coefficient comparison of f∘λ against f.
// Throws GenericFiberUnavailable when no usable fiber is found.
SymmetryGroup affine_symmetries(const RationalMap& f, const Options& opt = {});

// Inner power factor f = g ∘ (z-center)^d.
struct PowerFactor {
  RationalMap g;
  int d = 0;
  cpx center{0.0, 0.0};
};

// Largest d >= 2 such that e_points is a single orbit of the rotation by
// e^{2πi/d} about the symmetry center and f = g∘(z-c)^d for a rational g
// recovered by interpolation. Absence is a value, not an error.
std::optional<PowerFactor> power_factor(const RationalMap& f,
                                        const std::vector<SpherePt>& e_points,
                                        const Options& opt = {});

enum class McVerdict { Satisfied, NotSatisfied, OutOfScope };
std::string to_string(McVerdict v);

// Restricted McMullen check: "satisfied-via-power-map" needs a power factor
// whose quotient sends the marked set (plus the power map's own critical
// values) to exactly three points. A missing factor alone is never a global
// negative; the verdict is only definitive when the stabilizer comparison
// rules the condition out.
struct McReport {
  McVerdict verdict = McVerdict::OutOfScope;
  bool definitive = false;
  std::optional<PowerFactor> factor;
  std::string text() const;
};

McReport mcmullen_verdict(const MarkedMap& m, const Options& opt = {});

// Stabilizer survey of the monodromy action: per-point stabilizers of the
// regular marked points, the setwise and pointwise stabilizers of their label
// set, and the stabilizer of the full marked label set (marked points off the
// fiber do not move and are ignored).
struct StabReport {
  long group_order = 0;
  std::vector<int> e_labels;            // fiber labels of the regular points
  std::vector<long> stab_point_orders;  // |Stab(a)| per label, same order
  long stab_set_order = 0;              // |Stab(E)| (setwise)
  long stab_star_order = 0;             // |Stab*(E)| (pointwise)
  long marked_set_order = 0;            // |Stab(A ∩ fiber)| (setwise)
  bool pointwise_equal = false;       // Stab(a) = Stab*(E) for every a
  bool nonempty_difference = false;   // Stab(a) \ Stab*(E) != {} for every a
  bool setwise_containment = false;   // Stab(a) ⊆ Stab(A) for every a
  bool intersection_identity = false; // Stab*(E) = Stab(a) ∩ Stab(E) for all a
  int exponent = 0;  // least k with τ^k ∈ Stab*(E) for all τ ∈ ∪ Stab(a)
  std::string text() const;
};

StabReport stab_report(const RationalMap& f,
                       const std::vector<SpherePt>& marked,
                       const std::vector<SpherePt>& e_points,
                       const Options& opt = {});

// Cross-ratio ((z3-z0)(z2-z1)) / ((z2-z0)(z3-z1)) with term-wise limits when
// one argument is infinity; the convention makes chi(0,inf,a,w) = w/a.
// Throws DegenerateQuadruple on coincident points.
cpx cross_ratio(const SpherePt& z0, const SpherePt& z1, const SpherePt& z2,
                const SpherePt& z3);

// The three fiber branches over b = k^3 near i*sqrt(3) for the degree-12
// mixing example, in closed radical form, with the square-root branches
// resolved by cross-validation against the numerically lifted fiber. The
// residual is |a1 + zeta*a2 + zeta^2*a3| for zeta = e^{2πi/3}, which the
// closed form makes vanish identically.
struct BranchTriple {
  std::array<cpx, 3> a;
  double residual = 0.0;
};

BranchTriple branch_triple(cpx k, const Options& opt = {});
double branch_sum_residual(cpx k, const Options& opt = {});

}  // namespace mono
