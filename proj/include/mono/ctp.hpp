#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mono/algebra.hpp"
#include "mono/lifting.hpp"

namespace mono {

// Membership radius for point identity (marked point == fiber point,
// image == critical value, ...), in the chordal metric.
inline constexpr double kMembershipTol = 1e-6;

inline bool same_sphere_pt(const SpherePt& a, const SpherePt& b,
                           double eps = kMembershipTol) {
  return chordal(a, b) < eps;
}

enum class MapKind { Trivial, Branched, Regular, Mixing };

std::string to_string(MapKind k);

// A rational map together with a marked set A. Everything else is derived:
// the postcritical frame B = f(A) ∪ V_f, the regular subset E of marked
// points whose images avoid the critical values, and the coarse kind.
struct MarkedMap {
  RationalMap f;
  std::vector<SpherePt> marked;          // A, in input order
  std::vector<SpherePt> images;          // f(marked[i]), aligned
  std::vector<SpherePt> critvals;        // V_f, canonical order
  std::vector<SpherePt> post;            // B, canonical order
  std::vector<int> regular_idx;          // indices into marked forming E
  std::vector<SpherePt> regular_values;  // distinct f(E) values, canonical order
  MapKind kind = MapKind::Trivial;

  bool is_marked_point(const SpherePt& p) const;
};

MarkedMap classify(const RationalMap& f, const std::vector<SpherePt>& marked,
                   const Tolerances& tol = {});

enum class CtpVerdict { CTP, NOT_CTP, TRIVIALLY_CTP, UNDECIDED };
enum class CtpMethod { ThreePoint, FastPath, FiniteCheck, OutOfScope };

std::string to_string(CtpVerdict v);
std::string to_string(CtpMethod m);

// Certificate for a NOT_CTP verdict: with the marked labels over `base`
// moved to the set F = `labels`, the component of the lifted arc base->value
// that terminates at `branch` carries `count` marked points (the terminal
// point included when it is marked). The verdict is negative exactly when
// 1 < count < #A - 1.
struct CtpWitness {
  SpherePt base;
  SpherePt value;
  SpherePt branch;
  std::vector<int> labels;  // ascending
  int count = 0;
};

struct CtpReport {
  CtpVerdict verdict = CtpVerdict::UNDECIDED;
  CtpMethod method = CtpMethod::OutOfScope;
  std::optional<CtpWitness> witness;
  long orbit_size = 0;

  // Stable text form: one "key: value" line each for verdict, method,
  // witness (label sets 1-based) and orbit_size.
  std::string text() const;
};

// Decide the constant-pullback property. Complete for #B = 3 and for #B = 4
// with E nonempty; #B = 4 with E empty is reported UNDECIDED, and #B >= 5
// raises UnsupportedConfiguration.
CtpReport ctp_decide(const MarkedMap& m, const Options& opt = {});

// Monodromy generators at `base`, with the label shuffle from `opt` already
// applied (permutations conjugated to the shuffled labels). Shared by the
// decision procedure, the stabilizer reports and the CLI.
MonodromyData generators_at(const RationalMap& f, cpx base,
                            const Options& opt);

// A route from b to v (possibly infinite) whose interior keeps clearance
// from every critical value except v itself: the straight segment or ray
// when it is clear, otherwise a bent two-leg detour.
Route route_to_value(cpx b, const SpherePt& v,
                     const std::vector<SpherePt>& critvals,
                     const Tolerances& tol = {});

}  // namespace mono
