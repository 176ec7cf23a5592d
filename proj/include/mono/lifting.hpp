#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "mono/algebra.hpp"
#include "mono/perm.hpp"

namespace mono {

// One leg of a path in the value sphere. Legs are evaluated projectively as
// (mu(s), nu(s)) with the value w = mu/nu, so a leg may start or end at
// infinity (the ray kinds).
struct PathLeg {
  enum class Kind { Segment, Arc, RayOut, RayIn };
  Kind kind = Kind::Segment;
  cpx a{0}, dir{0};        // Segment: endpoints a -> dir; rays: finite end a, direction dir
  cpx center{0};           // Arc
  double radius = 0, theta0 = 0, dtheta = 0;

  static PathLeg segment(cpx from, cpx to);
  static PathLeg arc(cpx center, double radius, double theta0, double dtheta);
  static PathLeg ray_out(cpx from, cpx direction);  // from -> infinity
  static PathLeg ray_in(cpx to, cpx direction);     // infinity -> to

  std::pair<cpx, cpx> value(double s) const;  // (mu, nu), max modulus 1
  SpherePt point(double s) const;
  SpherePt start() const { return point(0.0); }
  SpherePt end() const { return point(1.0); }
  double dist_to(cpx v) const;  // euclidean distance from the leg to v
  double max_abs() const;       // sup |w| along the leg (huge for rays)
};

using Route = std::vector<PathLeg>;

Route segment_route(cpx from, cpx to);
Route arc_route(cpx center, double radius, double theta0, double dtheta);
Route ray_route(cpx from, cpx direction);

SpherePt route_start(const Route& r);
SpherePt route_end(const Route& r);

// Throws PathTooCloseToCriticalValue if the route passes within `clearance`
// of any forbidden value (callers exclude the intended terminal value).
void validate_route(const Route& r, const std::vector<SpherePt>& forbidden,
                    double clearance);

struct LiftOpts {
  Tolerances tol;
  bool record_trace = false;
  int max_newton = 8;
  double h0 = 1.0 / 64;
  double h_min = 1e-12;
  double h_max = 1.0 / 32;
  double dz_factor = 0.4;           // step cap: fraction of distance to a critical point
  std::vector<SpherePt> crit;       // critical points of f; computed when empty
};

struct LiftResult {
  SpherePt end;
  std::vector<std::pair<double, SpherePt>> trace;
};

// Lift the route through f by continuation starting from z0 over the route's
// start value. With stop_short the lift halts at parameter 1 - 1e-6, used
// when the terminal value is critical.
LiftResult lift_path(const RationalMap& f, const Route& route, SpherePt z0,
                     bool stop_short = false, const LiftOpts& opt = {});

// Partition of the fiber labels over the route start by the connected
// component of the preimage of the route (equivalently by the endpoint that
// each lift runs into). groups[j] collects source labels reaching target
// point j; its size must equal the local multiplicity there.
struct ArcPartition {
  Fiber source, target;
  std::vector<std::vector<int>> groups;
};

ArcPartition arc_component_partition(const RationalMap& f, const Fiber& source,
                                     const Route& route, LiftOpts opt = {});

// Monodromy permutation of the fiber labels along a closed loop.
Perm loop_monodromy(const RationalMap& f, const Fiber& fiber, const Route& loop,
                    LiftOpts opt = {});

struct MonodromyData {
  SpherePt base;
  Fiber fiber;
  std::vector<SpherePt> values;  // finite critical values, canonical order
  std::vector<Perm> perms;       // aligned with values
  std::vector<Route> loops;      // the generator loops, aligned
  Perm rho_inf;                  // inverse of the angle-ordered product
  bool inf_is_value = false;     // infinity is a critical value of f
};

// Standard generators: one small circle around each finite critical value,
// reached by a corridor from the base point, plus the derived loop around
// infinity.
MonodromyData standard_generators(const RationalMap& f,
                                  std::optional<cpx> base = std::nullopt,
                                  Orientation orient = Orientation::CCW,
                                  LiftOpts opt = {});

// Group generated by the finite-value permutations, named rho(<value>).
PermGroup monodromy_group(const MonodromyData& md,
                          size_t order_bound = 10000000);

// A circle through b enclosing every finite critical value (with a radial
// corridor when b sits too close to them).
Route inf_loop_route(cpx b, const std::vector<cpx>& finite_values,
                     Orientation orient = Orientation::CCW);

// Deterministic base point choice: a point on a ring around the critical
// values with a clean simple fiber.
SpherePt auto_base(const RationalMap& f, const Tolerances& tol = {});

// Pseudo-random relabeling of a fiber, driven by the seed (verdicts must not
// depend on label order; used to exercise that).
void shuffle_fiber_labels(Fiber& fb, uint64_t seed);

}  // namespace mono
