#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mono/lifting.hpp"

using namespace mono;

namespace {

RationalMap cubic() { return RationalMap(Poly({0, 0, 3, -2}), Poly({1})); }
RationalMap map_s() { return RationalMap(Poly({0, 0, 0, 2, -1}), Poly({-1, 2})); }
RationalMap map_r() {
  Poly num({0.421875, 0, -0.84375, 0, 0.140625, 0, 0.4375, 0, -0.046875, 0,
            -0.09375, 0, -0.015625});
  return RationalMap(num, Poly({0, 0, 0, 0, 0, 0, 1}));
}

Route reversed(const Route& r) {
  Route out;
  for (auto it = r.rbegin(); it != r.rend(); ++it) {
    switch (it->kind) {
      case PathLeg::Kind::Segment:
        out.push_back(PathLeg::segment(it->dir, it->a));
        break;
      case PathLeg::Kind::Arc:
        out.push_back(PathLeg::arc(it->center, it->radius,
                                   it->theta0 + it->dtheta, -it->dtheta));
        break;
      case PathLeg::Kind::RayOut:
        out.push_back(PathLeg::ray_in(it->a, it->dir));
        break;
      case PathLeg::Kind::RayIn:
        out.push_back(PathLeg::ray_out(it->a, it->dir));
        break;
    }
  }
  return out;
}

std::multiset<int> cycle_type(const Perm& p) {
  std::multiset<int> out;
  std::vector<char> seen(p.size(), 0);
  for (int i = 0; i < p.size(); ++i) {
    if (seen[i]) continue;
    int len = 0, j = i;
    while (!seen[j]) {
      seen[j] = 1;
      j = p(j);
      ++len;
    }
    out.insert(len);
  }
  return out;
}

}  // namespace

TEST_CASE("leg geometry") {
  auto seg = PathLeg::segment(cpx(0), cpx(1));
  CHECK(seg.dist_to(cpx(0.5, 0.7)) == doctest::Approx(0.7));
  CHECK(seg.dist_to(cpx(2, 0)) == doctest::Approx(1.0));
  auto arc = PathLeg::arc(cpx(0), 1.0, 0.0, PI / 2);
  CHECK(arc.dist_to(cpx(2, 0)) == doctest::Approx(1.0));
  CHECK(arc.dist_to(cpx(-2, 0)) == doctest::Approx(std::sqrt(5.0)));
  CHECK(chordal(arc.end(), SpherePt(0, 1)) <= 1e-12);
  auto ray = PathLeg::ray_out(cpx(0.5), cpx(0, -1));
  CHECK(ray.end().is_inf());
  CHECK(ray.dist_to(cpx(1, 0)) == doctest::Approx(0.5));
}

TEST_CASE("segment lift of the squaring map") {
  RationalMap f(Poly({0, 0, 1}), Poly({1}));
  auto r1 = lift_path(f, segment_route(cpx(1), cpx(4)), SpherePt(1, 0));
  CHECK(chordal(r1.end, SpherePt(2, 0)) <= 1e-8);
  auto r2 = lift_path(f, segment_route(cpx(1), cpx(4)), SpherePt(-1, 0));
  CHECK(chordal(r2.end, SpherePt(-2, 0)) <= 1e-8);
}

TEST_CASE("trace recording") {
  RationalMap f(Poly({0, 0, 1}), Poly({1}));
  LiftOpts opt;
  opt.record_trace = true;
  auto r = lift_path(f, segment_route(cpx(1), cpx(0, 1)), SpherePt(1, 0), false,
                     opt);
  REQUIRE(r.trace.size() > 2);
  for (size_t i = 1; i < r.trace.size(); ++i)
    CHECK(r.trace[i].first > r.trace[i - 1].first);
  CHECK(r.trace.front().first == 0.0);
  CHECK(r.trace.back().first == 1.0);
  CHECK(chordal(r.trace.back().second, r.end) == 0.0);
}

TEST_CASE("power map generators and the loop at infinity") {
  RationalMap f(Poly({0, 0, 0, 0, 0, 1}), Poly({1}));  // z^5
  auto md = standard_generators(f);
  REQUIRE(md.values.size() == 1);
  CHECK(md.inf_is_value);
  CHECK(cycle_type(md.perms[0]) == std::multiset<int>({5}));
  CHECK(md.rho_inf == md.perms[0].inverse());
  // cross-check against an explicit big circle
  auto big = loop_monodromy(f, md.fiber, inf_loop_route(md.base.z, {cpx(0)}));
  CHECK(md.rho_inf == big.inverse());
}

TEST_CASE("cubic monodromy group and orientation") {
  auto f = cubic();
  auto md = standard_generators(f);
  REQUIRE(md.values.size() == 2);
  CHECK(cycle_type(md.perms[0]) == std::multiset<int>({1, 2}));
  CHECK(cycle_type(md.perms[1]) == std::multiset<int>({1, 2}));
  CHECK(cycle_type(md.rho_inf) == std::multiset<int>({3}));
  auto g = monodromy_group(md);
  CHECK(g.order() == 6);

  std::vector<cpx> vals = {md.values[0].z, md.values[1].z};
  auto big = loop_monodromy(f, md.fiber, inf_loop_route(md.base.z, vals));
  CHECK(md.rho_inf == big.inverse());

  // clockwise: generators invert, and the derived loop still matches
  auto mdc = standard_generators(f, md.base.z, Orientation::CW);
  CHECK(mdc.perms[0] == md.perms[0].inverse());
  CHECK(mdc.perms[1] == md.perms[1].inverse());
  auto bigc = loop_monodromy(
      f, md.fiber, inf_loop_route(md.base.z, vals, Orientation::CW));
  CHECK(mdc.rho_inf == bigc.inverse());
}

TEST_CASE("degree-4 map monodromy") {
  auto f = map_s();
  auto md = standard_generators(f);
  REQUIRE(md.values.size() == 2);
  CHECK(md.inf_is_value);
  CHECK(cycle_type(md.perms[0]) == std::multiset<int>({1, 3}));
  CHECK(cycle_type(md.perms[1]) == std::multiset<int>({1, 3}));
  CHECK(cycle_type(md.rho_inf) == std::multiset<int>({1, 3}));
  CHECK(monodromy_group(md).order() == 12);
  std::vector<cpx> vals = {md.values[0].z, md.values[1].z};
  auto big = loop_monodromy(f, md.fiber, inf_loop_route(md.base.z, vals));
  CHECK(md.rho_inf == big.inverse());
}

TEST_CASE("degree-12 map generator cycle structures") {
  auto f = map_r();
  auto md = standard_generators(f, cpx(0, 1));  // base at i
  REQUIRE(md.values.size() == 2);
  // values in canonical order: 1 first, then 0
  CHECK(std::abs(md.values[0].z - cpx(1)) <= 1e-8);
  CHECK(std::abs(md.values[1].z - cpx(0)) <= 1e-8);
  CHECK(cycle_type(md.perms[1]) == std::multiset<int>({3, 3, 3, 3}));
  CHECK(cycle_type(md.perms[0]) ==
        std::multiset<int>({1, 1, 1, 1, 2, 2, 2, 2}));
  CHECK(cycle_type(md.rho_inf) == std::multiset<int>({6, 6}));
  CHECK(md.rho_inf.power(6).is_identity());
  std::vector<cpx> vals = {cpx(1), cpx(0)};
  auto big = loop_monodromy(f, md.fiber, inf_loop_route(md.base.z, vals));
  CHECK(md.rho_inf == big.inverse());
}

TEST_CASE("loops round trip to the identity") {
  auto f = map_s();
  auto md = standard_generators(f);
  for (size_t i = 0; i < md.loops.size(); ++i) {
    auto back = loop_monodromy(f, md.fiber, reversed(md.loops[i]));
    CHECK(back == md.perms[i].inverse());
    CHECK(back.after(md.perms[i]).is_identity());
  }
}

TEST_CASE("arc partition of the cubic to a critical value") {
  auto f = cubic();
  auto src = fiber_solve(f, SpherePt(0.5, 0.0));
  auto ap = arc_component_partition(f, src, segment_route(cpx(0.5), cpx(1)));
  REQUIRE(ap.target.size() == 2);
  CHECK(ap.target.mult[0] == 2);  // z = 1
  CHECK(ap.target.mult[1] == 1);  // z = -1/2
  // the lift starting at (1-sqrt(3))/2 runs into -1/2, the others into 1
  CHECK(ap.groups[0] == std::vector<int>({0, 1}));
  CHECK(ap.groups[1] == std::vector<int>({2}));
}

TEST_CASE("arc partition of the cubic to infinity") {
  auto f = cubic();
  auto src = fiber_solve(f, SpherePt(0.5, 0.0));
  auto ap = arc_component_partition(
      f, src, ray_route(cpx(0.5), cpx(0, -1)));
  REQUIRE(ap.target.size() == 1);
  CHECK(ap.target.points[0].is_inf());
  CHECK(ap.groups[0].size() == 3);
}

TEST_CASE("routes too close to critical values are rejected") {
  auto f = cubic();
  auto src = fiber_solve(f, SpherePt(0.5, 0.0));
  // passes straight through the critical value 1
  CHECK_THROWS_WITH_AS(
      arc_component_partition(f, src, segment_route(cpx(0.5), cpx(1.5))),
      doctest::Contains("PathTooCloseToCriticalValue"), CalcError);
  // a ray through the critical value 1 as well
  CHECK_THROWS_WITH_AS(
      arc_component_partition(f, src, ray_route(cpx(0.5), cpx(1))),
      doctest::Contains("PathTooCloseToCriticalValue"), CalcError);
}

TEST_CASE("label shuffling is deterministic and seed zero is off") {
  auto f = cubic();
  auto fb = fiber_solve(f, SpherePt(0.5, 0.0));
  Fiber a = fb, b = fb, c = fb;
  shuffle_fiber_labels(a, 7);
  shuffle_fiber_labels(b, 7);
  shuffle_fiber_labels(c, 0);
  for (int i = 0; i < fb.size(); ++i) {
    CHECK(chordal(a.points[i], b.points[i]) == 0.0);
    CHECK(chordal(c.points[i], fb.points[i]) == 0.0);
  }
  Fiber d = fb;
  shuffle_fiber_labels(d, 8);
  bool moved = false;
  for (int i = 0; i < fb.size(); ++i)
    moved = moved || !(d.points[i] == fb.points[i]);
  CHECK(moved);
}
