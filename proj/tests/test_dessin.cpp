#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include "mono/dessin.hpp"

using namespace mono;

namespace {

Perm from_cycles(int n, const std::vector<std::vector<int>>& cyc) {
  Perm p = Perm::identity(n);
  for (auto& c : cyc)
    for (size_t i = 0; i < c.size(); ++i)
      p.img[c[i] - 1] = c[(i + 1) % c.size()] - 1;
  return p;
}

bool near(const SpherePt& p, cpx w, double eps = 1e-8) {
  return !p.inf && std::abs(p.z - w) < eps;
}

// h(z) = 3z^2 - 2z^3, critical values 0 and 1; the tree is a path
RationalMap cubic() {
  return RationalMap(Poly({0, 0, 3, -2}), Poly::constant(1));
}

// z^6 + z^3, critical values -1/4 and 0; three legs joined at the origin
RationalMap spider() {
  return RationalMap(Poly({0, 0, 0, 1, 0, 0, 1}), Poly::constant(1));
}

std::vector<int> sorted_edges_at(const Dessin& T, int v) {
  std::vector<int> e = T.verts[v].edges;
  std::sort(e.begin(), e.end());
  return e;
}

// independent re-statement of the three settling conditions
bool settles(const Dessin& T, const PermGroup& G, int e, int ep,
             const Perm& tau) {
  int te = tau(e), tep = tau(ep);
  int nrm = G.norm(tau);
  if (nrm < 0) return false;
  Subtree track_e = minimal_subtree(T, {TreeItem::edge(e), TreeItem::edge(te)});
  if (track_e.size() != nrm + 1) return false;
  int c = T.shared_vertex(te, tep);
  if (c < 0) return false;
  Subtree track_ep =
      minimal_subtree(T, {TreeItem::edge(ep), TreeItem::edge(tep)});
  std::vector<int> common_e, common_v;
  std::set_intersection(track_e.edges.begin(), track_e.edges.end(),
                        track_ep.edges.begin(), track_ep.edges.end(),
                        std::back_inserter(common_e));
  std::set_intersection(track_e.verts.begin(), track_e.verts.end(),
                        track_ep.verts.begin(), track_ep.verts.end(),
                        std::back_inserter(common_v));
  return common_e.empty() && common_v == std::vector<int>{c};
}

// every group element that settles the ordered pair
std::vector<Perm> all_witnesses(const Dessin& T, const PermGroup& G, int e,
                                int ep) {
  std::vector<Perm> out;
  for (size_t i = 0; i < G.order(); i++)
    if (settles(T, G, e, ep, G.element(i))) out.push_back(G.element(i));
  return out;
}

// chase must succeed exactly when a witness exists, and deliver one
void check_chase(const Dessin& T, const PermGroup& G, int e, int ep) {
  CAPTURE(e);
  CAPTURE(ep);
  bool any = !all_witnesses(T, G, e, ep).empty();
  if (!any) {
    CHECK_THROWS_AS(chase(T, G, e, ep), CalcError);
    try {
      chase(T, G, e, ep);
    } catch (const CalcError& err) {
      CHECK(std::string(err.code()) == "ChaseStalled");
    }
    return;
  }
  ChaseResult cr = chase(T, G, e, ep);
  CHECK(settles(T, G, e, ep, cr.tau));
  for (const ChaseStep& st : cr.word) {
    CHECK((st.side == 0 || st.side == 1));
    CHECK(st.power > 0);
  }
}

void check_rotation_consistency(const Dessin& T) {
  const Perm* gens[2] = {&T.rho0, &T.rho1};
  for (int i = 0; i < 2; i++) {
    int ord = gens[i]->order();
    for (int k = 1; k < ord; k++) {
      Perm p = gens[i]->power(k);
      for (int e = 0; e < T.edge_count(); e++) {
        if (p(e) != e) continue;
        int c = T.vertex_of(e, i);
        CHECK(k % T.degree(c) == 0);
        for (int e2 : T.verts[c].edges) CHECK(p(e2) == e2);
      }
    }
  }
}

}  // namespace

TEST_CASE("path tree of the cubic") {
  Dessin T = build_tree(cubic());
  CHECK(T.edge_count() == 3);
  REQUIRE(T.verts.size() == 4);
  CHECK(near(SpherePt(T.val0), 0.0));
  CHECK(near(SpherePt(T.val1), 1.0));
  CHECK(near(T.base, 0.5));

  // side 0 vertices in canonical order: 3/2 then 0; side 1: 1 then -1/2
  CHECK(near(T.verts[0].pos, 1.5));
  CHECK(near(T.verts[1].pos, 0.0));
  CHECK(near(T.verts[2].pos, 1.0));
  CHECK(near(T.verts[3].pos, -0.5));
  CHECK(T.verts[0].side == 0);
  CHECK(T.verts[1].side == 0);
  CHECK(T.verts[2].side == 1);
  CHECK(T.verts[3].side == 1);

  // fiber over 1/2 in canonical order
  REQUIRE(T.fiber.size() == 3);
  CHECK(near(T.fiber.points[0], 1.3660254037844386));
  CHECK(near(T.fiber.points[1], 0.5));
  CHECK(near(T.fiber.points[2], -0.36602540378443865));

  // the path  3/2 --e0-- 1 --e1-- 0 --e2-- -1/2
  CHECK(T.edges[0].end0 == 0);
  CHECK(T.edges[0].end1 == 2);
  CHECK(T.edges[1].end0 == 1);
  CHECK(T.edges[1].end1 == 2);
  CHECK(T.edges[2].end0 == 1);
  CHECK(T.edges[2].end1 == 3);

  CHECK(T.rho0 == from_cycles(3, {{2, 3}}));
  CHECK(T.rho1 == from_cycles(3, {{1, 2}}));
  CHECK(T.verts[1].edges == std::vector<int>{1, 2});
  CHECK(T.verts[2].edges == std::vector<int>{0, 1});
  CHECK(T.degree(0) == 1);
  CHECK(T.degree(1) == 2);
  CHECK(T.degree(2) == 2);
  CHECK(T.degree(3) == 1);

  CHECK(T.shared_vertex(0, 1) == 2);
  CHECK(T.shared_vertex(1, 2) == 1);
  CHECK(T.shared_vertex(0, 2) == -1);

  PermGroup G = tree_group(T);
  CHECK(G.order() == 6);
  check_rotation_consistency(T);
}

TEST_CASE("minimal subtrees of the cubic path") {
  Dessin T = build_tree(cubic());

  Subtree all = minimal_subtree(T, {TreeItem::edge(0), TreeItem::edge(2)});
  CHECK(all.edges == std::vector<int>{0, 1, 2});
  CHECK(all.verts == std::vector<int>{0, 1, 2, 3});
  CHECK(all.interior == std::vector<int>{1, 2});
  CHECK(all.size() == 3);

  Subtree half = minimal_subtree(T, {TreeItem::edge(0), TreeItem::edge(1)});
  CHECK(half.edges == std::vector<int>{0, 1});
  CHECK(half.verts == std::vector<int>{0, 1, 2});
  CHECK(half.interior == std::vector<int>{2});

  Subtree mixed = minimal_subtree(T, {TreeItem::vertex(1), TreeItem::edge(0)});
  CHECK(mixed.edges == std::vector<int>{0, 1});
  CHECK(mixed.size() == 2);

  Subtree lone = minimal_subtree(T, {TreeItem::vertex(0)});
  CHECK(lone.edges.empty());
  CHECK(lone.verts == std::vector<int>{0});
  CHECK(lone.interior.empty());

  Subtree single = minimal_subtree(T, {TreeItem::edge(1)});
  CHECK(single.edges == std::vector<int>{1});
  CHECK(single.verts == std::vector<int>{1, 2});
  CHECK(single.interior.empty());
}

TEST_CASE("chase along the cubic path") {
  Dessin T = build_tree(cubic());
  PermGroup G = tree_group(T);

  ChaseResult cr = chase(T, G, 0, 2);
  REQUIRE(cr.word.size() == 1);
  CHECK(cr.word[0].side == 1);
  CHECK(cr.word[0].power == 1);
  CHECK(cr.tau == T.rho1);

  // adjacent or equal pairs need no moves
  CHECK(chase(T, G, 1, 2).tau.is_identity());
  CHECK(chase(T, G, 1, 2).word.empty());
  CHECK(chase(T, G, 0, 0).tau.is_identity());

  for (int e = 0; e < 3; e++)
    for (int ep = 0; ep < 3; ep++)
      if (e != ep) check_chase(T, G, e, ep);
}

TEST_CASE("marked center on the cubic") {
  Dessin T = build_tree(cubic());
  // both edges at the vertex over the first critical value
  std::vector<int> marked{1, 2};

  PermGroup G0 = PermGroup::generate({{"rho0", T.rho0}});
  CHECK(marked_center(T, G0, marked, {}) == std::vector<int>{1});
  CHECK(marked_center(T, G0, marked, {1}) == std::vector<int>{1});
  CHECK(marked_center(T, G0, marked, {2}).empty());

  // the full group moves the pair somewhere no single vertex serves
  PermGroup G = tree_group(T);
  CHECK(marked_center(T, G, marked, {}).empty());

  // two leaf edges never share a center at all
  CHECK(marked_center(T, G0, {0, 2}, {}).empty());
}

TEST_CASE("spider tree of z^6+z^3") {
  Dessin T = build_tree(spider());
  CHECK(T.edge_count() == 6);
  REQUIRE(T.verts.size() == 7);
  CHECK(near(SpherePt(T.val0), -0.25));
  CHECK(near(SpherePt(T.val1), 0.0));
  CHECK(near(T.base, -0.125));

  // side 0: the cube roots of -1/2 (each of local degree 2)
  double r = std::cbrt(0.5);
  CHECK(near(T.verts[0].pos, std::polar(r, M_PI / 3)));
  CHECK(near(T.verts[1].pos, std::polar(r, -M_PI / 3)));
  CHECK(near(T.verts[2].pos, -r));
  // side 1: cube roots of -1, then the triple point at the origin
  CHECK(near(T.verts[3].pos, std::polar(1.0, M_PI / 3)));
  CHECK(near(T.verts[4].pos, std::polar(1.0, -M_PI / 3)));
  CHECK(near(T.verts[5].pos, 0.0));
  CHECK(near(T.verts[6].pos, -1.0));

  CHECK(T.degree(5) == 3);
  CHECK(sorted_edges_at(T, 5) == std::vector<int>{2, 3, 4});
  CHECK(T.verts[5].edges == std::vector<int>{2, 4, 3});  // rotation order
  CHECK(sorted_edges_at(T, 0) == std::vector<int>{0, 2});
  CHECK(sorted_edges_at(T, 1) == std::vector<int>{1, 3});
  CHECK(sorted_edges_at(T, 2) == std::vector<int>{4, 5});
  CHECK(T.degree(3) == 1);
  CHECK(T.degree(4) == 1);
  CHECK(T.degree(6) == 1);

  CHECK(T.rho0 == from_cycles(6, {{1, 3}, {2, 4}, {5, 6}}));
  CHECK(T.rho1 == from_cycles(6, {{3, 5, 4}}));

  // legs run radially: big fiber points sit on the outer edges
  CHECK(T.edges[0].end0 == 0);
  CHECK(T.edges[0].end1 == 3);
  CHECK(T.edges[1].end0 == 1);
  CHECK(T.edges[1].end1 == 4);
  CHECK(T.edges[2].end0 == 0);
  CHECK(T.edges[2].end1 == 5);
  CHECK(T.edges[3].end0 == 1);
  CHECK(T.edges[3].end1 == 5);
  CHECK(T.edges[4].end0 == 2);
  CHECK(T.edges[4].end1 == 5);
  CHECK(T.edges[5].end0 == 2);
  CHECK(T.edges[5].end1 == 6);

  check_rotation_consistency(T);
}

TEST_CASE("chase across the spider") {
  Dessin T = build_tree(spider());
  PermGroup G = tree_group(T);

  ChaseResult cr = chase(T, G, 0, 5);
  REQUIRE(cr.word.size() == 1);
  CHECK(cr.word[0].side == 0);
  CHECK(cr.word[0].power == 1);
  CHECK(cr.tau == T.rho0);

  ChaseResult cr2 = chase(T, G, 0, 1);
  CHECK(cr2.tau == T.rho0);

  // an outer edge paired with an inner edge of a *different* leg cannot be
  // settled by any of the 18 group elements: moving the outer edge inward
  // always lands its track on the hub, which the inner edge's track needs
  // too.  The reversed order works, so the relation is not symmetric.
  std::set<std::pair<int, int>> stuck;
  for (int e = 0; e < 6; e++)
    for (int ep = 0; ep < 6; ep++)
      if (e != ep && all_witnesses(T, G, e, ep).empty()) stuck.insert({e, ep});
  std::set<std::pair<int, int>> expect{{0, 3}, {0, 4}, {1, 2},
                                       {1, 4}, {5, 2}, {5, 3}};
  CHECK(stuck == expect);

  ChaseResult cr3 = chase(T, G, 3, 0);  // reverse of a stuck pair
  CHECK(cr3.tau == T.rho1);

  for (int e = 0; e < 6; e++)
    for (int ep = 0; ep < 6; ep++)
      if (e != ep) check_chase(T, G, e, ep);
}

TEST_CASE("marked center of the spider") {
  Dessin T = build_tree(spider());
  PermGroup G = tree_group(T);

  std::vector<int> inner{2, 3, 4};
  CHECK(marked_center(T, G, inner, {}) == std::vector<int>{5});
  CHECK(marked_center(T, G, inner, {5}) == std::vector<int>{5});
  CHECK(marked_center(T, G, inner, {3}).empty());

  // the outer triple works out to the same center
  std::vector<int> outer{0, 1, 5};
  CHECK(marked_center(T, G, outer, {}) == std::vector<int>{5});
}

TEST_CASE("chase guarantees across a family of trees") {
  std::vector<RationalMap> maps;
  maps.push_back(cubic());
  maps.push_back(spider());
  // 3z^4 - 2z^6 and (3z^2-2z^3)^2, both with critical values {0, 1}
  maps.push_back(RationalMap(Poly({0, 0, 0, 0, 3, 0, -2}), Poly::constant(1)));
  maps.push_back(RationalMap(Poly({0, 0, 0, 0, 9, -12, 4}), Poly::constant(1)));
  // degree-8 flattened Chebyshev pullback 16z^2-80z^4+128z^6-64z^8
  maps.push_back(
      RationalMap(Poly({0, 0, 16, 0, -80, 0, 128, 0, -64}), Poly::constant(1)));
  // complex critical values 0.3 and 1.3+i
  maps.push_back(RationalMap(
      Poly({0.3, 0, 3.0 * cpx(1, 1), -2.0 * cpx(1, 1)}), Poly::constant(1)));

  for (size_t mi = 0; mi < maps.size(); mi++) {
    CAPTURE(mi);
    Dessin T = build_tree(maps[mi]);
    CHECK(static_cast<int>(T.verts.size()) == T.edge_count() + 1);
    check_rotation_consistency(T);
    PermGroup G = tree_group(T);
    for (int e = 0; e < T.edge_count(); e++)
      for (int ep = 0; ep < T.edge_count(); ep++)
        if (e != ep) check_chase(T, G, e, ep);
  }
}

TEST_CASE("maps without a segment tree are rejected") {
  auto code_of = [](const RationalMap& f) {
    try {
      build_tree(f);
    } catch (const CalcError& e) {
      return std::string(e.code());
    }
    return std::string("none");
  };
  // rational, not a polynomial
  CHECK(code_of(RationalMap(Poly({0, 0, 0, 2, -1}), Poly({-1, 2}))) ==
        "NotBelyiPolynomial");
  // single finite critical value
  CHECK(code_of(RationalMap(Poly({0, 0, 0, 0, 0, 1}), Poly::constant(1))) ==
        "NotBelyiPolynomial");
  // three finite critical values
  CHECK(code_of(RationalMap(Poly({0, -1, 0, 0, 1}), Poly::constant(1))) ==
        "NotBelyiPolynomial");
  // affine
  CHECK(code_of(RationalMap(Poly({1, 2}), Poly::constant(1))) ==
        "NotBelyiPolynomial");
}

TEST_CASE("tree construction is deterministic") {
  Dessin a = build_tree(spider());
  Dessin b = build_tree(spider());
  CHECK(a.rho0 == b.rho0);
  CHECK(a.rho1 == b.rho1);
  REQUIRE(a.verts.size() == b.verts.size());
  for (size_t i = 0; i < a.verts.size(); i++) {
    CHECK(a.verts[i].edges == b.verts[i].edges);
    CHECK(std::abs(a.verts[i].pos.z - b.verts[i].pos.z) < 1e-12);
  }
  for (size_t i = 0; i < a.edges.size(); i++) {
    CHECK(a.edges[i].end0 == b.edges[i].end0);
    CHECK(a.edges[i].end1 == b.edges[i].end1);
  }
}
