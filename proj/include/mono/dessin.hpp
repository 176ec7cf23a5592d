#pragma once

#include "mono/lifting.hpp"

namespace mono {

// Planar tree T = f^{-1}(I) for a polynomial f with exactly two finite
// critical values, I the segment between them. Edges carry the labels of the
// fiber over the segment midpoint (one fiber point sits inside each edge);
// vertices are the preimages of the two values.
struct TreeVertex {
  SpherePt pos;
  int side;                // 0: preimage of val0, 1: preimage of val1
  std::vector<int> edges;  // incident edges in rotation order (monodromy cycle)
};

struct TreeEdge {
  int end0 = -1, end1 = -1;  // vertex ids on side 0 / side 1
};

struct Dessin {
  cpx val0, val1;  // finite critical values, ascending by (re, im)
  SpherePt base;   // segment midpoint carrying the edge labels
  Fiber fiber;     // label i <-> edge i
  std::vector<TreeVertex> verts;
  std::vector<TreeEdge> edges;
  Perm rho0, rho1;

  int edge_count() const { return static_cast<int>(edges.size()); }
  int vertex_of(int edge, int side) const {
    return side == 0 ? edges[edge].end0 : edges[edge].end1;
  }
  int degree(int vertex) const {
    return static_cast<int>(verts[vertex].edges.size());
  }
  // shared vertex of two distinct edges, or -1
  int shared_vertex(int e1, int e2) const;
};

Dessin build_tree(const RationalMap& f, const Tolerances& tol = {});

struct TreeItem {
  bool is_edge;
  int id;
  static TreeItem edge(int id) { return {true, id}; }
  static TreeItem vertex(int id) { return {false, id}; }
};

// Smallest closed connected subtree containing the items. size() counts
// edges; interior lists its vertices with the subtree's own leaves removed.
struct Subtree {
  std::vector<int> edges;
  std::vector<int> verts;
  std::vector<int> interior;
  int size() const { return static_cast<int>(edges.size()); }
};

Subtree minimal_subtree(const Dessin& T, const std::vector<TreeItem>& items);

// image of an edge under a permutation of the labels
inline int edge_action(const Dessin&, const Perm& tau, int e) { return tau(e); }

struct ChaseStep {
  int side;   // 0 or 1
  int power;  // nonzero power of rho_side
};

struct ChaseResult {
  Perm tau;
  std::vector<ChaseStep> word;  // walk steps, first to last; empty when the
                                // walk cycled and tau came from group search
};

// True when tau settles e and ep: |T[e, tau(e)]| = |tau|+1, the images
// tau(e), tau(ep) share a vertex c, and the two displacement tracks
// T[e, tau(e)], T[ep, tau(ep)] meet exactly in {c}.
bool chase_conditions(const Dessin& T, const PermGroup& G, int e, int ep,
                      const Perm& tau, int* common_vertex = nullptr);

// Walk e towards ep through norm-one rotations until the conditions above
// hold; falls back to a norm-ordered search of G when the walk cycles.
// Throws ChaseStalled only when no element of G settles the pair at all
// (such ordered pairs exist on branched trees).
ChaseResult chase(const Dessin& T, const PermGroup& G, int e, int ep);

// Vertices c such that every extra marked vertex equals c and, for every tau
// in G, the subtrees T[c, tau(e)] over the marked edges e have equal edge
// counts and pairwise meet exactly in {c}.
std::vector<int> marked_center(const Dessin& T, const PermGroup& G,
                               const std::vector<int>& marked_edges,
                               const std::vector<int>& extra_vertices);

PermGroup tree_group(const Dessin& T, size_t order_bound = 10000000);

}  // namespace mono
