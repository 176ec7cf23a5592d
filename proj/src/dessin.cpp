#include "mono/dessin.hpp"

#include <algorithm>
#include <string>

namespace mono {

int Dessin::shared_vertex(int e1, int e2) const {
  const TreeEdge& a = edges[e1];
  const TreeEdge& b = edges[e2];
  if (e1 == e2) return a.end0;
  if (a.end0 == b.end0) return a.end0;
  if (a.end1 == b.end1) return a.end1;
  return -1;  // side-0 and side-1 vertex ids never coincide
}

Dessin build_tree(const RationalMap& f, const Tolerances& tol) {
  if (f.den().degree() != 0)
    fail("NotBelyiPolynomial", "map must be a polynomial");
  int d = f.degree();
  if (d < 2) fail("NotBelyiPolynomial", "degree must be at least 2");

  CriticalPortrait port = critical_portrait(f, tol);
  std::vector<cpx> fin;
  for (const auto& v : port.values)
    if (!v.inf) fin.push_back(v.z);
  if (fin.size() != 2)
    fail("NotBelyiPolynomial",
         "map must have exactly two finite critical values, found " +
             std::to_string(fin.size()));
  cpx v0 = fin[0], v1 = fin[1];
  if (std::make_pair(v1.real(), v1.imag()) <
      std::make_pair(v0.real(), v0.imag()))
    std::swap(v0, v1);

  LiftOpts opt;
  opt.tol = tol;
  cpx mid = 0.5 * (v0 + v1);
  MonodromyData md = standard_generators(f, mid, Orientation::CCW, opt);

  Dessin T;
  T.val0 = v0;
  T.val1 = v1;
  T.base = md.base;
  T.fiber = md.fiber;

  int i0 = -1, i1 = -1;
  for (int i = 0; i < static_cast<int>(md.values.size()); i++) {
    if (std::abs(md.values[i].z - v0) < std::abs(md.values[i].z - v1))
      i0 = i;
    else
      i1 = i;
  }
  if (i0 < 0 || i1 < 0)
    fail("PartitionInconsistent", "generators do not match the two values");
  T.rho0 = md.perms[i0];
  T.rho1 = md.perms[i1];

  ArcPartition ap[2] = {
      arc_component_partition(f, md.fiber, segment_route(mid, v0), opt),
      arc_component_partition(f, md.fiber, segment_route(mid, v1), opt)};

  const Perm* rot[2] = {&T.rho0, &T.rho1};
  std::vector<int> vertex_of_label[2];
  for (int s = 0; s < 2; s++) {
    vertex_of_label[s].assign(d, -1);
    for (int g = 0; g < static_cast<int>(ap[s].groups.size()); g++) {
      const std::vector<int>& grp = ap[s].groups[g];
      TreeVertex tv;
      tv.pos = ap[s].target.points[g];
      tv.side = s;
      // rotation order at the vertex: the monodromy cycle through the
      // smallest incident label; it must exhaust exactly this group
      int start = *std::min_element(grp.begin(), grp.end());
      std::vector<int> cyc;
      int x = start;
      do {
        cyc.push_back(x);
        x = (*rot[s])(x);
      } while (x != start && static_cast<int>(cyc.size()) <= d);
      std::vector<int> a = cyc, b = grp;
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      if (a != b)
        fail("PartitionInconsistent",
             "monodromy cycle disagrees with the component partition at " +
                 fmt_pt(tv.pos));
      tv.edges = cyc;
      int vid = static_cast<int>(T.verts.size());
      for (int lab : grp) vertex_of_label[s][lab] = vid;
      T.verts.push_back(std::move(tv));
    }
  }

  T.edges.resize(d);
  for (int e = 0; e < d; e++) {
    T.edges[e].end0 = vertex_of_label[0][e];
    T.edges[e].end1 = vertex_of_label[1][e];
    if (T.edges[e].end0 < 0 || T.edges[e].end1 < 0)
      fail("PartitionInconsistent", "edge missing an endpoint");
  }

  if (static_cast<int>(T.verts.size()) != d + 1)
    fail("DisconnectedPreimage",
         "preimage of the segment has " + std::to_string(T.verts.size()) +
             " vertices for " + std::to_string(d) + " edges");
  std::vector<char> seen(T.verts.size(), 0);
  std::vector<int> queue{0};
  seen[0] = 1;
  while (!queue.empty()) {
    int v = queue.back();
    queue.pop_back();
    for (int e : T.verts[v].edges) {
      int u = T.verts[v].side == 0 ? T.edges[e].end1 : T.edges[e].end0;
      if (!seen[u]) {
        seen[u] = 1;
        queue.push_back(u);
      }
    }
  }
  for (char s : seen)
    if (!s) fail("DisconnectedPreimage", "preimage of the segment is disconnected");
  return T;
}

Subtree minimal_subtree(const Dessin& T, const std::vector<TreeItem>& items) {
  Subtree out;
  if (items.empty()) return out;
  int nv = static_cast<int>(T.verts.size());
  int ne = T.edge_count();
  std::vector<char> req(nv, 0);
  for (const TreeItem& it : items) {
    if (it.is_edge) {
      req[T.edges[it.id].end0] = 1;
      req[T.edges[it.id].end1] = 1;
    } else {
      req[it.id] = 1;
    }
  }
  std::vector<char> pres_v(nv, 1), pres_e(ne, 1);
  std::vector<int> deg(nv);
  for (int v = 0; v < nv; v++) deg[v] = T.degree(v);
  std::vector<int> stack;
  for (int v = 0; v < nv; v++)
    if (deg[v] <= 1 && !req[v]) stack.push_back(v);
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    if (!pres_v[v] || req[v] || deg[v] > 1) continue;
    pres_v[v] = 0;
    for (int e : T.verts[v].edges) {
      if (!pres_e[e]) continue;
      pres_e[e] = 0;
      int u = T.edges[e].end0 == v ? T.edges[e].end1 : T.edges[e].end0;
      if (--deg[u] <= 1 && !req[u]) stack.push_back(u);
      break;  // a leaf has one remaining edge
    }
  }
  for (int e = 0; e < ne; e++)
    if (pres_e[e]) out.edges.push_back(e);
  for (int v = 0; v < nv; v++) {
    if (!pres_v[v]) continue;
    out.verts.push_back(v);
    if (deg[v] >= 2) out.interior.push_back(v);
  }
  return out;
}

bool chase_conditions(const Dessin& T, const PermGroup& G, int e, int ep,
                      const Perm& tau, int* common_vertex) {
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
  if (!common_e.empty() || common_v != std::vector<int>{c}) return false;
  if (common_vertex) *common_vertex = c;
  return true;
}

ChaseResult chase(const Dessin& T, const PermGroup& G, int e, int ep) {
  int n = T.edge_count();
  ChaseResult res;
  res.tau = Perm::identity(n);
  if (e == ep) return res;

  int cur = e, curp = ep;
  long long limit = static_cast<long long>(n) * n + 2;
  for (long long iter = 0; iter < limit; iter++) {
    if (chase_conditions(T, G, e, ep, res.tau)) return res;
    Subtree sub =
        minimal_subtree(T, {TreeItem::edge(cur), TreeItem::edge(curp)});
    std::vector<int> sdeg(T.verts.size(), 0);
    for (int se : sub.edges) {
      sdeg[T.edges[se].end0]++;
      sdeg[T.edges[se].end1]++;
    }
    int c = sdeg[T.edges[cur].end0] >= 2   ? T.edges[cur].end0
            : sdeg[T.edges[cur].end1] >= 2 ? T.edges[cur].end1
                                           : -1;
    if (c < 0) break;  // cur and curp already adjacent yet unsettled
    int next = -1;
    for (int se : sub.edges) {
      if (se != cur && (T.edges[se].end0 == c || T.edges[se].end1 == c)) {
        next = se;
        break;
      }
    }
    if (next < 0) break;
    // the norm-one move: rotate around the vertex cur and next share
    const std::vector<int>& cyc = T.verts[c].edges;
    int len = static_cast<int>(cyc.size());
    int pc = -1, pn = -1;
    for (int i = 0; i < len; i++) {
      if (cyc[i] == cur) pc = i;
      if (cyc[i] == next) pn = i;
    }
    if (pc < 0 || pn < 0)
      fail("ChaseStalled", "rotation at the shared vertex misses an edge");
    int k = ((pn - pc) % len + len) % len;
    if (k == 0) fail("ChaseStalled", "degenerate rotation step");
    int side = T.verts[c].side;
    Perm sigma = (side == 0 ? T.rho0 : T.rho1).power(k);
    cur = next;
    curp = sigma(curp);
    res.tau = sigma.after(res.tau);
    res.word.push_back({side, k});
  }
  // The walk cycles on some ordered pairs. Group elements come out of the
  // breadth-first enumeration in norm order, so the first hit is minimal.
  for (size_t i = 0; i < G.order(); i++) {
    if (chase_conditions(T, G, e, ep, G.element(i))) {
      res.tau = G.element(i);
      res.word.clear();
      return res;
    }
  }
  fail("ChaseStalled", "no group element settles edges " +
                           std::to_string(e + 1) + " and " +
                           std::to_string(ep + 1));
}

std::vector<int> marked_center(const Dessin& T, const PermGroup& G,
                               const std::vector<int>& marked_edges,
                               const std::vector<int>& extra_vertices) {
  std::vector<int> out;
  for (int c = 0; c < static_cast<int>(T.verts.size()); c++) {
    bool ok = true;
    for (int x : extra_vertices)
      if (x != c) ok = false;
    for (size_t gi = 0; ok && gi < G.order(); gi++) {
      const Perm& tau = G.element(gi);
      std::vector<Subtree> subs;
      subs.reserve(marked_edges.size());
      for (int e : marked_edges)
        subs.push_back(minimal_subtree(
            T, {TreeItem::vertex(c), TreeItem::edge(tau(e))}));
      for (size_t a = 0; ok && a + 1 < subs.size(); a++) {
        for (size_t b = a + 1; ok && b < subs.size(); b++) {
          if (subs[a].size() != subs[b].size()) {
            ok = false;
            break;
          }
          std::vector<int> common_e, common_v;
          std::set_intersection(subs[a].edges.begin(), subs[a].edges.end(),
                                subs[b].edges.begin(), subs[b].edges.end(),
                                std::back_inserter(common_e));
          std::set_intersection(subs[a].verts.begin(), subs[a].verts.end(),
                                subs[b].verts.begin(), subs[b].verts.end(),
                                std::back_inserter(common_v));
          if (!common_e.empty() || common_v != std::vector<int>{c}) ok = false;
        }
      }
    }
    if (ok) out.push_back(c);
  }
  return out;
}

PermGroup tree_group(const Dessin& T, size_t order_bound) {
  return PermGroup::generate({{"rho0", T.rho0}, {"rho1", T.rho1}},
                             order_bound);
}

}  // namespace mono
