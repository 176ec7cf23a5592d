#include "mono/ctp.hpp"

#include <algorithm>
#include <iterator>

namespace mono {

std::string to_string(MapKind k) {
  switch (k) {
    case MapKind::Trivial: return "trivial";
    case MapKind::Branched: return "branched";
    case MapKind::Regular: return "regular";
    case MapKind::Mixing: return "mixing";
  }
  return "?";
}

std::string to_string(CtpVerdict v) {
  switch (v) {
    case CtpVerdict::CTP: return "CTP";
    case CtpVerdict::NOT_CTP: return "NOT_CTP";
    case CtpVerdict::TRIVIALLY_CTP: return "TRIVIALLY_CTP";
    case CtpVerdict::UNDECIDED: return "UNDECIDED";
  }
  return "?";
}

std::string to_string(CtpMethod m) {
  switch (m) {
    case CtpMethod::ThreePoint: return "three-point";
    case CtpMethod::FastPath: return "image-split-fastpath";
    case CtpMethod::FiniteCheck: return "finite-check";
    case CtpMethod::OutOfScope: return "out-of-scope";
  }
  return "?";
}

bool MarkedMap::is_marked_point(const SpherePt& p) const {
  for (const SpherePt& a : marked)
    if (same_sphere_pt(a, p)) return true;
  return false;
}

namespace {

// Append p unless an equal point is already present.
void add_unique(std::vector<SpherePt>& pts, const SpherePt& p) {
  for (const SpherePt& q : pts)
    if (same_sphere_pt(q, p)) return;
  pts.push_back(p);
}

int count_common(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> common;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(common));
  return static_cast<int>(common.size());
}

}  // namespace

MarkedMap classify(const RationalMap& f, const std::vector<SpherePt>& marked,
                   const Tolerances& tol) {
  if (f.degree() < 2)
    fail("DegreeTooLow", "the map must have degree at least 2");
  if (marked.size() < 3)
    fail("BadMarkedSet", "need at least 3 marked points, got " +
                             std::to_string(marked.size()));
  for (size_t i = 0; i < marked.size(); i++)
    for (size_t j = i + 1; j < marked.size(); j++)
      if (same_sphere_pt(marked[i], marked[j]))
        fail("BadMarkedSet",
             "marked points " + fmt_pt(marked[i]) + " and " +
                 fmt_pt(marked[j]) + " coincide");

  MarkedMap mm{f, marked, {}, {}, {}, {}, {}, MapKind::Trivial};

  CriticalPortrait cp = critical_portrait(f, tol);
  mm.critvals = cp.values;

  mm.post = mm.critvals;
  for (const SpherePt& a : marked) {
    SpherePt w = f.eval(a);
    mm.images.push_back(w);
    add_unique(mm.post, w);
  }
  std::sort(mm.post.begin(), mm.post.end(), sphere_less);

  // every image must identify a unique member of B
  for (size_t i = 0; i < marked.size(); i++) {
    int hits = 0;
    for (const SpherePt& q : mm.post)
      if (same_sphere_pt(mm.images[i], q)) hits++;
    if (hits != 1)
      fail("MarkedPointOnPoleOfAmbiguity",
           "the image of marked point " + fmt_pt(marked[i]) +
               " does not identify a unique postcritical point");
  }

  for (size_t i = 0; i < marked.size(); i++) {
    bool critical_image = false;
    for (const SpherePt& v : mm.critvals)
      if (same_sphere_pt(mm.images[i], v)) critical_image = true;
    if (!critical_image) {
      mm.regular_idx.push_back(static_cast<int>(i));
      add_unique(mm.regular_values, mm.images[i]);
    }
  }
  std::sort(mm.regular_values.begin(), mm.regular_values.end(), sphere_less);

  if (marked.size() == 3)
    mm.kind = MapKind::Trivial;
  else if (mm.regular_idx.empty())
    mm.kind = MapKind::Branched;
  else if (mm.regular_idx.size() == marked.size())
    mm.kind = MapKind::Regular;
  else
    mm.kind = MapKind::Mixing;
  return mm;
}

MonodromyData generators_at(const RationalMap& f, cpx base,
                            const Options& opt) {
  LiftOpts lo;
  lo.tol = opt.tol;
  MonodromyData md = standard_generators(f, base, opt.orientation, lo);
  if (opt.label_shuffle) {
    Fiber before = md.fiber;
    shuffle_fiber_labels(md.fiber, opt.label_shuffle);
    // recover the relabeling and conjugate the permutations onto it
    std::vector<int> s(before.points.size(), -1);
    for (size_t i = 0; i < before.points.size(); i++)
      for (size_t k = 0; k < md.fiber.points.size(); k++)
        if (before.points[i] == md.fiber.points[k]) {
          s[i] = static_cast<int>(k);
          break;
        }
    auto conj = [&s](const Perm& p) {
      std::vector<int> img(p.size());
      for (int i = 0; i < p.size(); i++) img[s[i]] = s[p(i)];
      return Perm(img);
    };
    for (Perm& p : md.perms) p = conj(p);
    md.rho_inf = conj(md.rho_inf);
  }
  return md;
}

Route route_to_value(cpx b, const SpherePt& v,
                     const std::vector<SpherePt>& critvals,
                     const Tolerances& tol) {
  std::vector<SpherePt> forbidden;
  for (const SpherePt& w : critvals)
    if (!same_sphere_pt(w, v)) forbidden.push_back(w);

  auto clear = [&](const Route& r) {
    try {
      validate_route(r, forbidden, tol.clearance);
      return true;
    } catch (const CalcError&) {
      return false;
    }
  };

  if (v.inf) {
    cpx dir = std::abs(b) > 1e-12 ? b / std::abs(b) : cpx(1);
    for (int k = 0; k < 16; k++) {
      double ang = PI / 8 * ((k + 1) / 2) * (k % 2 ? 1.0 : -1.0);
      Route r = ray_route(b, dir * std::polar(1.0, ang));
      if (clear(r)) return r;
    }
  } else {
    Route r = segment_route(b, v.z);
    if (clear(r)) return r;
    // bend around whatever is in the way
    cpx perp = (v.z - b) * cpx(0, 1);
    for (int k = 1; k <= 10; k++) {
      double off = 0.2 * ((k + 1) / 2) * (k % 2 ? 1.0 : -1.0);
      cpx mid = 0.5 * (b + v.z) + off * perp;
      Route r2{PathLeg::segment(b, mid), PathLeg::segment(mid, v.z)};
      if (clear(r2)) return r2;
    }
  }
  fail("PathTooCloseToCriticalValue",
       "found no clear arc from " + fmt_cpx(b) + " to " + fmt_pt(v));
}

namespace {

// Fiber labels of the given marked points; each must match exactly one
// fiber point within the membership radius.
std::vector<int> marked_labels(const Fiber& fb,
                               const std::vector<SpherePt>& pts) {
  std::vector<int> labels;
  for (const SpherePt& p : pts) {
    int hit = -1, hits = 0;
    for (int j = 0; j < fb.size(); j++)
      if (same_sphere_pt(p, fb.points[j])) {
        hit = j;
        hits++;
      }
    if (hits != 1)
      fail("MarkedPointOnPoleOfAmbiguity",
           "marked point " + fmt_pt(p) +
               " does not identify a unique fiber label over " +
               fmt_pt(fb.base));
    labels.push_back(hit);
  }
  std::sort(labels.begin(), labels.end());
  return labels;
}

// f(E) is a single point b. Essential curves in the 4-marked value sphere
// separate {b, v} from the other two values, so they are neighborhood
// boundaries of arcs b -> v; their preimage components are enumerated by
// one validated arc per critical value v with the marked labels replaced
// by each monodromy image of E.
CtpReport finite_check(const MarkedMap& mm, const Options& opt) {
  const SpherePt& b = mm.regular_values[0];
  if (b.inf)
    fail("UnsupportedConfiguration",
         "the common image of the regular marked points is infinity");

  MonodromyData md = generators_at(mm.f, b.z, opt);
  std::vector<SpherePt> epts;
  for (int i : mm.regular_idx) epts.push_back(mm.marked[i]);
  std::vector<int> elabels = marked_labels(md.fiber, epts);

  PermGroup G = monodromy_group(md);
  std::vector<std::vector<int>> orbit = G.orbit_of_set(elabels);

  CtpReport rep;
  rep.method = CtpMethod::FiniteCheck;
  rep.orbit_size = static_cast<long>(orbit.size());
  int na = static_cast<int>(mm.marked.size());

  LiftOpts lo;
  lo.tol = opt.tol;
  for (const SpherePt& v : mm.critvals) {
    Route route = route_to_value(b.z, v, mm.critvals, opt.tol);
    ArcPartition part = arc_component_partition(mm.f, md.fiber, route, lo);
    for (int j = 0; j < part.target.size(); j++) {
      int terminal_marked = mm.is_marked_point(part.target.points[j]) ? 1 : 0;
      for (const std::vector<int>& F : orbit) {
        int m = count_common(part.groups[j], F) + terminal_marked;
        if (1 < m && m < na - 1) {
          rep.verdict = CtpVerdict::NOT_CTP;
          rep.witness = CtpWitness{b, v, part.target.points[j], F, m};
          return rep;
        }
      }
    }
  }
  rep.verdict = CtpVerdict::CTP;
  return rep;
}

// f(E) hits two or more values, so the map cannot have the constant
// pullback property. For the certificate, pick marked points a0, a1 over
// distinct regular values b0, b1; monodromy moves the labels over b0 until
// the lift of an arc b0 -> b1 starting at a marked label also ends at a1,
// giving a component with exactly two marked points on it.
CtpReport fast_path(const MarkedMap& mm, const Options& opt) {
  size_t bi = 0;
  while (bi < mm.regular_values.size() && mm.regular_values[bi].inf) bi++;
  if (bi == mm.regular_values.size())
    fail("UnsupportedConfiguration", "no finite regular image value");
  const SpherePt& b0 = mm.regular_values[bi];
  const SpherePt& b1 = mm.regular_values[bi == 0 ? 1 : 0];

  MonodromyData md = generators_at(mm.f, b0.z, opt);
  std::vector<SpherePt> e0pts;
  SpherePt a1;
  bool have_a1 = false;
  for (int i : mm.regular_idx) {
    if (same_sphere_pt(mm.images[i], b0)) e0pts.push_back(mm.marked[i]);
    if (!have_a1 && same_sphere_pt(mm.images[i], b1)) {
      a1 = mm.marked[i];
      have_a1 = true;
    }
  }
  std::vector<int> e0 = marked_labels(md.fiber, e0pts);

  Route route = route_to_value(b0.z, b1, mm.critvals, opt.tol);
  LiftOpts lo;
  lo.tol = opt.tol;
  ArcPartition part = arc_component_partition(mm.f, md.fiber, route, lo);

  int j1 = -1, hits = 0;
  for (int j = 0; j < part.target.size(); j++)
    if (same_sphere_pt(a1, part.target.points[j])) {
      j1 = j;
      hits++;
    }
  if (hits != 1)
    fail("MarkedPointOnPoleOfAmbiguity",
         "marked point " + fmt_pt(a1) +
             " does not identify a unique fiber label over " + fmt_pt(b1));
  int l1 = part.groups[j1][0];  // b1 is a regular value: singleton component

  PermGroup G = monodromy_group(md);
  std::vector<std::vector<int>> orbit = G.orbit_of_set(e0);

  CtpReport rep;
  rep.method = CtpMethod::FastPath;
  rep.orbit_size = static_cast<long>(orbit.size());
  for (const std::vector<int>& F : orbit)
    if (std::binary_search(F.begin(), F.end(), l1)) {
      rep.verdict = CtpVerdict::NOT_CTP;
      rep.witness = CtpWitness{b0, b1, part.target.points[j1], F, 2};
      return rep;
    }
  // the monodromy group of a rational map acts transitively, so some image
  // of E contains l1
  fail("PartitionInconsistent",
       "no monodromy image of the marked labels reaches " + fmt_pt(a1));
}

}  // namespace

CtpReport ctp_decide(const MarkedMap& mm, const Options& opt) {
  CtpReport rep;
  if (mm.marked.size() == 3 || mm.post.size() == 3) {
    rep.verdict = CtpVerdict::TRIVIALLY_CTP;
    rep.method = CtpMethod::ThreePoint;
    return rep;
  }
  if (mm.post.size() >= 5)
    fail("UnsupportedConfiguration",
         "the postcritical frame has " + std::to_string(mm.post.size()) +
             " points; the decision procedure covers at most 4");
  if (mm.regular_idx.empty()) {
    rep.verdict = CtpVerdict::UNDECIDED;
    rep.method = CtpMethod::OutOfScope;
    return rep;
  }
  if (mm.regular_values.size() > 1) return fast_path(mm, opt);
  return finite_check(mm, opt);
}

std::string CtpReport::text() const {
  std::string out;
  out += "verdict: " + to_string(verdict) + "\n";
  out += "method: " + to_string(method) + "\n";
  if (witness) {
    out += "witness: v=" + fmt_pt(witness->value) +
           " c=" + fmt_pt(witness->branch) + " F={";
    for (size_t i = 0; i < witness->labels.size(); i++) {
      if (i) out += ",";
      out += std::to_string(witness->labels[i] + 1);
    }
    out += "} m=" + std::to_string(witness->count) + "\n";
  } else {
    out += "witness: none\n";
  }
  out += "orbit_size: " + std::to_string(orbit_size) + "\n";
  return out;
}

}  // namespace mono
