#include "mono/conditions.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <set>

#include "mono/lifting.hpp"

namespace mono {

namespace {

// f and h agree as maps iff the cross product of their fractions vanishes;
// compare against the coefficient scale so the test is scaling-invariant.
bool same_map(const RationalMap& f, const RationalMap& h, double rel) {
  Poly cross = f.num() * h.den() - h.num() * f.den();
  double scale =
      f.num().norm1() * h.den().norm1() + h.num().norm1() * f.den().norm1();
  return cross.norm1() <= rel * std::max(1.0, scale);
}

RationalMap precompose_affine(const RationalMap& f, cpx alpha, cpx beta,
                              const Tolerances& tol) {
  RationalMap aff(Poly({beta, alpha}), Poly::constant(1));
  return compose(f, aff, tol);
}

// match each point to exactly one fiber label; miss_ok skips points that are
// not on the fiber at all (e.g. marked points over other values)
std::vector<int> fiber_labels(const Fiber& fb, const std::vector<SpherePt>& pts,
                              bool miss_ok) {
  std::vector<int> out;
  for (const auto& p : pts) {
    int hit = -1, hits = 0;
    for (int i = 0; i < fb.size(); i++)
      if (same_sphere_pt(fb.points[i], p)) {
        hit = i;
        hits++;
      }
    if (hits == 0 && miss_ok) continue;
    if (hits != 1)
      fail("BadMarkedSet", "a marked point does not match a unique fiber "
                           "point over the common image");
    out.push_back(hit);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<int> intersect_sorted(const std::vector<int>& a,
                                  const std::vector<int>& b) {
  std::vector<int> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return out;
}

std::string bool_str(bool b) { return b ? "true" : "false"; }

std::string labels_csv(const std::vector<int>& v) {
  std::string s = "{";
  for (size_t i = 0; i < v.size(); i++) {
    if (i) s += ",";
    s += std::to_string(v[i] + 1);
  }
  return s + "}";
}

RationalMap mixing_example() {
  Poly p({-3, 0, 2, 0, 1});
  return RationalMap(-(p * p * p), Poly({0, 0, 0, 0, 0, 0, 64}));
}

}  // namespace

std::string SymmetryGroup::text() const {
  std::string s;
  s += "order: " + std::to_string(order) + "\n";
  s += "center: " + fmt_cpx(center) + "\n";
  s += "zeta: " + fmt_cpx(zeta) + "\n";
  return s;
}

SymmetryGroup affine_symmetries(const RationalMap& f, const Options& opt) {
  if (f.degree() < 2) fail("DegreeTooLow", "symmetry search needs degree >= 2");
  const int n = f.degree();

  for (int attempt = 0; attempt < 16; attempt++) {
    double r = 0.83 + 0.21 * attempt;
    double ang = 0.9 + 2.39996323 * attempt;
    cpx base = std::polar(r, ang);

    Fiber fb;
    try {
      fb = fiber_solve(f, SpherePt(base), opt.tol, opt.seed);
    } catch (const CalcError&) {
      continue;
    }
    if (fb.size() != n) continue;  // base hit a critical value
    bool usable = true;
    for (int i = 0; i < n && usable; i++) {
      if (fb.points[i].is_inf() || std::abs(fb.points[i].z) > 1e6)
        usable = false;
      for (int j = i + 1; j < n && usable; j++)
        if (std::abs(fb.points[i].z - fb.points[j].z) < 1e-6) usable = false;
    }
    if (!usable) continue;

    // anchor on the two farthest-apart fiber points for conditioning
    int i0 = 0, i1 = 1;
    double span = 0;
    for (int i = 0; i < n; i++)
      for (int j = i + 1; j < n; j++) {
        double d = std::abs(fb.points[i].z - fb.points[j].z);
        if (d > span) {
          span = d;
          i0 = i;
          i1 = j;
        }
      }
    cpx z0 = fb.points[i0].z, z1 = fb.points[i1].z;

    // a symmetry permutes every fiber, so it is pinned down by where it
    // sends two points of this one
    std::vector<std::pair<cpx, cpx>> found;  // (alpha, beta)
    for (int j = 0; j < n; j++)
      for (int l = 0; l < n; l++) {
        if (j == l) continue;
        cpx alpha = (fb.points[j].z - fb.points[l].z) / (z0 - z1);
        cpx beta = fb.points[j].z - alpha * z0;
        if (!std::isfinite(std::abs(alpha)) || std::abs(alpha) < 1e-8)
          continue;
        bool dup = false;
        for (const auto& q : found)
          if (std::abs(q.first - alpha) + std::abs(q.second - beta) < 1e-8)
            dup = true;
        if (dup) continue;
        RationalMap fl = precompose_affine(f, alpha, beta, opt.tol);
        if (same_map(f, fl, 1e-10)) found.push_back({alpha, beta});
      }

    if (found.empty()) continue;  // not even the identity: bad fiber, retry
    SymmetryGroup g;
    g.order = static_cast<int>(found.size());
    if (g.order == 1) return g;  // trivial group, center 0 by convention

    // pick the generator as the rotation of smallest positive angle and
    // recover the center from the best-conditioned element
    cpx gen = 0;
    double best_arg = 1e9;
    cpx center = 0;
    double best_sep = -1;
    bool clean = true;
    for (const auto& q : found) {
      if (std::abs(std::abs(q.first) - 1.0) > 1e-8) clean = false;
      double a = std::arg(q.first);
      if (a < 0) a += 2 * PI;
      if (a > 1e-9 && a < best_arg) {
        best_arg = a;
        gen = q.first;
      }
      double sep = std::abs(q.first - 1.0);
      if (sep > best_sep && sep > 1e-9) {
        best_sep = sep;
        center = q.second / (1.0 - q.first);
      }
    }
    // the elements must be exactly the d-th roots of unity
    cpx pw = 1;
    for (int k = 0; k < g.order - 1; k++) {
      pw *= gen;
      if (std::abs(pw - 1.0) < 1e-8) clean = false;  // generator not primitive
    }
    pw *= gen;
    if (std::abs(pw - 1.0) > 1e-8) clean = false;
    if (!clean) continue;

    g.zeta = gen;
    g.center = center;
    return g;
  }
  fail("GenericFiberUnavailable",
       "no basepoint produced a clean fiber for the symmetry search after 16 "
       "attempts");
}

namespace {

// fit g with f = g((z-c)^d) by sampling: the coefficients of g's numerator
// and denominator span the nullspace of N(w_s) - y_s M(w_s)
std::optional<RationalMap> fit_outer(const RationalMap& f, int d, cpx c,
                                     const Tolerances& tol) {
  const int m = f.degree() / d;
  const int cols = 2 * (m + 1);
  const int rows = cols + 4;

  Eigen::MatrixXcd A(rows, cols);
  double theta = 0.37;
  for (int s = 0; s < rows; s++) {
    cpx z, y, w;
    bool got = false;
    for (int tries = 0; tries < 24 && !got; tries++) {
      z = c + std::polar(1.1, theta);
      theta += 0.0137;
      SpherePt val = f.eval(SpherePt(z));
      if (val.is_inf() || std::abs(val.z) > 1e8) continue;
      y = val.z;
      w = std::pow(z - c, d);
      got = true;
    }
    if (!got) return std::nullopt;
    theta += 2 * PI / rows;
    double rowscale = 1.0 / std::max(1.0, std::abs(y));
    cpx wp = 1;
    for (int j = 0; j <= m; j++) {
      A(s, j) = wp * rowscale;
      A(s, m + 1 + j) = -y * wp * rowscale;
      wp *= w;
    }
  }

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeFullV);
  Eigen::VectorXcd v = svd.matrixV().col(cols - 1);
  std::vector<cpx> nc(m + 1), dc(m + 1);
  for (int j = 0; j <= m; j++) {
    nc[j] = v(j);
    dc[j] = v(m + 1 + j);
  }
  try {
    RationalMap g(Poly(nc).pruned(1e-11), Poly(dc).pruned(1e-11));
    RationalMap gn = normalized(g, tol);
    if (gn.degree() != m) return std::nullopt;
    return gn;
  } catch (const CalcError&) {
    return std::nullopt;
  }
}

}  // namespace

std::optional<PowerFactor> power_factor(const RationalMap& f,
                                        const std::vector<SpherePt>& e_points,
                                        const Options& opt) {
  if (e_points.empty())
    fail("BadMarkedSet",
         "power factorization needs at least one regular marked point");
  SymmetryGroup lam = affine_symmetries(f, opt);
  const int n = f.degree();

  for (int d = lam.order; d >= 2; d--) {
    if (lam.order % d || n % d) continue;
    if (static_cast<int>(e_points.size()) != d) continue;

    bool finite = true;
    for (const auto& e : e_points)
      if (e.is_inf()) finite = false;
    if (!finite) continue;

    // rotation by e^{2pi i/d}: an appropriate power of the group generator
    cpx zd = 1;
    for (int k = 0; k < lam.order / d; k++) zd *= lam.zeta;

    // e_points must be the single orbit of its first point
    bool orbit_ok = true;
    cpx e0 = e_points[0].z;
    for (int k = 1; k < d && orbit_ok; k++) {
      e0 = lam.center + zd * (e0 - lam.center);
      bool hit = false;
      for (const auto& e : e_points)
        if (same_sphere_pt(SpherePt(e0), e)) hit = true;
      if (!hit) orbit_ok = false;
    }
    for (const auto& e : e_points) {
      cpx rot = lam.center + zd * (e.z - lam.center);
      bool hit = false;
      for (const auto& q : e_points)
        if (same_sphere_pt(SpherePt(rot), q)) hit = true;
      if (!hit) orbit_ok = false;
    }
    if (!orbit_ok) continue;

    auto g = fit_outer(f, d, lam.center, opt.tol);
    if (!g) continue;
    Poly pz = Poly({-lam.center, 1}).pow(d);
    RationalMap power(pz, Poly::constant(1));
    RationalMap h = compose(*g, power, opt.tol);
    if (!same_map(h, f, 1e-10)) continue;
    return PowerFactor{*g, d, lam.center};
  }
  return std::nullopt;
}

std::string to_string(McVerdict v) {
  switch (v) {
    case McVerdict::Satisfied:
      return "satisfied-via-power-map";
    case McVerdict::NotSatisfied:
      return "not-satisfied-via-power-map";
    default:
      return "out-of-scope";
  }
}

std::string McReport::text() const {
  std::string s;
  s += "verdict: " + to_string(verdict) + "\n";
  s += "definitive: " + bool_str(definitive) + "\n";
  if (factor) {
    s += "factor: d=" + std::to_string(factor->d) +
         " center=" + fmt_cpx(factor->center) +
         " g_degree=" + std::to_string(factor->g.degree()) + "\n";
  } else {
    s += "factor: none\n";
  }
  return s;
}

McReport mcmullen_verdict(const MarkedMap& m, const Options& opt) {
  McReport rep;
  if (m.regular_idx.empty()) return rep;  // nothing regular: out of scope

  std::vector<SpherePt> epts;
  for (int i : m.regular_idx) epts.push_back(m.marked[i]);

  if (m.regular_values.size() > 1) {
    // a power factor would force a single common image; the stabilizer
    // comparison has no common base either, so nothing definitive
    rep.verdict = McVerdict::NotSatisfied;
    return rep;
  }
  if (m.regular_values[0].is_inf()) return rep;  // out of scope

  rep.factor = power_factor(m.f, epts, opt);
  if (rep.factor) {
    // the quotient must send the marked set and its own critical values to
    // three points in all
    Poly pz = Poly({-rep.factor->center, 1}).pow(rep.factor->d);
    RationalMap power(pz, Poly::constant(1));
    std::vector<SpherePt> vals{SpherePt(0.0), SpherePt::infinity()};
    for (const auto& a : m.marked) {
      SpherePt v = power.eval(a);
      bool seen = false;
      for (const auto& q : vals)
        if (same_sphere_pt(v, q)) seen = true;
      if (!seen) vals.push_back(v);
    }
    if (vals.size() == 3) {
      rep.verdict = McVerdict::Satisfied;
      rep.definitive = true;
      return rep;
    }
  }

  StabReport sr = stab_report(m.f, m.marked, epts, opt);
  rep.verdict = McVerdict::NotSatisfied;
  rep.definitive = !sr.pointwise_equal;  // forced by the stabilizer identity
  return rep;
}

std::string StabReport::text() const {
  std::string s;
  s += "group_order: " + std::to_string(group_order) + "\n";
  s += "e_labels: " + labels_csv(e_labels) + "\n";
  s += "stab_point_orders: {";
  for (size_t i = 0; i < stab_point_orders.size(); i++) {
    if (i) s += ",";
    s += std::to_string(stab_point_orders[i]);
  }
  s += "}\n";
  s += "stab_set_order: " + std::to_string(stab_set_order) + "\n";
  s += "stab_star_order: " + std::to_string(stab_star_order) + "\n";
  s += "marked_set_order: " + std::to_string(marked_set_order) + "\n";
  s += "pointwise_equal: " + bool_str(pointwise_equal) + "\n";
  s += "nonempty_difference: " + bool_str(nonempty_difference) + "\n";
  s += "setwise_containment: " + bool_str(setwise_containment) + "\n";
  s += "intersection_identity: " + bool_str(intersection_identity) + "\n";
  s += "exponent: " + std::to_string(exponent) + "\n";
  return s;
}

StabReport stab_report(const RationalMap& f,
                       const std::vector<SpherePt>& marked,
                       const std::vector<SpherePt>& e_points,
                       const Options& opt) {
  if (e_points.empty())
    fail("BadMarkedSet", "stabilizer analysis needs a nonempty regular set");
  SpherePt b = f.eval(e_points[0]);
  for (const auto& e : e_points)
    if (!same_sphere_pt(f.eval(e), b))
      fail("BadMarkedSet", "the regular points do not share an image");
  if (b.is_inf())
    fail("UnsupportedConfiguration",
         "the common image of the regular points is infinity");

  MonodromyData md = generators_at(f, b.z, opt);
  std::vector<int> elabels = fiber_labels(md.fiber, e_points, false);
  if (elabels.size() != e_points.size())
    fail("BadMarkedSet", "the regular points are not distinct on the fiber");
  std::vector<int> alabels = fiber_labels(md.fiber, marked, true);

  PermGroup g = monodromy_group(md);
  StabReport rep;
  rep.group_order = static_cast<long>(g.order());
  rep.e_labels = elabels;

  std::vector<int> star = g.stab_pointwise(elabels);
  std::vector<int> setw = g.stab_setwise(elabels);
  std::vector<int> markedw = g.stab_setwise(alabels);
  rep.stab_set_order = static_cast<long>(setw.size());
  rep.stab_star_order = static_cast<long>(star.size());
  rep.marked_set_order = static_cast<long>(markedw.size());

  rep.pointwise_equal = true;
  rep.nonempty_difference = true;
  rep.setwise_containment = true;
  rep.intersection_identity = true;
  for (int a : elabels) {
    std::vector<int> sa = g.stab_point(a);
    rep.stab_point_orders.push_back(static_cast<long>(sa.size()));
    if (sa != star) rep.pointwise_equal = false;
    if (sa.size() <= star.size()) rep.nonempty_difference = false;
    if (!std::includes(markedw.begin(), markedw.end(), sa.begin(), sa.end()))
      rep.setwise_containment = false;
    if (intersect_sorted(sa, setw) != star) rep.intersection_identity = false;
  }
  rep.exponent = g.stab_exponent(elabels, elabels);
  return rep;
}

cpx cross_ratio(const SpherePt& z0, const SpherePt& z1, const SpherePt& z2,
                const SpherePt& z3) {
  const SpherePt* zs[4] = {&z0, &z1, &z2, &z3};
  int ninf = 0;
  for (const auto* p : zs)
    if (p->is_inf()) ninf++;
  if (ninf > 1)
    fail("DegenerateQuadruple", "at most one of the four points may be inf");
  for (int i = 0; i < 4; i++)
    for (int j = i + 1; j < 4; j++)
      if (chordal(*zs[i], *zs[j]) < 1e-13)
        fail("DegenerateQuadruple", "cross-ratio of coincident points");

  cpx num, den;
  if (z0.is_inf()) {
    num = z2.z - z1.z;
    den = z3.z - z1.z;
  } else if (z1.is_inf()) {
    num = z3.z - z0.z;
    den = z2.z - z0.z;
  } else if (z2.is_inf()) {
    num = z3.z - z0.z;
    den = z3.z - z1.z;
  } else if (z3.is_inf()) {
    num = z2.z - z1.z;
    den = z2.z - z0.z;
  } else {
    num = (z3.z - z0.z) * (z2.z - z1.z);
    den = (z2.z - z0.z) * (z3.z - z1.z);
  }
  if (std::abs(den) < 1e-300)
    fail("DegenerateQuadruple", "cross-ratio denominator vanished");
  return num / den;
}

BranchTriple branch_triple(cpx k, const Options& opt) {
  if (std::abs(k) < 1e-12) fail("DomainError", "k must be nonzero");
  cpx b = k * k * k;
  if (std::abs(b) < 1e-12 || std::abs(b - cpx(1.0)) < 1e-10)
    fail("DomainError", "k^3 must avoid the critical values 0 and 1");

  RationalMap r = mixing_example();
  Fiber fb = fiber_solve(r, SpherePt(b), opt.tol, opt.seed);
  if (fb.size() != 12)
    fail("BranchResolutionFailure", "the fiber over k^3 is not generic");
  LiftOpts lo;
  lo.tol = opt.tol;
  ArcPartition part =
      arc_component_partition(r, fb, segment_route(b, 0.0), lo);

  // the component landing at the branch point i*sqrt(3) carries the triple
  SpherePt anchor(cpx(0.0, std::sqrt(3.0)));
  int jt = -1;
  for (int j = 0; j < part.target.size(); j++)
    if (chordal(part.target.points[j], anchor) < 0.5) jt = j;
  if (jt < 0 || part.groups[jt].size() != 3)
    fail("BranchResolutionFailure",
         "could not isolate the three-point component over the base");
  cpx ep[3];
  for (int s = 0; s < 3; s++) ep[s] = fb.points[part.groups[jt][s]].z;

  const cpx zeta = std::polar(1.0, 2 * PI / 3);
  const cpx zp[3] = {cpx(1.0), zeta, zeta * zeta};
  const cpx iu(0.0, 1.0);

  double best = -1;
  std::array<cpx, 3> besta{};
  for (int mask = 0; mask < 64; mask++) {
    std::array<cpx, 3> a;
    bool used[3] = {false, false, false};
    bool ok = true;
    for (int j = 0; j < 3 && ok; j++) {
      cpx t = cpx(1.0) + k * zp[j] + k * k * zp[j] * zp[j];
      cpx s = std::sqrt(t) * ((mask >> j) & 1 ? -1.0 : 1.0);
      cpx inner = cpx(1.0) + 2.0 * k * zp[j] + 2.0 * s;
      a[j] = iu * std::sqrt(inner) * ((mask >> (3 + j)) & 1 ? -1.0 : 1.0);

      SpherePt val = r.eval(SpherePt(a[j]));
      if (val.is_inf() || std::abs(val.z - b) > 1e-8) {
        ok = false;
        break;
      }
      int hit = -1;
      for (int q = 0; q < 3; q++)
        if (!used[q] && std::abs(a[j] - ep[q]) < 1e-6) {
          hit = q;
          break;
        }
      if (hit < 0) {
        ok = false;
        break;
      }
      used[hit] = true;
    }
    if (!ok) continue;
    double res = std::abs(a[0] + zeta * a[1] + zeta * zeta * a[2]);
    if (best < 0 || res < best) {
      best = res;
      besta = a;
    }
  }
  if (best < 0)
    fail("BranchResolutionFailure",
         "no square-root branch assignment matches the lifted fiber");
  return BranchTriple{besta, best};
}

double branch_sum_residual(cpx k, const Options& opt) {
  return branch_triple(k, opt).residual;
}

}  // namespace mono
