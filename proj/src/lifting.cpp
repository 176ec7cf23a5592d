#include "mono/lifting.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>

namespace mono {

// ---------------------------------------------------------------- legs

PathLeg PathLeg::segment(cpx from, cpx to) {
  PathLeg l;
  l.kind = Kind::Segment;
  l.a = from;
  l.dir = to;
  return l;
}

PathLeg PathLeg::arc(cpx center, double radius, double theta0, double dtheta) {
  PathLeg l;
  l.kind = Kind::Arc;
  l.center = center;
  l.radius = radius;
  l.theta0 = theta0;
  l.dtheta = dtheta;
  return l;
}

PathLeg PathLeg::ray_out(cpx from, cpx direction) {
  PathLeg l;
  l.kind = Kind::RayOut;
  l.a = from;
  l.dir = direction;
  return l;
}

PathLeg PathLeg::ray_in(cpx to, cpx direction) {
  PathLeg l;
  l.kind = Kind::RayIn;
  l.a = to;
  l.dir = direction;
  return l;
}

std::pair<cpx, cpx> PathLeg::value(double s) const {
  cpx mu, nu;
  switch (kind) {
    case Kind::Segment:
      mu = a + (dir - a) * s;
      nu = 1;
      break;
    case Kind::Arc:
      mu = center + radius * std::exp(cpx(0, theta0 + dtheta * s));
      nu = 1;
      break;
    case Kind::RayOut:  // w = a + s/(1-s) dir
      mu = a * (1 - s) + dir * s;
      nu = 1 - s;
      break;
    case Kind::RayIn:
      mu = a * s + dir * (1 - s);
      nu = s;
      break;
  }
  double m = std::max(std::abs(mu), std::abs(nu));
  if (m > 0) {
    mu /= m;
    nu /= m;
  }
  return {mu, nu};
}

SpherePt PathLeg::point(double s) const {
  auto [mu, nu] = value(s);
  if (nu == cpx(0)) return SpherePt::infinity();
  cpx w = mu / nu;
  return (std::isfinite(w.real()) && std::isfinite(w.imag()))
             ? SpherePt(w)
             : SpherePt::infinity();
}

double PathLeg::dist_to(cpx v) const {
  switch (kind) {
    case Kind::Segment: {
      cpx d = dir - a;
      double L2 = std::norm(d);
      double t = L2 == 0 ? 0.0
                         : std::clamp((std::conj(d) * (v - a)).real() / L2,
                                      0.0, 1.0);
      return std::abs(v - (a + t * d));
    }
    case Kind::Arc: {
      cpx u = v - center;
      double rel = std::arg(u) - theta0;
      double s = dtheta >= 0 ? rel : -rel;
      double span = std::abs(dtheta);
      s = std::fmod(s, 2 * PI);
      if (s < 0) s += 2 * PI;
      if (s <= span) return std::abs(std::abs(u) - radius);
      cpx e0 = center + radius * std::exp(cpx(0, theta0));
      cpx e1 = center + radius * std::exp(cpx(0, theta0 + dtheta));
      return std::min(std::abs(v - e0), std::abs(v - e1));
    }
    case Kind::RayOut:
    case Kind::RayIn: {
      cpx u = dir / std::abs(dir);
      double t = std::max(0.0, (std::conj(u) * (v - a)).real());
      return std::abs(v - (a + t * u));
    }
  }
  return 0;
}

double PathLeg::max_abs() const {
  switch (kind) {
    case Kind::Segment:
      return std::max(std::abs(a), std::abs(dir));
    case Kind::Arc:
      return std::abs(center) + radius;
    default:
      return 1e300;
  }
}

Route segment_route(cpx from, cpx to) { return {PathLeg::segment(from, to)}; }

Route arc_route(cpx center, double radius, double theta0, double dtheta) {
  return {PathLeg::arc(center, radius, theta0, dtheta)};
}

Route ray_route(cpx from, cpx direction) {
  return {PathLeg::ray_out(from, direction)};
}

SpherePt route_start(const Route& r) {
  return r.empty() ? SpherePt() : r.front().start();
}

SpherePt route_end(const Route& r) {
  return r.empty() ? SpherePt() : r.back().end();
}

void validate_route(const Route& r, const std::vector<SpherePt>& forbidden,
                    double clearance) {
  for (const PathLeg& leg : r) {
    for (const SpherePt& v : forbidden) {
      if (v.is_inf()) {
        if (leg.max_abs() > 2.0 / clearance)
          fail("PathTooCloseToCriticalValue",
               "route approaches infinity, which is a forbidden value");
      } else if (leg.dist_to(v.z) < clearance) {
        fail("PathTooCloseToCriticalValue",
             "route passes within the clearance of " + fmt_cpx(v.z));
      }
    }
  }
}

// ---------------------------------------------------------------- lifting

namespace {

struct Homotopy {
  const Poly *P, *Q;
  Poly PA, QA;  // 1/z chart: zeta^(D-dP) rev(P), zeta^(D-dQ) rev(Q)
  double np, nq;
  int D;

  explicit Homotopy(const RationalMap& f) : P(&f.num()), Q(&f.den()) {
    int dP = P->degree(), dQ = Q->degree();
    D = std::max(dP, dQ);
    auto pad = [](const Poly& p, int shift) {
      std::vector<cpx> c(shift, cpx(0));
      for (cpx v : p.reversed().coeffs()) c.push_back(v);
      return Poly(c);
    };
    PA = pad(*P, D - dP);
    QA = pad(*Q, D - dQ);
    np = P->norm1();
    nq = Q->norm1();
  }

  struct Ev {
    cpx h, dh;
    double local;  // |nu*P(z)| + |mu*Q(z)|, the magnitudes the residual cancels
  };

  Ev eval(bool inv_chart, cpx z, cpx mu, cpx nu) const {
    const Poly& p = inv_chart ? PA : *P;
    const Poly& q = inv_chart ? QA : *Q;
    auto [pv, pd] = p.eval_d(z);
    auto [qv, qd] = q.eval_d(z);
    return {nu * pv - mu * qv, nu * pd - mu * qd,
            std::abs(nu) * std::abs(pv) + std::abs(mu) * std::abs(qv)};
  }

  double scale(cpx z, cpx mu, cpx nu) const {
    double base = std::abs(nu) * np + std::abs(mu) * nq;
    return base * std::pow(std::max(1.0, std::abs(z)), D);
  }

  // Residual bound for accepting z. Relative to the evaluated magnitudes,
  // not the coefficient norm: a map whose coefficients dwarf its values along
  // the path would otherwise get an acceptance region wider than the branch
  // separation near simple critical points, and the corrector would hop
  // branches. Floored at the Horner noise of the coefficient scale, which is
  // the best any evaluation can do.
  double target(double local, cpx z, cpx mu, cpx nu, double res_tol) const {
    double noise = 4.0 * (D + 8) * 1.1e-16 * scale(z, mu, nu);
    return std::max(res_tol * local, noise);
  }
};

bool newton_correct(const Homotopy& H, bool inv, cpx& z, cpx mu, cpx nu,
                    double res_tol, int max_it) {
  for (int i = 0;; ++i) {
    auto [h, dh, local] = H.eval(inv, z, mu, nu);
    double ah = std::abs(h);
    if (!std::isfinite(ah)) return false;
    if (ah <= H.target(local, z, mu, nu, res_tol)) return true;
    if (i >= max_it || dh == cpx(0)) return false;
    cpx d = h / dh;
    if (!std::isfinite(d.real()) || !std::isfinite(d.imag())) return false;
    if (std::abs(d) > 0.7 * (1 + std::abs(z))) return false;  // wild step
    z -= d;
  }
}

std::pair<cpx, cpx> route_value(const Route& r, double t) {
  int L = static_cast<int>(r.size());
  double u = t * L;
  int leg = std::min(L - 1, static_cast<int>(std::floor(u)));
  double s = std::min(u - leg, 1.0);
  return r[leg].value(s);
}

double step_cap(const SpherePt& z, const std::vector<SpherePt>& crit,
                double factor) {
  if (crit.empty()) return 0.5;
  double m = 4.0;
  for (const SpherePt& c : crit) m = std::min(m, chordal(z, c));
  return std::min(factor * m, 0.5);
}

std::vector<SpherePt> crit_points(const RationalMap& f, const Tolerances& tol) {
  std::vector<SpherePt> out;
  for (const auto& c : critical_portrait(f, tol).points) out.push_back(c.point);
  return out;
}

}  // namespace

LiftResult lift_path(const RationalMap& f, const Route& route, SpherePt z0,
                     bool stop_short, const LiftOpts& opt) {
  if (route.empty()) fail("RoutingFailure", "empty route");
  Homotopy H(f);
  std::vector<SpherePt> crit =
      opt.crit.empty() ? crit_points(f, opt.tol) : opt.crit;

  bool inv = z0.is_inf() || std::abs(z0.z) > 1e6;
  cpx z = z0.is_inf() ? cpx(0) : (inv ? cpx(1) / z0.z : z0.z);

  {
    auto [mu, nu] = route_value(route, 0.0);
    if (!newton_correct(H, inv, z, mu, nu, opt.tol.tracking, opt.max_newton))
      fail("NonConvergence", "start point does not lie over the route start");
  }

  auto to_pt = [](bool ic, cpx w) -> SpherePt {
    if (!ic) return SpherePt(w);
    if (w == cpx(0)) return SpherePt::infinity();
    cpx r = cpx(1) / w;
    return (std::isfinite(r.real()) && std::isfinite(r.imag()))
               ? SpherePt(r)
               : SpherePt::infinity();
  };

  LiftResult res;
  if (opt.record_trace) res.trace.push_back({0.0, to_pt(inv, z)});

  const double T = stop_short ? 1.0 - 1e-6 : 1.0;
  const double h_max = std::min(opt.h_max, 1.0 / (4.0 * route.size()));
  double t = 0.0, h = std::min(opt.h0, h_max);
  int accepts = 0;
  while (t < T - 1e-15) {
    double tn = std::min(t + h, T);
    auto [mu, nu] = route_value(route, tn);
    cpx zt = z;
    bool ok = newton_correct(H, inv, zt, mu, nu, opt.tol.tracking, opt.max_newton);
    if (ok) {
      SpherePt pa = to_pt(inv, z), pb = to_pt(inv, zt);
      if (chordal(pa, pb) > step_cap(pa, crit, opt.dz_factor)) ok = false;
    }
    if (!ok) {
      h *= 0.5;
      accepts = 0;
      if (h < opt.h_min)
        fail("StepUnderflow", "step size underflow at t=" + fmt_num(t));
      continue;
    }
    z = zt;
    t = tn;
    // chart hysteresis: leave the plane beyond 1e6, come back below 1e4
    if (!inv && std::abs(z) > 1e6) {
      inv = true;
      z = cpx(1) / z;
    } else if (inv && std::abs(z) > 1e-4) {
      inv = false;
      z = cpx(1) / z;
    }
    if (opt.record_trace) res.trace.push_back({t, to_pt(inv, z)});
    if (++accepts >= 4) {
      h = std::min(h * 2, h_max);
      accepts = 0;
    }
  }
  res.end = to_pt(inv, z);
  return res;
}

// Fiber over a critical value, reconciled with the known critical points.
// Coefficient roundoff shifts the computed critical value by ~eps*|f|, and
// the fiber over the shifted value resolves a local degree-m point into a
// splat of near-roots at radius ~(eps*|f|)^(1/m), which fiber_solve rightly
// reports as separate simple points. Absorb each splat into its critical
// point so the partition sees the vertex, not the splat.
static Fiber absorb_splats(const RationalMap& f, const CriticalPortrait& cp,
                           const Fiber& tf) {
  std::vector<char> taken(tf.points.size(), 0);
  std::vector<std::pair<SpherePt, int>> merged;
  for (const CriticalPoint& c : cp.points) {
    if (chordal(f.eval(c.point), tf.base) > 1e-6) continue;
    std::vector<int> order;
    for (int i = 0; i < tf.size(); ++i)
      if (!taken[i] && chordal(tf.points[i], c.point) < 1e-2)
        order.push_back(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return chordal(tf.points[a], c.point) < chordal(tf.points[b], c.point);
    });
    int need = c.local_degree;
    std::vector<int> grab;
    for (int i : order) {
      if (need == 0) break;
      if (tf.mult[i] > need) break;  // structure disagrees; leave untouched
      need -= tf.mult[i];
      grab.push_back(i);
    }
    if (need != 0) continue;  // could not assemble this vertex
    for (int i : grab) taken[i] = 1;
    merged.push_back({c.point, c.local_degree});
  }
  if (merged.empty()) return tf;
  for (int i = 0; i < tf.size(); ++i)
    if (!taken[i]) merged.push_back({tf.points[i], tf.mult[i]});
  std::sort(merged.begin(), merged.end(), [](const auto& a, const auto& b) {
    return sphere_less(a.first, b.first);
  });
  Fiber out;
  out.base = tf.base;
  for (auto& [p, m] : merged) {
    out.points.push_back(p);
    out.mult.push_back(m);
  }
  return out;
}

ArcPartition arc_component_partition(const RationalMap& f, const Fiber& source,
                                     const Route& route, LiftOpts opt) {
  auto cp = critical_portrait(f, opt.tol);
  if (opt.crit.empty())
    for (const auto& c : cp.points) opt.crit.push_back(c.point);

  if (chordal(route_start(route), source.base) > 1e-6)
    fail("RoutingFailure", "fiber base does not match the route start");
  for (int m : source.mult)
    if (m != 1)
      fail("PathTooCloseToCriticalValue", "route starts over a critical value");

  SpherePt target = route_end(route);
  bool term_crit = false;
  std::vector<SpherePt> forbidden;
  for (const SpherePt& v : cp.values) {
    if (chordal(v, target) <= 1e-6)
      term_crit = true;
    else
      forbidden.push_back(v);
  }
  validate_route(route, forbidden, opt.tol.clearance);

  Fiber tf = fiber_solve(f, target, opt.tol);
  if (term_crit) tf = absorb_splats(f, cp, tf);
  double sep = 4.0;
  for (int i = 0; i < tf.size(); ++i)
    for (int j = i + 1; j < tf.size(); ++j)
      sep = std::min(sep, chordal(tf.points[i], tf.points[j]));

  auto attempt = [&](const LiftOpts& o) {
    ArcPartition ap;
    ap.source = source;
    ap.target = tf;
    ap.groups.assign(tf.size(), {});
    for (int i = 0; i < source.size(); ++i) {
      auto lr = lift_path(f, route, source.points[i], term_crit, o);
      int j = tf.nearest(lr.end);
      if (tf.size() > 1 && chordal(lr.end, tf.points[j]) > 0.45 * sep)
        fail("AmbiguousMatching",
             "lift endpoint does not resolve to a fiber point");
      ap.groups[j].push_back(i);
    }
    for (int j = 0; j < tf.size(); ++j)
      if (static_cast<int>(ap.groups[j].size()) != tf.mult[j])
        fail("PartitionInconsistent",
             "component sizes disagree with the local degrees");
    return ap;
  };
  try {
    return attempt(opt);
  } catch (const CalcError& e) {
    if (e.code() == "StepUnderflow" || e.code() == "PathTooCloseToCriticalValue")
      throw;
    LiftOpts o2 = opt;
    o2.tol.tracking *= 1e-2;
    o2.h_max = opt.h_max / 4;
    o2.dz_factor = opt.dz_factor / 2;
    return attempt(o2);
  }
}

Perm loop_monodromy(const RationalMap& f, const Fiber& fiber, const Route& loop,
                    LiftOpts opt) {
  auto cp = critical_portrait(f, opt.tol);
  if (opt.crit.empty())
    for (const auto& c : cp.points) opt.crit.push_back(c.point);

  if (chordal(route_start(loop), route_end(loop)) > 1e-9 ||
      chordal(route_start(loop), fiber.base) > 1e-6)
    fail("RoutingFailure", "loop is not closed at the fiber base");
  for (int m : fiber.mult)
    if (m != 1)
      fail("PathTooCloseToCriticalValue", "base fiber is not simple");
  validate_route(loop, cp.values, opt.tol.clearance);

  double sep = 4.0;
  for (int i = 0; i < fiber.size(); ++i)
    for (int j = i + 1; j < fiber.size(); ++j)
      sep = std::min(sep, chordal(fiber.points[i], fiber.points[j]));
  double guard = sep / 3.0;

  auto attempt = [&](const LiftOpts& o) {
    std::vector<int> img(fiber.size(), -1);
    std::vector<char> used(fiber.size(), 0);
    for (int i = 0; i < fiber.size(); ++i) {
      auto lr = lift_path(f, loop, fiber.points[i], false, o);
      int j = fiber.nearest(lr.end);
      if (chordal(lr.end, fiber.points[j]) > guard)
        fail("AmbiguousMatching",
             "loop lift did not land on a fiber point");
      if (used[j])
        fail("LiftCollision", "two loop lifts landed on the same fiber point");
      used[j] = 1;
      img[i] = j;
    }
    return Perm(std::move(img));
  };
  try {
    return attempt(opt);
  } catch (const CalcError& e) {
    if (e.code() == "StepUnderflow" || e.code() == "PathTooCloseToCriticalValue")
      throw;
    LiftOpts o2 = opt;
    o2.tol.tracking *= 1e-2;
    o2.h_max = opt.h_max / 4;
    o2.dz_factor = opt.dz_factor / 2;
    return attempt(o2);
  }
}

// ---------------------------------------------------------------- loops

namespace {

bool corridor_rec(cpx from, cpx to,
                  const std::vector<std::pair<cpx, double>>& avoid, int depth,
                  int& attempts, std::vector<PathLeg>& out) {
  if (++attempts > 64 || depth > 4) return false;
  PathLeg seg = PathLeg::segment(from, to);
  int worst = -1;
  double worst_pen = 0;
  for (size_t j = 0; j < avoid.size(); ++j) {
    double margin = avoid[j].second * 1.15 + 1e-3;
    double d = seg.dist_to(avoid[j].first);
    if (d < margin && margin - d > worst_pen) {
      worst_pen = margin - d;
      worst = static_cast<int>(j);
    }
  }
  if (worst < 0) {
    out.push_back(seg);
    return true;
  }
  cpx u = (to - from) / std::abs(to - from);
  cpx perp = u * cpx(0, 1);
  for (double K : {2.0, 3.0, 4.5, 6.5}) {
    for (double sgn : {1.0, -1.0}) {
      cpx w = avoid[worst].first + sgn * K * avoid[worst].second * perp;
      std::vector<PathLeg> tmp;
      if (corridor_rec(from, w, avoid, depth + 1, attempts, tmp) &&
          corridor_rec(w, to, avoid, depth + 1, attempts, tmp)) {
        out.insert(out.end(), tmp.begin(), tmp.end());
        return true;
      }
    }
  }
  return false;
}

std::vector<PathLeg> corridor(cpx from, cpx to,
                              const std::vector<std::pair<cpx, double>>& avoid) {
  std::vector<PathLeg> out;
  int attempts = 0;
  if (!corridor_rec(from, to, avoid, 0, attempts, out))
    fail("RoutingFailure", "no corridor between the base point and the loop");
  return out;
}

std::string compact_num(double x) {
  if (std::abs(x) < 1e-9) x = 0;
  return fmt_num(x);
}

}  // namespace

static std::string gen_name(const SpherePt& v) {
  if (v.is_inf()) return "rho(inf)";
  if (std::abs(v.z.imag()) < 1e-9) return "rho(" + compact_num(v.z.real()) + ")";
  return "rho(" + compact_num(v.z.real()) +
         (v.z.imag() < 0 ? "-" : "+") + compact_num(std::abs(v.z.imag())) +
         "i)";
}

MonodromyData standard_generators(const RationalMap& f, std::optional<cpx> base,
                                  Orientation orient, LiftOpts opt) {
  auto cp = critical_portrait(f, opt.tol);
  if (opt.crit.empty())
    for (const auto& c : cp.points) opt.crit.push_back(c.point);

  MonodromyData md;
  std::vector<cpx> vals;
  for (const SpherePt& v : cp.values) {
    if (v.is_inf())
      md.inf_is_value = true;
    else
      vals.push_back(v.z);
  }
  if (vals.empty()) fail("RoutingFailure", "map has no finite critical value");

  SpherePt b = base ? SpherePt(*base) : auto_base(f, opt.tol);
  for (cpx v : vals)
    if (std::abs(b.z - v) < 10 * opt.tol.clearance)
      fail("PathTooCloseToCriticalValue",
           "base point sits on a critical value");
  md.base = b;
  md.fiber = fiber_solve(f, b, opt.tol);
  for (int m : md.fiber.mult)
    if (m != 1)
      fail("PathTooCloseToCriticalValue", "base fiber is not simple");

  const int k = static_cast<int>(vals.size());
  std::vector<double> rad(k);
  for (int i = 0; i < k; ++i) {
    double r = 0.1;
    for (int j = 0; j < k; ++j)
      if (j != i) r = std::min(r, 0.5 * std::abs(vals[i] - vals[j]));
    rad[i] = std::min(r, 0.5 * std::abs(vals[i] - b.z));
  }
  const double turn = orient == Orientation::CCW ? 2 * PI : -2 * PI;
  for (int i = 0; i < k; ++i) {
    cpx v = vals[i];
    double phi = std::arg(b.z - v);
    cpx entry = v + rad[i] * std::exp(cpx(0, phi));
    std::vector<std::pair<cpx, double>> avoid;
    for (int j = 0; j < k; ++j)
      if (j != i) avoid.push_back({vals[j], rad[j]});
    avoid.push_back({v, 0.8 * rad[i]});
    auto legs = corridor(b.z, entry, avoid);
    Route loop = legs;
    loop.push_back(PathLeg::arc(v, rad[i], phi, turn));
    for (auto it = legs.rbegin(); it != legs.rend(); ++it)
      loop.push_back(PathLeg::segment(it->dir, it->a));
    md.loops.push_back(loop);
    md.values.push_back(SpherePt(v));
    md.perms.push_back(loop_monodromy(f, md.fiber, loop, opt));
  }

  // the loop around infinity is the inverse of the angle-ordered product
  std::vector<int> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int i, int j) {
    double ai = std::arg(vals[i] - b.z), aj = std::arg(vals[j] - b.z);
    if (ai != aj) return ai < aj;
    return std::abs(vals[i] - b.z) < std::abs(vals[j] - b.z);
  });
  if (orient == Orientation::CW) std::reverse(idx.begin(), idx.end());
  Perm prod = Perm::identity(md.fiber.size());
  for (int i : idx) prod = md.perms[i].after(prod);
  md.rho_inf = prod.inverse();
  return md;
}

PermGroup monodromy_group(const MonodromyData& md, size_t order_bound) {
  std::vector<NamedGen> gens;
  for (size_t i = 0; i < md.values.size(); ++i)
    gens.push_back({gen_name(md.values[i]), md.perms[i]});
  return PermGroup::generate(std::move(gens), order_bound);
}

Route inf_loop_route(cpx b, const std::vector<cpx>& finite_values,
                     Orientation orient) {
  cpx c(0);
  for (cpx v : finite_values) c += v;
  if (!finite_values.empty()) c /= double(finite_values.size());
  double maxd = 0;
  for (cpx v : finite_values) maxd = std::max(maxd, std::abs(v - c));
  const double turn = orient == Orientation::CCW ? 2 * PI : -2 * PI;
  double rb = std::abs(b - c);
  if (rb > maxd + 0.05)
    return arc_route(c, rb, std::arg(b - c), turn);
  double R = maxd + std::max(0.05, 0.2 * maxd);
  cpx dirc = rb > 1e-12 ? (b - c) / rb : cpx(1);
  cpx p0 = c + R * dirc;
  return {PathLeg::segment(b, p0), PathLeg::arc(c, R, std::arg(dirc), turn),
          PathLeg::segment(p0, b)};
}

SpherePt auto_base(const RationalMap& f, const Tolerances& tol) {
  auto cp = critical_portrait(f, tol);
  std::vector<cpx> vals;
  for (const SpherePt& v : cp.values)
    if (!v.is_inf()) vals.push_back(v.z);
  cpx c(0);
  for (cpx v : vals) c += v;
  if (!vals.empty()) c /= double(vals.size());
  double maxd = 0;
  for (cpx v : vals) maxd = std::max(maxd, std::abs(v - c));
  double R = 1.5 * maxd + 0.75;

  SpherePt best;
  double best_sep = -1;
  for (int k = 0; k < 16; ++k) {
    double a = 2 * PI * k / 16 + 0.37;
    cpx b = c + R * std::exp(cpx(0, a));
    double dmin = 1e9;
    for (cpx v : vals) dmin = std::min(dmin, std::abs(b - v));
    if (dmin < 0.3) continue;
    Fiber fb;
    try {
      fb = fiber_solve(f, SpherePt(b), tol);
    } catch (const CalcError&) {
      continue;
    }
    bool simple = true;
    for (int m : fb.mult) simple = simple && m == 1;
    if (!simple) continue;
    double sep = 4.0;
    for (int i = 0; i < fb.size(); ++i)
      for (int j = i + 1; j < fb.size(); ++j)
        sep = std::min(sep, chordal(fb.points[i], fb.points[j]));
    if (sep >= 1e-3) return SpherePt(b);
    if (sep > best_sep) {
      best_sep = sep;
      best = SpherePt(b);
    }
  }
  if (best_sep > 1e-8) return best;
  fail("RoutingFailure", "no usable base point found on the search ring");
}

void shuffle_fiber_labels(Fiber& fb, uint64_t seed) {
  if (seed == 0) return;
  uint64_t h = mix64(seed ^ (uint64_t)fb.size());
  if (!fb.base.is_inf()) {
    uint64_t u, v;
    double re = fb.base.z.real(), im = fb.base.z.imag();
    std::memcpy(&u, &re, 8);
    std::memcpy(&v, &im, 8);
    h = mix64(h ^ u) ^ mix64(v);
  }
  std::vector<int> p(fb.size());
  std::iota(p.begin(), p.end(), 0);
  for (int i = fb.size() - 1; i > 0; --i) {
    h = mix64(h);
    std::swap(p[i], p[h % (i + 1)]);
  }
  Fiber out = fb;
  for (int i = 0; i < fb.size(); ++i) {
    out.points[i] = fb.points[p[i]];
    out.mult[i] = fb.mult[p[i]];
  }
  fb = out;
}

}  // namespace mono
