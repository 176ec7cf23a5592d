#include "mono/algebra.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <numeric>
#include <random>

namespace mono {

std::string fmt_num(double x) {
  if (x == 0.0) x = 0.0;  // flush -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string fmt_cpx(cpx z) {
  std::string s = fmt_num(z.real());
  s += (z.imag() < 0.0 ? " - " : " + ");
  s += fmt_num(std::abs(z.imag()));
  s += "i";
  return s;
}

std::string fmt_pt(const SpherePt& p) { return p.inf ? "inf" : fmt_cpx(p.z); }

static bool finite_cpx(cpx z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

// ---------------------------------------------------------------- Poly

void Poly::trim() {
  while (!c_.empty() && c_.back() == cpx(0)) c_.pop_back();
}

Poly Poly::from_roots(const std::vector<cpx>& roots, cpx lead) {
  std::vector<cpx> c{lead};
  for (cpx r : roots) {
    c.push_back(cpx(0));
    for (int i = static_cast<int>(c.size()) - 1; i > 0; --i)
      c[i] = c[i - 1] - r * c[i];
    c[0] *= -r;
  }
  return Poly(std::move(c));
}

cpx Poly::operator()(cpx z) const {
  cpx v(0);
  for (int i = static_cast<int>(c_.size()) - 1; i >= 0; --i) v = v * z + c_[i];
  return v;
}

std::pair<cpx, cpx> Poly::eval_d(cpx z) const {
  cpx v(0), d(0);
  for (int i = static_cast<int>(c_.size()) - 1; i >= 0; --i) {
    d = d * z + v;
    v = v * z + c_[i];
  }
  return {v, d};
}

Poly Poly::derivative() const {
  if (c_.size() <= 1) return Poly();
  std::vector<cpx> d(c_.size() - 1);
  for (size_t i = 1; i < c_.size(); ++i) d[i - 1] = double(i) * c_[i];
  return Poly(std::move(d));
}

Poly Poly::reversed() const {
  std::vector<cpx> r(c_.rbegin(), c_.rend());
  return Poly(std::move(r));
}

double Poly::norm1() const {
  double s = 0;
  for (cpx v : c_) s += std::abs(v);
  return s;
}

Poly Poly::operator-() const {
  Poly p = *this;
  for (cpx& v : p.c_) v = -v;
  return p;
}

Poly& Poly::operator*=(cpx s) {
  for (cpx& v : c_) v *= s;
  trim();
  return *this;
}

Poly operator+(const Poly& a, const Poly& b) {
  std::vector<cpx> c(std::max(a.c_.size(), b.c_.size()), cpx(0));
  for (size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
  for (size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
  return Poly(std::move(c));
}

Poly operator-(const Poly& a, const Poly& b) {
  std::vector<cpx> c(std::max(a.c_.size(), b.c_.size()), cpx(0));
  for (size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
  for (size_t i = 0; i < b.c_.size(); ++i) c[i] -= b.c_[i];
  return Poly(std::move(c));
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return Poly();
  std::vector<cpx> c(a.c_.size() + b.c_.size() - 1, cpx(0));
  for (size_t i = 0; i < a.c_.size(); ++i)
    for (size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
  return Poly(std::move(c));
}

Poly Poly::pow(int k) const {
  Poly r = Poly::constant(1);
  for (int i = 0; i < k; ++i) r = r * (*this);
  return r;
}

Poly Poly::pruned(double rel_eps) const {
  double m = 0;
  for (cpx v : c_) m = std::max(m, std::abs(v));
  std::vector<cpx> c = c_;
  while (!c.empty() && std::abs(c.back()) <= rel_eps * m) c.pop_back();
  return Poly(std::move(c));
}

// ---------------------------------------------------------------- roots

namespace {

uint64_t poly_hash(const Poly& p, uint64_t seed) {
  uint64_t h = 0x243f6a8885a308d3ULL ^ seed;
  for (cpx v : p.coeffs()) {
    uint64_t u, w;
    double re = v.real(), im = v.imag();
    std::memcpy(&u, &re, 8);
    std::memcpy(&w, &im, 8);
    h = mix64(h ^ u);
    h = mix64(h ^ w);
  }
  return h;
}

// One Aberth-Ehrlich run on coefficients c (degree >= 1, c.back() != 0).
// Returns false if some point failed to settle.
bool aberth(const std::vector<cpx>& c, std::vector<cpx>& z,
            std::mt19937_64& rng) {
  const int d = static_cast<int>(c.size()) - 1;
  z.assign(d, cpx(0));
  double R = 0;
  for (int i = 0; i < d; ++i) R = std::max(R, std::abs(c[i] / c[d]));
  R = 1.0 + R;
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const double phase = 2 * PI * U(rng);
  for (int k = 0; k < d; ++k) {
    double r = R * (0.35 + 0.65 * (k + 1.0) / d);
    double a = 2 * PI * k / d + phase + 0.15 * U(rng);
    z[k] = cpx(r * std::cos(a), r * std::sin(a));
  }

  Poly p{std::vector<cpx>(c)};
  std::vector<char> done(d, 0);
  std::vector<int> small_steps(d, 0);
  const double eps = DBL_EPSILON;
  for (int iter = 0; iter < 800; ++iter) {
    bool all = true;
    for (int i = 0; i < d; ++i) {
      if (done[i]) continue;
      auto [pv, pd] = p.eval_d(z[i]);
      // backward-error scale sum |c_k| |z|^k
      double scale = 0, zp = 1, az = std::abs(z[i]);
      for (int k = 0; k <= d; ++k) {
        scale += std::abs(c[k]) * zp;
        zp *= az;
      }
      if (std::abs(pv) <= 8 * eps * scale) {
        done[i] = 1;
        continue;
      }
      if (pd == cpx(0)) {
        z[i] += cpx(1e-8 * (1 + az), 1e-8);
        all = false;
        continue;
      }
      cpx N = pv / pd, S(0);
      for (int j = 0; j < d; ++j)
        if (j != i) S += cpx(1) / (z[i] - z[j]);
      cpx w = N / (cpx(1) - N * S);
      if (!finite_cpx(w)) {
        z[i] += cpx(1e-8 * (1 + az), -1e-8);
        all = false;
        continue;
      }
      double aw = std::abs(w), cap = 0.5 * (1 + az);
      if (aw > cap) w *= cap / aw;
      z[i] -= w;
      if (!finite_cpx(z[i])) return false;
      if (std::abs(w) <= 4 * eps * (1 + std::abs(z[i]))) {
        if (++small_steps[i] >= 2) done[i] = 1;
      } else {
        small_steps[i] = 0;
      }
      all = false;
    }
    if (all) return true;
  }
  return std::all_of(done.begin(), done.end(), [](char f) { return f != 0; });
}

}  // namespace

std::vector<RootCluster> poly_roots(const Poly& p0, const Tolerances& tol,
                                    uint64_t seed) {
  Poly p = p0.pruned(1e-14);
  if (p.is_zero())
    fail("ZeroMap", "root solve on the zero polynomial");
  std::vector<cpx> c = p.coeffs();

  // factor out exact roots at the origin
  int zmult = 0;
  while (zmult < static_cast<int>(c.size()) - 1 && c[zmult] == cpx(0)) ++zmult;
  c.erase(c.begin(), c.begin() + zmult);

  std::vector<RootCluster> out;
  if (zmult > 0) out.push_back({cpx(0), zmult});
  const int d = static_cast<int>(c.size()) - 1;
  if (d == 0) return out;

  // scale for conditioning
  double cm = 0;
  for (cpx v : c) cm = std::max(cm, std::abs(v));
  for (cpx& v : c) v /= cm;
  Poly ps{std::vector<cpx>(c)};
  Poly psd = ps.derivative();

  std::mt19937_64 rng(poly_hash(p0, seed));
  std::vector<cpx> z;
  for (int attempt = 0; attempt < 8; ++attempt) {
    if (!aberth(c, z, rng)) continue;

    // Newton polish
    for (cpx& r : z) {
      for (int s = 0; s < 3; ++s) {
        auto [pv, pd] = ps.eval_d(r);
        if (pd == cpx(0)) break;
        cpx r2 = r - pv / pd;
        if (!finite_cpx(r2) || std::abs(ps(r2)) > std::abs(pv)) break;
        r = r2;
      }
    }

    // merge clusters: the pinned radius plus overlapping inclusion disks
    // d*|p/p'| (multiple roots land as a splat of nearby points whose disks
    // overlap even when they are wider than the pinned radius)
    std::vector<double> incl(d);
    for (int i = 0; i < d; ++i) {
      auto [pv, pd] = ps.eval_d(z[i]);
      double cap = 1e-3 * (1 + std::abs(z[i]));
      incl[i] = (pd == cpx(0)) ? cap
                               : std::min(cap, d * std::abs(pv / pd));
    }
    std::vector<int> uf(d);
    std::iota(uf.begin(), uf.end(), 0);
    auto find = [&](int i) {
      while (uf[i] != i) i = uf[i] = uf[uf[i]];
      return i;
    };
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j) {
        double dist = std::abs(z[i] - z[j]);
        double mid = 0.5 * std::abs(z[i] + z[j]);
        if (dist <= std::max(tol.cluster * (1 + mid), incl[i] + incl[j]))
          uf[find(i)] = find(j);
      }
    std::vector<std::vector<int>> groups(d);
    for (int i = 0; i < d; ++i) groups[find(i)].push_back(i);

    std::vector<RootCluster> res = out;
    bool ok = true;
    for (auto& g : groups) {
      if (g.empty()) continue;
      cpx r(0);
      for (int i : g) r += z[i];
      r /= double(g.size());
      int m = static_cast<int>(g.size());
      if (m > 1) {
        // the centroid of an m-splat is a near-root of p^(m-1); polish there
        Poly q = ps;
        for (int k = 1; k < m; ++k) q = q.derivative();
        for (int s = 0; s < 3; ++s) {
          auto [qv, qd] = q.eval_d(r);
          if (qd == cpx(0)) break;
          cpx r2 = r - qv / qd;
          if (!finite_cpx(r2) || std::abs(q(r2)) > std::abs(qv)) break;
          r = r2;
        }
      }
      double bound =
          tol.root_residual * std::pow(1 + std::abs(r), d) * ps.norm1();
      if (std::abs(ps(r)) > bound) {
        ok = false;
        break;
      }
      res.push_back({r, m});
    }
    if (!ok) continue;
    std::sort(res.begin(), res.end(), [](const RootCluster& a,
                                          const RootCluster& b) {
      return sphere_less(SpherePt(a.root), SpherePt(b.root));
    });
    return res;
  }
  fail("NonConvergence", "root solver did not reach the residual bound");
}

// ---------------------------------------------------------------- maps

RationalMap::RationalMap(Poly num, Poly den)
    : num_(num.pruned(1e-14)), den_(den.pruned(1e-14)) {
  if (num_.is_zero() || den_.is_zero())
    fail("ZeroMap", "degenerate rational map (zero numerator or denominator)");
  if (degree() > 64)
    fail("DegreeOverflow", "map degree exceeds the supported bound 64");
}

SpherePt RationalMap::eval(const SpherePt& zp) const {
  const int dP = num_.degree(), dQ = den_.degree();
  if (!zp.inf && std::abs(zp.z) <= 1e6) {
    cpx r = num_(zp.z) / den_(zp.z);
    return finite_cpx(r) ? SpherePt(r) : SpherePt::infinity();
  }
  // evaluate in the 1/z chart: f(1/w) = w^(dQ-dP) rev(num)(w) / rev(den)(w)
  cpx w = zp.inf ? cpx(0) : cpx(1) / zp.z;
  cpx a = num_.reversed()(w), b = den_.reversed()(w);
  cpx r;
  if (dQ >= dP)
    r = a * std::pow(w, cpx(dQ - dP)) / b;
  else
    r = a / (b * std::pow(w, cpx(dP - dQ)));
  return finite_cpx(r) ? SpherePt(r) : SpherePt::infinity();
}

Poly RationalMap::wronskian() const {
  return num_.derivative() * den_ - num_ * den_.derivative();
}

CriticalPortrait critical_portrait(const RationalMap& f, const Tolerances& tol,
                                   uint64_t seed) {
  const int d = f.degree();
  CriticalPortrait cp;
  std::vector<CriticalPoint> pts;
  Poly w = f.wronskian().pruned(1e-13);
  if (!w.is_zero() && w.degree() >= 1) {
    for (const RootCluster& rc : poly_roots(w, tol, seed))
      pts.push_back({SpherePt(rc.root), rc.multiplicity + 1});
  } else if (w.is_zero()) {
    fail("ZeroMap", "map has identically vanishing derivative");
  }

  // local degree at infinity
  const int dP = f.num().degree(), dQ = f.den().degree();
  int ld_inf = 1;
  if (dP != dQ) {
    ld_inf = std::abs(dP - dQ);
  } else {
    cpx c = f.num().lead() / f.den().lead();
    Poly e = f.num().reversed() - c * f.den().reversed();
    double big = f.num().norm1() + std::abs(c) * f.den().norm1();
    ld_inf = d;  // worst case: e vanishes to full depth
    for (int j = 1; j <= e.degree(); ++j)
      if (std::abs(e.coeff(j)) > 1e-9 * big) {
        ld_inf = j;
        break;
      }
  }
  if (ld_inf >= 2) pts.push_back({SpherePt::infinity(), ld_inf});

  int rh = 0;
  for (const CriticalPoint& c : pts) rh += c.local_degree - 1;
  if (rh != 2 * d - 2)
    fail("NonConvergence", "critical portrait fails the degree count 2d-2");

  std::sort(pts.begin(), pts.end(), [](const CriticalPoint& a,
                                        const CriticalPoint& b) {
    return sphere_less(a.point, b.point);
  });
  cp.points = pts;

  // distinct critical values
  for (const CriticalPoint& c : pts) {
    SpherePt v = f.eval(c.point);
    bool seen = false;
    for (const SpherePt& u : cp.values) {
      if (u.inf && v.inf) seen = true;
      if (!u.inf && !v.inf &&
          std::abs(u.z - v.z) <= tol.cluster * (1 + std::abs(u.z)))
        seen = true;
    }
    if (!seen) cp.values.push_back(v);
  }
  std::sort(cp.values.begin(), cp.values.end(), sphere_less);
  return cp;
}

int Fiber::nearest(const SpherePt& q) const {
  int best = -1;
  double bd = 1e300;
  for (int i = 0; i < size(); ++i) {
    double dd = chordal(points[i], q);
    if (dd < bd) {
      bd = dd;
      best = i;
    }
  }
  return best;
}

Fiber fiber_solve(const RationalMap& f, const SpherePt& w,
                  const Tolerances& tol, uint64_t seed) {
  const int d = f.degree();
  Poly g = w.inf ? f.den() : (f.num() - w.z * f.den()).pruned(1e-13);
  std::vector<std::pair<SpherePt, int>> pts;
  if (g.is_zero())
    fail("ZeroMap", "fiber polynomial vanished identically");
  if (g.degree() >= 1)
    for (const RootCluster& rc : poly_roots(g, tol, seed))
      pts.push_back({SpherePt(rc.root), rc.multiplicity});
  if (g.degree() < d) pts.push_back({SpherePt::infinity(), d - g.degree()});

  std::sort(pts.begin(), pts.end(),
            [](const auto& a, const auto& b) {
              return sphere_less(a.first, b.first);
            });
  Fiber fb;
  fb.base = w;
  for (auto& [p, m] : pts) {
    fb.points.push_back(p);
    fb.mult.push_back(m);
  }
  return fb;
}

RationalMap compose(const RationalMap& outer, const RationalMap& inner,
                    const Tolerances& tol, int max_degree) {
  if (outer.degree() * inner.degree() > max_degree)
    fail("DegreeOverflow", "composition exceeds the degree bound");
  const Poly &gn = outer.num(), &gd = outer.den();
  const Poly &fn = inner.num(), &fd = inner.den();
  const int D = outer.degree();

  // powers of the inner numerator and denominator
  std::vector<Poly> pn(D + 1), pd(D + 1);
  pn[0] = pd[0] = Poly::constant(1);
  for (int i = 1; i <= D; ++i) {
    pn[i] = pn[i - 1] * fn;
    pd[i] = pd[i - 1] * fd;
  }
  Poly num, den;
  for (int i = 0; i <= gn.degree(); ++i)
    num = num + gn.coeff(i) * (pn[i] * pd[D - i]);
  for (int i = 0; i <= gd.degree(); ++i)
    den = den + gd.coeff(i) * (pn[i] * pd[D - i]);
  return normalized(RationalMap(num, den), tol);
}

RationalMap normalized(const RationalMap& f, const Tolerances& tol,
                       uint64_t seed) {
  Poly num = f.num(), den = f.den();
  if (num.degree() >= 1 && den.degree() >= 1) {
    auto rn = poly_roots(num, tol, seed);
    auto rd = poly_roots(den, tol, seed);
    bool cancelled = false;
    for (auto& a : rn)
      for (auto& b : rd) {
        if (a.multiplicity == 0 || b.multiplicity == 0) continue;
        double mid = 0.5 * std::abs(a.root + b.root);
        if (std::abs(a.root - b.root) <= tol.cluster * (1 + mid)) {
          int k = std::min(a.multiplicity, b.multiplicity);
          a.multiplicity -= k;
          b.multiplicity -= k;
          cancelled = true;
        }
      }
    if (cancelled) {
      std::vector<cpx> nroots, droots;
      for (auto& a : rn)
        for (int i = 0; i < a.multiplicity; ++i) nroots.push_back(a.root);
      for (auto& b : rd)
        for (int i = 0; i < b.multiplicity; ++i) droots.push_back(b.root);
      num = Poly::from_roots(nroots, num.lead());
      den = Poly::from_roots(droots, den.lead());
    }
  }
  cpx s = den.degree() >= 1 ? den.lead() : num.lead();
  num *= cpx(1) / s;
  den *= cpx(1) / s;
  return RationalMap(num, den);
}

bool coprime(const RationalMap& f, const Tolerances& tol) {
  if (f.num().degree() < 1 || f.den().degree() < 1) return true;
  auto rn = poly_roots(f.num(), tol);
  auto rd = poly_roots(f.den(), tol);
  for (auto& a : rn)
    for (auto& b : rd)
      if (std::abs(a.root - b.root) <= 1e-8) return false;
  return true;
}

}  // namespace mono
