#include "mono/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace mono {
namespace {

std::string g5(double x) {
  if (x == 0.0) x = 0.0;  // flush -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.5g", x);
  return buf;
}

struct Box {
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  void add(cpx z) {
    xmin = std::min(xmin, z.real());
    xmax = std::max(xmax, z.real());
    ymin = std::min(ymin, z.imag());
    ymax = std::max(ymax, z.imag());
  }
  double span() const { return std::max(xmax - xmin, ymax - ymin); }
};

// SVG y axis grows downward; complex points are emitted as (re, -im).
std::string svg_open(const Box& b, double pad) {
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\""
      << g5(b.xmin - pad) << " " << g5(-b.ymax - pad) << " "
      << g5(b.xmax - b.xmin + 2 * pad) << " " << g5(b.ymax - b.ymin + 2 * pad)
      << "\">\n";
  return out.str();
}

void polyline(std::ostringstream& out, const std::vector<cpx>& pts,
              const std::string& style) {
  out << "<polyline fill=\"none\" " << style << " points=\"";
  for (size_t i = 0; i < pts.size(); ++i) {
    if (i) out << " ";
    out << g5(pts[i].real()) << "," << g5(-pts[i].imag());
  }
  out << "\"/>\n";
}

}  // namespace

std::string tree_text(const Dessin& T) {
  std::ostringstream out;
  out << "values: " << fmt_cpx(T.val0) << ", " << fmt_cpx(T.val1) << "\n";
  out << "edges: " << T.edge_count() << "\n";
  out << "vertices: " << T.verts.size() << "\n";
  for (size_t v = 0; v < T.verts.size(); ++v) {
    const TreeVertex& tv = T.verts[v];
    out << "vertex " << v << ": side " << tv.side << " pos " << fmt_pt(tv.pos)
        << " degree " << tv.edges.size() << " rotation [";
    for (size_t i = 0; i < tv.edges.size(); ++i) {
      if (i) out << " ";
      out << tv.edges[i] + 1;
    }
    out << "]\n";
  }
  for (int e = 0; e < T.edge_count(); ++e)
    out << "edge " << e + 1 << ": " << T.edges[e].end0 << " -- "
        << T.edges[e].end1 << "\n";
  out << "rho0: " << T.rho0.cycles() << "\n";
  out << "rho1: " << T.rho1.cycles() << "\n";
  return out.str();
}

std::string tree_svg(const RationalMap& f, const Dessin& T,
                     const Tolerances& tol) {
  LiftOpts opt;
  opt.tol = tol;
  opt.record_trace = true;

  // Each edge is the union of the two half-edges traced from its interior
  // label point towards the side-0 and side-1 vertices.
  std::vector<std::vector<cpx>> curves;
  Box box;
  for (int e = 0; e < T.edge_count(); ++e) {
    std::vector<cpx> pts;
    for (int side = 0; side < 2; ++side) {
      cpx val = side == 0 ? T.val0 : T.val1;
      LiftResult lr =
          lift_path(f, segment_route(T.base.z, val), T.fiber.points[e],
                    /*stop_short=*/true, opt);
      std::vector<cpx> half;
      for (const auto& [t, p] : lr.trace)
        if (!p.is_inf()) half.push_back(p.z);
      // close the visual gap left by stopping short of the critical point
      const SpherePt& vpos = T.verts[T.vertex_of(e, side)].pos;
      if (!vpos.is_inf()) half.push_back(vpos.z);
      if (side == 0) {
        std::reverse(half.begin(), half.end());
        pts = std::move(half);
      } else if (!half.empty()) {
        pts.insert(pts.end(), half.begin() + 1, half.end());
      }
    }
    for (cpx z : pts) box.add(z);
    curves.push_back(std::move(pts));
  }
  for (const TreeVertex& tv : T.verts)
    if (!tv.pos.is_inf()) box.add(tv.pos.z);

  double span = std::max(box.span(), 1e-3);
  double pad = 0.08 * span;
  double lw = 0.010 * span;
  double r = 0.022 * span;

  std::ostringstream out;
  out << svg_open(box, pad);
  out << "<g stroke=\"#2c3e50\" stroke-width=\"" << g5(lw)
      << "\" stroke-linecap=\"round\">\n";
  for (const auto& c : curves) polyline(out, c, "");
  out << "</g>\n";
  for (const TreeVertex& tv : T.verts) {
    if (tv.pos.is_inf()) continue;
    out << "<circle cx=\"" << g5(tv.pos.z.real()) << "\" cy=\""
        << g5(-tv.pos.z.imag()) << "\" r=\"" << g5(r) << "\" fill=\""
        << (tv.side == 0 ? "#ffffff" : "#2c3e50") << "\" stroke=\"#2c3e50\" stroke-width=\""
        << g5(lw) << "\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::string level_set_svg(const RationalMap& f, double half_width, int cells) {
  if (cells < 8) cells = 8;
  const int n = cells + 1;
  const double h = 2.0 * half_width / cells;
  auto coord = [&](int i) { return -half_width + h * i; };

  // signed field: |f|^2 - 1, clamped where f blows up
  std::vector<double> s(static_cast<size_t>(n) * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      SpherePt w = f.eval(SpherePt(coord(i), coord(j)));
      double v = w.is_inf() ? 3.0 : std::norm(w.z) - 1.0;
      if (!std::isfinite(v) || v > 3.0) v = 3.0;
      if (v < -1.0) v = -1.0;
      s[static_cast<size_t>(j) * n + i] = v;
    }
  auto at = [&](int i, int j) { return s[static_cast<size_t>(j) * n + i]; };
  // interpolated zero crossing between two grid corners
  auto cross = [&](double a, double b, double xa, double ya, double xb,
                   double yb) {
    double t = a / (a - b);
    if (!(t >= 0.0 && t <= 1.0)) t = 0.5;
    return cpx(xa + t * (xb - xa), ya + t * (yb - ya));
  };

  std::ostringstream segs;
  int seg_count = 0;
  for (int j = 0; j < cells; ++j)
    for (int i = 0; i < cells; ++i) {
      double x0 = coord(i), x1 = coord(i + 1);
      double y0 = coord(j), y1 = coord(j + 1);
      double a = at(i, j), b = at(i + 1, j);       // bottom corners
      double c = at(i + 1, j + 1), d = at(i, j + 1);  // top corners
      int idx = (a < 0 ? 1 : 0) | (b < 0 ? 2 : 0) | (c < 0 ? 4 : 0) |
                (d < 0 ? 8 : 0);
      if (idx == 0 || idx == 15) continue;
      cpx pb = cross(a, b, x0, y0, x1, y0);  // bottom edge
      cpx pr = cross(b, c, x1, y0, x1, y1);  // right edge
      cpx pt = cross(d, c, x0, y1, x1, y1);  // top edge
      cpx pl = cross(a, d, x0, y0, x0, y1);  // left edge
      auto emit = [&](cpx u, cpx v) {
        segs << "M" << g5(u.real()) << " " << g5(-u.imag()) << "L"
             << g5(v.real()) << " " << g5(-v.imag());
        ++seg_count;
      };
      switch (idx) {
        case 1: case 14: emit(pl, pb); break;
        case 2: case 13: emit(pb, pr); break;
        case 3: case 12: emit(pl, pr); break;
        case 4: case 11: emit(pr, pt); break;
        case 6: case 9:  emit(pb, pt); break;
        case 7: case 8:  emit(pl, pt); break;
        case 5: case 10: {
          // saddle: split by the sign at the cell center
          double m = 0.25 * (a + b + c + d);
          bool center_in = m < 0;
          if ((idx == 5) == center_in) {
            emit(pl, pt);
            emit(pb, pr);
          } else {
            emit(pl, pb);
            emit(pr, pt);
          }
          break;
        }
        default: break;
      }
    }

  Box box;
  box.add(cpx(-half_width, -half_width));
  box.add(cpx(half_width, half_width));
  double pad = 0.05 * box.span();
  double lw = 0.006 * box.span();

  std::ostringstream out;
  out << svg_open(box, pad);
  // reference unit circle
  out << "<circle cx=\"0\" cy=\"0\" r=\"1\" fill=\"none\" stroke=\"#b0b7bd\" "
         "stroke-width=\""
      << g5(0.5 * lw) << "\" stroke-dasharray=\"" << g5(6 * lw) << " "
      << g5(4 * lw) << "\"/>\n";
  out << "<path fill=\"none\" stroke=\"#2c3e50\" stroke-width=\"" << g5(lw)
      << "\" d=\"" << segs.str() << "\"/>\n";
  // critical points inside the window
  for (const RootCluster& rc : poly_roots(f.wronskian())) {
    cpx z = rc.root;
    if (std::abs(z.real()) > half_width || std::abs(z.imag()) > half_width)
      continue;
    out << "<circle cx=\"" << g5(z.real()) << "\" cy=\"" << g5(-z.imag())
        << "\" r=\"" << g5(2.2 * lw) << "\" fill=\"#c0392b\"/>\n";
  }
  out << "</svg>\n";
  (void)seg_count;
  return out.str();
}

std::string trace_csv(const std::vector<std::pair<double, SpherePt>>& trace) {
  std::ostringstream out;
  out << "t,re,im\n";
  char buf[96];
  for (const auto& [t, p] : trace) {
    if (p.is_inf()) {
      std::snprintf(buf, sizeof buf, "%.17g,inf,inf\n", t);
    } else {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", t, p.z.real(),
                    p.z.imag());
    }
    out << buf;
  }
  return out.str();
}

}  // namespace mono
