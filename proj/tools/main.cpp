// ctpmap: monodromy and constant-pullback analysis for rational maps.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mono/conditions.hpp"
#include "mono/ctp.hpp"
#include "mono/mapdoc.hpp"
#include "mono/render.hpp"
#include "mono/verify.hpp"

using json = nlohmann::ordered_json;
using namespace mono;

namespace {

// exit codes: 0 ok, 1 failed verification assertion, 2 bad input, 3 numerics
int code_to_exit(const std::string& code) {
  static const char* input_errors[] = {
      "MapDocumentInvalid", "BadMarkedSet",        "DegreeTooLow",
      "UnsupportedConfiguration", "DomainError",   "DegenerateQuadruple",
      "MarkedPointOnPoleOfAmbiguity", "NotBelyiPolynomial", "ZeroMap"};
  for (const char* c : input_errors)
    if (code == c) return 2;
  return 3;
}

std::string labels1(const std::vector<int>& v) {
  std::string s = "{";
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(v[i] + 1);
  }
  return s + "}";
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail("DomainError", "cannot write \"" + path + "\"");
  out << content;
}

struct Cli {
  double tol_factor = 1.0;
  uint64_t seed = 12345;
  bool seed_set = false;
  std::string orientation = "ccw";
  bool orientation_set = false;
  bool as_json = false;

  // document options first, then explicit command-line overrides
  Options effective(const MapDocument* doc) const {
    Options opt;
    if (doc) opt = doc->options;
    opt.tol.root_residual *= tol_factor;
    opt.tol.cluster *= tol_factor;
    opt.tol.tracking *= tol_factor;
    if (seed_set || !doc) opt.seed = seed;
    if (orientation_set || !doc)
      opt.orientation =
          orientation == "cw" ? Orientation::CW : Orientation::CCW;
    return opt;
  }

  void emit(const std::string& text, const json& j) const {
    if (as_json)
      std::cout << j.dump(2) << "\n";
    else
      std::cout << text;
  }
};

cpx parse_base(const std::string& s) {
  double re = 0, im = 0;
  char extra = 0;
  int got = std::sscanf(s.c_str(), "%lf,%lf%c", &re, &im, &extra);
  if (got != 2) fail("DomainError", "--base expects RE,IM");
  return cpx(re, im);
}

cpx pick_base(const RationalMap& f, const MapDocument& doc,
              const std::string& flag, const Options& opt) {
  if (!flag.empty()) return parse_base(flag);
  if (doc.base) return *doc.base;
  SpherePt b = auto_base(f, opt.tol);
  if (b.is_inf()) fail("UnsupportedConfiguration", "no finite base point");
  return b.z;
}

int cmd_map_show(const Cli& cli, const std::string& file) {
  MapDocument doc = load_map_document(file);
  Options opt = cli.effective(&doc);
  MarkedMap mm = classify(doc.f, doc.marked, opt.tol);
  CriticalPortrait cp = critical_portrait(doc.f, opt.tol, opt.seed);

  std::ostringstream out;
  json j;
  out << "name: " << doc.name << "\n";
  out << "degree: " << doc.f.degree() << "\n";
  out << "kind: " << to_string(mm.kind) << "\n";
  j["name"] = doc.name;
  j["degree"] = doc.f.degree();
  j["kind"] = to_string(mm.kind);

  out << "critical_values:";
  json jv = json::array();
  for (size_t i = 0; i < mm.critvals.size(); ++i) {
    out << (i ? ", " : " ") << fmt_pt(mm.critvals[i]);
    jv.push_back(fmt_pt(mm.critvals[i]));
  }
  out << "\n";
  j["critical_values"] = jv;

  out << "critical_points: " << cp.points.size() << "\n";
  json jp = json::array();
  for (const CriticalPoint& c : cp.points) {
    out << "  " << fmt_pt(c.point) << " (local degree " << c.local_degree
        << ")\n";
    jp.push_back({{"point", fmt_pt(c.point)}, {"local_degree", c.local_degree}});
  }
  j["critical_points"] = jp;

  out << "marked_points: " << mm.marked.size() << "\n";
  json jm = json::array();
  for (size_t i = 0; i < mm.marked.size(); ++i) {
    bool regular = false;
    for (int k : mm.regular_idx) regular = regular || k == static_cast<int>(i);
    out << "  " << i + 1 << ": " << fmt_pt(mm.marked[i]) << " -> "
        << fmt_pt(mm.images[i]) << (regular ? " (regular)" : " (critical-image)")
        << "\n";
    jm.push_back({{"point", fmt_pt(mm.marked[i])},
                  {"image", fmt_pt(mm.images[i])},
                  {"regular", regular}});
  }
  j["marked_points"] = jm;

  out << "frame_size: " << mm.post.size() << "\n";
  j["frame_size"] = mm.post.size();
  cli.emit(out.str(), j);
  return 0;
}

int cmd_monodromy(const Cli& cli, const std::string& file,
                  const std::string& base_flag, const std::string& csv_prefix) {
  MapDocument doc = load_map_document(file);
  Options opt = cli.effective(&doc);
  cpx b = pick_base(doc.f, doc, base_flag, opt);
  MonodromyData md = generators_at(doc.f, b, opt);
  PermGroup g = monodromy_group(md);

  std::ostringstream out;
  json j;
  out << "base: " << fmt_pt(md.base) << "\n";
  out << "fiber_size: " << md.fiber.size() << "\n";
  j["base"] = fmt_pt(md.base);
  j["fiber_size"] = md.fiber.size();
  json jf = json::array();
  for (int i = 0; i < md.fiber.size(); ++i) {
    out << "  " << i + 1 << ": " << fmt_pt(md.fiber.points[i]) << "\n";
    jf.push_back(fmt_pt(md.fiber.points[i]));
  }
  j["fiber"] = jf;
  json jg = json::object();
  for (size_t i = 0; i < md.values.size(); ++i) {
    std::string name = "rho(" + fmt_pt(md.values[i]) + ")";
    out << name << ": " << md.perms[i].cycles() << "\n";
    jg[name] = md.perms[i].cycles();
  }
  out << "rho(inf): " << md.rho_inf.cycles() << "\n";
  jg["rho(inf)"] = md.rho_inf.cycles();
  j["generators"] = jg;
  out << "group_order: " << g.order() << "\n";
  j["group_order"] = g.order();

  if (!csv_prefix.empty()) {
    LiftOpts lo;
    lo.tol = opt.tol;
    lo.record_trace = true;
    json jc = json::array();
    for (size_t i = 0; i < md.loops.size(); ++i)
      for (int l = 0; l < md.fiber.size(); ++l) {
        LiftResult lr =
            lift_path(doc.f, md.loops[i], md.fiber.points[l], false, lo);
        std::string path = csv_prefix + "-v" + std::to_string(i + 1) + "-l" +
                           std::to_string(l + 1) + ".csv";
        write_file(path, trace_csv(lr.trace));
        out << "trace: " << path << "\n";
        jc.push_back(path);
      }
    j["traces"] = jc;
  }
  cli.emit(out.str(), j);
  return 0;
}

int cmd_orbit(const Cli& cli, const std::string& file,
              const std::string& set_arg, const std::string& base_flag) {
  MapDocument doc = load_map_document(file);
  Options opt = cli.effective(&doc);
  cpx b = pick_base(doc.f, doc, base_flag, opt);
  MonodromyData md = generators_at(doc.f, b, opt);

  std::vector<int> labels;
  {
    std::stringstream ss(set_arg);
    std::string item;
    while (std::getline(ss, item, ',')) {
      int v = 0;
      try {
        v = std::stoi(item);
      } catch (...) {
        fail("DomainError", "--set expects comma-separated labels");
      }
      if (v < 1 || v > md.fiber.size())
        fail("DomainError", "label " + std::to_string(v) +
                                " outside 1.." + std::to_string(md.fiber.size()));
      labels.push_back(v - 1);
    }
  }
  if (labels.empty()) fail("DomainError", "--set must name at least one label");
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());

  PermGroup g = monodromy_group(md);
  auto orbit = g.orbit_of_set(labels);

  std::ostringstream out;
  json j;
  out << "base: " << fmt_pt(md.base) << "\n";
  out << "set: " << labels1(labels) << "\n";
  out << "orbit_size: " << orbit.size() << "\n";
  j["base"] = fmt_pt(md.base);
  j["set"] = labels1(labels);
  j["orbit_size"] = orbit.size();
  json jo = json::array();
  for (size_t i = 0; i < orbit.size(); ++i) {
    out << "  " << i + 1 << ": " << labels1(orbit[i]) << "\n";
    jo.push_back(labels1(orbit[i]));
  }
  j["orbit"] = jo;
  cli.emit(out.str(), j);
  return 0;
}

int cmd_ctp(const Cli& cli, const std::string& file) {
  MapDocument doc = load_map_document(file);
  Options opt = cli.effective(&doc);
  MarkedMap mm = classify(doc.f, doc.marked, opt.tol);
  CtpReport rep = ctp_decide(mm, opt);

  std::ostringstream out;
  out << "name: " << doc.name << "\n";
  out << "kind: " << to_string(mm.kind) << "\n";
  out << rep.text();

  json j;
  j["name"] = doc.name;
  j["kind"] = to_string(mm.kind);
  j["verdict"] = to_string(rep.verdict);
  j["method"] = to_string(rep.method);
  if (rep.witness) {
    const CtpWitness& w = *rep.witness;
    j["witness"] = {{"value", fmt_pt(w.value)},
                    {"branch", fmt_pt(w.branch)},
                    {"labels", [&] {
                       json a = json::array();
                       for (int l : w.labels) a.push_back(l + 1);
                       return a;
                     }()},
                    {"count", w.count}};
  } else {
    j["witness"] = nullptr;
  }
  j["orbit_size"] = rep.orbit_size;
  cli.emit(out.str(), j);
  return 0;
}

int cmd_stab(const Cli& cli, const std::string& file) {
  MapDocument doc = load_map_document(file);
  Options opt = cli.effective(&doc);
  MarkedMap mm = classify(doc.f, doc.marked, opt.tol);
  std::vector<SpherePt> epts;
  for (int i : mm.regular_idx) epts.push_back(mm.marked[i]);
  StabReport sr = stab_report(doc.f, doc.marked, epts, opt);

  std::ostringstream out;
  out << "name: " << doc.name << "\n" << sr.text();

  json j;
  j["name"] = doc.name;
  j["group_order"] = sr.group_order;
  json je = json::array();
  for (int l : sr.e_labels) je.push_back(l + 1);
  j["e_labels"] = je;
  j["stab_point_orders"] = sr.stab_point_orders;
  j["stab_set_order"] = sr.stab_set_order;
  j["stab_star_order"] = sr.stab_star_order;
  j["marked_set_order"] = sr.marked_set_order;
  j["pointwise_equal"] = sr.pointwise_equal;
  j["nonempty_difference"] = sr.nonempty_difference;
  j["setwise_containment"] = sr.setwise_containment;
  j["intersection_identity"] = sr.intersection_identity;
  j["exponent"] = sr.exponent;
  cli.emit(out.str(), j);
  return 0;
}

int cmd_factor(const Cli& cli, const std::string& file,
               const std::string& outer_file) {
  MapDocument doc = load_map_document(file);
  Options opt = cli.effective(&doc);

  SymmetryGroup sym = affine_symmetries(doc.f, opt);
  std::ostringstream out;
  json j;
  out << "name: " << doc.name << "\n";
  out << "symmetry_order: " << sym.order << "\n";
  out << "symmetry_center: " << fmt_cpx(sym.center) << "\n";
  out << "symmetry_zeta: " << fmt_cpx(sym.zeta) << "\n";
  j["name"] = doc.name;
  j["symmetry_order"] = sym.order;
  j["symmetry_center"] = fmt_cpx(sym.center);
  j["symmetry_zeta"] = fmt_cpx(sym.zeta);

  std::optional<PowerFactor> pf;
  McReport mc;
  if (!doc.marked.empty()) {
    MarkedMap mm = classify(doc.f, doc.marked, opt.tol);
    std::vector<SpherePt> epts;
    for (int i : mm.regular_idx) epts.push_back(mm.marked[i]);
    if (!epts.empty()) pf = power_factor(doc.f, epts, opt);
    mc = mcmullen_verdict(mm, opt);
  }
  if (pf) {
    out << "power_factor: d=" << pf->d << " center=" << fmt_cpx(pf->center)
        << " g_degree=" << pf->g.degree() << "\n";
    j["power_factor"] = {{"d", pf->d},
                         {"center", fmt_cpx(pf->center)},
                         {"g_degree", pf->g.degree()}};
  } else {
    out << "power_factor: none\n";
    j["power_factor"] = nullptr;
  }
  out << "mcmullen: " << to_string(mc.verdict)
      << (mc.definitive ? " (definitive)" : " (restricted)") << "\n";
  j["mcmullen"] = to_string(mc.verdict);
  j["mcmullen_definitive"] = mc.definitive;

  if (!outer_file.empty()) {
    // verify a proposed factorization f = outer o S for the built-in
    // degree-4 Belyi map S(z) = z^3(2-z)/(2z-1)
    MapDocument outer = load_map_document(outer_file);
    RationalMap s(Poly({0, 0, 0, 2, -1}), Poly({-1, 2}));
    RationalMap built = compose(outer.f, s, opt.tol);
    Poly cross = built.num() * doc.f.den() - doc.f.num() * built.den();
    double scale = built.num().norm1() * doc.f.den().norm1() +
                   doc.f.num().norm1() * built.den().norm1();
    double dev = cross.norm1() / std::max(scale, 1e-300);
    bool ok = dev < 1e-10;
    out << "outer: " << outer.name << "\n";
    out << "composition_deviation: " << fmt_num(dev) << "\n";
    out << "factorization: " << (ok ? "confirmed" : "rejected") << "\n";
    j["outer"] = outer.name;
    j["composition_deviation"] = fmt_num(dev);
    j["factorization"] = ok ? "confirmed" : "rejected";
  }
  cli.emit(out.str(), j);
  return 0;
}

int cmd_tree(const Cli& cli, const std::string& file, const std::string& svg) {
  MapDocument doc = load_map_document(file);
  Options opt = cli.effective(&doc);
  Dessin T = build_tree(doc.f, opt.tol);

  std::ostringstream out;
  out << "name: " << doc.name << "\n" << tree_text(T);

  json j;
  j["name"] = doc.name;
  j["val0"] = fmt_cpx(T.val0);
  j["val1"] = fmt_cpx(T.val1);
  j["edges"] = T.edge_count();
  j["vertices"] = T.verts.size();
  json jv = json::array();
  for (const TreeVertex& v : T.verts) {
    json row;
    row["side"] = v.side;
    row["pos"] = fmt_pt(v.pos);
    row["degree"] = v.edges.size();
    json rot = json::array();
    for (int e : v.edges) rot.push_back(e + 1);
    row["rotation"] = rot;
    jv.push_back(row);
  }
  j["vertex_table"] = jv;
  json je = json::array();
  for (const TreeEdge& e : T.edges)
    je.push_back({{"end0", e.end0}, {"end1", e.end1}});
  j["edge_table"] = je;
  j["rho0"] = T.rho0.cycles();
  j["rho1"] = T.rho1.cycles();

  if (!svg.empty()) {
    write_file(svg, tree_svg(doc.f, T, opt.tol));
    out << "svg: " << svg << "\n";
    j["svg"] = svg;
  }
  cli.emit(out.str(), j);
  return 0;
}

int cmd_plot(const Cli& cli, const std::string& file, const std::string& svg,
             double width, int cells) {
  MapDocument doc = load_map_document(file);
  std::string content = level_set_svg(doc.f, width, cells);
  if (svg.empty()) {
    std::cout << content;
    return 0;
  }
  write_file(svg, content);
  json j;
  j["name"] = doc.name;
  j["svg"] = svg;
  cli.emit("svg: " + svg + "\n", j);
  return 0;
}

int cmd_verify(const Cli& cli, const std::string& which) {
  Options opt = cli.effective(nullptr);
  std::vector<CheckResult> checks = verify_case(which, opt);
  json j;
  j["case"] = which;
  json ja = json::array();
  for (const CheckResult& c : checks)
    ja.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  j["checks"] = ja;
  j["all_pass"] = all_pass(checks);
  cli.emit(check_table(checks), j);
  return all_pass(checks) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"monodromy, constant Thurston pullback and symmetry analysis "
               "for marked rational maps"};
  app.require_subcommand(1);

  Cli cli;
  auto* tol_opt = app.add_option(
      "--tol", cli.tol_factor,
      "scale factor applied to the default numerical tolerances");
  tol_opt->check(CLI::PositiveNumber);
  auto* seed_opt =
      app.add_option("--seed", cli.seed, "seed for randomized internals");
  auto* orient_opt =
      app.add_option("--orientation", cli.orientation,
                     "generator loop orientation (ccw or cw)")
          ->check(CLI::IsMember({"ccw", "cw"}));
  app.add_flag("--json", cli.as_json, "emit JSON instead of text");

  std::string file, base_flag, csv_prefix, set_arg, outer_file, svg_out;
  std::string verify_which = "all";
  double plot_width = 2.2;
  int plot_cells = 160;
  bool preimage_circle = false;

  CLI::App* map_cmd = app.add_subcommand("map", "inspect a map document");
  CLI::App* map_show =
      map_cmd->add_subcommand("show", "degrees, critical portrait, marked set");
  map_show->add_option("file", file, "map document")->required();
  map_cmd->require_subcommand(1);

  CLI::App* mono_cmd =
      app.add_subcommand("monodromy", "generators of the monodromy group");
  mono_cmd->add_option("file", file, "map document")->required();
  mono_cmd->add_option("--base", base_flag, "base point RE,IM");
  mono_cmd->add_option("--trace-csv", csv_prefix,
                       "write one t,re,im CSV per generator lift");

  CLI::App* orbit_cmd =
      app.add_subcommand("orbit", "orbit of a label set under the monodromy");
  orbit_cmd->add_option("file", file, "map document")->required();
  orbit_cmd->add_option("--set", set_arg, "comma-separated 1-based labels")
      ->required();
  orbit_cmd->add_option("--base", base_flag, "base point RE,IM");

  CLI::App* ctp_cmd =
      app.add_subcommand("ctp", "decide the constant-pullback property");
  ctp_cmd->add_option("file", file, "map document")->required();

  CLI::App* stab_cmd =
      app.add_subcommand("stab", "stabilizer survey of the marked set");
  stab_cmd->add_option("file", file, "map document")->required();

  CLI::App* factor_cmd = app.add_subcommand(
      "factor", "affine symmetries, power factor, McMullen verdict");
  factor_cmd->add_option("file", file, "map document")->required();
  factor_cmd->add_option("--verify-outer", outer_file,
                         "check f = OUTER o S for the supplied outer document");

  CLI::App* tree_cmd = app.add_subcommand(
      "tree", "planar tree of a polynomial with two finite critical values");
  tree_cmd->add_option("file", file, "map document")->required();
  tree_cmd->add_option("--svg", svg_out, "write an SVG drawing");

  CLI::App* plot_cmd = app.add_subcommand("plot", "figure emission");
  plot_cmd->add_option("file", file, "map document")->required();
  plot_cmd->add_flag("--preimage-circle", preimage_circle,
                     "level set |f(z)| = 1 by marching squares");
  plot_cmd->add_option("--svg", svg_out, "output file (stdout when absent)");
  plot_cmd->add_option("--width", plot_width, "half-width of the window");
  plot_cmd->add_option("--cells", plot_cells, "grid resolution");

  CLI::App* verify_cmd =
      app.add_subcommand("verify-paper", "run the reproduction suite");
  verify_cmd->add_option("--case", verify_which, "s, r, appendix or all")
      ->check(CLI::IsMember({"s", "r", "appendix", "all"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  cli.seed_set = seed_opt->count() > 0;
  cli.orientation_set = orient_opt->count() > 0;

  try {
    if (map_show->parsed()) return cmd_map_show(cli, file);
    if (mono_cmd->parsed())
      return cmd_monodromy(cli, file, base_flag, csv_prefix);
    if (orbit_cmd->parsed()) return cmd_orbit(cli, file, set_arg, base_flag);
    if (ctp_cmd->parsed()) return cmd_ctp(cli, file);
    if (stab_cmd->parsed()) return cmd_stab(cli, file);
    if (factor_cmd->parsed()) return cmd_factor(cli, file, outer_file);
    if (tree_cmd->parsed()) return cmd_tree(cli, file, svg_out);
    if (plot_cmd->parsed()) {
      if (!preimage_circle)
        fail("DomainError", "plot needs --preimage-circle");
      return cmd_plot(cli, file, svg_out, plot_width, plot_cells);
    }
    if (verify_cmd->parsed()) return cmd_verify(cli, verify_which);
  } catch (const CalcError& e) {
    std::cerr << "error [" << e.code() << "]: " << e.what() << "\n";
    return code_to_exit(e.code());
  }
  std::cerr << "error: no subcommand\n";
  return 2;
}
