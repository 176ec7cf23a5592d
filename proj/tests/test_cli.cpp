#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "mono/mapdoc.hpp"

using namespace mono;
using json = nlohmann::ordered_json;

namespace {

struct RunResult {
  int exit_code;
  std::string out;
};

// run the binary and capture stdout (+stderr when merged into the command)
RunResult run(const std::string& args) {
  std::string cmd = std::string(CTPMAP_BIN) + " " + args;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  int status = pclose(pipe);
  int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return {code, out};
}

std::string maps(const std::string& name) {
  return std::string(MAPS_DIR) + "/" + name;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

// value of a "key: value" line in a report
std::string field(const std::string& text, const std::string& key) {
  std::string tag = key + ": ";
  size_t at = text.find(tag);
  if (at != 0) {
    at = text.find("\n" + tag);
    if (at == std::string::npos) return "";
    ++at;
  }
  size_t from = at + tag.size();
  size_t to = text.find('\n', from);
  return text.substr(from, to - from);
}

}  // namespace

TEST_CASE("ctp command reports verdicts without asserting") {
  RunResult s = run("ctp " + maps("s.json"));
  CHECK(s.exit_code == 0);
  CHECK(field(s.out, "verdict") == "CTP");
  CHECK(field(s.out, "method") == "finite-check");
  CHECK(field(s.out, "orbit_size") == "1");

  RunResult r = run("ctp " + maps("r.json"));
  CHECK(r.exit_code == 0);
  CHECK(field(r.out, "verdict") == "CTP");
  CHECK(field(r.out, "kind") == "mixing");
  CHECK(field(r.out, "orbit_size") == "8");

  // a negative verdict still exits 0: the command reports, it does not assert
  RunResult n = run("ctp " + maps("notctp.json"));
  CHECK(n.exit_code == 0);
  CHECK(field(n.out, "verdict") == "NOT_CTP");
  CHECK(field(n.out, "witness") == "v=1 + 0i c=1 + 0i F={1,2,3} m=2");

  RunResult z = run("ctp " + maps("z3.json"));
  CHECK(z.exit_code == 0);
  CHECK(field(z.out, "verdict") == "NOT_CTP");
  CHECK(field(z.out, "method") == "image-split-fastpath");
}

TEST_CASE("stab command surfaces the exponent") {
  RunResult s = run("stab " + maps("s.json"));
  CHECK(s.exit_code == 0);
  CHECK(field(s.out, "exponent") == "3");
  CHECK(field(s.out, "group_order") == "12");
  CHECK(field(s.out, "pointwise_equal") == "false");

  RunResult r = run("stab " + maps("r.json"));
  CHECK(r.exit_code == 0);
  CHECK(field(r.out, "exponent") == "2");
  CHECK(field(r.out, "intersection_identity") == "true");
}

TEST_CASE("factor command: symmetries, power factor and outer verification") {
  RunResult m = run("factor " + maps("mcmullen.json"));
  CHECK(m.exit_code == 0);
  CHECK(field(m.out, "symmetry_order") == "3");
  CHECK(contains(field(m.out, "power_factor"), "d=3"));
  CHECK(contains(field(m.out, "mcmullen"), "satisfied-via-power-map"));
  CHECK(!contains(field(m.out, "mcmullen"), "not-satisfied"));

  RunResult r = run("factor " + maps("r.json"));
  CHECK(r.exit_code == 0);
  CHECK(field(r.out, "symmetry_order") == "2");
  CHECK(field(r.out, "power_factor") == "none");
  CHECK(contains(field(r.out, "mcmullen"), "not-satisfied-via-power-map"));

  RunResult v = run("factor " + maps("composite.json") + " --verify-outer " +
                    maps("outer.json"));
  CHECK(v.exit_code == 0);
  CHECK(field(v.out, "factorization") == "confirmed");

  // the wrong outer is rejected but the command still succeeds
  RunResult w = run("factor " + maps("composite.json") + " --verify-outer " +
                    maps("z3.json"));
  CHECK(w.exit_code == 0);
  CHECK(field(w.out, "factorization") == "rejected");
}

TEST_CASE("monodromy output is byte-deterministic") {
  RunResult a = run("monodromy " + maps("s.json"));
  RunResult b = run("monodromy " + maps("s.json"));
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
  CHECK(field(a.out, "group_order") == "12");
  CHECK(field(a.out, "fiber_size") == "4");

  RunResult c = run("ctp " + maps("r.json"));
  RunResult d = run("ctp " + maps("r.json"));
  CHECK(c.out == d.out);
}

TEST_CASE("orbit command walks a label set") {
  RunResult r = run("orbit " + maps("r.json") + " --set 2,7,8");
  CHECK(r.exit_code == 0);
  CHECK(field(r.out, "orbit_size") == "8");
  CHECK(field(r.out, "set") == "{2, 7, 8}");

  // out-of-range labels are an input error
  RunResult bad = run("orbit " + maps("r.json") + " --set 0,5 2>&1");
  CHECK(bad.exit_code == 2);
}

TEST_CASE("json mirrors the text fields") {
  RunResult text = run("ctp " + maps("s.json"));
  RunResult as_json = run("--json ctp " + maps("s.json"));
  REQUIRE(as_json.exit_code == 0);
  json j = json::parse(as_json.out);
  CHECK(j["verdict"].get<std::string>() == field(text.out, "verdict"));
  CHECK(j["method"].get<std::string>() == field(text.out, "method"));
  CHECK(std::to_string(j["orbit_size"].get<long>()) ==
        field(text.out, "orbit_size"));
  CHECK(j["witness"].is_null());

  RunResult stext = run("stab " + maps("s.json"));
  RunResult sjson = run("--json stab " + maps("s.json"));
  json js = json::parse(sjson.out);
  CHECK(std::to_string(js["group_order"].get<long>()) ==
        field(stext.out, "group_order"));
  CHECK(std::to_string(js["exponent"].get<int>()) ==
        field(stext.out, "exponent"));
  CHECK((js["pointwise_equal"].get<bool>() ? "true" : "false") ==
        field(stext.out, "pointwise_equal"));

  RunResult njson = run("--json ctp " + maps("notctp.json"));
  json jn = json::parse(njson.out);
  REQUIRE(!jn["witness"].is_null());
  CHECK(jn["witness"]["count"].get<int>() == 2);
  CHECK(jn["witness"]["labels"] == json::array({1, 2, 3}));
}

TEST_CASE("input errors exit 2") {
  CHECK(run("ctp /nonexistent/nowhere.json 2>&1").exit_code == 2);

  // unknown top-level key
  {
    std::ofstream f("cli_tmp_badkey.json");
    f << "{\"name\":\"x\",\"numerator\":[[0,0],[1,0]],\"denominator\":[[1,0]],"
         "\"marked_points\":[],\"extra\":1}";
  }
  RunResult bad = run("ctp cli_tmp_badkey.json 2>&1");
  CHECK(bad.exit_code == 2);
  CHECK(contains(bad.out, "MapDocumentInvalid"));
  CHECK(contains(bad.out, "extra"));

  {
    std::ofstream f("cli_tmp_garbage.json");
    f << "not json at all {";
  }
  CHECK(run("ctp cli_tmp_garbage.json 2>&1").exit_code == 2);

  // command-line misuse
  CHECK(run("no-such-command 2>&1").exit_code == 2);
  CHECK(run("plot " + maps("s.json") + " 2>&1").exit_code == 2);
  CHECK(run("tree " + maps("s.json") + " 2>&1").exit_code == 2);  // not Belyi
  std::remove("cli_tmp_badkey.json");
  std::remove("cli_tmp_garbage.json");
}

TEST_CASE("verify-paper cases pass and assert") {
  RunResult s = run("verify-paper --case s");
  CHECK(s.exit_code == 0);
  CHECK(contains(s.out, "[PASS] s-stabilizers"));
  CHECK(!contains(s.out, "[FAIL]"));

  RunResult a = run("verify-paper --case appendix");
  CHECK(a.exit_code == 0);
  CHECK(contains(a.out, "[PASS] appendix-branches"));
  CHECK(contains(a.out, "[PASS] appendix-cross-ratio"));

  RunResult j = run("--json verify-paper --case appendix");
  json jj = json::parse(j.out);
  CHECK(jj["all_pass"].get<bool>());
  CHECK(jj["checks"].size() == 2);
}

TEST_CASE("tree and plot emit figures") {
  RunResult t = run("tree " + maps("notctp.json") + " --svg cli_tmp_tree.svg");
  CHECK(t.exit_code == 0);
  CHECK(contains(t.out, "edge 1: 0 -- 2"));
  CHECK(contains(t.out, "edge 2: 1 -- 2"));
  CHECK(contains(t.out, "edge 3: 1 -- 3"));
  CHECK(contains(t.out, "rho0: (2 3)"));
  std::string svg = slurp("cli_tmp_tree.svg");
  CHECK(contains(svg, "<svg"));
  CHECK(contains(svg, "<polyline"));
  CHECK(contains(svg, "<circle"));
  std::remove("cli_tmp_tree.svg");

  RunResult p = run("plot " + maps("s.json") +
                    " --preimage-circle --svg cli_tmp_level.svg --cells 64");
  CHECK(p.exit_code == 0);
  std::string level = slurp("cli_tmp_level.svg");
  CHECK(contains(level, "<svg"));
  CHECK(contains(level, "<path"));
  std::remove("cli_tmp_level.svg");

  RunResult csv = run("monodromy " + maps("z3.json") +
                      " --base 1.0,0.5 --trace-csv cli_tmp_tr");
  CHECK(csv.exit_code == 0);
  std::string t1 = slurp("cli_tmp_tr-v1-l1.csv");
  CHECK(t1.rfind("t,re,im\n", 0) == 0);
  CHECK(t1.size() > 40);
  for (int v = 1; v <= 1; ++v)
    for (int l = 1; l <= 3; ++l)
      std::remove(("cli_tmp_tr-v" + std::to_string(v) + "-l" +
                   std::to_string(l) + ".csv")
                      .c_str());
}

TEST_CASE("bundled documents round-trip byte-identically") {
  const char* names[] = {"s.json",  "r.json",       "notctp.json", "z3.json",
                         "mcmullen.json", "outer.json", "composite.json"};
  for (const char* n : names) {
    CAPTURE(n);
    std::string raw = slurp(maps(n));
    MapDocument doc = load_map_document(maps(n));
    CHECK(serialize_map_document(doc) == raw);
  }
}

TEST_CASE("document schema errors carry positions") {
  auto expect_bad = [](const std::string& body, const std::string& hint) {
    CAPTURE(body);
    CAPTURE(hint);
    try {
      parse_map_document(body);
      FAIL_CHECK("expected MapDocumentInvalid");
    } catch (const CalcError& e) {
      CHECK(std::string(e.code()) == "MapDocumentInvalid");
      CHECK(std::string(e.what()).find(hint) != std::string::npos);
    }
  };
  expect_bad("[]", "object");
  expect_bad("{\"numerator\":[[1,0]],\"denominator\":[[1,0]],"
             "\"marked_points\":[]}",
             "name");
  expect_bad("{\"name\":\"x\",\"numerator\":[[0,0],[\"a\",0]],"
             "\"denominator\":[[1,0]],\"marked_points\":[]}",
             "numerator[1]");
  expect_bad("{\"name\":\"x\",\"numerator\":[[0,0],[1,0]],"
             "\"denominator\":[[1,0]],\"marked_points\":[\"infinity\"]}",
             "marked_points[0]");
  expect_bad("{\"name\":\"x\",\"numerator\":[[0,0],[1,0]],"
             "\"denominator\":[[1,0]],\"marked_points\":[],"
             "\"options\":{\"seed\":-1}}",
             "seed");
  expect_bad("{\"name\":\"x\",\"numerator\":[[0,0],[1,0]],"
             "\"denominator\":[[1,0]],\"marked_points\":[],"
             "\"options\":{\"orientation\":\"up\"}}",
             "orientation");
  expect_bad("{\"name\":\"x\",\"numerator\":[[0,0],[1,0]],"
             "\"denominator\":[[0,0]],\"marked_points\":[]}",
             "do not define");

  // a parsed document exposes the options
  MapDocument doc = parse_map_document(
      "{\"name\":\"x\",\"numerator\":[[0,0],[0,0],[1,0]],"
      "\"denominator\":[[1,0]],\"marked_points\":[[1,0],\"inf\"],"
      "\"base_point\":[0.25,0],"
      "\"options\":{\"cluster\":1e-6,\"seed\":7,\"orientation\":\"cw\"}}");
  CHECK(doc.name == "x");
  CHECK(doc.f.degree() == 2);
  CHECK(doc.marked.size() == 2);
  CHECK(doc.marked[1].is_inf());
  REQUIRE(doc.base.has_value());
  CHECK(doc.base->real() == 0.25);
  CHECK(doc.options.tol.cluster == 1e-6);
  CHECK(doc.options.seed == 7);
  CHECK(doc.options.orientation == Orientation::CW);
}
