#include <doctest.h>

#include <sstream>

#include "lindcorr/cli.hpp"
#include "lindcorr/error.hpp"
#include "lindcorr/model_io.hpp"
#include "lindcorr/models.hpp"
#include "lindcorr/serialize.hpp"

using namespace lindcorr;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no lindcorr::Error thrown");
  return ErrorKind::InvalidArgument;
}

bool same_stencil(const CouplingStencil& a, const CouplingStencil& b) {
  if (a.statistics != b.statistics || a.lattice.dims != b.lattice.dims ||
      a.lattice.bands != b.lattice.bands || a.lattice.extent != b.lattice.extent)
    return false;
  if (a.h.size() != b.h.size() || a.ell.size() != b.ell.size() || a.m.size() != b.m.size()) return false;
  for (const auto& [r, m] : a.h)
    if (!b.h.count(r) || (b.h.at(r) - m).norm() > 0) return false;
  for (std::size_t s = 0; s < a.ell.size(); ++s)
    for (const auto& [r, v] : a.ell[s])
      if (!b.ell[s].count(r) || (b.ell[s].at(r) - v).norm() > 0) return false;
  for (std::size_t u = 0; u < a.m.size(); ++u)
    for (const auto& [r, m] : a.m[u])
      if (!b.m[u].count(r) || (b.m[u].at(r) - m).norm() > 0) return false;
  return true;
}

int run_args(std::vector<std::string> args, std::string& out, std::string& err) {
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream o, e;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), o, e);
  out = o.str();
  err = e.str();
  return code;
}

}  // namespace

TEST_CASE("JSON and CSV number formatting") {
  CHECK(dump_json(Json(0.1), 0) == "0.10000000000000001");
  CHECK(dump_json(Json(std::nan("")), 0) == "null");
  CHECK(dump_json(Json(1.0 / 0.0), 0) == "null");
  CHECK(dump_json(Json::array({1, 2.5}), 2) == "[1, 2.5]\n");
  CHECK(format_csv_number(1.0 / 3.0) == "0.3333333333");

  Table t{{"a", "b"}, {{1.0, 2.0}}};
  const std::string csv = dump_csv({{"command", "x"}}, t);
  CHECK(csv.rfind("# command: \"x\"\n", 0) == 0);
  CHECK(csv.find("a,b\n1,2\n") != std::string::npos);
}

TEST_CASE("model text round trip") {
  for (const CouplingStencil& st : {xy_chain_stencil({0.3, 0.2, 1.0, 1.1, 0.25, {16}}),
                                    critical_boson_stencil({2, 1.3, {}})}) {
    const CouplingStencil back = parse_model(format_model(st));
    CHECK(same_stencil(st, back));
  }
}

TEST_CASE("model text parsing") {
  const CouplingStencil st = parse_model(
      "# one lossy fermion\n"
      "statistics = fermion\n"
      "dims = 1\nbands = 1\nextent = 4\n"
      "h [0] = 0 0  0 -0.5  0 0.5  0 0\n"
      "ell 0 [0] = 1 0  0 1\n"
      "ell 0 [0] = 1 0  0 0\n");
  CHECK(st.lattice.extent == std::vector<int>{4});
  CHECK(st.h.at({0})(0, 1) == cd(0, -0.5));
  CHECK(st.ell[0].at({0})(0) == cd(2, 0));

  CHECK(kind_of([] { parse_model("statistics = fermion\nfoo = 1\n"); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { parse_model("statistics = fermion\nh [0] = 1 2 3\n"); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { parse_model("statistics = anyon\n"); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { load_model("/nonexistent/model.txt"); }) == ErrorKind::ParseError);
  try {
    parse_model("statistics = fermion\n\nbogus\n");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("presets") {
  CHECK(parse_value("2*pi/5") == doctest::Approx(2 * M_PI / 5).epsilon(1e-15));
  CHECK(parse_value("-0.25") == -0.25);
  CHECK(kind_of([] { parse_value("2*tau"); }) == ErrorKind::ParseError);

  const CouplingStencil a = parse_model("preset = xy_chain\nphi = 2*pi/5\nzeta = 0.25\n");
  CHECK(same_stencil(a, xy_chain_stencil({0, 0.2, 1, 2 * M_PI / 5, 0.25, {}})));
  const CouplingStencil b = build_preset("critical_boson", {{"D", "2"}, {"eta", "1.5"}, {"extent", "8,8"}});
  CHECK(same_stencil(b, critical_boson_stencil({2, 1.5, {8, 8}})));
  CHECK(kind_of([] { build_preset("ising", {}); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { build_preset("xy_chain", {{"beta", "1"}}); }) == ErrorKind::ParseError);
}

TEST_CASE("CLI artifacts") {
  std::string out, err;
  REQUIRE(run_args({"lindcorr", "steady", "--preset", "xy_chain", "--param", "phi=2*pi/5", "--grid", "64"},
                   out, err) == kExitOk);
  const Json j = Json::parse(out);
  CHECK(j["metadata"]["command"] == "steady");
  CHECK(j["metadata"]["version"] == library_version());
  CHECK(j["metadata"]["config"]["params"]["phi"] == "2*pi/5");
  CHECK(j["metadata"].contains("residuals"));
  CHECK(j.contains("result"));

  std::string out2;
  run_args({"lindcorr", "steady", "--preset", "xy_chain", "--param", "phi=2*pi/5", "--grid", "64"}, out2, err);
  CHECK(out == out2);

  REQUIRE(run_args({"lindcorr", "gap", "--preset", "xy_chain", "--param", "phi=pi/3", "--format", "csv"}, out,
                   err) == kExitOk);
  CHECK(out.find("# command: \"gap\"") != std::string::npos);
}

TEST_CASE("CLI exit codes") {
  std::string out, err;
  CHECK(run_args({"lindcorr", "figure", "fig9"}, out, err) == kExitUsage);
  CHECK(Json::parse(err)["error"] == "UnknownFigure");
  CHECK(run_args({"lindcorr", "steady", "--model", "/nonexistent.txt"}, out, err) == kExitParse);
  CHECK(Json::parse(err)["error"] == "ParseError");
  CHECK(run_args({"lindcorr", "steady", "--preset", "critical_boson", "--param", "eta=1", "--grid", "64"}, out,
                 err) == kExitSolver);
  CHECK(Json::parse(err)["error"] == "SingularAtK");
  CHECK(run_args({"lindcorr", "steady", "--grid", "64"}, out, err) == kExitUsage);
  CHECK(run_args({"lindcorr", "frobnicate"}, out, err) == kExitUsage);
}

TEST_CASE("gap figure data touches zero only without the auxiliary rate") {
  RunConfig c;
  c.command = Command::Figure;
  c.figure = "fig1-right";
  c.grid = {256};
  c.format = OutputFormat::Csv;
  std::ostringstream o, e;
  REQUIRE(run(c, o, e) == kExitOk);
  std::istringstream in(o.str());
  std::string line;
  std::vector<std::vector<double>> rows;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      CHECK(line == "phi,gap_kappa0,gap_kappa0.5,gap_kappa1,formula");
      header = true;
      continue;
    }
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  REQUIRE(rows.size() == 201);
  std::vector<std::size_t> zeros;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    CHECK(std::abs(r[1] - r[4]) < 1e-8);
    CHECK(std::abs(r[2] - r[1] - 0.5) < 1e-8);
    CHECK(std::abs(r[3] - r[1] - 1.0) < 1e-8);
    if (std::abs(r[1]) < 1e-9) zeros.push_back(i);
  }
  CHECK(zeros == std::vector<std::size_t>{50, 150});
}
