#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "hirota/field_io.hpp"
#include "hirota/presets.hpp"

using namespace hirota;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("hirota_cli_test_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir / name;
}

fs::path write_file(const std::string& name, const std::string& text) {
  const fs::path p = scratch(name);
  std::ofstream(p) << text;
  return p;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::stringstream ss(s);
  std::string l;
  while (std::getline(ss, l)) v.push_back(l);
  return v;
}

int shell(const std::string& cmd) {
  const int status = std::system((cmd + " > /dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("preset examples") {
  const Preset a = preset("fig3a");
  CHECK(a.bg.alpha == 1.0);
  CHECK(a.bg.beta == 0.1);
  CHECK(a.bg.sigma == -1);
  CHECK(a.bg.k0 == 1.0);
  CHECK(norm_max(a.bg.Qplus - CMat2::identity()) == 0.0);
  REQUIRE(a.seeds.size() == 1);
  CHECK(a.seeds[0].z == cplx(0, 2));
  CHECK(norm_max(a.seeds[0].C - CMat2{{1, 1, 1, 1}}) == 0.0);

  const Preset f5 = preset("fig5");
  CHECK(f5.bg.alpha == -1.0);
  CHECK(f5.bg.beta == 0.01);
  CHECK(f5.seeds[0].z == cplx(0.5, 0.8));
  CHECK(norm_max(f5.seeds[0].C - CMat2{{0, 1, 1, 0}}) == 0.0);

  const Preset f11 = preset("fig11");
  CHECK(f11.bg.alpha == 1.0);
  CHECK(f11.bg.beta == 0.1);
  CHECK(f11.seeds[0].z == cplx(0.5, std::sqrt(3.0) / 2));
  CHECK(norm_max(f11.seeds[0].C - CMat2{{cplx(0, 1), 2, 2, cplx(0, -4)}}) == 0.0);

  try {
    (void)preset("fig12");
    FAIL("expected UnknownPreset");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownPreset);
  }
}

TEST_CASE("every preset expands and has the default grid") {
  CHECK(preset_names().size() == 11);
  for (const auto& n : preset_names()) {
    CAPTURE(n);
    const Preset p = preset(n);
    CHECK(p.name == n);
    CHECK_NOTHROW((void)p.spec());
    CHECK(p.grid.nx == 201);
    CHECK(p.grid.nt == 121);
    CHECK(p.grid.xmin == -5.0);
    CHECK(p.grid.tmax == 3.0);
  }
}

TEST_CASE("config round trip and typed errors") {
  for (const auto& n : preset_names()) {
    const Preset p = preset(n);
    const Preset q = preset_from_json(preset_to_json(p));
    CHECK(q.name == p.name);
    CHECK(q.bg.alpha == p.bg.alpha);
    CHECK(q.bg.beta == p.bg.beta);
    CHECK(q.policy == p.policy);
    CHECK(q.seeds[0].z == p.seeds[0].z);
    CHECK(q.seeds[0].rank == p.seeds[0].rank);
    CHECK(norm_max(q.seeds[0].C - p.seeds[0].C) == 0.0);
  }
  auto code = [](const char* text) {
    try {
      (void)preset_from_json(nlohmann::json::parse(text));
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::SingularMatrix;
  };
  CHECK(code("[1, 2]") == ErrorCode::BadConfig);
  CHECK(code(R"({"alpha": "one"})") == ErrorCode::BadConfig);
  CHECK(code(R"({"seeds": [{"z": [0, 2]}]})") == ErrorCode::BadConfig);
  CHECK(code(R"({"seeds": [{"z": [0, 2, 3], "C": [[[1,0],[1,0]],[[1,0],[1,0]]]}]})") == ErrorCode::BadConfig);
  CHECK(code(R"({"seeds": [{"z": [0, 0.5], "C": [[[1,0],[1,0]],[[1,0],[1,0]]]}]})") == ErrorCode::BadConfig);
  CHECK(code(R"({"sigma": 1, "seeds": []})") == ErrorCode::BadConfig);
  CHECK(code(R"({"policy": "loose"})") == ErrorCode::BadConfig);
  CHECK(code(R"({"Qplus": [[[2,0],[0,0]],[[0,0],[2,0]]]})") == ErrorCode::BadConfig);
}

TEST_CASE("CSV round trip is bit exact") {
  const Preset p = preset("fig7");
  GridAxes axes{-5, 5, 33, -3, 3, 17};
  FieldGrid g = eval_field(axes, p.spec());
  g.preset = p.name;
  const std::string text = to_csv(g);
  CHECK(lines(text).front() == "x,t,re_q1,im_q1,re_q0,im_q0,re_qm1,im_qm1");
  CHECK(lines(text).size() == 1 + 33 * 17);
  std::istringstream in(text);
  const FieldGrid back = read_csv(in);
  REQUIRE(back.values.size() == g.values.size());
  CHECK(back.x == g.x);
  CHECK(back.t == g.t);
  for (std::size_t k = 0; k < g.values.size(); ++k) {
    CHECK(std::memcmp(&back.values[k].q1, &g.values[k].q1, sizeof(cplx)) == 0);
    CHECK(std::memcmp(&back.values[k].q0, &g.values[k].q0, sizeof(cplx)) == 0);
    CHECK(std::memcmp(&back.values[k].qm1, &g.values[k].qm1, sizeof(cplx)) == 0);
  }
  CHECK(to_csv(back) == text);

  // t outer, x inner
  const auto rows = lines(text);
  CHECK(rows[1].rfind("-5,-3,", 0) == 0);
  CHECK(rows[2].rfind("-4.6875,-3,", 0) == 0);
}

TEST_CASE("CSV reader rejects malformed input") {
  auto parse = [](const std::string& s) {
    std::istringstream in(s);
    return read_csv(in);
  };
  CHECK_THROWS_AS(parse("a,b\n"), Error);
  CHECK_THROWS_AS(parse("x,t,re_q1,im_q1,re_q0,im_q0,re_qm1,im_qm1\n0,0,1,0,0\n"), Error);
  CHECK_THROWS_AS(parse("x,t,re_q1,im_q1,re_q0,im_q0,re_qm1,im_qm1\n0,0,1,0,0,0,1,zz\n"), Error);
  CHECK_THROWS_AS(parse("x,t,re_q1,im_q1,re_q0,im_q0,re_qm1,im_qm1\n"), Error);
}

TEST_CASE("masked points survive serialization") {
  FieldGrid g;
  g.x = {0, 1};
  g.t = {0};
  g.values = {FieldValue::from(CMat2::identity()), FieldValue::from(CMat2::identity())};
  g.mask = {0, 1};
  std::istringstream in(to_csv(g));
  const FieldGrid back = read_csv(in);
  CHECK(back.mask == std::vector<unsigned char>{0, 1});
  const FieldGrid j = field_from_json(field_to_json(g));
  CHECK(j.mask == std::vector<unsigned char>{0, 1});
}

TEST_CASE("JSON field export") {
  const Preset p = preset("fig3a");
  FieldGrid g = eval_field(GridAxes{-1, 1, 5, 0, 1, 3}, p.spec());
  g.preset = "fig3a";
  const nlohmann::json j = field_to_json(g);
  CHECK(j["schema_version"] == "1");
  CHECK(j["preset"] == "fig3a");
  const FieldGrid back = field_from_json(nlohmann::json::parse(j.dump()));
  for (std::size_t k = 0; k < g.values.size(); ++k) {
    CHECK(back.values[k].q1 == g.values[k].q1);
    CHECK(back.values[k].q0 == g.values[k].q0);
    CHECK(back.values[k].qm1 == g.values[k].qm1);
  }
}

TEST_CASE("solve writes CSV and JSON") {
  const Run r = run({"solve", "--preset", "fig3a", "--nx", "3", "--nt", "3"});
  CHECK(r.code == 0);
  const auto rows = lines(r.out);
  CHECK(rows.size() == 10);
  CHECK(rows[0] == kCsvHeader);

  const fs::path cfg = write_file("zero.json", R"({"name": "flat", "alpha": 1, "beta": 0.1,
      "seeds": [{"z": [0, 2], "C": [[[0,0],[0,0]],[[0,0],[0,0]]]}]})");
  const Run z = run({"solve", "--config", cfg.string(), "--nx", "4", "--nt", "3"});
  CHECK(z.code == 0);
  const auto zr = lines(z.out);
  REQUIRE(zr.size() == 13);
  for (std::size_t i = 1; i < zr.size(); ++i) CHECK(zr[i].substr(zr[i].find(',', zr[i].find(',') + 1)) == ",1,0,0,0,1,0");

  const fs::path out = scratch("fig6.json");
  const Run j = run({"solve", "--preset", "fig6", "--format", "json", "--out", out.string()});
  CHECK(j.code == 0);
  std::ifstream in(out);
  const nlohmann::json doc = nlohmann::json::parse(in);
  CHECK(doc["schema_version"] == "1");
  const FieldGrid g = field_from_json(doc);
  CHECK(g.x.size() == 201);
  CHECK(g.t.size() == 121);
  CHECK(g.masked_count() == 0);
}

TEST_CASE("bad input exits with 2") {
  CHECK(run({"solve", "--preset", "nope"}).code == 2);
  CHECK(run({"solve"}).code == 2);
  CHECK(run({"solve", "--preset", "fig3a", "--config", "x.json"}).code == 2);
  CHECK(run({"solve", "--preset", "fig3a", "--format", "xml"}).code == 2);
  CHECK(run({"solve", "--preset", "fig3a", "--nx", "1"}).code == 2);
  CHECK(run({"solve", "--config", "/nonexistent/cfg.json"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({}).code == 2);
  const fs::path broken = write_file("broken.json", "{ \"alpha\": ");
  const Run b = run({"verify", "--config", broken.string()});
  CHECK(b.code == 2);
  CHECK(b.err.find("BadConfig") != std::string::npos);
  CHECK(run({"roundtrip", "--preset", "fig11"}).code == 2);
}

TEST_CASE("presets verb") {
  const Run t = run({"presets"});
  CHECK(t.code == 0);
  CHECK(lines(t.out).size() == 11);
  const Run j = run({"presets", "--format", "json"});
  CHECK(j.code == 0);
  const auto doc = nlohmann::json::parse(j.out);
  CHECK(doc["schema_version"] == "1");
  CHECK(doc["presets"].size() == 11);
}

TEST_CASE("scatter verb") {
  const Run r = run({"scatter", "--preset", "fig3a", "--real-orbits", "1", "--circle-orbits", "1"});
  CHECK(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["schema_version"] == "1");
  CHECK(doc["samples"].size() == 6);
  CHECK(doc["symmetry"]["max"].get<double>() <= 1e-6);
  for (const auto& s : doc["samples"]) CHECK(s["det_S_deviation"].get<double>() <= 1e-8);

  const Run one = run({"scatter", "--preset", "fig3a", "--z", "0.5,0"});
  CHECK(one.code == 0);
  CHECK(nlohmann::json::parse(one.out)["symmetry"].is_null());
  CHECK(run({"scatter", "--preset", "fig3a", "--z", "0,1"}).code == 2);
  CHECK(run({"scatter", "--preset", "fig3a", "--z", "abc"}).code == 2);
}

TEST_CASE("roundtrip verb") {
  for (const char* name : {"fig3a", "fig6"}) {
    CAPTURE(name);
    const Run r = run({"roundtrip", "--preset", name});
    CHECK(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["pass"] == true);
    CHECK(doc["seeds"][0]["error"].get<double>() <= 1e-3);
  }
  // a full-rank constant moves the profile, not the eigenvalue
  const fs::path cfg = write_file("fullrank.json", R"({"name": "fig3a-det1", "alpha": 1, "beta": 0.1,
      "seeds": [{"z": [0, 2], "C": [[[1.4142135623730951,0],[1,0]],[[1,0],[1.4142135623730951,0]]]}]})");
  const Run c = run({"roundtrip", "--config", cfg.string()});
  CHECK(c.code == 0);
  // a tolerance no search can meet
  CHECK(run({"roundtrip", "--preset", "fig3a", "--tol", "1e-30"}).code == 1);
}

TEST_CASE("verify verb passes for every preset") {
  for (const auto& n : preset_names()) {
    CAPTURE(n);
    const Run r = run({"verify", "--preset", n});
    CHECK(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["schema_version"] == "1");
    CHECK(doc["pass"] == true);
    if (!preset(n).localized()) CHECK(doc["skipped"].size() == 2);
  }
  CHECK(run({"verify", "--preset", "fig3a", "--tol", "1e-14"}).code == 1);
  CHECK(run({"verify", "--preset", "fig3a", "--h", "-1"}).code == 2);
}

TEST_CASE("executable exit codes") {
  const std::string exe = HIROTA_CLI_PATH;
  CHECK(shell(exe + " presets") == 0);
  CHECK(shell(exe + " solve --preset nope") == 2);
  CHECK(shell(exe + " verify --preset fig3a --tol 1e-14") == 1);
  CHECK(shell(exe + " --version") == 0);
}
