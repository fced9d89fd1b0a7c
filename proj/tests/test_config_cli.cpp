#include <doctest.h>

#include "hadeq/cli.hpp"
#include "hadeq/config.hpp"
#include "hadeq/errors.hpp"
#include "hadeq/sampling.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace hadeq;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigs = HADEQ_CONFIG_DIR;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("hadeq_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_config(const fs::path& dir, const std::string& name, const Json& j) {
  const fs::path p = dir / name;
  std::ofstream(p) << j.dump(2);
  return p;
}

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "hadeq");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

Json base_run_config() {
  return Json::parse(R"({
    "schema": 1,
    "space": {"kind": "euclidean", "dim": 2},
    "bifunction": {"kind": "half_sq_dist", "p": [1.0, 2.0]},
    "x0": [5.0, -3.0],
    "schedule": {"kind": "constant", "lambda": 1.0},
    "stop": {"kind": "successive_dist", "eps": 1e-9},
    "max_iters": 100
  })");
}

std::string invalid_message(const Json& j) {
  try {
    config_from_json(j);
  } catch (const InvalidInput& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("points round-trip at full precision") {
  const std::vector<Space> spaces = {Space::euclidean(3), Space::hyperboloid(2), Space::spider(5),
                                     Space::product(Space::hyperboloid(1), Space::spider(3))};
  for (const auto& s : spaces) {
    CHECK(space_from_json(space_to_json(s)) == s);
    Rng rng = make_rng(1, 0);
    for (int i = 0; i < 200; ++i) {
      const Point p = random_point(s, rng, 3.0);
      const Json j = Json::parse(point_to_json(s, p).dump());
      CHECK(point_from_json(s, j) == p);
    }
  }
  const Json doc = Json::parse(R"({"space":{"kind":"spider","rays":3},"point":{"ray":1,"r":2.0}})");
  const Space s = space_from_json(doc["space"]);
  CHECK(point_from_json(s, doc["point"]) == Point::spider(1, 2.0));
}

TEST_CASE("shipped configs round-trip losslessly") {
  int seen = 0;
  for (const auto& entry : fs::directory_iterator(kConfigs)) {
    const ExperimentConfig c = load_config(entry.path().string());
    const Json once = config_to_json(c);
    const Json twice = config_to_json(config_from_json(Json::parse(once.dump())));
    CHECK(once.dump() == twice.dump());
    CHECK(config_hash(c) == config_hash(config_from_json(once)));
    ++seen;
  }
  CHECK(seen >= 8);
}

TEST_CASE("config hash ignores formatting but not content") {
  const Json j = base_run_config();
  const ExperimentConfig a = config_from_json(j);
  const ExperimentConfig b = config_from_json(Json::parse(j.dump(8)));
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a).size() == 16);
  Json k = j;
  k["x0"] = {5.0, -3.0000000000000004};
  CHECK(config_hash(config_from_json(k)) != config_hash(a));
}

TEST_CASE("validation names the offending field") {
  Json j = base_run_config();
  j["schedule"]["lambda"] = 0.0;
  CHECK(invalid_message(j).find("schedule.lambda") != std::string::npos);

  j = base_run_config();
  j["domain"] = Json::parse(R"({"kind": "ball", "center": [0, 0], "radius": 1})");
  CHECK(invalid_message(j).find("x0") != std::string::npos);

  j = base_run_config();
  j["bifunction"]["p"] = {1.0};
  CHECK(invalid_message(j).find("bifunction.p") != std::string::npos);

  j = base_run_config();
  j["stop"]["kind"] = "sometimes";
  CHECK(invalid_message(j).find("stop.kind") != std::string::npos);

  j = base_run_config();
  j["colour"] = "blue";
  CHECK(invalid_message(j).find("colour") != std::string::npos);

  j = base_run_config();
  j["schema"] = 2;
  CHECK(invalid_message(j).find("schema") != std::string::npos);

  j = base_run_config();
  j.erase("schema");
  CHECK(invalid_message(j).find("schema") != std::string::npos);

  j = base_run_config();
  j["space"] = Json::parse(R"({"kind": "spider", "rays": 1})");
  CHECK(invalid_message(j).find("space.rays") != std::string::npos);

  j = base_run_config();
  j["bifunction"] = Json::parse(R"({"kind": "affine", "M": [[1, 0], [0]], "b": [0, 0]})");
  CHECK(invalid_message(j).find("bifunction.M") != std::string::npos);
}

TEST_CASE("syntax errors report a position") {
  const fs::path dir = scratch("syntax");
  std::ofstream(dir / "bad.json") << "{\n  \"schema\": 1,\n  \"space\": {\"kind\": \"euclidean\" \"dim\": 2}\n}\n";
  try {
    load_config((dir / "bad.json").string());
    FAIL("expected a parse failure");
  } catch (const InvalidInput& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("custom bifunctions have no config form") {
  const Space s = Space::euclidean(1);
  CHECK_THROWS_AS(bifunction_to_json(Bifunction::custom(s, [](const Point&, const Point&) { return 0.0; }, "zero")),
                  InvalidInput);
}

TEST_CASE("cli run on the shipped plane config") {
  const fs::path out = scratch("run");
  const Run r = cli({"run", "--config", (kConfigs / "halfsq_euclid.json").string(), "--out", out.string()});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("status=converged") != std::string::npos);

  const std::string csv = slurp(out / "trace.csv");
  std::istringstream lines(csv);
  std::string first, header, row, last;
  std::getline(lines, first);
  std::getline(lines, header);
  CHECK(first.rfind("# config_hash=", 0) == 0);
  CHECK(header == "k,lambda,successive_dist,fejer_dist,bound_71,bound_72,eq_residual");
  while (std::getline(lines, row)) last = row;
  // Final successive distance is the third column.
  std::vector<std::string> cols;
  std::stringstream ls(last);
  for (std::string c; std::getline(ls, c, ',');) cols.push_back(c);
  REQUIRE(cols.size() >= 3);
  CHECK(std::stod(cols[2]) < 1e-8);
  // bound_72 is empty for an unbounded domain.
  REQUIRE(cols.size() == 7);
  CHECK(cols[5].empty());
  const Json tj = Json::parse(slurp(out / "trace.json"));
  CHECK(tj["config_hash"] == first.substr(14));
  CHECK(tj["status"] == "converged");
  CHECK(tj["bound_72"][0].is_null());
  CHECK_FALSE(fs::exists(out / "trace.csv.tmp"));
}

TEST_CASE("cli exit codes") {
  const fs::path dir = scratch("codes");
  CHECK(cli({"frobnicate"}).code == kExitInvalid);
  const Run unknown = cli({"frobnicate"});
  CHECK(unknown.err.find("Usage") != std::string::npos);
  CHECK(cli({}).code == kExitInvalid);
  CHECK(cli({"--help"}).code == kExitOk);

  Json j = base_run_config();
  j["schedule"]["lambda"] = -1.0;
  const Run neg = cli({"run", "--config", write_config(dir, "neg.json", j).string(), "--out", dir.string()});
  CHECK(neg.code == kExitInvalid);
  CHECK(neg.err.find("schedule.lambda") != std::string::npos);

  j = base_run_config();
  j["domain"] = Json::parse(R"({"kind": "ball", "center": [0, 0], "radius": 1})");
  CHECK(cli({"run", "--config", write_config(dir, "outside.json", j).string(), "--out", dir.string()}).code ==
        kExitInvalid);

  CHECK(cli({"run", "--config", (dir / "missing.json").string()}).code == kExitInvalid);

  j = base_run_config();
  j["max_iters"] = 3;
  CHECK(cli({"run", "--config", write_config(dir, "short.json", j).string(), "--out", dir.string(), "--quiet"}).code ==
        kExitNotConverged);

  j = base_run_config();
  j["bifunction"] = Json::parse(R"({"kind": "affine", "M": [[0, -1], [1, 0]], "b": [0, 0]})");
  j["domain"] = Json::parse(R"({"kind": "ball", "center": [0, 0], "radius": 10})");
  j["inner"] = Json::parse(R"({"max_iters": 2})");
  CHECK(cli({"run", "--config", write_config(dir, "fail.json", j).string(), "--out", dir.string(), "--quiet"}).code ==
        kExitResolventFailure);
  CHECK(cli({"resolvent", "--config", write_config(dir, "fail_res.json", j).string(), "--quiet"}).code ==
        kExitResolventFailure);
}

TEST_CASE("cli check") {
  const fs::path dir = scratch("check");
  for (const char* space : {R"({"kind": "euclidean", "dim": 3})", R"({"kind": "spider", "rays": 5})"}) {
    Json j = {{"schema", 1}, {"space", Json::parse(space)}};
    const Run r = cli({"check", "--config", write_config(dir, "c.json", j).string(), "--samples", "10000"});
    CHECK(r.code == kExitOk);
    const Json rep = Json::parse(r.out);
    CHECK(rep["ok"] == true);
    CHECK(rep["samples"] == 10000);
    if (rep["flat"] == true) CHECK(rep["flat_residual"].get<double>() < 1e-9);
  }
  const Run h = cli({"check", "--config", (kConfigs / "check_hyperboloid.json").string(), "--out", dir.string()});
  CHECK(h.code == kExitOk);
  CHECK(Json::parse(slurp(dir / "check.json"))["cn_gap_min"].get<double>() > 0.0);
}

TEST_CASE("cli resolvent matches the geodesic closed form") {
  const Run r = cli({"resolvent", "--config", (kConfigs / "resolvent_hyperboloid.json").string()});
  REQUIRE(r.code == kExitOk);
  const Json j = Json::parse(r.out);
  const Eigen::Vector3d x = hyperboloid_point(Eigen::Vector2d(-1.0, 2.0)).coords();
  const Eigen::Vector3d p = hyperboloid_point(Eigen::Vector2d(1.0, 0.0)).coords();
  const double lam = 2.0, t = lam / (1.0 + lam);
  const double d = std::acosh(x[0] * p[0] - x[1] * p[1] - x[2] * p[2]);
  const Eigen::Vector3d ref = (std::sinh((1 - t) * d) * x + std::sinh(t * d) * p) / std::sinh(d);
  Eigen::Vector3d z;
  for (int i = 0; i < 3; ++i) z[i] = j["z"][i].get<double>();
  CHECK((z - ref).norm() < 1e-6);
  CHECK(j["method"] == "closed_form");
}

TEST_CASE("cli kkm on the tripod") {
  const fs::path dir = scratch("kkm");
  const Run r = cli({"kkm", "--config", (kConfigs / "kkm_tripod.json").string(), "--out", dir.string(), "--quiet"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.empty());
  const Json j = Json::parse(slurp(dir / "kkm.json"));
  CHECK(j["max_violations"] == 0);
  CHECK_FALSE(j["witness"].is_null());
  CHECK(j["lipschitz_max_violation"].get<double>() == 0.0);
}

TEST_CASE("identical config and seed give byte-identical csv") {
  const fs::path a = scratch("det_a"), b = scratch("det_b"), c = scratch("det_c");
  const std::string cfg = (kConfigs / "ball_geometric.json").string();
  CHECK(cli({"run", "--config", cfg, "--out", a.string(), "--quiet"}).code == kExitOk);
  CHECK(cli({"run", "--config", cfg, "--out", b.string(), "--quiet"}).code == kExitOk);
  CHECK(slurp(a / "trace.csv") == slurp(b / "trace.csv"));
  CHECK(cli({"run", "--config", cfg, "--out", c.string(), "--quiet", "--seed", "12345"}).code == kExitOk);
  CHECK(slurp(a / "trace.csv").substr(0, 40) != slurp(c / "trace.csv").substr(0, 40));
}
