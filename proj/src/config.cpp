#include "hadeq/config.hpp"

#include "hadeq/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

namespace hadeq {

namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

[[noreturn]] void fail(const std::string& path, const std::string& msg) { throw InvalidInput(path + ": " + msg); }

const Json& require(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(join(path, key), "missing field");
  return *it;
}

double as_double(const Json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

double as_finite(const Json& j, const std::string& path) {
  const double v = as_double(j, path);
  if (!std::isfinite(v)) fail(path, "must be finite");
  return v;
}

double as_positive(const Json& j, const std::string& path) {
  const double v = as_double(j, path);
  if (!(v > 0.0) || !std::isfinite(v)) fail(path, "must be > 0");
  return v;
}

int as_int(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  const auto v = j.get<std::int64_t>();
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) fail(path, "out of range");
  return static_cast<int>(v);
}

int as_int_at_least(const Json& j, int lo, const std::string& path) {
  const int v = as_int(j, path);
  if (v < lo) fail(path, "must be >= " + std::to_string(lo));
  return v;
}

std::string kind_of(const Json& j, const std::string& path) {
  const Json& k = require(j, "kind", path);
  if (!k.is_string()) fail(join(path, "kind"), "expected a string");
  return k.get<std::string>();
}

Eigen::VectorXd vector_from_json(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a nonempty array of numbers");
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v[i] = as_finite(j[i], path + "[" + std::to_string(i) + "]");
  return v;
}

Json vector_to_json(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Eigen::MatrixXd matrix_from_json(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a nonempty array of rows");
  const auto rows = j.size();
  Eigen::MatrixXd m;
  for (std::size_t r = 0; r < rows; ++r) {
    const Eigen::VectorXd row = vector_from_json(j[r], path + "[" + std::to_string(r) + "]");
    if (r == 0) m.resize(rows, row.size());
    if (row.size() != m.cols()) fail(path, "rows have different lengths");
    m.row(r) = row.transpose();
  }
  return m;
}

Json matrix_to_json(const Eigen::MatrixXd& m) {
  Json a = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) a.push_back(vector_to_json(m.row(r).transpose()));
  return a;
}

void require_euclidean(const Space& space, Eigen::Index dim, const std::string& path) {
  if (space.kind() != SpaceKind::euclidean) fail(path, "this family needs a euclidean space");
  if (space.dim() != dim) fail(path, "dimension does not match the space");
}

// Re-raises library validation errors under the config path.
template <class F>
auto at_path(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const InvalidInput& e) {
    throw InvalidInput(path + ": " + e.what());
  }
}

}  // namespace

// ---------------------------------------------------------------- space

Json space_to_json(const Space& space) {
  switch (space.kind()) {
    case SpaceKind::euclidean: return {{"kind", "euclidean"}, {"dim", space.dim()}};
    case SpaceKind::hyperboloid: return {{"kind", "hyperboloid"}, {"dim", space.dim()}};
    case SpaceKind::spider: return {{"kind", "spider"}, {"rays", space.rays()}};
    case SpaceKind::product:
      return {{"kind", "product"}, {"left", space_to_json(space.left())}, {"right", space_to_json(space.right())}};
  }
  return {};
}

Space space_from_json(const Json& j, const std::string& path) {
  const std::string kind = kind_of(j, path);
  if (kind == "euclidean") return Space::euclidean(as_int_at_least(require(j, "dim", path), 1, join(path, "dim")));
  if (kind == "hyperboloid") return Space::hyperboloid(as_int_at_least(require(j, "dim", path), 1, join(path, "dim")));
  if (kind == "spider") return Space::spider(as_int_at_least(require(j, "rays", path), 2, join(path, "rays")));
  if (kind == "product") {
    return Space::product(space_from_json(require(j, "left", path), join(path, "left")),
                          space_from_json(require(j, "right", path), join(path, "right")));
  }
  fail(join(path, "kind"), "unknown space kind '" + kind + "'");
}

// ---------------------------------------------------------------- point

Json point_to_json(const Space& space, const Point& p) {
  space.validate(p);
  switch (space.kind()) {
    case SpaceKind::euclidean:
    case SpaceKind::hyperboloid: return vector_to_json(p.coords());
    case SpaceKind::spider: return {{"ray", p.spider_coord().ray}, {"r", p.spider_coord().radius}};
    case SpaceKind::product:
      return {{"left", point_to_json(space.left(), p.left())}, {"right", point_to_json(space.right(), p.right())}};
  }
  return {};
}

Point point_from_json(const Space& space, const Json& j, const std::string& path) {
  Point p;
  switch (space.kind()) {
    case SpaceKind::euclidean: p = Point::from_coords(vector_from_json(j, path)); break;
    case SpaceKind::hyperboloid:
      if (j.is_object()) {
        p = hyperboloid_point(vector_from_json(require(j, "spatial", path), join(path, "spatial")));
      } else {
        p = Point::from_coords(vector_from_json(j, path));
      }
      break;
    case SpaceKind::spider: {
      const int ray = as_int(require(j, "ray", path), join(path, "ray"));
      const double r = as_finite(require(j, "r", path), join(path, "r"));
      if (ray < 0 || ray >= space.rays()) fail(join(path, "ray"), "ray index out of range");
      if (r < 0.0) fail(join(path, "r"), "radius must be >= 0");
      p = Point::spider(ray, r);
      break;
    }
    case SpaceKind::product:
      p = Point::product(point_from_json(space.left(), require(j, "left", path), join(path, "left")),
                         point_from_json(space.right(), require(j, "right", path), join(path, "right")));
      break;
  }
  at_path(path, [&] {
    space.validate(p);
    return 0;
  });
  return p;
}

// ---------------------------------------------------------------- bifunction

Json bifunction_to_json(const Bifunction& f) {
  switch (f.kind()) {
    case BifunctionKind::functional: {
      const auto& g = f.functional();
      switch (g.kind()) {
        case FunctionalKind::half_sq_dist:
          return {{"kind", "half_sq_dist"}, {"p", point_to_json(g.space(), g.anchor())}, {"weight", g.weight()}};
        case FunctionalKind::dist_to: return {{"kind", "dist_to"}, {"p", point_to_json(g.space(), g.anchor())}};
        case FunctionalKind::abs_value: return {{"kind", "abs_value"}};
        case FunctionalKind::quadratic:
          return {{"kind", "quadratic"}, {"Q", matrix_to_json(g.q())}, {"b", vector_to_json(g.b())}};
      }
      break;
    }
    case BifunctionKind::field:
      if (f.field().kind() == FieldKind::euclidean_affine)
        return {{"kind", "affine"}, {"M", matrix_to_json(f.field().m())}, {"b", vector_to_json(f.field().b())}};
      break;
    case BifunctionKind::custom: break;
  }
  throw InvalidInput("bifunction '" + f.name() + "' has no config representation");
}

Bifunction bifunction_from_json(const Space& space, const Json& j, const std::string& path) {
  const std::string kind = kind_of(j, path);
  if (kind == "half_sq_dist") {
    const Point p = point_from_json(space, require(j, "p", path), join(path, "p"));
    double w = 1.0;
    if (j.contains("weight")) w = as_positive(j["weight"], join(path, "weight"));
    return Bifunction::from_functional(ConvexFunctional::half_sq_dist(space, p, w));
  }
  if (kind == "dist_to") {
    const Point p = point_from_json(space, require(j, "p", path), join(path, "p"));
    return Bifunction::from_functional(ConvexFunctional::dist_to(space, p));
  }
  if (kind == "abs_value") {
    require_euclidean(space, 1, path);
    return Bifunction::from_functional(ConvexFunctional::abs_value());
  }
  if (kind == "quadratic") {
    const Eigen::MatrixXd q = matrix_from_json(require(j, "Q", path), join(path, "Q"));
    const Eigen::VectorXd b = vector_from_json(require(j, "b", path), join(path, "b"));
    require_euclidean(space, b.size(), path);
    return at_path(path, [&] { return Bifunction::from_functional(ConvexFunctional::quadratic(q, b)); });
  }
  if (kind == "affine") {
    const Eigen::MatrixXd m = matrix_from_json(require(j, "M", path), join(path, "M"));
    const Eigen::VectorXd b = vector_from_json(require(j, "b", path), join(path, "b"));
    require_euclidean(space, b.size(), path);
    return at_path(path, [&] { return Bifunction::from_field(VectorField::euclidean_affine(m, b)); });
  }
  fail(join(path, "kind"), "unknown bifunction kind '" + kind + "'");
}

// ---------------------------------------------------------------- domain

Json domain_to_json(const DomainK& k) {
  switch (k.kind()) {
    case DomainKind::whole: return {{"kind", "whole"}};
    case DomainKind::ball:
      return {{"kind", "ball"}, {"center", point_to_json(k.space(), k.center())}, {"radius", k.radius()}};
    case DomainKind::box: return {{"kind", "box"}, {"lo", vector_to_json(k.lo())}, {"hi", vector_to_json(k.hi())}};
  }
  return {};
}

DomainK domain_from_json(const Space& space, const Json& j, const std::string& path) {
  const std::string kind = kind_of(j, path);
  if (kind == "whole") return DomainK::whole(space);
  if (kind == "ball") {
    const Point c = point_from_json(space, require(j, "center", path), join(path, "center"));
    const double r = as_positive(require(j, "radius", path), join(path, "radius"));
    return DomainK::ball(space, c, r);
  }
  if (kind == "box") {
    const Eigen::VectorXd lo = vector_from_json(require(j, "lo", path), join(path, "lo"));
    const Eigen::VectorXd hi = vector_from_json(require(j, "hi", path), join(path, "hi"));
    return at_path(path, [&] { return DomainK::box(space, lo, hi); });
  }
  fail(join(path, "kind"), "unknown domain kind '" + kind + "'");
}

// ---------------------------------------------------------------- schedule / stop

Json schedule_to_json(const StepSchedule& s) {
  switch (s.kind()) {
    case ScheduleKind::constant: return {{"kind", "constant"}, {"lambda", s.values()[0]}};
    case ScheduleKind::sequence: return {{"kind", "sequence"}, {"lambdas", s.values()}};
    case ScheduleKind::geometric: return {{"kind", "geometric"}, {"lambda0", s.values()[0]}, {"ratio", s.ratio()}};
  }
  return {};
}

StepSchedule schedule_from_json(const Json& j, const std::string& path) {
  const std::string kind = kind_of(j, path);
  if (kind == "constant") return StepSchedule::constant(as_positive(require(j, "lambda", path), join(path, "lambda")));
  if (kind == "sequence") {
    const Json& a = require(j, "lambdas", path);
    if (!a.is_array() || a.empty()) fail(join(path, "lambdas"), "expected a nonempty array");
    std::vector<double> ls;
    for (std::size_t i = 0; i < a.size(); ++i)
      ls.push_back(as_positive(a[i], join(path, "lambdas") + "[" + std::to_string(i) + "]"));
    return StepSchedule::sequence(std::move(ls));
  }
  if (kind == "geometric") {
    const double l0 = as_positive(require(j, "lambda0", path), join(path, "lambda0"));
    const double ratio = as_finite(require(j, "ratio", path), join(path, "ratio"));
    if (!(ratio >= 1.0)) fail(join(path, "ratio"), "must be >= 1");
    return StepSchedule::geometric(l0, ratio);
  }
  fail(join(path, "kind"), "unknown schedule kind '" + kind + "'");
}

Json stop_to_json(const StopRule& s) {
  switch (s.kind) {
    case StopKind::successive_dist: return {{"kind", "successive_dist"}, {"eps", s.eps}};
    case StopKind::residual_bound: return {{"kind", "residual_bound"}, {"eps", s.eps}};
    case StopKind::max_iters: return {{"kind", "max_iters"}};
  }
  return {};
}

StopRule stop_from_json(const Json& j, const std::string& path) {
  const std::string kind = kind_of(j, path);
  if (kind == "successive_dist") return StopRule::successive_dist(as_positive(require(j, "eps", path), join(path, "eps")));
  if (kind == "residual_bound") return StopRule::residual_bound(as_positive(require(j, "eps", path), join(path, "eps")));
  if (kind == "max_iters") return StopRule::max_iterations();
  fail(join(path, "kind"), "unknown stop kind '" + kind + "'");
}

// ---------------------------------------------------------------- experiment

RunConfig ExperimentConfig::run_config() const {
  if (!F) fail("bifunction", "missing field");
  if (!x0) fail("x0", "missing field");
  if (!schedule) fail("schedule", "missing field");
  RunConfig rc(*F, K, *x0, *schedule);
  rc.max_iters = max_iters;
  rc.stop = stop;
  rc.reference_solution = reference_solution;
  rc.residual_grid_size = residual_grid_size;
  rc.seed = seed;
  rc.inner = inner;
  rc.bound_radius = bound_radius;
  return rc;
}

ExperimentConfig config_from_json(const Json& j) {
  if (!j.is_object()) fail("config", "expected a JSON object");
  const Json& schema = require(j, "schema", "");
  if (as_int(schema, "schema") != kSchemaVersion) fail("schema", "unsupported schema version");

  ExperimentConfig c(space_from_json(require(j, "space", ""), "space"));
  const Space& space = c.space;

  static const char* known[] = {"schema", "name", "space", "bifunction", "domain", "x0", "schedule", "stop",
                                "max_iters", "reference_solution", "residual_grid_size", "bound_radius", "seed",
                                "inner", "resolvent", "check", "kkm"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(std::begin(known), std::end(known), it.key()) == std::end(known)) fail(it.key(), "unknown field");
  }

  if (j.contains("name")) {
    if (!j["name"].is_string()) fail("name", "expected a string");
    c.name = j["name"].get<std::string>();
  }
  if (j.contains("bifunction")) c.F = bifunction_from_json(space, j["bifunction"], "bifunction");
  if (j.contains("domain")) c.K = domain_from_json(space, j["domain"], "domain");
  if (j.contains("x0")) {
    c.x0 = point_from_json(space, j["x0"], "x0");
    if (!c.K.contains(*c.x0)) fail("x0", "initial point must lie in the domain");
  }
  if (j.contains("schedule")) c.schedule = schedule_from_json(j["schedule"], "schedule");
  if (j.contains("stop")) c.stop = stop_from_json(j["stop"], "stop");
  if (j.contains("max_iters")) c.max_iters = as_int_at_least(j["max_iters"], 1, "max_iters");
  if (j.contains("reference_solution"))
    c.reference_solution = point_from_json(space, j["reference_solution"], "reference_solution");
  if (j.contains("residual_grid_size"))
    c.residual_grid_size = as_int_at_least(j["residual_grid_size"], 1, "residual_grid_size");
  if (j.contains("bound_radius")) {
    c.bound_radius = as_finite(j["bound_radius"], "bound_radius");
    if (c.bound_radius < 0.0) fail("bound_radius", "must be >= 0");
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) fail("seed", "expected a nonnegative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("inner")) {
    const Json& in = j["inner"];
    if (!in.is_object()) fail("inner", "expected an object");
    if (in.contains("tol")) c.inner.inner_tol = as_positive(in["tol"], "inner.tol");
    if (in.contains("max_iters")) c.inner.inner_max_iters = as_int_at_least(in["max_iters"], 1, "inner.max_iters");
    if (in.contains("verify_grid_size"))
      c.inner.verify_grid_size = as_int_at_least(in["verify_grid_size"], 1, "inner.verify_grid_size");
    if (in.contains("allow_closed_form")) {
      if (!in["allow_closed_form"].is_boolean()) fail("inner.allow_closed_form", "expected a boolean");
      c.inner.allow_closed_form = in["allow_closed_form"].get<bool>();
    }
  }
  if (j.contains("resolvent")) {
    const Json& r = j["resolvent"];
    if (!r.is_object()) fail("resolvent", "expected an object");
    if (r.contains("x")) c.resolvent_x = point_from_json(space, r["x"], "resolvent.x");
    if (r.contains("lambda")) c.resolvent_lambda = as_positive(r["lambda"], "resolvent.lambda");
  }
  if (j.contains("check")) {
    const Json& ch = j["check"];
    if (!ch.is_object()) fail("check", "expected an object");
    if (ch.contains("samples")) c.check_samples = as_int_at_least(ch["samples"], 1, "check.samples");
  }
  if (j.contains("kkm")) {
    const Json& kj = j["kkm"];
    KkmSettings ks;
    const Json& pts = require(kj, "points", "kkm");
    if (!pts.is_array() || pts.empty()) fail("kkm.points", "expected a nonempty array of points");
    for (std::size_t i = 0; i < pts.size(); ++i)
      ks.points.push_back(point_from_json(space, pts[i], "kkm.points[" + std::to_string(i) + "]"));
    if (kj.contains("subsets")) {
      const Json& ss = kj["subsets"];
      if (!ss.is_array()) fail("kkm.subsets", "expected an array of index arrays");
      for (std::size_t n = 0; n < ss.size(); ++n) {
        const std::string sp = "kkm.subsets[" + std::to_string(n) + "]";
        if (!ss[n].is_array() || ss[n].empty()) fail(sp, "expected a nonempty array of indices");
        std::vector<int> idx;
        for (const auto& v : ss[n]) {
          const int i = as_int(v, sp);
          if (i < 0 || i >= static_cast<int>(ks.points.size())) fail(sp, "index out of range");
          idx.push_back(i);
        }
        ks.subsets.push_back(std::move(idx));
      }
    }
    if (kj.contains("samples_per_subset"))
      ks.samples_per_subset = as_int_at_least(kj["samples_per_subset"], 1, "kkm.samples_per_subset");
    if (kj.contains("lattice")) ks.lattice = as_int_at_least(kj["lattice"], 2, "kkm.lattice");
    if (kj.contains("lipschitz_pairs")) ks.lipschitz_pairs = as_int_at_least(kj["lipschitz_pairs"], 0, "kkm.lipschitz_pairs");
    if (kj.contains("diameter_samples"))
      ks.diameter_samples = as_int_at_least(kj["diameter_samples"], 0, "kkm.diameter_samples");
    c.kkm = std::move(ks);
  }
  return c;
}

Json config_to_json(const ExperimentConfig& c) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["name"] = c.name;
  j["space"] = space_to_json(c.space);
  if (c.F) j["bifunction"] = bifunction_to_json(*c.F);
  j["domain"] = domain_to_json(c.K);
  if (c.x0) j["x0"] = point_to_json(c.space, *c.x0);
  if (c.schedule) j["schedule"] = schedule_to_json(*c.schedule);
  j["stop"] = stop_to_json(c.stop);
  j["max_iters"] = c.max_iters;
  if (c.reference_solution) j["reference_solution"] = point_to_json(c.space, *c.reference_solution);
  j["residual_grid_size"] = c.residual_grid_size;
  j["bound_radius"] = c.bound_radius;
  j["seed"] = c.seed;
  j["inner"] = {{"tol", c.inner.inner_tol},
                {"max_iters", c.inner.inner_max_iters},
                {"verify_grid_size", c.inner.verify_grid_size},
                {"allow_closed_form", c.inner.allow_closed_form}};
  Json r = Json::object();
  if (c.resolvent_x) r["x"] = point_to_json(c.space, *c.resolvent_x);
  if (c.resolvent_lambda) r["lambda"] = *c.resolvent_lambda;
  j["resolvent"] = r;
  j["check"] = {{"samples", c.check_samples}};
  if (c.kkm) {
    Json pts = Json::array();
    for (const auto& p : c.kkm->points) pts.push_back(point_to_json(c.space, p));
    j["kkm"] = {{"points", pts},
                {"subsets", c.kkm->subsets},
                {"samples_per_subset", c.kkm->samples_per_subset},
                {"lattice", c.kkm->lattice},
                {"lipschitz_pairs", c.kkm->lipschitz_pairs},
                {"diameter_samples", c.kkm->diameter_samples}};
  }
  return j;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("config: cannot open '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InvalidInput("config: " + path + ": " + e.what());
  }
  return config_from_json(j);
}

std::string config_hash(const ExperimentConfig& c) {
  const std::string text = config_to_json(c).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// ---------------------------------------------------------------- traces

namespace {

void put_number(std::string& out, double v) {
  if (std::isnan(v)) return;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

std::string trace_to_csv(const Trace& t, const std::string& hash) {
  std::string out = "# config_hash=" + hash + "\n";
  out += "k,lambda,successive_dist,fejer_dist,bound_71,bound_72,eq_residual\n";
  for (int k = 0; k < t.num_steps(); ++k) {
    out += std::to_string(k);
    out += ',';
    put_number(out, t.steps[k]);
    out += ',';
    put_number(out, t.successive[k]);
    out += ',';
    if (t.fejer) put_number(out, (*t.fejer)[k + 1]);
    out += ',';
    put_number(out, t.bound_successive[k]);
    out += ',';
    put_number(out, t.bound_diameter[k]);
    out += ',';
    put_number(out, t.equilibrium_residuals[k]);
    out += '\n';
  }
  return out;
}

Json trace_to_json(const Trace& t, const std::string& hash) {
  Json j;
  j["config_hash"] = hash;
  j["tool_version"] = kToolVersion;
  j["space"] = space_to_json(t.space);
  j["status"] = to_string(t.status);
  j["failure_message"] = t.failure_message;
  j["seed"] = t.seed;
  j["lambda_min"] = t.lambda_min;
  j["residual_grid_size"] = t.residual_grid.size();
  Json its = Json::array();
  for (const auto& p : t.iterates) its.push_back(point_to_json(t.space, p));
  j["iterates"] = its;
  j["steps"] = t.steps;
  j["successive"] = t.successive;
  j["fejer"] = t.fejer ? Json(*t.fejer) : Json(nullptr);
  Json b71 = Json::array(), b72 = Json::array(), res = Json::array(), gaps = Json::array();
  for (int k = 0; k < t.num_steps(); ++k) {
    b71.push_back(number_or_null(t.bound_successive[k]));
    b72.push_back(number_or_null(t.bound_diameter[k]));
    res.push_back(number_or_null(t.equilibrium_residuals[k]));
    gaps.push_back(number_or_null(t.certified_gaps[k]));
  }
  j["bound_71"] = b71;
  j["bound_72"] = b72;
  j["eq_residuals"] = res;
  j["certified_gaps"] = gaps;
  return j;
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for '" + tmp.string() + "'");
  }
  fs::rename(tmp, target);
}

}  // namespace hadeq
