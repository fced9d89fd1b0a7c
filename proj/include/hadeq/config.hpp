#pragma once

// JSON serialization of spaces, points, bifunctions, domains, schedules and
// whole experiment configs, plus trace output in CSV and JSON.
//
// Every tagged union uses a "kind" field. Points are written per space:
//   euclidean    [x1, ..., xn]
//   hyperboloid  [x0, x1, ..., xn]   (ambient coordinates on the sheet)
//                or {"spatial": [x1, ..., xn]} on input
//   spider       {"ray": i, "r": radius}
//   product      {"left": P, "right": P}

#include "hadeq/kkm.hpp"
#include "hadeq/proxalg.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hadeq {

using Json = nlohmann::json;

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

Json space_to_json(const Space& space);
Space space_from_json(const Json& j, const std::string& path = "space");

Json point_to_json(const Space& space, const Point& p);
Point point_from_json(const Space& space, const Json& j, const std::string& path = "point");

/// Functional-derived bifunctions and Euclidean affine fields only; general
/// geodesic fields and custom bifunctions throw InvalidInput.
Json bifunction_to_json(const Bifunction& f);
Bifunction bifunction_from_json(const Space& space, const Json& j, const std::string& path = "bifunction");

Json domain_to_json(const DomainK& k);
DomainK domain_from_json(const Space& space, const Json& j, const std::string& path = "domain");

Json schedule_to_json(const StepSchedule& s);
StepSchedule schedule_from_json(const Json& j, const std::string& path = "schedule");

Json stop_to_json(const StopRule& s);
StopRule stop_from_json(const Json& j, const std::string& path = "stop");

struct KkmSettings {
  std::vector<Point> points;
  /// Zero-based index sets; empty means every nonempty subset.
  std::vector<std::vector<int>> subsets;
  int samples_per_subset = 2000;
  int lattice = 21;
  int lipschitz_pairs = 10000;
  int diameter_samples = 10000;
};

/// A full experiment: the run configuration plus the settings of the other
/// subcommands. Only `space` is mandatory; each subcommand checks for the
/// sections it needs.
struct ExperimentConfig {
  explicit ExperimentConfig(Space s) : space(s), K(DomainK::whole(s)) {}

  std::string name;
  Space space;
  std::optional<Bifunction> F;
  DomainK K;
  std::optional<Point> x0;
  std::optional<StepSchedule> schedule;
  StopRule stop;
  int max_iters = 100;
  std::optional<Point> reference_solution;
  int residual_grid_size = 256;
  double bound_radius = 0.0;
  std::uint64_t seed = 0;
  ResolverSettings inner;
  /// Resolvent subcommand: the point and step (default x0 and the first step).
  std::optional<Point> resolvent_x;
  std::optional<double> resolvent_lambda;
  int check_samples = 10000;
  std::optional<KkmSettings> kkm;

  /// The run configuration; throws InvalidInput naming any missing section.
  RunConfig run_config() const;
};

ExperimentConfig config_from_json(const Json& j);
/// Canonical form: every field written, defaults included.
Json config_to_json(const ExperimentConfig& c);

/// Parses a config file; JSON syntax errors report line and column.
ExperimentConfig load_config(const std::string& path);

/// FNV-1a 64 of the canonical JSON dump, as 16 hex digits.
std::string config_hash(const ExperimentConfig& c);

/// One row per step: k,lambda,successive_dist,fejer_dist,bound_71,bound_72,eq_residual,
/// after a "# config_hash=..." line. Unavailable values are left empty.
std::string trace_to_csv(const Trace& t, const std::string& hash);
Json trace_to_json(const Trace& t, const std::string& hash);

/// Writes through a temporary file in the same directory and renames it into place.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace hadeq
