#include "hadeq/cli.hpp"

#include "hadeq/battery.hpp"
#include "hadeq/config.hpp"
#include "hadeq/errors.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <ostream>

namespace hadeq {

namespace {

ExperimentConfig load(const CliOptions& o) {
  if (o.config.empty()) throw InvalidInput("--config: a config file is required");
  ExperimentConfig c = load_config(o.config);
  if (o.seed) c.seed = *o.seed;
  return c;
}

std::string out_path(const std::string& dir, const std::string& file) {
  return (std::filesystem::path(dir.empty() ? "." : dir) / file).string();
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Shared error mapping for every subcommand.
template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const ResolventFailure& e) {
    err << "error: " << e.what() << "\n";
    return kExitResolventFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
}

}  // namespace

int cmd_run(const CliOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ExperimentConfig c = load(o);
    const std::string hash = config_hash(c);
    const Trace t = run_prox(c.run_config());
    write_atomic(out_path(o.out, "trace.csv"), trace_to_csv(t, hash));
    write_atomic(out_path(o.out, "trace.json"), trace_to_json(t, hash).dump(2) + "\n");
    if (!o.quiet) {
      out << "status=" << to_string(t.status) << " steps=" << t.num_steps();
      if (t.num_steps() > 0) {
        out << " successive=" << fmt(t.successive.back()) << " bound_71=" << fmt(t.bound_successive.back())
            << " eq_residual=" << fmt(t.equilibrium_residuals.back());
      }
      out << " config_hash=" << hash << "\n";
    }
    if (t.status == RunStatus::resolvent_failure) {
      err << "error: " << t.failure_message << "\n";
      return static_cast<int>(kExitResolventFailure);
    }
    return static_cast<int>(t.status == RunStatus::converged ? kExitOk : kExitNotConverged);
  });
}

int cmd_resolvent(const CliOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ExperimentConfig c = load(o);
    if (!c.F) throw InvalidInput("bifunction: missing field");
    const std::optional<Point> x = c.resolvent_x ? c.resolvent_x : c.x0;
    if (!x) throw InvalidInput("resolvent.x: missing field (and no x0 to fall back on)");
    double lambda = 0.0;
    if (c.resolvent_lambda) {
      lambda = *c.resolvent_lambda;
    } else if (c.schedule) {
      lambda = c.schedule->at(0);
    } else {
      throw InvalidInput("resolvent.lambda: missing field (and no schedule to fall back on)");
    }
    ResolverSettings s = c.inner;
    s.seed = c.seed;
    const ResolventResult r = resolve(make_query(*c.F, lambda, *x, c.K, s));

    Json j;
    j["config_hash"] = config_hash(c);
    j["tool_version"] = kToolVersion;
    j["lambda"] = lambda;
    j["x"] = point_to_json(c.space, *x);
    j["z"] = point_to_json(c.space, r.z);
    j["certified_gap"] = r.certified_gap;
    j["method"] = to_string(r.method);
    j["inner_iters"] = r.inner_iters;
    const std::string text = j.dump(2) + "\n";
    if (!o.out.empty()) write_atomic(out_path(o.out, "resolvent.json"), text);
    if (!o.quiet) out << text;
    return static_cast<int>(kExitOk);
  });
}

int cmd_check(const CliOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ExperimentConfig c = load(o);
    const int samples = o.samples ? *o.samples : c.check_samples;
    if (samples < 1) throw InvalidInput("--samples: must be >= 1");
    const GeometryReport r = geometry_battery(c.space, samples, c.seed);

    Json j;
    j["config_hash"] = config_hash(c);
    j["tool_version"] = kToolVersion;
    j["space"] = space_to_json(c.space);
    j["samples"] = r.samples;
    j["cn_violation"] = r.cn_violation;
    j["cn_gap_min"] = r.cn_gap_min;
    j["cs_violation"] = r.cs_violation;
    j["split_residual"] = r.split_residual;
    j["scaling_violation"] = r.scaling_violation;
    j["reparam_residual"] = r.reparam_residual;
    j["flat"] = r.flat;
    j["flat_residual"] = r.flat_residual;
    j["ok"] = r.ok();
    const std::string text = j.dump(2) + "\n";
    if (!o.out.empty()) write_atomic(out_path(o.out, "check.json"), text);
    if (!o.quiet) out << text;
    return static_cast<int>(r.ok() ? kExitOk : kExitNotConverged);
  });
}

int cmd_kkm(const CliOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ExperimentConfig c = load(o);
    if (!c.F) throw InvalidInput("bifunction: missing field");
    if (!c.kkm) throw InvalidInput("kkm: missing field");
    const KkmSettings& ks = *c.kkm;
    const FinitePointSet d(c.space, ks.points);
    const auto subsets = ks.subsets.empty() ? all_subsets(d.size()) : ks.subsets;

    const CoverReport cover = kkm_cover_check(*c.F, d, subsets, ks.samples_per_subset, c.seed);
    const IntersectionCertificate cert = finite_intersection_certify(*c.F, d, ks.lattice);
    const double diam = hull_diameter_estimate(d, ks.diameter_samples, c.seed);
    const double min_gap = lipschitz_sweep(d, ks.lipschitz_pairs, diam, c.seed);
    const double vertex = vertex_recovery_residual(d);

    Json j;
    j["config_hash"] = config_hash(c);
    j["tool_version"] = kToolVersion;
    Json per = Json::array();
    for (std::size_t n = 0; n < subsets.size(); ++n)
      per.push_back({{"subset", subsets[n]}, {"violations", cover.violations[n]}, {"sampled", cover.sampled[n]}});
    j["subsets"] = per;
    j["max_violations"] = cover.max_violations;
    j["witness"] = cert.witness ? point_to_json(c.space, *cert.witness) : Json(nullptr);
    j["witness_coord"] = cert.best_coord;
    j["witness_value"] = cert.best_value;
    j["lattice"] = ks.lattice;
    j["lattice_points"] = cert.lattice_points;
    j["diameter_estimate"] = diam;
    j["lipschitz_pairs"] = ks.lipschitz_pairs;
    j["lipschitz_min_gap"] = min_gap;
    j["lipschitz_max_violation"] = std::max(0.0, -min_gap);
    j["vertex_recovery_residual"] = vertex;
    const bool ok = cover.max_violations == 0 && cert.witness && min_gap >= -1e-9 && vertex == 0.0;
    j["ok"] = ok;
    const std::string text = j.dump(2) + "\n";
    if (!o.out.empty()) write_atomic(out_path(o.out, "kkm.json"), text);
    if (!o.quiet) out << text;
    return static_cast<int>(ok ? kExitOk : kExitNotConverged);
  });
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Equilibrium problems on Hadamard model spaces", "hadeq"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  CliOptions o;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "Experiment config (JSON)")->required();
    sub->add_option("--out", o.out, "Output directory");
    sub->add_option("--seed", o.seed, "Override the config seed");
    sub->add_flag("--quiet", o.quiet, "Suppress stdout");
  };
  auto* run = app.add_subcommand("run", "Run the proximal algorithm and write trace.csv / trace.json");
  auto* res = app.add_subcommand("resolvent", "Evaluate one resolvent");
  auto* check = app.add_subcommand("check", "CAT(0) inequality battery on the config space");
  auto* kkm = app.add_subcommand("kkm", "KKM covering and finite-intersection report");
  for (auto* sub : {run, res, check, kkm}) add_common(sub);
  check->add_option("--samples", o.samples, "Number of random samples")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitInvalid;
  }

  if (run->parsed()) return cmd_run(o, out, err);
  if (res->parsed()) return cmd_resolvent(o, out, err);
  if (check->parsed()) return cmd_check(o, out, err);
  return cmd_kkm(o, out, err);
}

}  // namespace hadeq
