#include "ametric/cli/commands.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "ametric/sampling.hpp"
#include "ametric/solver.hpp"
#include "ametric/spaces.hpp"
#include "ametric/zamfirescu.hpp"

namespace ametric::cli {

namespace {

// Substreams of the config seed, one per sample set.
enum Stream : std::uint64_t {
  kAxiomTuples = 1,
  kSymmetryPairs = 2,
  kTriangleTriples = 3,
  kClassifyPairs = 4,
  kHoldoutPairs = 5,
  kStarts = 6,
  kLiftGate = 7,
  kMapGate = 8,
};

constexpr std::size_t kDefaultExtraStarts = 4;

class UsageFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Context {
  const ExperimentConfig& cfg;
  Tolerance tol;
  SamplingOptions sampling;
  StopRule rule;

  explicit Context(const ExperimentConfig& c) : cfg(c) {
    tol.abs = c.tolerances.check_tol;
    sampling.window = c.sampling.window;
    rule.eps = c.tolerances.eps;
    rule.max_iter = c.solver.max_iter;
    rule.bound_eps = c.tolerances.bound_eps;
  }

  std::uint64_t seed(Stream s) const { return derive_seed(cfg.sampling.seed, s); }

  AMetricSpace space(bool gated) const {
    const auto& s = cfg.space;
    const Arity t(s.t);
    if (s.kind == "absdiff") return make_absdiff_space(t, s.d, s.lo, s.hi, cfg.tolerances.eq_tol);
    if (!gated) return lift_table(t, s.table, cfg.tolerances.eq_tol);
    LiftGate gate;
    gate.seed = seed(kLiftGate);
    gate.samples = cfg.sampling.n_tuples;
    gate.tol = tol;
    gate.sampling = sampling;
    return make_lifted_space(t, s.table, gate);
  }

  SelfMap map(const AMetricSpace& space) const {
    MapGate gate;
    gate.seed = seed(kMapGate);
    gate.sampling = sampling;
    return make_map(cfg.map, space, gate);
  }

  Point x0(const AMetricSpace& space) const {
    if (!space.contains(cfg.solver.x0)) throw UsageFailure("solver.x0 lies outside the carrier");
    return cfg.solver.x0;
  }

  std::vector<Point> starts(const AMetricSpace& space) const {
    std::vector<Point> out;
    if (!cfg.solver.starts.empty()) {
      for (const auto& s : cfg.solver.starts) {
        if (!space.contains(s)) throw UsageFailure("solver.starts entry lies outside the carrier");
        out.push_back(s);
      }
    } else if (space.is_finite()) {
      for (std::size_t i = 0; i < space.finite_size(); ++i) out.push_back({static_cast<double>(i)});
    } else {
      out.push_back(x0(space));
      CounterRng rng(seed(kStarts));
      for (std::size_t i = 0; i < kDefaultExtraStarts; ++i) out.push_back(random_point(space, rng, sampling));
    }
    if (out.size() < 2) out.push_back(out.front());
    return out;
  }
};

ordered_json header(Command command, const ExperimentConfig& cfg) {
  return {{"command", to_string(command)}, {"config", to_json(cfg)}};
}

// Stage list helper for the verify report.
struct Stages {
  ordered_json list = ordered_json::array();
  std::string failed;

  bool add(const std::string& name, bool passed) {
    list.push_back({{"name", name}, {"status", passed ? "pass" : "fail"}});
    if (!passed && failed.empty()) failed = name;
    return passed;
  }
  void skip(const std::string& name) { list.push_back({{"name", name}, {"status", "skipped"}}); }
};

ordered_json axiom_checks(const Context& ctx, const AMetricSpace& space, bool& passed) {
  const std::size_t t = space.arity().size();
  const auto tuples = sample_tuples(space, t + 1, ctx.cfg.sampling.n_tuples, ctx.seed(kAxiomTuples), ctx.sampling);
  const auto pairs = sample_pairs(space, ctx.cfg.sampling.n_pairs, ctx.seed(kSymmetryPairs), ctx.sampling);
  const auto triples = sample_triples(space, ctx.cfg.sampling.n_triples, ctx.seed(kTriangleTriples), ctx.sampling);
  spdlog::debug("samples: {} tuples, {} pairs, {} triples (exhaustive={})", tuples.size(), pairs.size(),
                triples.size(), tuples.exhaustive);
  const auto axioms = check_axioms(space, tuples, ctx.tol);
  const auto symmetry = check_symmetry(space, pairs, ctx.tol);
  const auto triangle = check_triangle_lemma(space, triples, ctx.tol);
  spdlog::info("axioms: {} instances, {} violations", axioms.checked, axioms.violations.size());
  spdlog::info("symmetry: {} instances, {} violations", symmetry.checked, symmetry.violations.size());
  spdlog::info("triangle: {} instances, {} violations", triangle.checked, triangle.violations.size());
  passed = axioms.passed() && symmetry.passed() && triangle.passed();
  return {{"exhaustive", tuples.exhaustive},
          {"axioms", to_json(axioms)},
          {"symmetry", to_json(symmetry)},
          {"triangle", to_json(triangle)}};
}

struct Classification {
  ZamfirescuCertificate cert;
  ordered_json json;
  bool passed = false;
};

Classification classify_stage(const Context& ctx, const AMetricSpace& space, const SelfMap& f) {
  Classification out;
  const auto pairs = sample_pairs(space, ctx.cfg.sampling.n_pairs, ctx.seed(kClassifyPairs), ctx.sampling);
  out.cert = classify(space, f, pairs);
  out.json["certificate"] = to_json(out.cert);
  spdlog::debug("classify: {} pairs, {} near-diagonal, branches {}/{}/{}", out.cert.n_pairs,
                out.cert.near_diagonal, out.cert.branch_counts[0], out.cert.branch_counts[1],
                out.cert.branch_counts[2]);
  spdlog::info("classify: valid={} a={} b={} c={} delta={}", out.cert.valid, out.cert.a, out.cert.b,
               out.cert.c, out.cert.delta);
  if (!out.cert.valid) return out;

  const auto holdout = sample_pairs(space, ctx.cfg.sampling.n_pairs, ctx.seed(kHoldoutPairs), ctx.sampling);
  const auto recheck = recheck_certificate(space, f, out.cert, holdout, ctx.tol);
  const auto lemma1 = verify_lemma1(space, f, out.cert.delta, holdout, ctx.tol);
  out.json["holdout_branches"] = to_json(recheck);
  out.json["lemma1"] = to_json(lemma1);
  out.passed = recheck.passed() && lemma1.passed();
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageFailure("cannot write " + path.string());
  out << text;
}

std::filesystem::path json_path(Command command, const ExperimentConfig& cfg,
                                const std::filesystem::path& out_dir) {
  return out_dir / (cfg.outputs.json_path.empty() ? to_string(command) + "_report.json"
                                                  : cfg.outputs.json_path);
}

int run_axioms(const Context& ctx, ordered_json& report) {
  const auto space = ctx.space(false);
  bool passed = false;
  report["checks"] = axiom_checks(ctx, space, passed);
  report["passed"] = passed;
  return passed ? kExitOk : kExitViolation;
}

int run_classify(const Context& ctx, ordered_json& report) {
  const auto space = ctx.space(true);
  const auto f = ctx.map(space);
  auto cls = classify_stage(ctx, space, f);
  for (auto& [k, v] : cls.json.items()) report[k] = v;
  report["passed"] = cls.passed;
  return cls.passed ? kExitOk : kExitViolation;
}

int run_solve(const Context& ctx, ordered_json& report, std::string& csv) {
  const auto space = ctx.space(true);
  const auto f = ctx.map(space);
  const Point x0 = ctx.x0(space);
  double delta = -1.0;
  if (ctx.cfg.solver.delta) {
    delta = *ctx.cfg.solver.delta;
    report["delta_source"] = "config";
  } else {
    auto cls = classify_stage(ctx, space, f);
    report["certificate"] = cls.json["certificate"];
    report["delta_source"] = cls.cert.valid ? "certificate" : "none";
    if (cls.cert.valid) delta = cls.cert.delta;
  }
  const auto trace = picard_run(space, f, x0, delta, ctx.rule);
  if (!trace.steps.empty()) spdlog::debug("picard: d0={} last step={}", trace.steps.front(), trace.steps.back());
  csv = trace_to_csv(trace);
  report["trace"] = trace_summary(trace);
  report["csv"] = ctx.cfg.outputs.csv_path;
  spdlog::info("solve: {} after {} steps", to_string(trace.status), trace.iterations());
  const bool converged = trace.status == PicardStatus::kConverged;
  report["passed"] = converged;
  return converged ? kExitOk : kExitViolation;
}

int run_verify(const Context& ctx, ordered_json& report, std::string& csv) {
  Stages stages;
  const auto space = ctx.space(false);
  const Point x0 = ctx.x0(space);
  auto finish = [&](int code) {
    report["stages"] = stages.list;
    report["failed_stage"] = stages.failed.empty() ? ordered_json(nullptr) : ordered_json(stages.failed);
    report["verdict"] = code == kExitOk ? "pass" : "fail";
    return code;
  };
  const char* later[] = {"classify", "lemma1", "solve", "decay", "cauchy", "uniqueness", "oracle"};
  auto skip_from = [&](std::size_t first) {
    for (std::size_t i = first; i < std::size(later); ++i) {
      if (std::string(later[i]) != "oracle" || space.is_finite()) stages.skip(later[i]);
    }
  };

  bool axioms_ok = false;
  report["axioms"] = axiom_checks(ctx, space, axioms_ok);
  if (!stages.add("axioms", axioms_ok)) {
    skip_from(0);
    return finish(kExitViolation);
  }

  const auto f = ctx.map(space);
  auto cls = classify_stage(ctx, space, f);
  report["certificate"] = cls.json["certificate"];
  if (cls.json.contains("holdout_branches")) report["holdout_branches"] = cls.json["holdout_branches"];
  if (!stages.add("classify", cls.cert.valid && (!cls.json.contains("holdout_branches") ||
                                                  cls.json["holdout_branches"]["passed"].get<bool>()))) {
    skip_from(1);
    return finish(kExitViolation);
  }
  report["lemma1"] = cls.json["lemma1"];
  bool ok = stages.add("lemma1", cls.json["lemma1"]["passed"].get<bool>());

  const double delta = cls.cert.delta;
  const auto trace = picard_run(space, f, x0, delta, ctx.rule);
  csv = trace_to_csv(trace);
  report["trace"] = trace_summary(trace);
  report["csv"] = ctx.cfg.outputs.csv_path;
  ok = stages.add("solve", trace.status == PicardStatus::kConverged) && ok;

  const auto decay = verify_decay(trace, ctx.tol);
  report["decay"] = to_json(decay);
  ok = stages.add("decay", decay.passed()) && ok;

  const auto cauchy = verify_cauchy(trace, space, ctx.tol);
  report["cauchy"] = to_json(cauchy);
  ok = stages.add("cauchy", cauchy.envelope.passed()) && ok;

  const auto probe = uniqueness_probe(space, f, ctx.starts(space), delta, ctx.rule, ctx.tol);
  ordered_json uniq = to_json(probe.check);
  uniq["starts"] = probe.runs.size();
  uniq["consensus"] = probe.consensus ? point_json(*probe.consensus) : ordered_json(nullptr);
  report["uniqueness"] = uniq;
  ok = stages.add("uniqueness", probe.check.passed()) && ok;

  if (space.is_finite()) {
    const auto fixed = brute_force_fixed_points(space, f);
    ordered_json pts = ordered_json::array();
    for (const auto& p : fixed) pts.push_back(point_json(p));
    const bool agrees = fixed.size() == 1 && probe.consensus &&
                        space.points_equal(fixed.front(), *probe.consensus);
    report["oracle"] = {{"fixed_points", pts}, {"agrees_with_picard", agrees}};
    ok = stages.add("oracle", agrees) && ok;
  }
  spdlog::info("verify: verdict {}", ok ? "pass" : "fail");
  return finish(ok ? kExitOk : kExitViolation);
}

ordered_json error_json(const char* kind, const std::string& message,
                        const std::vector<std::vector<double>>& witness = {}) {
  ordered_json w = ordered_json::array();
  for (const auto& p : witness) w.push_back(point_json(p));
  return {{"kind", kind}, {"message", message}, {"witness", w}};
}

}  // namespace

Command command_from_string(const std::string& name) {
  for (auto c : {Command::kAxioms, Command::kClassify, Command::kSolve, Command::kVerify}) {
    if (to_string(c) == name) return c;
  }
  throw UsageError("unknown command '" + name + "'");
}

std::string to_string(Command command) {
  switch (command) {
    case Command::kAxioms: return "axioms";
    case Command::kClassify: return "classify";
    case Command::kSolve: return "solve";
    case Command::kVerify: return "verify";
  }
  return "unknown";
}

CommandResult run_command(Command command, const ExperimentConfig& config,
                          const std::filesystem::path& out_dir) {
  const Context ctx(config);
  spdlog::debug("{}: space={} t={} map={} seed={}", to_string(command), config.space.kind, config.space.t,
                to_string(config.map.kind), config.sampling.seed);
  CommandResult result;
  result.report = header(command, config);
  std::string csv;
  try {
    switch (command) {
      case Command::kAxioms: result.exit_code = run_axioms(ctx, result.report); break;
      case Command::kClassify: result.exit_code = run_classify(ctx, result.report); break;
      case Command::kSolve: result.exit_code = run_solve(ctx, result.report, csv); break;
      case Command::kVerify: result.exit_code = run_verify(ctx, result.report, csv); break;
    }
  } catch (const ConstructionError& e) {
    spdlog::warn("construction failed: {}", e.what());
    result.report["error"] = error_json("construction", e.what(), e.witness());
    result.report["passed"] = false;
    result.exit_code = kExitViolation;
  } catch (const DomainError& e) {
    spdlog::warn("domain error: {}", e.what());
    result.report["error"] = error_json("domain", e.what());
    result.report["passed"] = false;
    result.exit_code = kExitViolation;
  } catch (const UsageError& e) {
    spdlog::error("{}", e.what());
    result.report["error"] = error_json("usage", e.what());
    result.exit_code = kExitUsage;
  } catch (const UsageFailure& e) {
    spdlog::error("{}", e.what());
    result.report["error"] = error_json("usage", e.what());
    result.exit_code = kExitUsage;
  }
  if (command == Command::kVerify && !result.report.contains("verdict")) result.report["verdict"] = "fail";

  if (!csv.empty()) {
    const auto path = out_dir / config.outputs.csv_path;
    write_text(path, csv);
    result.outputs.push_back(path);
  }
  const auto path = json_path(command, config, out_dir);
  write_text(path, result.report.dump(2) + "\n");
  result.outputs.push_back(path);
  return result;
}

CommandResult run_from_file(Command command, const std::filesystem::path& config_path,
                            const std::filesystem::path& out_dir,
                            std::optional<std::uint64_t> seed_override) {
  std::ifstream in(config_path, std::ios::binary);
  if (!in) {
    std::cerr << config_path.string() << ":1: error: cannot open config\n";
    return {.exit_code = kExitUsage};
  }
  std::stringstream buf;
  buf << in.rdbuf();
  ExperimentConfig cfg;
  try {
    cfg = parse_config(buf.str(), seed_override);
  } catch (const ConfigError& e) {
    std::cerr << config_path.string() << ":" << e.line() << ": error: " << e.what() << "\n";
    return {.exit_code = kExitUsage};
  }
  try {
    return run_command(command, cfg, out_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return {.exit_code = kExitUsage};
  }
}

void configure_logging() {
  auto logger = spdlog::get("ametric-fix");
  if (!logger) logger = spdlog::stderr_logger_mt("ametric-fix");
  spdlog::set_default_logger(logger);
  const char* env = std::getenv("AMETRIC_FIX_LOG");
  const std::string level = env ? env : "info";
  if (level == "debug") {
    spdlog::set_level(spdlog::level::debug);
  } else if (level == "info") {
    spdlog::set_level(spdlog::level::info);
  } else {
    spdlog::set_level(spdlog::level::off);
  }
}

}  // namespace ametric::cli
