#include "conesemi/commands.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <sstream>

#include "conesemi/dirichlet.hpp"
#include "conesemi/representation.hpp"
#include "conesemi/run_report.hpp"

namespace conesemi {

using nlohmann::json;

namespace {

struct Context {
  std::optional<ProblemFile> problem;
  std::uint64_t seed = kDefaultSeed;
  std::size_t samples = kDefaultSamples;
  std::vector<Report> checks;
  json data = json::object();
  std::ostringstream text;
  int exit_code = 0;
};

std::size_t resolve_samples(const CommandOptions& opts, const ProblemFile* p) {
  if (opts.samples) return *opts.samples;
  if (p && p->samples) return *p->samples;
  return kDefaultSamples;
}

std::string method_name(SemigroupMethod m) { return m == SemigroupMethod::Euler ? "euler" : "expm"; }

std::vector<SemigroupMethod> methods_of(const SemigroupConfig& cfg) {
  std::vector<SemigroupMethod> out;
  if (cfg.method != SemigroupMethod::Expm) out.push_back(SemigroupMethod::Euler);
  if (cfg.method != SemigroupMethod::Euler) out.push_back(SemigroupMethod::Expm);
  return out;
}

PolyCone cone_or_orthant(const ProblemFile& p, std::size_t n) {
  if (!p.cone) return PolyCone::orthant(n);
  PolyCone k = build_cone(p);
  if (k.dim() != n) throw Error(ErrorCode::DimensionMismatch, "the cone and the operator have different dimensions");
  return k;
}

CommandResult run(const std::string& name, const CommandOptions& opts, bool needs_file,
                  const std::function<void(Context&)>& body) {
  const auto start = std::chrono::steady_clock::now();
  Context ctx;
  json error = nullptr;
  try {
    if (opts.problem) {
      ctx.problem = *opts.problem;
    } else if (opts.file) {
      ctx.problem = load_problem(*opts.file);
    } else if (needs_file) {
      throw ParseError("--file", "this command needs a problem file");
    }
    const ProblemFile* p = ctx.problem ? &*ctx.problem : nullptr;
    ctx.seed = resolve_seed(opts, p);
    ctx.samples = resolve_samples(opts, p);
    body(ctx);
  } catch (const ParseError& e) {
    error = {{"code", "ParseError"}, {"message", e.what()}, {"location", e.location()}};
  } catch (const Error& e) {
    error = {{"code", std::string(to_string(e.code()))}, {"message", e.what()}, {"location", nullptr}};
  } catch (const std::exception& e) {
    error = {{"code", "InternalError"}, {"message", e.what()}, {"location", nullptr}};
  }
  if (!error.is_null()) ctx.exit_code = 2;

  CommandResult res;
  res.exit_code = ctx.exit_code;
  json& j = res.report;
  j["schema_version"] = kSchemaVersion;
  j["tool"] = "conesemi";
  j["tool_version"] = kToolVersion;
  j["command"] = name;
  json input;
  input["file"] = opts.file ? json(opts.file->string()) : json(nullptr);
  input["problem"] = ctx.problem ? to_json(*ctx.problem) : json(nullptr);
  j["input"] = input;
  j["seed"] = ctx.seed;
  j["samples"] = ctx.samples;
  j["status"] = ctx.exit_code == 0 ? "pass" : (ctx.exit_code == 1 ? "fail" : "error");
  j["exit_code"] = ctx.exit_code;
  json checks = json::array();
  for (const auto& c : ctx.checks) checks.push_back(report_to_json(c));
  j["checks"] = checks;
  j["data"] = ctx.data;
  j["error"] = error;

  std::ostringstream os;
  os << "conesemi " << name << " (seed " << ctx.seed << ", samples " << ctx.samples << ")\n";
  for (const auto& c : ctx.checks) os << report_to_text(c);
  os << ctx.text.str();
  if (!error.is_null()) os << "error: " << error["message"].get<std::string>() << "\n";
  os << "result: " << j["status"].get<std::string>() << " (exit " << ctx.exit_code << ")\n";
  res.text = os.str();

  const std::chrono::duration<double, std::milli> elapsed = std::chrono::steady_clock::now() - start;
  j["wall_time_ms"] = elapsed.count();
  return res;
}

const ProblemFile& problem_of(const Context& ctx) { return *ctx.problem; }

}  // namespace

std::uint64_t resolve_seed(const CommandOptions& opts, const ProblemFile* problem) {
  if (opts.seed) return *opts.seed;
  if (problem && problem->seed) return *problem->seed;
  if (opts.env_seed) {
    const std::string& s = *opts.env_seed;
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
      throw Error(ErrorCode::InvalidArgument, "CONESEMI_SEED must be a nonnegative integer, got \"" + s + "\"");
    }
    return v;
  }
  return kDefaultSeed;
}

CommandResult cmd_check_pod(const CommandOptions& opts) {
  return run("check-pod", opts, true, [](Context& ctx) {
    const auto& p = problem_of(ctx);
    const LinOp a = build_operator(p);
    const PolyCone k = cone_or_orthant(p, a.dim());
    Report r = has_pod(a, k);
    if (r.failed()) ctx.exit_code = 1;
    // The sign test only characterizes the property on the orthant.
    ctx.data["metzler_pattern"] =
        !p.cone || p.cone->orthant ? json(pod_matrix_characterization(a.matrix())) : json(nullptr);
    ctx.checks.push_back(std::move(r));
  });
}

CommandResult cmd_check_dissipative(const CommandOptions& opts) {
  return run("check-dissipative", opts, true, [](Context& ctx) {
    const auto& p = problem_of(ctx);
    const LinOp a = build_operator(p);
    const PolyCone k = cone_or_orthant(p, a.dim());
    const HalfNorm hn = build_halfnorm(p, k);
    Report r = certify_dissipative(a, hn, ctx.samples, ctx.seed);
    if (r.failed()) ctx.exit_code = 1;
    ctx.data["halfnorm"] = std::string(hn.kind_name());
    ctx.checks.push_back(std::move(r));
  });
}

CommandResult cmd_simulate(const CommandOptions& opts) {
  return run("simulate", opts, true, [](Context& ctx) {
    const auto& p = problem_of(ctx);
    const LinOp a = build_operator(p);
    const PolyCone k = cone_or_orthant(p, a.dim());
    const SemigroupConfig cfg = build_semigroup(p);
    bool conclusion_failed = false;

    std::optional<HalfNorm> contr_norm;
    if (p.halfnorm) {
      contr_norm = build_halfnorm(p, k);
    } else if (p.phi) {
      contr_norm = HalfNorm::phi(k, *p.phi);
    }

    if (p.phi) {
      const DualVector phi = DualVector::certify(k, *p.phi);
      Report r = check_theorem_contra(a, k, phi, build_lambda(p), ctx.samples, ctx.seed);
      if (r.parts.size() > 1 && r.parts[1].failed()) conclusion_failed = true;
      ctx.checks.push_back(std::move(r));
    }
    if (p.phi_set || p.phi_set_facets || !p.phi) {
      ProblemFile q = p;
      if (!q.phi_set) q.phi_set_facets = true;
      const auto phis = build_phi_set(q, k);
      Report r = check_positivity_via_total_set(a, phis, k, cfg, ctx.samples, ctx.seed);
      for (const auto& part : r.parts) {
        if (part.subject.rfind("conclusion", 0) == 0 && part.failed()) conclusion_failed = true;
      }
      ctx.checks.push_back(std::move(r));
    }

    json table = json::array();
    std::optional<double> earliest;
    ctx.text << "per-t table\n"
             << std::setw(10) << "t" << std::setw(8) << "method" << std::setw(16) << "positivity" << std::setw(16)
             << "contractivity" << "\n";
    for (const double t : cfg.t_grid) {
      for (const auto m : methods_of(cfg)) {
        const Matrix tt = semigroup_at(a, t, m, cfg.euler_steps);
        const Report pos = is_positive_operator(tt, k);
        json row{{"t", t},
                 {"method", method_name(m)},
                 {"positivity_margin", number_json(pos.worst_margin)},
                 {"positive", !pos.failed()},
                 {"contractivity_margin", nullptr},
                 {"contractive", nullptr}};
        bool row_failed = pos.failed();
        std::ostringstream cm;
        cm << "-";
        if (contr_norm) {
          const Report c = is_p_contractive(tt, *contr_norm, ctx.samples, ctx.seed);
          row["contractivity_margin"] = number_json(c.worst_margin);
          row["contractive"] = !c.failed();
          row_failed = row_failed || c.failed();
          cm.str("");
          cm << std::scientific << std::setprecision(3) << c.worst_margin;
        }
        if (row_failed) {
          conclusion_failed = true;
          if (!earliest) earliest = t;
        }
        ctx.text << std::setw(10) << t << std::setw(8) << method_name(m) << std::setw(16) << std::scientific
                 << std::setprecision(3) << pos.worst_margin << std::defaultfloat << std::setw(16) << cm.str()
                 << (row_failed ? "  FAIL" : "") << "\n";
        table.push_back(std::move(row));
      }
    }
    ctx.data["lambda"] = build_lambda(p);
    ctx.data["euler_steps"] = cfg.euler_steps;
    ctx.data["table"] = table;
    ctx.data["earliest_failing_t"] = earliest ? json(*earliest) : json(nullptr);
    if (earliest) ctx.text << "earliest failing t: " << *earliest << "\n";
    if (conclusion_failed) ctx.exit_code = 1;
  });
}

CommandResult cmd_represent(const CommandOptions& opts) {
  return run("represent", opts, true, [](Context& ctx) {
    const auto& p = problem_of(ctx);
    if (!p.unit) throw ParseError("/unit", "represent needs an order unit");
    if (!p.phi) throw ParseError("/phi", "represent needs a functional");
    const PolyCone k = build_cone(p);
    if (static_cast<std::size_t>(p.unit->size()) != k.dim()) {
      throw ParseError("/unit", "length differs from the cone dimension");
    }
    if (static_cast<std::size_t>(p.phi->size()) != k.dim()) {
      throw ParseError("/phi", "length differs from the cone dimension");
    }
    Report r;
    r.subject = "representing measure on the state space";
    r.tolerance = 1e-9;
    r.samples_used = 1;
    try {
      const StateSpace s = build_states(k, *p.unit);
      const Measure mu = represent_functional(s, DualVector::certify(k, *p.phi));
      const double residual = (integrate(s, mu) - *p.phi).cwiseAbs().maxCoeff();
      r.worst_margin = residual;
      r.verdict = residual <= r.tolerance ? Verdict::Holds : Verdict::Fails;
      json states = json::array();
      ctx.text << "states (normalized so that <u, omega> = 1) and weights\n";
      for (std::size_t i = 0; i < s.size(); ++i) {
        states.push_back({{"omega", vector_json(s.states[i].coords)}, {"weight", mu.weights[i]}});
        ctx.text << "  omega " << i << " = (";
        for (Eigen::Index c = 0; c < s.states[i].coords.size(); ++c) {
          ctx.text << (c ? ", " : "") << s.states[i].coords(c);
        }
        ctx.text << ")  mu = " << mu.weights[i] << "\n";
      }
      ctx.data["states"] = states;
      ctx.data["total_mass"] = mu.total_mass();
      ctx.data["phi_of_unit"] = p.phi->dot(*p.unit);
      ctx.data["residual"] = residual;
      ctx.text << "total mass " << mu.total_mass() << ", phi(u) = " << p.phi->dot(*p.unit) << "\n";
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotOrderUnit && e.code() != ErrorCode::NotRepresentable &&
          e.code() != ErrorCode::NotPositive) {
        throw;
      }
      r.verdict = Verdict::Fails;
      r.worst_margin = std::numeric_limits<double>::infinity();
      r.notes.push_back(e.what());
      ctx.data["failure_code"] = std::string(to_string(e.code()));
    }
    if (r.failed()) ctx.exit_code = 1;
    ctx.checks.push_back(std::move(r));
  });
}

CommandResult cmd_dirichlet_demo(const CommandOptions& opts) {
  return run("dirichlet-demo", opts, false, [&opts](Context& ctx) {
    std::vector<std::size_t> ns = opts.n_values.empty() ? std::vector<std::size_t>{15, 31, 63} : opts.n_values;
    SemigroupConfig cfg;
    cfg.t_grid = {0.1, 1.0};
    if (ctx.problem && ctx.problem->semigroup) cfg = build_semigroup(*ctx.problem);
    if (opts.t_grid) cfg.t_grid = *opts.t_grid;
    cfg.validate();
    for (const auto n : ns) {
      if (n < 2) throw Error(ErrorCode::InvalidArgument, "N values must be >= 2");
    }

    json tables = json::array();
    const std::pair<const char*, std::function<double(double)>> sources[] = {
        {"y = 1", [](double) { return 1.0; }},
        {"y = sin(pi s)", [](double s) { return std::sin(std::acos(-1.0) * s); }}};
    for (const auto& [label, f] : sources) {
      const ConvergenceTable t = convergence_study(ns, f, label);
      ctx.text << t.to_text();
      json rows = json::array();
      for (const auto& row : t.rows) {
        rows.push_back({{"N", row.n_interior},
                        {"h", row.h},
                        {"sup_error", row.sup_error},
                        {"ratio", row.ratio ? json(*row.ratio) : json(nullptr)}});
      }
      tables.push_back({{"source", t.source}, {"rows", rows}});
    }
    ctx.data["convergence"] = tables;
    ctx.data["n_values"] = ns;
    ctx.data["t_grid"] = cfg.t_grid;

    for (std::size_t i = 0; i < ns.size(); ++i) {
      Report r = verify_example(Grid::make(ns[i]), cfg, ctx.seed + i, ctx.samples);
      if (r.failed()) ctx.exit_code = 1;
      ctx.checks.push_back(std::move(r));
    }
  });
}

CommandResult run_command(const std::string& name, const CommandOptions& opts) {
  if (name == "check-pod") return cmd_check_pod(opts);
  if (name == "check-dissipative") return cmd_check_dissipative(opts);
  if (name == "simulate") return cmd_simulate(opts);
  if (name == "represent") return cmd_represent(opts);
  if (name == "dirichlet-demo") return cmd_dirichlet_demo(opts);
  return run(name, opts, false, [&name](Context&) {
    throw Error(ErrorCode::InvalidArgument, "unknown subcommand " + name);
  });
}

}  // namespace conesemi
