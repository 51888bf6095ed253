#pragma once

#include <chrono>
#include <fstream>
#include <future>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "stablecut/clustering.hpp"
#include "stablecut/independent_set.hpp"
#include "stablecut/io.hpp"
#include "stablecut/multiway_cut.hpp"
#include "stablecut/node_multiway_cut.hpp"
#include "stablecut/random_instances.hpp"
#include "stablecut/stability_oracle.hpp"
#include "stablecut/tsp.hpp"

namespace stablecut::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitNotStable = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// "p/q", "p" or a finite decimal such as "1.1", all exact.
inline Rational parse_number(const std::string& s, const std::string& flag) {
  try {
    const auto dot = s.find('.');
    if (dot == std::string::npos) return Rational::parse(s);
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    if (digits.empty() || digits == "-" || digits == "+") throw std::invalid_argument("empty number");
    long scale = 1;
    for (std::size_t i = dot + 1; i < s.size(); ++i) scale *= 10;
    return Rational::parse(digits) / Rational(scale);
  } catch (const std::invalid_argument&) {
    throw UsageError(flag + ": cannot read '" + s + "' as an exact number");
  }
}

inline std::string read_text(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline InstanceFile read_instance(const std::string& path) { return load_instance(parse_json(read_text(path), path)); }

struct Options {
  std::string problem;
  std::string family;
  std::string input, certificate;
  std::string output;
  int k = 3;
  int n = 6;
  std::string eps = "2/5";
  std::string gamma = "2";
  std::optional<std::string> delta;
  std::optional<int> level;
  bool cycle_cover_only = false;
  std::uint64_t seed = 1;
  std::optional<long> budget;
  bool stability = false;
  bool timing = false;
  std::string from = "1", to = "2", step = "1/10";
  int jobs = 0;
};

inline EnumerationBudget budget_of(const Options& o) {
  return o.budget ? EnumerationBudget::unlimited_caps(*o.budget) : EnumerationBudget::from_env();
}

inline json report_json(const InstanceFile& f, const StabilityReport& r) {
  json j;
  j["gamma_star"] = r.gamma_star.str();
  j["unique_optimum"] = r.is_unique_optimum;
  j["optimum"] = solution_to_json(f, r.optimum);
  j["optimum_cost"] = r.optimum_cost.str();
  j["witness"] = r.witness ? solution_to_json(f, *r.witness) : json(nullptr);
  return j;
}

struct Outcome {
  json doc;
  int code = kExitOk;
};

// ---- solve ----

inline Outcome solve_instance(const InstanceFile& f, const Options& o) {
  const auto started = std::chrono::steady_clock::now();
  Verdict verdict = Verdict::not_stable;
  std::optional<Solution> sol;
  Rational lp_value;
  json extras = json::object();

  std::visit(
      [&](const auto& inst) {
        using I = std::decay_t<decltype(inst)>;
        auto take = [&](const auto& r) {
          verdict = r.verdict;
          if (r.solution) sol = Solution(*r.solution);
          lp_value = r.lp_value;
        };
        if constexpr (std::is_same_v<I, MultiwayCutInstance>) {
          if (o.delta) {
            auto w = weakly_stable_solve(inst, parse_number(*o.delta, "--delta"));
            verdict = w.certified ? Verdict::optimal : Verdict::not_stable;
            sol = Solution(w.cut);
            auto lp = solve(build_ckr(inst).problem);
            lp_value = lp.objective;
            extras["mode"] = "weak";
            extras["delta"] = parse_number(*o.delta, "--delta").str();
            extras["iterations"] = w.iterations;
            extras["iteration_budget"] = w.budget;
            extras["certified"] = w.certified;
          } else {
            take(robust_solve(inst));
          }
        } else if constexpr (std::is_same_v<I, NodeMultiwayCutInstance>) {
          take(robust_solve_node(inst));
        } else if constexpr (std::is_same_v<I, MisInstance>) {
          take(robust_colorable(inst.graph));
          if (o.level) {
            auto sa = solve_sa(inst.graph, *o.level);
            extras["sa"] = {{"level", *o.level}, {"value", sa.value.str()}, {"integral", sa.integral}};
          }
        } else if constexpr (std::is_same_v<I, VertexCoverInstance>) {
          // a minimum cover is the complement of a maximum independent set
          auto r = robust_colorable(inst.graph);
          verdict = r.verdict;
          lp_value = inst.graph.total_weight() - r.lp_value;
          if (r.solution) {
            std::vector<char> in(inst.graph.n(), 0);
            for (int v : r.solution->vertices) in[v] = 1;
            VertexCover c;
            for (int v = 0; v < inst.graph.n(); ++v)
              if (!in[v]) c.vertices.push_back(v);
            sol = Solution(c);
          }
        } else if constexpr (std::is_same_v<I, KCenterInstance>) {
          auto r = kcenter_robust(inst.metric);
          verdict = r.verdict;
          if (r.solution) sol = Solution(*r.solution);
          lp_value = r.r_bar;
          extras["r_bar"] = r.r_bar.str();
          extras["r_greedy"] = r.r_greedy.str();
        } else if constexpr (std::is_same_v<I, KMedianInstance>) {
          take(kmedian_robust(inst.metric));
        } else {
          auto r = tsp_robust(inst.metric, o.cycle_cover_only);
          verdict = r.verdict;
          if (r.solution) sol = Solution(*r.solution);
          lp_value = r.lp_value;
          extras["cuts"] = r.cuts;
          extras["greedy_cost"] = r.greedy_cost.str();
          extras["cycle_cover_only"] = o.cycle_cover_only;
        }
      },
      f.instance);

  json c;
  c["problem"] = problem_name(f.instance);
  c["verdict"] = to_string(verdict);
  c["solution"] = sol ? solution_to_json(f, *sol) : json(nullptr);
  c["objective"] = sol ? json(solution_cost(f.instance, *sol).str()) : json(nullptr);
  c["lp_value"] = lp_value.str();
  c["extras"] = extras;
  if (o.stability) {
    try {
      c["stability"] = report_json(f, stability_margin(f.instance, budget_of(o)));
    } catch (const Unsupported& e) {
      c["stability"] = {{"unsupported", e.what()}};
    }
  }
  if (o.timing)
    c["timing_ms"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  return {c, verdict == Verdict::optimal ? kExitOk : kExitNotStable};
}

// ---- generate ----

namespace detail {

template <class Make, class Accept>
auto first_accepted(Rng& rng, Make make, Accept accept) {
  for (int attempt = 0; attempt < 200; ++attempt) {
    auto x = make(rng);
    if (accept(x)) return x;
  }
  throw UsageError("no instance with a unique optimum found in 200 draws; try another --seed");
}

inline bool unique_optimum(const Instance& inst, const EnumerationBudget& b) { return brute_force_optimum(inst, b).unique; }

}  // namespace detail

inline InstanceFile generate_instance(const Options& o) {
  Rng rng(o.seed);
  const auto& fam = o.family;
  const auto b = budget_of(o);
  auto bad_family = [&]() -> UsageError {
    return UsageError("unknown family '" + fam + "' for problem '" + o.problem + "'");
  };
  auto gamma = [&] { return parse_number(o.gamma, "--gamma"); };
  auto eps = [&] { return parse_number(o.eps, "--eps"); };
  InstanceFile f;

  if (o.problem == "edge_mc") {
    if (fam == "freund-karloff" || fam == "scaled-freund-karloff") {
      auto fk = gen_freund_karloff(o.k);
      f.instance = fam == "freund-karloff" ? fk : gen_stable_from_opt(fk, gamma(), freund_karloff_optimum(fk));
      f.names = freund_karloff_names(o.k);
      return f;
    }
    if (fam == "random") {
      f.instance = random_multiway_cut(rng, o.n, o.k);
    } else if (fam == "planted") {
      auto base = detail::first_accepted(
          rng, [&](Rng& r) { return random_multiway_cut(r, o.n, o.k); },
          [&](const MultiwayCutInstance& x) { return detail::unique_optimum(Instance(x), b); });
      f.instance = gen_stable_from_opt(base, gamma(), std::get<EdgeCut>(brute_force_optimum(Instance(base), b).optimum));
    } else {
      throw bad_family();
    }
  } else if (o.problem == "node_mc") {
    if (fam == "star-gap") {
      f.instance = gen_node_star_gap(o.k, eps());
      f.names = default_names(o.k, "s");
      for (const auto& s : default_names(o.k, "u")) f.names.push_back(s);
      f.names.push_back("c");
      return f;
    }
    if (fam == "random") {
      f.instance = random_node_multiway_cut(rng, o.n, o.k);
    } else if (fam == "planted") {
      auto base = detail::first_accepted(
          rng, [&](Rng& r) { return random_node_multiway_cut(r, o.n, o.k); },
          [&](const NodeMultiwayCutInstance& x) { return detail::unique_optimum(Instance(x), b); });
      f.instance =
          gen_node_stable_from_opt(base, gamma(), std::get<NodeCut>(brute_force_optimum(Instance(base), b).optimum));
    } else {
      throw bad_family();
    }
  } else if (o.problem == "mis" || o.problem == "vertex_cover") {
    VertexWeightedGraph g;
    if (fam == "colorable-tight") {
      g = gen_colorable_tight(o.k, eps(), o.n);
    } else if (fam == "random") {
      g = random_vertex_weighted(rng, o.n, 0.4);
    } else if (fam == "planted" && o.problem == "mis") {
      g = detail::first_accepted(
          rng, [&](Rng& r) { return random_vertex_weighted(r, o.n, 0.4); },
          [&](const VertexWeightedGraph& x) { return detail::unique_optimum(Instance(MisInstance{x}), b); });
      g = gen_stable_mis(g, gamma(), std::get<IndependentSet>(brute_force_optimum(Instance(MisInstance{g}), b).optimum));
    } else {
      throw bad_family();
    }
    if (o.problem == "mis") f.instance = MisInstance{std::move(g)};
    else f.instance = VertexCoverInstance{std::move(g)};
  } else if (o.problem == "kcenter" || o.problem == "kmedian") {
    std::optional<MetricInstance> m;
    if (fam == "two-pairs") {
      m = gen_two_pairs();
    } else if (fam == "random") {
      m = MetricInstance(random_metric_matrix(rng, o.n), o.k);
    } else if (o.problem == "kmedian" && (fam == "steiner-gap" || fam == "no-steiner-gap")) {
      m = gen_kmedian_gap(fam == "steiner-gap" ? GapVariant::steiner : GapVariant::no_steiner, o.n);
    } else {
      throw bad_family();
    }
    if (o.problem == "kcenter") f.instance = KCenterInstance{*m};
    else f.instance = KMedianInstance{*m};
    if (m->has_steiner()) {
      f.names = default_names(m->n(), "c");
      f.facility_names = default_names(m->num_facilities(), "f");
      return f;
    }
  } else if (o.problem == "tsp") {
    if (fam == "four-point") f.instance = TspInstance{gen_square(Rational(19, 10))};
    else if (fam == "random") f.instance = TspInstance{MetricInstance(random_metric_matrix(rng, o.n), 1)};
    else if (fam == "planted") f.instance = TspInstance{MetricInstance(random_planted_tour_metric(rng, o.n), 1)};
    else throw bad_family();
  } else {
    throw UsageError("unknown problem '" + o.problem + "'");
  }
  const int n = std::visit(
      [](const auto& i) {
        using I = std::decay_t<decltype(i)>;
        if constexpr (requires { i.metric; }) return i.metric.n();
        else if constexpr (std::is_same_v<I, MultiwayCutInstance>) return i.graph.n();
        else return i.graph.n();
      },
      f.instance);
  f.names = default_names(n);
  return f;
}

// ---- verify ----

inline Outcome verify_certificate(const json& cert, const InstanceFile& f) {
  json r;
  const std::string problem = problem_name(f.instance);
  if (!cert.is_object() || !cert.contains("problem") || cert["problem"] != problem)
    throw IoError("certificate is not for a " + problem + " instance");
  r["problem"] = problem;
  if (!cert.contains("solution") || cert["solution"].is_null()) {
    // nothing was claimed
    r["solution"] = nullptr;
    r["valid"] = true;
    return {r, kExitOk};
  }
  const Solution sol = solution_from_json(f, cert["solution"]);
  bool feasible = false;
  try {
    feasible = check_feasible(f.instance, sol);
  } catch (const InfeasibleSolution&) {
  }
  r["feasible"] = feasible;
  bool matches = false;
  if (feasible) {
    const Rational value = solution_cost(f.instance, sol);
    r["objective"] = value.str();
    const json& claimed = cert.contains("objective") ? cert["objective"] : json(nullptr);
    matches = claimed.is_string() && stablecut::detail::rational_of(claimed, "objective") == value;
  }
  r["objective_matches"] = matches;
  r["valid"] = feasible && matches;
  return {r, feasible && matches ? kExitOk : kExitError};
}

// ---- sweep ----

struct SweepRow {
  Rational gamma;
  bool integral = false;
  Rational lp_value, opt_value;
};

inline SweepRow sweep_point(int k, const Rational& gamma, const EnumerationBudget& budget) {
  const auto fk = gen_freund_karloff(k);
  const auto inst = gamma == Rational(1) ? fk : gen_stable_from_opt(fk, gamma, freund_karloff_optimum(fk));
  SweepRow row;
  row.gamma = gamma;
  row.lp_value = solve(build_ckr(inst).problem).objective;
  row.opt_value = brute_force_optimum(Instance(inst), budget).cost;
  row.integral = row.lp_value == row.opt_value;
  return row;
}

inline std::vector<SweepRow> run_sweep(int k, const Rational& from, const Rational& to, const Rational& step,
                                       const EnumerationBudget& budget, int jobs) {
  if (step.sign() <= 0) throw UsageError("--step must be positive");
  if (from < Rational(1)) throw UsageError("--from must be at least 1");
  std::vector<Rational> grid;
  for (Rational g = from; g <= to; g += step) grid.push_back(g);
  if (jobs <= 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  std::vector<SweepRow> rows(grid.size());
  for (std::size_t start = 0; start < grid.size(); start += jobs) {
    std::vector<std::future<SweepRow>> batch;
    for (std::size_t i = start; i < std::min(grid.size(), start + jobs); ++i)
      batch.push_back(std::async(std::launch::async, sweep_point, k, grid[i], budget));
    for (std::size_t i = 0; i < batch.size(); ++i) rows[start + i] = batch[i].get();
  }
  return rows;
}

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string s = "gamma,integral,lp_value,opt_value\n";
  for (const auto& r : rows)
    s += r.gamma.str() + "," + (r.integral ? "true" : "false") + "," + r.lp_value.str() + "," + r.opt_value.str() + "\n";
  return s;
}

// ---- entry point ----

inline void write_out(const std::string& text, const Options& o, std::ostream& out) {
  if (o.output.empty() || o.output == "-") {
    out << text;
    return;
  }
  std::ofstream f(o.output, std::ios::binary);
  if (!f || !(f << text)) throw IoError("cannot write '" + o.output + "'");
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Robust solvers and exact stability checks for stable combinatorial instances", "stablecut"};
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* c) {
    c->add_option("--budget", o.budget, "enumeration budget for exact checks (overrides STABLECUT_BUDGET)")
        ->check(CLI::PositiveNumber);
    c->add_option("-o,--output", o.output, "write to this file instead of stdout");
  };

  auto* solve_cmd = app.add_subcommand("solve", "run the robust algorithm and print a certificate");
  solve_cmd->add_option("instance", o.input, "instance JSON ('-' for stdin)")->required();
  solve_cmd->add_option("--problem", o.problem, "expected problem type");
  solve_cmd->add_option("--delta", o.delta, "edge_mc: use the weakly stable solver with this delta");
  solve_cmd->add_option("--level", o.level, "mis: also solve the Sherali-Adams lift at this level")
      ->check(CLI::NonNegativeNumber);
  solve_cmd->add_flag("--cycle-cover-only", o.cycle_cover_only, "tsp: no subtour cuts");
  solve_cmd->add_flag("--stability", o.stability, "attach the exact stability report");
  solve_cmd->add_flag("--timing", o.timing, "attach wall-clock time");
  add_common(solve_cmd);

  auto* gen_cmd = app.add_subcommand("generate", "write an instance JSON");
  gen_cmd->add_option("--problem", o.problem)->required();
  gen_cmd->add_option("--family", o.family)->required();
  gen_cmd->add_option("--k", o.k, "terminals, clique size or centers");
  gen_cmd->add_option("--n", o.n, "number of vertices or points");
  gen_cmd->add_option("--eps", o.eps);
  gen_cmd->add_option("--gamma", o.gamma);
  gen_cmd->add_option("--seed", o.seed);
  add_common(gen_cmd);

  auto* margin_cmd = app.add_subcommand("margin", "exact stability margin by enumeration");
  margin_cmd->add_option("instance", o.input)->required();
  margin_cmd->add_option("--problem", o.problem, "expected problem type");
  add_common(margin_cmd);

  auto* verify_cmd = app.add_subcommand("verify", "re-check a certificate against its instance");
  verify_cmd->add_option("certificate", o.certificate)->required();
  verify_cmd->add_option("instance", o.input)->required();
  add_common(verify_cmd);

  auto* sweep_cmd = app.add_subcommand("sweep", "CKR integrality over a gamma grid on scaled Freund-Karloff");
  sweep_cmd->add_option("--k", o.k);
  sweep_cmd->add_option("--from", o.from);
  sweep_cmd->add_option("--to", o.to);
  sweep_cmd->add_option("--step", o.step);
  sweep_cmd->add_option("--jobs", o.jobs, "worker threads (default: hardware)");
  add_common(sweep_cmd);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  auto check_problem = [&](const InstanceFile& f) {
    if (!o.problem.empty() && o.problem != problem_name(f.instance))
      throw UsageError("--problem " + o.problem + " but the file holds a " + problem_name(f.instance) + " instance");
  };

  try {
    if (solve_cmd->parsed()) {
      auto f = read_instance(o.input);
      check_problem(f);
      auto r = solve_instance(f, o);
      write_out(dump(r.doc), o, out);
      return r.code;
    }
    if (gen_cmd->parsed()) {
      write_out(dump(save_instance(generate_instance(o))), o, out);
      return kExitOk;
    }
    if (margin_cmd->parsed()) {
      auto f = read_instance(o.input);
      check_problem(f);
      json j = report_json(f, stability_margin(f.instance, budget_of(o)));
      j["problem"] = problem_name(f.instance);
      write_out(dump(j), o, out);
      return kExitOk;
    }
    if (verify_cmd->parsed()) {
      auto cert = parse_json(read_text(o.certificate), o.certificate);
      auto r = verify_certificate(cert, read_instance(o.input));
      write_out(dump(r.doc), o, out);
      return r.code;
    }
    auto rows = run_sweep(o.k, parse_number(o.from, "--from"), parse_number(o.to, "--to"),
                          parse_number(o.step, "--step"), budget_of(o), o.jobs);
    write_out(sweep_csv(rows), o, out);
    return kExitOk;
  } catch (const std::exception& e) {
    // usage, IO, invalid instances, exhausted budgets
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace stablecut::cli
