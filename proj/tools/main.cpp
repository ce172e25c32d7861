// taubnut: CLI over the eta-deformed Kepler-Coulomb library.
//
//   taubnut <spectrum|effpot|simulate|verify|oracle> --config cfg.json
//           [--out DIR] [--seed N] [--quiet]
//
// One JSON config per run: top-level model parameters (eta, k, hbar, dim), an
// optional seed, and one block per subcommand.  Outputs are CSV (header row,
// comma-separated, LF, 17 significant digits) and JSON with stable key order;
// identical config + seed gives byte-identical files.  Exit codes: 0 success,
// 1 verification/numerical failure, 2 configuration error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "taubnut/dynamics.hpp"
#include "taubnut/integrals.hpp"
#include "taubnut/model.hpp"
#include "taubnut/operator_grid.hpp"
#include "taubnut/radial_oracle.hpp"
#include "taubnut/spectrum.hpp"

using json = nlohmann::ordered_json;
using namespace taubnut;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;

struct CliOptions {
  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  bool seed_from_flag = false;
  bool quiet = false;
};

struct RunConfig {
  ModelParams params;
  std::uint64_t seed = 0;
  json root;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double require_number(const json& blk, const char* key) {
  if (!blk.contains(key) || !blk[key].is_number())
    throw ConfigError(std::string("config: missing numeric field '") + key + "'");
  return blk[key].get<double>();
}

int require_int(const json& blk, const char* key) {
  if (!blk.contains(key) || !blk[key].is_number_integer())
    throw ConfigError(std::string("config: missing integer field '") + key + "'");
  return blk[key].get<int>();
}

double number_or(const json& blk, const char* key, double fallback) {
  if (!blk.contains(key)) return fallback;
  if (!blk[key].is_number())
    throw ConfigError(std::string("config: field '") + key + "' must be numeric");
  return blk[key].get<double>();
}

int int_or(const json& blk, const char* key, int fallback) {
  if (!blk.contains(key)) return fallback;
  if (!blk[key].is_number_integer())
    throw ConfigError(std::string("config: field '") + key + "' must be an integer");
  return blk[key].get<int>();
}

RunConfig load_config(const CliOptions& opt) {
  std::ifstream in(opt.config_path);
  if (!in) throw ConfigError("config: cannot open '" + opt.config_path + "'");
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config: top level must be an object");

  RunConfig cfg;
  const double eta = require_number(root, "eta");
  const double k = require_number(root, "k");
  const double hbar = require_number(root, "hbar");
  const int dim = require_int(root, "dim");
  try {
    cfg.params = ModelParams(eta, k, hbar, dim);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (root.contains("seed")) {
    if (!root["seed"].is_number_unsigned())
      throw ConfigError("config: 'seed' must be a non-negative integer");
    cfg.seed = root["seed"].get<std::uint64_t>();
  }
  if (opt.seed_from_flag) cfg.seed = opt.seed;
  cfg.root = std::move(root);
  return cfg;
}

json block_or_empty(const RunConfig& cfg, const char* name) {
  if (!cfg.root.contains(name)) return json::object();
  if (!cfg.root[name].is_object())
    throw ConfigError(std::string("config: '") + name + "' must be an object");
  return cfg.root[name];
}

std::filesystem::path out_file(const CliOptions& opt, const char* name) {
  std::filesystem::create_directories(opt.out_dir);
  return std::filesystem::path(opt.out_dir) / name;
}

void write_csv(const std::filesystem::path& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  for (std::size_t i = 0; i < header.size(); ++i)
    out << (i ? "," : "") << header[i];
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << row[i];
    out << "\n";
  }
}

void write_json(const std::filesystem::path& path, const json& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << doc.dump(2) << "\n";
}

void note(const CliOptions& opt, const std::string& line) {
  if (!opt.quiet) std::cout << line << "\n";
}

// ---------------------------------------------------------------- spectrum

int cmd_spectrum(const RunConfig& cfg, const CliOptions& opt) {
  const json blk = block_or_empty(cfg, "spectrum");
  const int n_max = require_int(blk, "n_max");
  const int l_max = require_int(blk, "l_max");
  if (n_max < 0 || l_max < 0)
    throw ConfigError("spectrum: n_max and l_max must be >= 0");

  std::vector<std::vector<std::string>> rows;
  for (int l = 0; l <= l_max; ++l)
    for (int n = 0; n <= n_max; ++n) {
      const QuantumLevel lv = make_level(n, l, cfg.params);
      rows.push_back({std::to_string(n), std::to_string(l),
                      std::to_string(lv.principal), fmt(lv.energy),
                      fmt(lv.coupling), fmt(perturbative_energy(n, l, cfg.params)),
                      std::to_string(level_multiplicity(l, cfg.params))});
    }
  const auto path = out_file(opt, "spectrum.csv");
  write_csv(path,
            {"n", "l", "N_principal", "E_formula", "K", "E_perturbative",
             "degeneracy"},
            rows);
  note(opt, "spectrum: " + std::to_string(rows.size()) + " levels -> " +
                path.string());
  return 0;
}

// ------------------------------------------------------------------ effpot

int cmd_effpot(const RunConfig& cfg, const CliOptions& opt) {
  const json blk = block_or_empty(cfg, "effpot");
  const double l2 = number_or(blk, "l2", 2.0);
  const double r_min = number_or(blk, "r_min", 0.05);
  const double r_max = number_or(blk, "r_max", 2.0);
  const int samples = int_or(blk, "samples", 40);
  std::vector<double> etas = {0.0, 0.05, 0.2, 0.4};
  if (blk.contains("etas")) {
    if (!blk["etas"].is_array() || blk["etas"].empty())
      throw ConfigError("effpot: 'etas' must be a non-empty array");
    etas.clear();
    for (const auto& e : blk["etas"]) {
      if (!e.is_number()) throw ConfigError("effpot: etas entries must be numeric");
      etas.push_back(e.get<double>());
    }
  }
  if (!(r_min > 0.0) || !(r_max > r_min))
    throw ConfigError("effpot: need 0 < r_min < r_max");
  if (samples < 2) throw ConfigError("effpot: need samples >= 2");
  if (l2 < 0.0) throw ConfigError("effpot: need l2 >= 0");

  std::vector<std::string> header = {"r"};
  std::vector<EffectiveProblem> problems;
  for (double eta : etas) {
    char name[64];
    std::snprintf(name, sizeof name, "U_eff[eta=%g]", eta);
    header.push_back(name);
    problems.push_back(
        {l2, ModelParams(eta, cfg.params.k, cfg.params.hbar, cfg.params.dim)});
  }

  const double step = (r_max - r_min) / (samples - 1);
  std::vector<std::vector<std::string>> rows;
  for (int i = 0; i < samples; ++i) {
    const double r = r_min + i * step;
    std::vector<std::string> row = {fmt(r)};
    for (const auto& prob : problems)
      row.push_back(fmt(effective_potential(r, prob)));
    rows.push_back(std::move(row));
  }
  const auto path = out_file(opt, "effpot.csv");
  write_csv(path, header, rows);
  note(opt, "effpot: " + std::to_string(rows.size()) + " samples x " +
                std::to_string(etas.size()) + " curves -> " + path.string());
  return 0;
}

// ---------------------------------------------------------------- simulate

int cmd_simulate(const RunConfig& cfg, const CliOptions& opt) {
  const json blk = block_or_empty(cfg, "simulate");
  const int dim = cfg.params.dim;
  auto read_vec = [&](const char* key) {
    if (!blk.contains(key) || !blk[key].is_array() ||
        static_cast<int>(blk[key].size()) != dim)
      throw ConfigError(std::string("simulate: '") + key +
                        "' must be an array of length dim");
    std::vector<double> v;
    for (const auto& x : blk[key]) {
      if (!x.is_number()) throw ConfigError("simulate: vector entries must be numeric");
      v.push_back(x.get<double>());
    }
    return v;
  };
  const PhaseState initial{read_vec("q"), read_vec("p")};
  const double t_end = require_number(blk, "t_end");
  IntegrationOptions io;
  io.tol = number_or(blk, "tol", 1e-12);
  const double drift_bound = number_or(blk, "drift_bound", 1e-9);

  const Trajectory traj = integrate(initial, t_end, io, cfg.params);

  // trajectory.csv: t, q, p, r, H, L2, R_i
  std::vector<std::string> header = {"t"};
  for (int i = 1; i <= dim; ++i) header.push_back("q_" + std::to_string(i));
  for (int i = 1; i <= dim; ++i) header.push_back("p_" + std::to_string(i));
  header.insert(header.end(), {"r", "H", "L2"});
  for (int i = 1; i <= dim; ++i) header.push_back("R_" + std::to_string(i));

  std::vector<std::vector<std::string>> rows;
  for (std::size_t s = 0; s < traj.states.size(); ++s) {
    const PhaseState& st = traj.states[s];
    std::vector<std::string> row = {fmt(traj.times[s])};
    for (double x : st.q) row.push_back(fmt(x));
    for (double x : st.p) row.push_back(fmt(x));
    row.push_back(fmt(radial_coordinate(st)));
    row.push_back(fmt(hamiltonian(st, cfg.params)));
    row.push_back(fmt(total_angular_momentum_sq(st)));
    for (double x : runge_lenz(st, cfg.params)) row.push_back(fmt(x));
    rows.push_back(std::move(row));
  }
  write_csv(out_file(opt, "trajectory.csv"), header, rows);

  double max_drift = 0.0;
  json drift = json::object();
  for (const auto& [key, value] : traj.invariant_drift) {
    drift[key] = value;
    max_drift = std::max(max_drift, value);
  }
  const double energy = hamiltonian(initial, cfg.params);
  const bool pass = max_drift <= drift_bound;

  json closure;  // null unless a closure distance is well-defined
  if (energy < 0.0 && !traj.collision_halted) {
    try {
      closure = orbit_closure(traj);
    } catch (const std::exception&) {
      closure = nullptr;
    }
  }

  json report = {{"params",
                  {{"eta", cfg.params.eta},
                   {"k", cfg.params.k},
                   {"hbar", cfg.params.hbar},
                   {"dim", cfg.params.dim}}},
                 {"t_end", t_end},
                 {"tol", io.tol},
                 {"samples", rows.size()},
                 {"collision_halted", traj.collision_halted},
                 {"halt_time", traj.halt_time},
                 {"energy", energy},
                 {"bound", energy < 0.0},
                 {"closure", closure},
                 {"drift_bound", drift_bound},
                 {"max_drift", max_drift},
                 {"drift", drift},
                 {"pass", pass}};
  const auto jpath = out_file(opt, "drift.json");
  write_json(jpath, report);
  note(opt, std::string("simulate: max drift ") + fmt(max_drift) + " (" +
                (pass ? "pass" : "FAIL") + ") -> " + jpath.string());
  return pass ? 0 : kExitFailure;
}

// ------------------------------------------------------------------ verify

int cmd_verify(const RunConfig& cfg, const CliOptions& opt) {
  const json blk = block_or_empty(cfg, "verify");
  const int dim = cfg.params.dim;
  const int states = int_or(blk, "states", 100);
  const int rank_states = int_or(blk, "rank_states", 32);
  const double bracket_tol = number_or(blk, "bracket_tol", 1e-7);
  const double identity_tol = number_or(blk, "identity_tol", 1e-10);
  const double min_order = number_or(blk, "min_order", 1.5);
  const double identity_min_order = number_or(blk, "identity_min_order", 1.0);
  const double sa_tol = number_or(blk, "self_adjointness_tol", 1e-12);
  if (states < 1 || rank_states < 1)
    throw ConfigError("verify: state counts must be >= 1");
  const ModelParams& par = cfg.params;

  // --- Poisson algebra over random states ---
  const auto samples = sample_states(states, dim, cfg.seed);
  const Observable ham_obs = hamiltonian_observable(par);
  double h_max = 0.0, jj_max = 0.0, jr_max = 0.0, rr_max = 0.0, id_max = 0.0;
  for (const PhaseState& st : samples) {
    for (int i = 0; i < dim; ++i)
      for (int j = i + 1; j < dim; ++j)
        h_max = std::max(h_max, std::fabs(poisson_bracket(
                                    ham_obs, angular_momentum_observable(i, j), st)));
    for (int m = 2; m <= dim; ++m) {
      h_max = std::max(h_max, std::fabs(poisson_bracket(
                                  ham_obs, casimir_upper_observable(m), st)));
      h_max = std::max(h_max, std::fabs(poisson_bracket(
                                  ham_obs, casimir_lower_observable(m, dim), st)));
    }
    for (int i = 0; i < dim; ++i)
      h_max = std::max(h_max, std::fabs(poisson_bracket(
                                  ham_obs, runge_lenz_observable(i, par), st)));

    // {J_ij, J_kl} = d_ik J_jl + d_jl J_ik - d_il J_jk - d_jk J_il
    for (int i = 0; i < dim; ++i)
      for (int j = i + 1; j < dim; ++j)
        for (int k = 0; k < dim; ++k)
          for (int l = k + 1; l < dim; ++l) {
            const double br =
                poisson_bracket(angular_momentum_observable(i, j),
                                angular_momentum_observable(k, l), st);
            const double want =
                (i == k ? angular_momentum(st, j, l) : 0.0) +
                (j == l ? angular_momentum(st, i, k) : 0.0) -
                (i == l ? angular_momentum(st, j, k) : 0.0) -
                (j == k ? angular_momentum(st, i, l) : 0.0);
            jj_max = std::max(jj_max, std::fabs(br - want));
          }

    // {J_ij, R_k} = d_ik R_j - d_jk R_i
    const std::vector<double> rvec = runge_lenz(st, par);
    for (int i = 0; i < dim; ++i)
      for (int j = i + 1; j < dim; ++j)
        for (int k = 0; k < dim; ++k) {
          const double br = poisson_bracket(angular_momentum_observable(i, j),
                                            runge_lenz_observable(k, par), st);
          const double want = (i == k ? rvec[j] : 0.0) - (j == k ? rvec[i] : 0.0);
          jr_max = std::max(jr_max, std::fabs(br - want));
        }

    // {R_i, R_j} = -2 H J_ij
    const double hval = hamiltonian(st, par);
    for (int i = 0; i < dim; ++i)
      for (int j = i + 1; j < dim; ++j) {
        const double br = poisson_bracket(runge_lenz_observable(i, par),
                                          runge_lenz_observable(j, par), st);
        rr_max = std::max(
            rr_max, std::fabs(br + 2.0 * hval * angular_momentum(st, i, j)));
      }

    id_max = std::max(id_max, runge_lenz_identity_residual(st, par));
  }
  const double bracket_max = std::max({h_max, jj_max, jr_max, rr_max});
  const bool poisson_pass = bracket_max <= bracket_tol;
  const bool identity_pass = id_max <= identity_tol;

  // --- functional independence ---
  const int rank =
      functional_independence_rank(sample_states(rank_states, dim, cfg.seed + 1), par);
  const bool rank_pass = rank == 2 * dim - 1;

  // --- operator grid (dim <= 3 only) ---
  json grid_report;
  bool grid_pass = true;
  if (dim <= 3) {
    std::vector<int> points = dim == 2 ? std::vector<int>{64, 128}
                                       : std::vector<int>{32, 64};
    if (blk.contains("grid_points")) {
      if (!blk["grid_points"].is_array() || blk["grid_points"].size() < 2)
        throw ConfigError("verify: 'grid_points' must list >= 2 sizes");
      points.clear();
      for (const auto& p : blk["grid_points"]) points.push_back(p.get<int>());
    }
    auto ham = [&par](const GridField& x) { return apply_hamiltonian(x, par); };
    auto cas = [&par, dim](const GridField& x) {
      return apply_casimir(x, dim, par);
    };
    auto rl = [&par](const GridField& x) { return apply_runge_lenz(x, 0, par); };

    std::vector<double> res_c, res_r, res_id;
    double sa = 0.0;
    for (int pts : points) {
      const GridSpec g = default_grid(dim, pts);
      const GridField f = random_test_field(g, cfg.seed + 2);
      res_c.push_back(commutator_residual(ham, cas, f, par));
      res_r.push_back(commutator_residual(ham, rl, f, par));
      res_id.push_back(quantum_runge_lenz_identity_residual(f, par));
      const GridField phi = random_test_field(g, cfg.seed + 3);
      sa = hamiltonian_self_adjointness_residual(phi, f, par);
    }
    const std::size_t last = points.size() - 1;
    const double order_c = std::log2(res_c[last - 1] / res_c[last]) /
                           std::log2(double(points[last] - 1) / (points[last - 1] - 1));
    const double order_r = std::log2(res_r[last - 1] / res_r[last]) /
                           std::log2(double(points[last] - 1) / (points[last - 1] - 1));
    const double order_id = std::log2(res_id[last - 1] / res_id[last]) /
                            std::log2(double(points[last] - 1) / (points[last - 1] - 1));
    grid_pass = order_c >= min_order && order_r >= min_order &&
                order_id >= identity_min_order && sa <= sa_tol;
    grid_report = {{"points", points},
                   {"commutator_h_casimir", res_c},
                   {"commutator_h_runge_lenz", res_r},
                   {"identity_residuals", res_id},
                   {"order_casimir", order_c},
                   {"order_runge_lenz", order_r},
                   {"order_identity", order_id},
                   {"min_order", min_order},
                   {"identity_min_order", identity_min_order},
                   {"self_adjointness", sa},
                   {"self_adjointness_tol", sa_tol},
                   {"pass", grid_pass}};
  } else {
    grid_report = {{"skipped", true}, {"reason", "grid checks require dim <= 3"}};
  }

  const bool pass = poisson_pass && identity_pass && rank_pass && grid_pass;
  json report = {{"params",
                  {{"eta", par.eta}, {"k", par.k}, {"hbar", par.hbar}, {"dim", dim}}},
                 {"seed", cfg.seed},
                 {"states", states},
                 {"poisson",
                  {{"hamiltonian_brackets", h_max},
                   {"angular_angular", jj_max},
                   {"angular_runge_lenz", jr_max},
                   {"runge_lenz_runge_lenz", rr_max},
                   {"max", bracket_max},
                   {"tolerance", bracket_tol},
                   {"pass", poisson_pass}}},
                 {"runge_lenz_identity",
                  {{"max_residual", id_max},
                   {"tolerance", identity_tol},
                   {"pass", identity_pass}}},
                 {"rank",
                  {{"value", rank}, {"expected", 2 * dim - 1}, {"pass", rank_pass}}},
                 {"grid", grid_report},
                 {"pass", pass}};
  const auto path = out_file(opt, "verify.json");
  write_json(path, report);
  note(opt, std::string("verify: ") + (pass ? "pass" : "FAIL") + " -> " +
                path.string());
  return pass ? 0 : kExitFailure;
}

// ------------------------------------------------------------------ oracle

int cmd_oracle(const RunConfig& cfg, const CliOptions& opt) {
  const json blk = block_or_empty(cfg, "oracle");
  const int points = int_or(blk, "points", 3000);
  const double factor = number_or(blk, "factor", 1.0);
  if (points < 100) throw ConfigError("oracle: need points >= 100");
  if (!(factor > 0.0)) throw ConfigError("oracle: need factor > 0");

  std::vector<std::pair<int, int>> levels;
  if (blk.contains("levels")) {
    if (!blk["levels"].is_array() || blk["levels"].empty())
      throw ConfigError("oracle: 'levels' must be a non-empty array of [n, l]");
    for (const auto& e : blk["levels"]) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
          !e[1].is_number_integer())
        throw ConfigError("oracle: level entries must be [n, l] integer pairs");
      levels.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
  } else {
    for (int l = 0; l <= 2; ++l)
      for (int n = 0; n <= 2; ++n) levels.emplace_back(n, l);
  }

  auto solve = [&](int n, int l, int pts) {
    const RadialGrid grid = default_level_grid(n, l, cfg.params, pts);
    const DiscretizedRadialProblem prob = discretize(l, cfg.params, grid);
    return std::pair{lowest_eigenpairs(prob, n + 1)[n].energy, grid.h()};
  };

  bool pass = true;
  std::vector<std::vector<std::string>> rows;
  for (const auto& [n, l] : levels) {
    const double e_formula = bound_energy(n, l, cfg.params);
    const auto [e_coarse, h_coarse] = solve(n, l, points);
    const auto [e_fine, h_fine] = solve(n, l, 2 * points - 1);
    const double diff_coarse = std::fabs(e_formula - e_coarse);
    const double diff_fine = std::fabs(e_formula - e_fine);
    const double order = std::log2(diff_coarse / diff_fine);
    pass = pass && diff_fine <= factor * h_fine * h_fine;
    rows.push_back({std::to_string(n), std::to_string(l), fmt(e_formula),
                    fmt(e_fine), fmt(diff_fine), fmt(h_fine), fmt(order)});
  }
  const auto path = out_file(opt, "oracle.csv");
  write_csv(path,
            {"n", "l", "E_formula", "E_oracle", "abs_diff", "grid_h",
             "observed_order"},
            rows);
  note(opt, "oracle: " + std::to_string(rows.size()) + " levels (" +
                (pass ? "pass" : "FAIL") + ") -> " + path.string());
  return pass ? 0 : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"eta-deformed Kepler-Coulomb toolkit"};
  app.require_subcommand(1);

  CliOptions opt;
  int (*run)(const RunConfig&, const CliOptions&) = nullptr;
  const std::vector<std::pair<const char*, decltype(run)>> commands = {
      {"spectrum", cmd_spectrum}, {"effpot", cmd_effpot},
      {"simulate", cmd_simulate}, {"verify", cmd_verify},
      {"oracle", cmd_oracle}};
  for (const auto& [name, fn] : commands) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", opt.config_path, "JSON run configuration")
        ->required();
    sub->add_option("--out", opt.out_dir, "output directory");
    sub->add_option("--seed", opt.seed, "override the config seed")
        ->trigger_on_parse()
        ->each([&opt](const std::string&) { opt.seed_from_flag = true; });
    sub->add_flag("--quiet", opt.quiet, "suppress the summary line");
    sub->callback([&run, fn = fn]() { run = fn; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  }

  try {
    const RunConfig cfg = load_config(opt);
    return run(cfg, opt);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::domain_error& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}
