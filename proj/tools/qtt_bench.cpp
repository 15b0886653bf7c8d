// Benchmark runner for the QTT PDE solvers.
#include <CLI11.hpp>
#include <iostream>
#include <string>
#include <vector>

#include "qtt/bench.hpp"
#include "qtt/io.hpp"

namespace {

void add_spec_options(CLI::App* cmd, qtt::ProblemSpec& spec, std::string& method) {
  cmd->add_option("--cores", spec.cores_per_dim, "cores per dimension");
  cmd->add_option("--timesteps", spec.timesteps, "time steps (0 = problem default)");
  cmd->add_option("--runs", spec.runs, "nonlinear updates for space-time solvers");
  cmd->add_option("--method", method, "als|mals")->check(CLI::IsMember({"als", "mals"}));
  cmd->add_option("--sweeps", spec.sweeps, "full bidirectional sweeps");
  cmd->add_option("--seed", spec.seed, "RNG seed for random guesses");
  cmd->add_option("--encoder", spec.encoder, "analytic|ttsvd|interp")
      ->check(CLI::IsMember({"analytic", "ttsvd", "interp"}));
  cmd->add_option("--nodes", spec.nodes, "interpolation nodes minus one");
  cmd->add_option("--data", spec.data_file, "dataset CSV for poisson-data");
  cmd->add_option("--datapoints", spec.data_points, "generated data points for poisson-data");
  cmd->add_option("--k", spec.k, "wavenumber (problem1)");
  cmd->add_option("--eps1", spec.eps1, "anisotropy eps1 (problem2-aniso)");
  cmd->add_option("--eps2", spec.eps2, "anisotropy eps2 (problem2-aniso)");
  cmd->add_option("--nu", spec.nu, "viscosity (burgers)");
  cmd->add_option("--alpha", spec.alpha, "Wood parameter alpha (burgers)");
  cmd->add_option_function<int>(
      "--max-rank", [&spec](const int& v) { spec.max_rank = v; }, "solver bond cap");
  cmd->add_option_function<double>(
      "--trunc", [&spec](const double& v) { spec.trunc = v; }, "solver truncation tolerance");
  cmd->add_option("--step-guess", spec.step_guess, "warm|random start per time step")
      ->check(CLI::IsMember({"warm", "random"}));
}

int write_records(const std::vector<qtt::RunRecord>& records, const std::string& format,
                  const std::string& out) {
  if (out.empty()) {
    std::cout << (format == "json" ? qtt::records_to_json(records)
                                   : qtt::records_to_csv(records));
  } else {
    qtt::emit(records, format, out);
  }
  for (const auto& r : records)
    if (!r.ok) {
      std::cerr << "run failed: " << r.spec.id << ": " << r.error << "\n";
      return 1;
    }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"QTT PDE solver benchmarks"};
  app.require_subcommand(1);

  qtt::ProblemSpec spec;
  std::string method = "mals";
  std::string format = "csv";
  std::string out_path;
  std::string axis = "cores";
  std::string values_csv;

  auto* run_cmd = app.add_subcommand("run", "run one named problem");
  std::string problem_id;
  std::string save_solution, dump_csv;
  run_cmd->add_option("problem", problem_id, "problem id (see `list`)")->required();
  add_spec_options(run_cmd, spec, method);
  run_cmd->add_option("--format", format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
  run_cmd->add_option("--out", out_path, "output file (default: stdout)");
  run_cmd->add_option("--save-solution", save_solution, "write the solution train (binary)");
  run_cmd->add_option("--dump-csv", dump_csv, "write the dense solution as CSV");

  auto* sweep_cmd = app.add_subcommand("sweep", "run a parameter sweep");
  sweep_cmd->add_option("--problem", problem_id, "problem id")->required();
  sweep_cmd->add_option("--axis", axis, "cores|timesteps|runs|datapoints")
      ->check(CLI::IsMember({"cores", "timesteps", "runs", "datapoints"}));
  sweep_cmd->add_option("--values", values_csv, "comma-separated axis values")->required();
  add_spec_options(sweep_cmd, spec, method);
  sweep_cmd->add_option("--format", format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
  sweep_cmd->add_option("--out", out_path, "output file (default: stdout)");

  auto* list_cmd = app.add_subcommand("list", "list problem ids");

  CLI11_PARSE(app, argc, argv);

  spec.method = (method == "als") ? qtt::SolveMethod::als : qtt::SolveMethod::mals;

  try {
    if (list_cmd->parsed()) {
      for (const auto& id : qtt::problem_ids()) std::cout << id << "\n";
      return 0;
    }
    spec.id = problem_id;
    if (run_cmd->parsed()) {
      std::vector<qtt::RunRecord> records{qtt::run_problem(spec)};
      if (records[0].ok && !save_solution.empty())
        qtt::write_tt(records[0].solution, save_solution);
      if (records[0].ok && !dump_csv.empty())
        qtt::write_dense_csv(records[0].solution, dump_csv);
      return write_records(records, format, out_path);
    }
    // sweep
    std::vector<double> values;
    std::string cell;
    std::stringstream ss(values_csv);
    while (std::getline(ss, cell, ',')) values.push_back(std::stod(cell));
    if (values.empty()) {
      std::cout << qtt::records_to_csv({});
      return 0;
    }
    auto records = qtt::run_sweep(spec, axis, values);
    return write_records(records, format, out_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
