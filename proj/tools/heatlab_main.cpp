#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "heatlab/analytic_kernel.hpp"
#include "heatlab/runner.hpp"

namespace {

using namespace heatlab;

int cmd_list_suites() {
  for (const auto& entry : check_registry()) std::cout << entry.name << "\n";
  return 0;
}

int cmd_run(const RunConfig& config) {
  const Report report = run(config);
  int pass = 0, fail = 0, hypo = 0, other = 0;
  for (const auto& r : report.results) {
    switch (r.status) {
      case CheckStatus::pass: ++pass; break;
      case CheckStatus::fail:
      case CheckStatus::error: ++fail; break;
      case CheckStatus::hypothesis_not_met: ++hypo; break;
      default: ++other; break;
    }
    std::cout << to_string(r.status) << "  " << r.space_id << "  " << r.name;
    if (!r.note.empty()) std::cout << "  (" << r.note << ")";
    std::cout << "\n";
  }
  std::cout << pass << " pass, " << fail << " fail/error, " << hypo
            << " hypothesis_not_met, " << other << " untrusted -> "
            << config.out_dir << "/report.json\n";
  return exit_code(report);
}

int cmd_sample_space(const std::string& space_arg, int n, uint64_t seed,
                     const std::string& out_dir) {
  const SpaceDescriptor desc = parse_space_argument(space_arg);
  if (!desc.is_model())
    throw std::invalid_argument("sample-space requires a model descriptor");
  const int count = n > 0 ? n : Workspace::default_sample_n(desc);
  const SampledSpace space = make_model_sample(desc, count, seed);
  save_space(space, out_dir);
  std::cout << "wrote " << space.size() << " points to " << out_dir << "\n";
  return 0;
}

int cmd_dump_kernel(const std::string& space_arg, const std::vector<double>& t_list,
                    const std::vector<double>& d_list, const std::string& out_file) {
  const SpaceDescriptor desc = parse_space_argument(space_arg);
  if (!desc.is_model())
    throw std::invalid_argument("dump-kernel requires an analytic model");
  const AnalyticKernel kernel(desc);
  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!out_file.empty()) {
    file.open(out_file, std::ios::binary);
    out = &file;
  }
  char buf[256];
  *out << "t,d,p,grad_p,dt_p\n";
  for (double t : t_list)
    for (double d : d_list) {
      const KernelPoint kp = kernel.at(t, d);
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", t, d,
                    kp.value, kp.gradient, kp.dt);
      *out << buf;
    }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"heatlab: heat-kernel inequality verification laboratory"};
  app.require_subcommand(1);

  // run
  auto* run_cmd = app.add_subcommand("run", "run checker suites and write a report");
  std::vector<std::string> spaces, suites;
  std::string config_path, out_dir = "out", cache = "none";
  uint64_t seed = 0;
  int jobs = 0, sample_n = 0;
  double tolerance = 0.0;
  bool discretize_models = false;
  run_cmd->add_option("--space", spaces, "space descriptor or sample directory");
  run_cmd->add_option("--suite", suites, "checker name (repeatable) or 'all'");
  run_cmd->add_option("--config", config_path, "TOML config file");
  run_cmd->add_option("--out", out_dir, "output directory");
  run_cmd->add_option("--seed", seed, "RNG seed");
  run_cmd->add_option("--jobs", jobs, "worker count (default: logical cores)");
  run_cmd->add_option("--tolerance", tolerance, "relative margin tolerance override");
  run_cmd->add_option("--sample-n", sample_n, "model discretization size");
  run_cmd->add_option("--cache", cache, "spectrum cache directory or 'none'");
  run_cmd->add_flag("--discretize", discretize_models,
                    "run model spaces through the discrete pipeline");

  // list-suites
  auto* list_cmd = app.add_subcommand("list-suites", "print available checker names");

  // sample-space
  auto* sample_cmd =
      app.add_subcommand("sample-space", "discretize a model space to a directory");
  std::string sample_space_arg, sample_out = "space";
  int sample_count = 0;
  uint64_t sample_seed = 0;
  sample_cmd->add_option("--space", sample_space_arg, "model descriptor")->required();
  sample_cmd->add_option("--n", sample_count, "point count");
  sample_cmd->add_option("--seed", sample_seed, "RNG seed");
  sample_cmd->add_option("--out", sample_out, "output directory");

  // dump-kernel
  auto* dump_cmd = app.add_subcommand("dump-kernel", "emit (t, d, p, grad, dt) CSV");
  std::string dump_space_arg, dump_out;
  std::vector<double> t_list = {0.25, 1.0, 4.0};
  std::vector<double> d_list = {0.0, 0.5, 1.0, 2.0};
  dump_cmd->add_option("--space", dump_space_arg, "model descriptor")->required();
  dump_cmd->add_option("--t", t_list, "time values");
  dump_cmd->add_option("--d", d_list, "distance values");
  dump_cmd->add_option("--out", dump_out, "CSV path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (list_cmd->parsed()) return cmd_list_suites();
    if (sample_cmd->parsed())
      return cmd_sample_space(sample_space_arg, sample_count, sample_seed, sample_out);
    if (dump_cmd->parsed())
      return cmd_dump_kernel(dump_space_arg, t_list, d_list, dump_out);
    if (run_cmd->parsed()) {
      RunConfig config;
      if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw std::invalid_argument("cannot open config: " + config_path);
        std::stringstream ss;
        ss << in.rdbuf();
        config = RunConfig::from_toml(ss.str());
      }
      if (!spaces.empty()) config.spaces = spaces;
      if (!suites.empty()) config.suites = suites;
      if (seed != 0) config.seed = seed;
      if (out_dir != "out" || config.out_dir.empty()) config.out_dir = out_dir;
      if (jobs != 0) config.jobs = jobs;
      if (tolerance != 0.0) config.tolerance = tolerance;
      if (sample_n != 0) config.sample_n = sample_n;
      if (cache != "none") config.cache = cache;
      if (discretize_models) config.discretize_models = true;
      try {
        config.validate();
      } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
      }
      return cmd_run(config);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
