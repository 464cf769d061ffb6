#include "heatlab/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <thread>

namespace heatlab {

namespace {

struct Task {
  size_t index;
  std::string space_arg;
  const CheckerEntry* entry;
  Workspace workspace;
};

std::string spectrum_cache_dir(const RunConfig& config) {
  if (const char* env = std::getenv("HEATLAB_CACHE")) return env;
  if (config.cache != "none" && !config.cache.empty()) return config.cache;
  return {};
}

std::string sanitize(const std::string& name) {
  std::string out = name;
  for (char& c : out)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '.' && c != '-')
      c = '_';
  return out;
}

}  // namespace

Report run(const RunConfig& config) {
  config.validate();
  Report report;
  report.config_echo = config.to_toml();
  report.environment = environment_fingerprint();

  std::vector<const CheckerEntry*> selected;
  for (const auto& name : config.suites) {
    if (name == "all") {
      for (const auto& entry : check_registry()) selected.push_back(&entry);
      break;
    }
    selected.push_back(find_checker(name));
  }

  const std::string cache_dir = spectrum_cache_dir(config);

  // Prepare per-space shared state (sample + spectral decomposition) before
  // fanning out, so parallel checkers share immutable inputs.
  std::vector<Task> tasks;
  for (const auto& space_arg : config.spaces) {
    SpaceDescriptor desc;
    std::shared_ptr<const SampledSpace> sample;
    std::shared_ptr<const SpectralDecomposition> spectral;

    if (space_argument_is_directory(space_arg)) {
      auto loaded = std::make_shared<SampledSpace>(load_space(space_arg));
      loaded->desc.kind = SpaceKind::sampled;  // external data: discrete path
      desc = loaded->desc;
      sample = loaded;
    } else {
      desc = parse_space_argument(space_arg);
    }

    const bool discrete_mode = desc.kind == SpaceKind::sampled ||
                               config.discretize_models;
    const bool needs_spectral =
        discrete_mode ||
        std::any_of(selected.begin(), selected.end(),
                    [](const CheckerEntry* e) { return e->needs_spectral; });
    if (needs_spectral) {
      if (sample) {
        auto gen = std::make_shared<const Generator>(build_generator(sample));
        spectral = std::make_shared<const SpectralDecomposition>(
            cache_dir.empty() ? eigendecompose(gen)
                              : eigendecompose_cached(gen, cache_dir));
      } else {
        const int n = config.sample_n > 0 ? config.sample_n
                                          : Workspace::default_sample_n(desc);
        spectral = discretize(desc, n, config.seed, cache_dir);
        sample = std::shared_ptr<const SampledSpace>(spectral,
                                                     spectral->generator->space.get());
      }
    }

    for (const CheckerEntry* entry : selected) {
      Task task;
      task.index = tasks.size();
      task.space_arg = space_arg;
      task.entry = entry;
      task.workspace.desc = desc;
      task.workspace.sample = sample;
      task.workspace.spectral = spectral;
      task.workspace.seed = config.seed;
      task.workspace.sample_n = config.sample_n;
      task.workspace.prefer_discrete = config.discretize_models;
      const bool discrete_for_task =
          discrete_mode || entry->needs_spectral;
      task.workspace.grid = config.grid(discrete_for_task);
      tasks.push_back(std::move(task));
    }
  }

  struct Slot {
    std::vector<CheckResult> results;
    double ms = 0.0;
    std::string key;
  };
  std::vector<Slot> slots(tasks.size());

  std::atomic<size_t> next{0};
  auto worker = [&] {
    while (true) {
      const size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      Task& task = tasks[i];
      Slot& slot = slots[task.index];
      slot.key = task.workspace.desc.id() + "/" + task.entry->name;
      const auto start = std::chrono::steady_clock::now();
      try {
        slot.results = task.entry->run(task.workspace);
      } catch (const std::exception& e) {
        CheckResult r;
        r.name = task.entry->name;
        r.space_id = task.workspace.desc.id();
        r.status = CheckStatus::error;
        r.note = e.what();
        slot.results = {std::move(r)};
      }
      slot.ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - start)
                    .count();
    }
  };

  int jobs = config.jobs > 0 ? config.jobs
                             : static_cast<int>(std::thread::hardware_concurrency());
  jobs = std::max(1, std::min<int>(jobs, static_cast<int>(tasks.size())));
  {
    std::vector<std::thread> pool;
    for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
  }

  const std::filesystem::path out_dir(config.out_dir);
  std::filesystem::create_directories(out_dir);
  for (const auto& slot : slots) {
    report.timings_ms[slot.key] = slot.ms;
    for (const auto& r : slot.results) {
      for (const auto& table : r.tables)
        write_csv(table, out_dir / (sanitize(r.space_id + "_" + r.name + "_" +
                                             table.name) +
                                    ".csv"));
      CheckResult stripped = r;
      stripped.tables.clear();
      report.results.push_back(std::move(stripped));
    }
  }

  std::ofstream json_out(out_dir / "report.json", std::ios::binary);
  json_out << report.to_json() << "\n";
  return report;
}

int exit_code(const Report& report) { return report.any_failed() ? 1 : 0; }

}  // namespace heatlab
