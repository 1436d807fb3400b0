#include "ftsim/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "ftsim/error.hpp"
#include "ftsim/simulator.hpp"

namespace ftsim::harness {

namespace {

struct Job {
  std::size_t spec = 0;
  double load = 0.0;
  std::uint64_t seed = 0;
  double result = 0.0;
};

std::string describe(const ExperimentSpec& spec, const Job& job) {
  return spec.config_id() + " load " + std::to_string(job.load) + " seed " + std::to_string(job.seed);
}

void run_jobs(const std::vector<ExperimentSpec>& specs, std::vector<Job>& jobs, int threads) {
  if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min<int>(threads, static_cast<int>(jobs.size()));
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  std::string error_context;

  const auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      {
        std::lock_guard lock(error_mutex);
        if (error) return;
      }
      Job& job = jobs[i];
      try {
        engine::RunSpec run = specs[job.spec].run;
        run.traffic.load = job.load;
        run.sim.seed = job.seed;
        job.result = engine::run(run).steady_state_throughput();
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) {
          error = std::current_exception();
          error_context = describe(specs[job.spec], job);
        }
        return;
      }
    }
  };

  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (error) {
    try {
      std::rethrow_exception(error);
    } catch (const std::exception& e) {
      throw SimulationError(error_context + ": " + e.what());
    }
  }
}

std::vector<std::uint64_t> seeds_of(const ExperimentSpec& spec) {
  return spec.seeds.empty() ? std::vector<std::uint64_t>{spec.run.sim.seed} : spec.seeds;
}

}  // namespace

std::vector<SweepRow> sweep(const std::vector<ExperimentSpec>& specs, const SweepOptions& options) {
  if (specs.empty()) throw ConfigError("sweep needs at least one configuration");
  std::vector<Job> jobs;
  for (std::size_t s = 0; s < specs.size(); ++s) {
    if (specs[s].loads.empty()) throw ConfigError("sweep.loads is empty for " + specs[s].config_id());
    for (double load : specs[s].loads) {
      for (std::uint64_t seed : seeds_of(specs[s])) jobs.push_back({s, load, seed, 0.0});
    }
  }
  run_jobs(specs, jobs, options.jobs);

  std::vector<SweepRow> rows;
  std::size_t i = 0;
  while (i < jobs.size()) {
    SweepRow row{specs[jobs[i].spec].config_id(), jobs[i].load, 0.0, jobs[i].result, jobs[i].result, 0};
    double sum = 0.0;
    std::size_t j = i;
    for (; j < jobs.size() && jobs[j].spec == jobs[i].spec && jobs[j].load == jobs[i].load; ++j) {
      sum += jobs[j].result;
      row.throughput_min = std::min(row.throughput_min, jobs[j].result);
      row.throughput_max = std::max(row.throughput_max, jobs[j].result);
      ++row.runs;
    }
    row.throughput = sum / row.runs;
    rows.push_back(row);
    i = j;
  }
  std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return a.config_id != b.config_id ? a.config_id < b.config_id : a.load < b.load;
  });
  return rows;
}

double median_throughput(const ExperimentSpec& spec, const std::vector<std::uint64_t>& seeds,
                         const SweepOptions& options) {
  if (seeds.empty()) throw ConfigError("median needs at least one seed");
  std::vector<Job> jobs;
  for (std::uint64_t seed : seeds) jobs.push_back({0, spec.run.traffic.load, seed, 0.0});
  run_jobs({spec}, jobs, options.jobs);
  std::vector<double> values;
  for (const Job& j : jobs) values.push_back(j.result);
  std::sort(values.begin(), values.end());
  const std::size_t m = values.size() / 2;
  return values.size() % 2 ? values[m] : 0.5 * (values[m - 1] + values[m]);
}

}  // namespace ftsim::harness
