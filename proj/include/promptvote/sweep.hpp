#pragma once

#include <string>
#include <vector>

#include "promptvote/pipeline.hpp"

namespace promptvote {

struct SweepRow {
  int n = 0;
  int k = 0;
  double mean = 0.0;       // mean accuracy across seeds
  double deviation = 0.0;  // max |accuracy - mean| across seeds
  int failures = 0;        // seeds whose run failed outright
};

struct SweepConfig {
  RunConfig base;                 // n and k are overridden per cell
  std::vector<int> grid_n;        // outer loop: rows come out n-major
  std::vector<int> grid_k;        // inner loop
  std::vector<std::uint64_t> seeds;
};

/// Runs every (n, k) cell of the grid once per seed and aggregates accuracy.
/// A failing cell-seed is counted in `failures` and the sweep continues.
std::vector<SweepRow> run_sweep(const SweepConfig& config,
                                const std::vector<Instance>& dataset, Gateway& gateway);

/// CSV with header n,k,mean,deviation — one row per grid cell, n-major.
void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path);

}  // namespace promptvote
