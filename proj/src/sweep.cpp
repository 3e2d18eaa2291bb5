#include "promptvote/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "promptvote/errors.hpp"

namespace promptvote {

std::vector<SweepRow> run_sweep(const SweepConfig& config,
                                const std::vector<Instance>& dataset, Gateway& gateway) {
  if (config.grid_n.empty() || config.grid_k.empty() || config.seeds.empty())
    throw Error(ErrorCode::CONFIG_INVALID, "sweep grid and seed list must be non-empty");

  std::vector<SweepRow> rows;
  rows.reserve(config.grid_n.size() * config.grid_k.size());
  for (int n : config.grid_n) {
    for (int k : config.grid_k) {
      SweepRow row;
      row.n = n;
      row.k = k;
      std::vector<double> accuracies;
      for (std::uint64_t seed : config.seeds) {
        RunConfig cell = config.base;
        cell.n = n;
        cell.k = k;
        cell.seed = seed;
        try {
          RunManifest manifest = run_dataset(cell, dataset, gateway);
          accuracies.push_back(manifest.summary.accuracy);
        } catch (const Error&) {
          ++row.failures;
        }
      }
      if (!accuracies.empty()) {
        double sum = 0.0;
        for (double a : accuracies) sum += a;
        row.mean = sum / static_cast<double>(accuracies.size());
        for (double a : accuracies)
          row.deviation = std::max(row.deviation, std::fabs(a - row.mean));
      }
      rows.push_back(row);
    }
  }
  return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out.good())
    throw Error(ErrorCode::CONFIG_INVALID, "cannot write sweep csv '" + path + "'");
  out << "n,k,mean,deviation\n";
  char buffer[96];
  for (const auto& row : rows) {
    std::snprintf(buffer, sizeof(buffer), "%d,%d,%.6f,%.6f", row.n, row.k, row.mean,
                  row.deviation);
    out << buffer << "\n";
  }
}

}  // namespace promptvote
