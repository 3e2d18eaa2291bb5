#pragma once

#include <string>

#include "promptvote/pipeline.hpp"

namespace promptvote {

/// Statistics derived purely from manifest bytes.
struct Report {
  int instances = 0;
  int scored = 0;
  int aborted = 0;
  double accuracy = 0.0;
  double tie_rate = 0.0;      // tie_broken instances / scored
  double abstain_rate = 0.0;  // abstaining votes / total votes
  long total_votes = 0;
  std::map<std::string, long> calls;
  long prompt_tokens = 0;
  long completion_tokens = 0;
  double wall_total_ms = 0.0;
};

RunManifest read_manifest(const std::string& path);

// One JSON record per line: header, then votes + one record per instance,
// then a trailing summary.
namespace manifest_io {
std::string header_line(const RunConfig& config);
std::string vote_line(const TimedVote& vote);
std::string instance_line(const InstanceResult& result);
std::string summary_line(const RunSummary& summary);
}  // namespace manifest_io

/// Recomputes every statistic from the vote rows and cross-checks the stored
/// per-instance records and summary. Any disagreement (including a missing
/// vote row) throws MANIFEST_CORRUPT.
Report score_manifest(const std::string& path);

}  // namespace promptvote
