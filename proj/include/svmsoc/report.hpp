#pragma once

#include <cstddef>
#include <string>

#include "svmsoc/timing.hpp"

namespace svmsoc {

enum class ReportFormat { Table, Csv };

// The profiles one benchmark run compares. The defaults reproduce the
// measured hardware figures with zero configuration.
struct BenchProfiles {
  CalibrationProfile pipelined = default_profile(ExecutionTarget::PipelinedPl);
  CalibrationProfile sequential =
      default_profile(ExecutionTarget::SequentialPl);
  CalibrationProfile processor =
      default_profile(ExecutionTarget::EmbeddedProcessor);
  CalibrationProfile cascade_stage =
      default_profile(ExecutionTarget::SimplifiedStage);
  CalibrationProfile cascade_processor = default_cascade_processor_profile();
};

// Renders the benchmark for one model shape: per-target latency, speedup
// ratios, the two-stage cascade path, and the published implementation
// results as context. For the two published shapes (61x27 and 248x27) the
// report also quotes the reported latency figures, flagging the one that
// disagrees with its own cycle count. All numbers use fixed formatting
// (cycles as integers, microseconds and ratios to two decimals) so outputs
// are diffable byte for byte.
std::string bench_report(std::size_t n_sv, std::size_t n_features,
                         const BenchProfiles& profiles, ReportFormat format);

}  // namespace svmsoc
