#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace svmsoc {

// 250 MHz, the operating frequency every calibrated figure refers to.
inline constexpr double kDefaultClockHz = 2.5e8;

enum class ExecutionTarget {
  PipelinedPl,        // loop-pipelined accelerator on programmable logic
  SequentialPl,       // same accelerator without loop pipelining
  EmbeddedProcessor,  // software baseline on the embedded ARM core
  SimplifiedStage,    // one precomputed-weight cascade stage
};

// "pipelined_pl", "sequential_pl", "embedded_processor", "simplified_stage".
const char* target_name(ExecutionTarget t);
ExecutionTarget target_from_name(std::string_view name);  // ParseError

// Affine cycle model: cycles(N, F) = c_nf*N*F + c_n*N + c_f*F + c_0.
struct CalibrationProfile {
  ExecutionTarget target = ExecutionTarget::PipelinedPl;
  double c_nf = 0.0;  // cycles per support-vector x feature iteration
  double c_n = 0.0;   // cycles per support-vector row
  double c_f = 0.0;   // cycles per feature
  double c_0 = 0.0;   // fixed overhead cycles
  double clock_hz = kDefaultClockHz;
};

struct LatencyEstimate {
  double cycles = 0.0;  // integral: rounded to the nearest whole cycle
  double seconds = 0.0;  // cycles / clock_hz
};

// Enforces: finite coefficients, positive finite clock, c_nf >= 0,
// c_nf + c_n >= 0, c_nf + c_f >= 0, and predicted cycles positive at
// (1, 1). Together these make predicted cycles positive for all N, F >= 1.
void validate_profile(const CalibrationProfile& profile);

// cycles = round(c_nf*N*F + c_n*N + c_f*F + c_0). Zero dimensions raise
// EmptyModel.
LatencyEstimate estimate_cycles(const CalibrationProfile& profile,
                                std::size_t n_sv, std::size_t n_features);

// Cascade path cost: sum over the first `executed_stages` stages of
// c_f*F + c_0 (a precomputed-weight stage's latency does not depend on its
// support-vector count). Zero executed stages cost zero cycles; executing
// more stages than the list holds raises DimensionMismatch.
LatencyEstimate estimate_cascade_cycles(
    const CalibrationProfile& profile,
    const std::vector<std::size_t>& stage_features,
    std::size_t executed_stages);

// baseline.seconds / accelerated.seconds. The accelerated estimate must be
// positive; NonFiniteValue otherwise.
double speedup(const LatencyEstimate& baseline,
               const LatencyEstimate& accelerated);

struct CycleObservation {
  std::size_t n_sv = 0;
  std::size_t n_features = 0;
  double cycles = 0.0;
};

// Coefficients pinned before fitting; unset fields are solved for.
struct FixedCoefficients {
  std::optional<double> c_nf;
  std::optional<double> c_n;
  std::optional<double> c_f;
  std::optional<double> c_0;
};

struct FitResult {
  CalibrationProfile profile;
  std::vector<double> residuals;  // observed minus predicted, per observation
};

// Solves for the free coefficients: exactly determined systems by Gaussian
// elimination with partial pivoting, overdetermined ones by least squares
// through the normal equations. Raises UnderdeterminedFit when the
// observations cannot pin every free coefficient and SingularSystem on a
// degenerate square system; the fitted profile is validated before return.
FitResult fit_profile(ExecutionTarget target,
                      const std::vector<CycleObservation>& observations,
                      const FixedCoefficients& fixed = {},
                      double clock_hz = kDefaultClockHz);

// Profiles calibrated against the measured hardware figures:
//   pipelined_pl       (248,27) -> 8091 cycles, (61,27) -> 2865 cycles
//   sequential_pl      (248,27) -> 67294 cycles
//   embedded_processor (61,27) -> 77340 cycles, (248,27) -> 310000 cycles
//   simplified_stage   per stage at F=27 -> 225 cycles (two stages, 450)
CalibrationProfile default_profile(ExecutionTarget target);

// Software baseline for the two-stage cascade path: 1125 cycles per stage at
// F=27, so the full path costs 2250 cycles (9 us) against the cascade's
// 450 (1.8 us), a 5.00x ratio.
CalibrationProfile default_cascade_processor_profile();

// One row of the published implementation-results table, kept verbatim for
// report context. Percentages are of the reference device totals.
struct ResourceRow {
  std::string name;
  std::size_t slices = 0;
  int slices_pct = 0;
  std::size_t lut = 0;
  int lut_pct = 0;
  std::size_t lut_ram = 0;
  int lut_ram_pct = 0;
  std::size_t bram = 0;
  int bram_pct = 0;
  std::size_t dsp = 0;
  int dsp_pct = 0;
  double power_w = 0.0;
};

const std::vector<ResourceRow>& reference_resource_table();

struct DeviceTotals {
  std::size_t slices = 106400;
  std::size_t lut = 53200;
  std::size_t lut_ram = 17400;
  std::size_t bram_blocks = 140;
  std::size_t dsp = 220;
};

DeviceTotals reference_device_totals();

// Text form: one "key = value" line per field (target, c_nf, c_n, c_f, c_0,
// clock_hz), '#' comments and blank lines allowed. target is required;
// coefficients default to 0 and clock_hz to the 250 MHz default. Unknown or
// duplicate keys raise ParseError, and the parsed profile is validated.
CalibrationProfile parse_profile_text(std::string_view text);
std::string write_profile_text(const CalibrationProfile& profile);

}  // namespace svmsoc
