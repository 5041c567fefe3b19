#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "svmsoc/cascade.hpp"
#include "svmsoc/engine.hpp"
#include "svmsoc/svmlight.hpp"
#include "svmsoc/timing.hpp"

namespace svmsoc {

struct DeviceBudget {
  std::size_t total_bram_blocks = 140;
  std::size_t bits_per_block = 36864;  // one 36 Kb block
};

// One on-chip memory bank. Whole blocks are allocated per bank, never shared
// across banks, so capacity_bits is always a multiple of the block size.
struct BramBank {
  std::string name;  // "svs", "parameters" or "x"
  std::size_t capacity_bits = 0;
  std::vector<float> words;
};

struct SocBanks {
  BramBank svs;
  BramBank parameters;
  BramBank x;
  std::size_t blocks_used = 0;  // across all three banks
};

// One simulated run: the decision that came back over the control-bus
// analogue, the cycle count the timer analogue reports, and the bank
// footprint.
struct RunRecord {
  std::variant<Decision, CascadeResult> decision;
  LatencyEstimate measured_cycles;
  std::size_t bram_blocks_used = 0;
};

// Decodes the three byte streams and writes them word-by-word into banks.
// Each bank is allotted ceil(32*words / bits_per_block) whole blocks;
// BramOverflow when the total exceeds the budget. Malformed streams raise
// ParseError.
SocBanks load_banks(const Bytes& svs, const Bytes& parameters, const Bytes& x,
                    const DeviceBudget& budget = {});

// Reconstructs the model and instance from the banks (parameters =
// [bias, weights...], svs row-major, x dense), classifies, and attaches the
// profile's latency estimate for the reconstructed (N, F). Inconsistent
// banks raise DimensionMismatch. The timer never measures anything itself:
// measured_cycles is always estimate_cycles of the bank-derived shape.
RunRecord run_soc(const SocBanks& banks, const CalibrationProfile& profile,
                  float threshold = 0.0f);

// Cascade counterpart: classifies via the precomputed stages and bills only
// the stages actually executed. Stage weights live inside the stage
// classifiers and x arrives over the control-bus analogue, so no banks are
// loaded and bram_blocks_used is 0.
RunRecord run_cascade_soc(const CascadeModel& cascade, const TestInstance& x,
                          const CalibrationProfile& profile);

}  // namespace svmsoc
