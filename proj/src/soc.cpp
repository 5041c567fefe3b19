#include "svmsoc/soc.hpp"

#include <string>
#include <utility>

#include "svmsoc/errors.hpp"
#include "svmsoc/model.hpp"

namespace svmsoc {
namespace {

BramBank make_bank(const char* name, std::vector<float> words,
                   const DeviceBudget& budget, std::size_t& total_blocks) {
  BramBank bank;
  bank.name = name;
  bank.words = std::move(words);
  const std::size_t bits = 32 * bank.words.size();
  const std::size_t blocks =
      (bits + budget.bits_per_block - 1) / budget.bits_per_block;
  bank.capacity_bits = blocks * budget.bits_per_block;
  total_blocks += blocks;
  return bank;
}

}  // namespace

SocBanks load_banks(const Bytes& svs, const Bytes& parameters, const Bytes& x,
                    const DeviceBudget& budget) {
  if (budget.total_bram_blocks == 0 || budget.bits_per_block == 0)
    throw ParseError("device budget fields must be positive");
  SocStream svs_s = decode_soc_stream(svs, "svs");
  SocStream par_s = decode_soc_stream(parameters, "parameters");
  SocStream x_s = decode_soc_stream(x, "x");
  SocBanks banks;
  banks.svs = make_bank("svs", std::move(svs_s.words), budget,
                        banks.blocks_used);
  banks.parameters = make_bank("parameters", std::move(par_s.words), budget,
                               banks.blocks_used);
  banks.x = make_bank("x", std::move(x_s.words), budget, banks.blocks_used);
  if (banks.blocks_used > budget.total_bram_blocks)
    throw BramOverflow(banks.blocks_used, budget.total_bram_blocks);
  return banks;
}

RunRecord run_soc(const SocBanks& banks, const CalibrationProfile& profile,
                  float threshold) {
  const std::size_t par_words = banks.parameters.words.size();
  if (par_words < 2)
    throw DimensionMismatch(
        "dimension mismatch: banks inconsistent: parameters bank holds " +
        std::to_string(par_words) + " words, need at least 2");
  const std::size_t n = par_words - 1;
  if (banks.svs.words.size() % n != 0)
    throw DimensionMismatch(
        "dimension mismatch: banks inconsistent: svs bank holds " +
        std::to_string(banks.svs.words.size()) +
        " words, not a multiple of " + std::to_string(n) +
        " support vectors");
  const std::size_t f = banks.svs.words.size() / n;
  if (banks.x.words.size() != f)
    throw DimensionMismatch(
        "dimension mismatch: banks inconsistent: x bank holds " +
        std::to_string(banks.x.words.size()) + " words, expected " +
        std::to_string(f));

  SvmModel m;
  m.num_sv = n;
  m.num_features = f;
  m.support_vectors = banks.svs.words;
  m.alpha_y.assign(banks.parameters.words.begin() + 1,
                   banks.parameters.words.end());
  m.bias = banks.parameters.words[0];
  m.threshold = threshold;
  validate_model(m);

  RunRecord rec;
  rec.decision = classify_full(m, TestInstance{banks.x.words}).decision;
  rec.measured_cycles = estimate_cycles(profile, n, f);
  rec.bram_blocks_used = banks.blocks_used;
  return rec;
}

RunRecord run_cascade_soc(const CascadeModel& cascade, const TestInstance& x,
                          const CalibrationProfile& profile) {
  const CascadeResult r = cascade_classify(cascade, x);
  std::vector<std::size_t> stage_features;
  stage_features.reserve(cascade.stages.size());
  for (const auto& stage : cascade.stages)
    stage_features.push_back(stage.num_features);
  RunRecord rec;
  rec.measured_cycles =
      estimate_cascade_cycles(profile, stage_features, r.exit_stage);
  rec.decision = r;
  rec.bram_blocks_used = 0;
  return rec;
}

}  // namespace svmsoc
