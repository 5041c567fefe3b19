#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>
#include <variant>

#include "doctest.h"
#include "svmsoc/engine.hpp"
#include "svmsoc/errors.hpp"
#include "svmsoc/soc.hpp"
#include "svmsoc/svmlight.hpp"
#include "test_util.hpp"

using namespace svmsoc;
using testutil::bit_equal;
using testutil::throws_with;

namespace {

SocFiles files_for(std::size_t n, std::size_t f, std::uint64_t seed) {
  const auto m = gen_synthetic_model(n, f, seed);
  std::mt19937_64 rng(seed + 1);
  const auto x = testutil::random_instance(f, rng);
  return export_soc_files(m, x);
}

std::size_t blocks_for_words(std::size_t words,
                             std::size_t bits_per_block = 36864) {
  return (32 * words + bits_per_block - 1) / bits_per_block;
}

SvmModel stub_stage(bool positive, std::size_t f) {
  SvmModel m;
  m.num_sv = 1;
  m.num_features = f;
  m.support_vectors.assign(f, 0.0f);
  m.alpha_y = {0.0f};
  m.bias = positive ? -1.0f : 1.0f;
  return m;
}

}  // namespace

TEST_CASE("the published model shape occupies four blocks") {
  const auto files = files_for(61, 27, 1);
  const auto banks = load_banks(files.svs, files.parameters, files.x);

  CHECK(banks.svs.name == "svs");
  CHECK(banks.parameters.name == "parameters");
  CHECK(banks.x.name == "x");
  CHECK(banks.svs.words.size() == 61 * 27);
  CHECK(banks.parameters.words.size() == 62);
  CHECK(banks.x.words.size() == 27);

  // 1647 words need two 36 Kb blocks; the two vectors take one block each.
  CHECK(banks.svs.capacity_bits == 2 * 36864);
  CHECK(banks.parameters.capacity_bits == 36864);
  CHECK(banks.x.capacity_bits == 36864);
  CHECK(banks.blocks_used == 4);
}

TEST_CASE("block accounting is exact over random shapes") {
  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + rng() % 300;
    const std::size_t f = 1 + rng() % 40;
    const auto files = files_for(n, f, rng());
    const auto banks = load_banks(files.svs, files.parameters, files.x);
    const std::size_t expected = blocks_for_words(n * f) +
                                 blocks_for_words(n + 1) +
                                 blocks_for_words(f);
    REQUIRE(banks.blocks_used == expected);
    REQUIRE(banks.svs.capacity_bits % 36864 == 0);
    REQUIRE(banks.svs.capacity_bits >= 32 * banks.svs.words.size());
  }
}

TEST_CASE("exceeding the device budget raises BramOverflow") {
  const auto files = files_for(1, 1, 3);

  DeviceBudget tight;
  tight.total_bram_blocks = 1;
  try {
    load_banks(files.svs, files.parameters, files.x, tight);
    FAIL("expected BramOverflow");
  } catch (const BramOverflow& e) {
    CHECK(e.required_blocks == 3);
    CHECK(e.available_blocks == 1);
    CHECK(std::string(e.what()).find("3 blocks required, 1 available") !=
          std::string::npos);
  }

  DeviceBudget bad;
  bad.total_bram_blocks = 0;
  CHECK_THROWS_AS(load_banks(files.svs, files.parameters, files.x, bad),
                  ParseError);
}

TEST_CASE("malformed streams cannot load") {
  const auto files = files_for(3, 2, 9);
  CHECK_THROWS_AS(load_banks(files.svs, files.parameters, Bytes{}),
                  ParseError);
  Bytes ragged = files.svs;
  ragged.pop_back();
  CHECK_THROWS_AS(load_banks(ragged, files.parameters, files.x), ParseError);
}

TEST_CASE("run_soc reproduces the direct classification bit for bit") {
  const auto m = gen_synthetic_model(61, 27, 4);
  std::mt19937_64 rng(5);
  const auto x = testutil::random_instance(27, rng);
  const auto files = export_soc_files(m, x);
  const auto banks = load_banks(files.svs, files.parameters, files.x);

  const auto record =
      run_soc(banks, default_profile(ExecutionTarget::PipelinedPl));
  const auto& d = std::get<Decision>(record.decision);
  const auto full = classify_full(m, x);

  CHECK(bit_equal(d.distance, full.decision.distance));
  CHECK(bit_equal(d.margin, full.decision.margin));
  CHECK(d.label == full.decision.label);
  CHECK(record.measured_cycles.cycles == 2865.0);
  CHECK(record.bram_blocks_used == 4);

  const auto proc = run_soc(
      banks, default_profile(ExecutionTarget::EmbeddedProcessor));
  CHECK(proc.measured_cycles.cycles == 77340.0);

  // The decision threshold arrives out of band.
  const auto forced = run_soc(
      banks, default_profile(ExecutionTarget::PipelinedPl), 1e9f);
  CHECK(std::get<Decision>(forced.decision).label == Label::Benign);
}

TEST_CASE("the timer analogue always reports the profile estimate") {
  std::mt19937_64 rng(66);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + rng() % 120;
    const std::size_t f = 1 + rng() % 33;
    const auto files = files_for(n, f, rng());
    const auto banks = load_banks(files.svs, files.parameters, files.x);
    const auto profile = default_profile(ExecutionTarget::SequentialPl);
    const auto record = run_soc(banks, profile);
    const auto expected = estimate_cycles(profile, n, f);
    REQUIRE(record.measured_cycles.cycles == expected.cycles);
    REQUIRE(record.measured_cycles.seconds == expected.seconds);
  }
}

TEST_CASE("inconsistent banks are rejected") {
  const auto files = files_for(4, 3, 12);
  auto banks = load_banks(files.svs, files.parameters, files.x);
  const auto profile = default_profile(ExecutionTarget::PipelinedPl);

  auto broken = banks;
  broken.parameters.words.resize(1);
  CHECK(throws_with<DimensionMismatch>([&] { run_soc(broken, profile); },
                                       "at least 2"));

  broken = banks;
  broken.svs.words.pop_back();
  CHECK(throws_with<DimensionMismatch>([&] { run_soc(broken, profile); },
                                       "not a multiple"));

  broken = banks;
  broken.x.words.push_back(0.0f);
  CHECK(throws_with<DimensionMismatch>([&] { run_soc(broken, profile); },
                                       "x bank holds"));
}

TEST_CASE("cascade runs bill only the executed stages and no banks") {
  const auto cascade = build_cascade(
      {stub_stage(false, 27), stub_stage(false, 27)});
  const auto positive_first = build_cascade(
      {stub_stage(true, 27), stub_stage(false, 27)});
  TestInstance x;
  x.features.assign(27, 0.0f);
  const auto profile = default_profile(ExecutionTarget::SimplifiedStage);

  const auto both = run_cascade_soc(cascade, x, profile);
  const auto& through = std::get<CascadeResult>(both.decision);
  CHECK(through.exit_stage == 2);
  CHECK(both.measured_cycles.cycles == 450.0);
  CHECK(both.bram_blocks_used == 0);

  const auto early = run_cascade_soc(positive_first, x, profile);
  const auto& first = std::get<CascadeResult>(early.decision);
  CHECK(first.exit_stage == 1);
  CHECK(first.final_label == Label::Melanoma);
  CHECK(early.measured_cycles.cycles == 225.0);
  CHECK(early.bram_blocks_used == 0);
}
