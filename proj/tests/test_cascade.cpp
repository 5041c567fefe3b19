#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>
#include <vector>

#include "doctest.h"
#include "svmsoc/cascade.hpp"
#include "svmsoc/engine.hpp"
#include "svmsoc/errors.hpp"
#include "test_util.hpp"

using namespace svmsoc;
using testutil::bit_equal;
using testutil::throws_with;

namespace {

// A stage whose outcome is forced: zero weights make the margin -bias, so
// bias -1 always answers positive and bias +1 always answers negative.
SvmModel stub_stage(bool positive, std::size_t f = 1) {
  SvmModel m;
  m.num_sv = 1;
  m.num_features = f;
  m.support_vectors.assign(f, 0.0f);
  m.alpha_y = {0.0f};
  m.bias = positive ? -1.0f : 1.0f;
  return m;
}

TestInstance zero_instance(std::size_t f = 1) {
  TestInstance x;
  x.features.assign(f, 0.0f);
  return x;
}

}  // namespace

TEST_CASE("positive decisions finalize immediately, negatives pass on") {
  for (std::size_t stages = 1; stages <= 3; ++stages) {
    for (unsigned mask = 0; mask < (1u << stages); ++mask) {
      std::vector<SvmModel> chain;
      for (std::size_t k = 0; k < stages; ++k) {
        chain.push_back(stub_stage((mask >> k) & 1u));
      }
      const auto cascade = build_cascade(chain);
      const auto r = cascade_classify(cascade, zero_instance());

      std::size_t expected_exit = stages;  // all-negative default
      bool expect_positive = false;
      for (std::size_t k = 0; k < stages; ++k) {
        if ((mask >> k) & 1u) {
          expected_exit = k + 1;
          expect_positive = true;
          break;
        }
      }

      REQUIRE(r.exit_stage == expected_exit);
      REQUIRE(r.final_label ==
              (expect_positive ? Label::Melanoma : Label::Benign));
      REQUIRE(r.needs_specialist_review == expect_positive);
      // Stages beyond the exit stage never run.
      REQUIRE(r.stage_decisions.size() == expected_exit);
      for (std::size_t k = 0; k + 1 < r.stage_decisions.size(); ++k) {
        REQUIRE(r.stage_decisions[k].label == Label::Benign);
      }
      REQUIRE(r.stage_decisions.back().label == r.final_label);
    }
  }
}

TEST_CASE("a one-stage cascade matches the precomputed classifier bitwise") {
  const auto m = gen_synthetic_model(23, 11, 8);
  const auto cascade = build_cascade({m});
  PrecomputedModel pm{accumulate_z(m), m.bias, m.threshold};

  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const auto x = testutil::random_instance(11, rng);
    const auto cr = cascade_classify(cascade, x);
    const auto pd = classify_precomputed(pm, x);
    const auto full = classify_full(m, x);

    REQUIRE(cr.exit_stage == 1);
    REQUIRE(cr.stage_decisions.size() == 1);
    REQUIRE(bit_equal(cr.stage_decisions[0].distance, pd.distance));
    REQUIRE(bit_equal(cr.stage_decisions[0].margin, pd.margin));
    REQUIRE(cr.final_label == pd.label);
    REQUIRE(bit_equal(pd.distance, full.decision.distance));
  }
}

TEST_CASE("build_cascade validates stages and precomputes their vectors") {
  CHECK(throws_with<EmptyModel>([] { build_cascade({}); }, "no stages"));

  const auto a = gen_synthetic_model(5, 4, 1);
  const auto b = gen_synthetic_model(7, 3, 2);
  CHECK(throws_with<DimensionMismatch>([&] { build_cascade({a, b}); },
                                       "stage 2 has 3 features"));

  auto broken = a;
  broken.alpha_y.pop_back();
  CHECK_THROWS_AS(build_cascade({broken}), DimensionMismatch);

  const auto c = gen_synthetic_model(9, 4, 3);
  const auto cascade = build_cascade({a, c});
  REQUIRE(cascade.stages.size() == 2);
  REQUIRE(cascade.stage_z.size() == 2);
  CHECK(cascade.num_features() == 4);
  CHECK(bit_equal(cascade.stage_z[0], accumulate_z(a)));
  CHECK(bit_equal(cascade.stage_z[1], accumulate_z(c)));
  REQUIRE(cascade.stage_roles.size() == 2);
  CHECK(cascade.stage_roles[0] == "melanoma-sensitive");
  CHECK(cascade.stage_roles[1] == "non-melanoma-sensitive");

  TestInstance narrow;
  narrow.features = {1.0f};
  CHECK_THROWS_AS(cascade_classify(cascade, narrow), DimensionMismatch);
}

TEST_CASE("metrics on hand-checked datasets") {
  const auto always_yes = build_cascade({stub_stage(true)});

  std::vector<LabeledInstance> all_positive;
  for (int i = 0; i < 4; ++i) {
    all_positive.push_back({zero_instance(), +1});
  }
  auto m = evaluate_cascade(always_yes, all_positive);
  CHECK(m.total == 4);
  CHECK(m.true_positives == 4);
  CHECK(m.false_positives == 0);
  CHECK(m.accuracy == 1.0);
  REQUIRE(m.sensitivity.has_value());
  CHECK(*m.sensitivity == 1.0);
  CHECK_FALSE(m.specificity.has_value());  // no negatives in the set
  REQUIRE(m.exit_counts.size() == 1);
  CHECK(m.exit_counts[0] == 4);

  std::vector<LabeledInstance> split = {{zero_instance(), +1},
                                        {zero_instance(), -1}};
  m = evaluate_cascade(always_yes, split);
  CHECK(m.total == 2);
  CHECK(m.true_positives == 1);
  CHECK(m.false_positives == 1);
  CHECK(m.true_negatives == 0);
  CHECK(m.false_negatives == 0);
  CHECK(m.accuracy == 0.5);
  CHECK(*m.sensitivity == 1.0);
  REQUIRE(m.specificity.has_value());
  CHECK(*m.specificity == 0.0);
}

TEST_CASE("metrics inputs are validated") {
  const auto cascade = build_cascade({stub_stage(true)});
  CHECK_THROWS_AS(evaluate_cascade(cascade, {}), EmptyDataset);

  std::vector<LabeledInstance> bad = {{zero_instance(), +1},
                                      {zero_instance(), 0}};
  CHECK(throws_with<ParseError>([&] { evaluate_cascade(cascade, bad); },
                                "instance 2"));
  bad[1].label = 2;
  CHECK_THROWS_AS(evaluate_cascade(cascade, bad), ParseError);
}

TEST_CASE("metrics agree with a brute-force recount") {
  std::mt19937_64 rng(13);
  for (int round = 0; round < 20; ++round) {
    const std::size_t f = 1 + rng() % 6;
    std::vector<SvmModel> chain;
    const std::size_t stages = 1 + rng() % 3;
    for (std::size_t k = 0; k < stages; ++k) {
      chain.push_back(gen_synthetic_model(1 + rng() % 8, f, rng()));
    }
    const auto cascade = build_cascade(chain);

    std::vector<LabeledInstance> dataset;
    const std::size_t count = 1 + rng() % 40;
    for (std::size_t i = 0; i < count; ++i) {
      dataset.push_back({testutil::random_instance(f, rng),
                         (rng() & 1u) ? +1 : -1});
    }

    const auto metrics = evaluate_cascade(cascade, dataset);

    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
    std::vector<std::size_t> exits(stages, 0);
    for (const auto& item : dataset) {
      const auto r = cascade_classify(cascade, item.instance);
      const int predicted = label_value(r.final_label);
      if (predicted == 1 && item.label == 1) ++tp;
      if (predicted == 1 && item.label == -1) ++fp;
      if (predicted == -1 && item.label == -1) ++tn;
      if (predicted == -1 && item.label == 1) ++fn;
      ++exits[r.exit_stage - 1];
    }

    REQUIRE(metrics.total == count);
    REQUIRE(metrics.true_positives == tp);
    REQUIRE(metrics.false_positives == fp);
    REQUIRE(metrics.true_negatives == tn);
    REQUIRE(metrics.false_negatives == fn);
    REQUIRE(metrics.accuracy ==
            static_cast<double>(tp + tn) / static_cast<double>(count));
    REQUIRE(metrics.exit_counts == exits);

    std::size_t exit_sum = 0;
    for (auto c : metrics.exit_counts) exit_sum += c;
    REQUIRE(exit_sum == count);

    if (tp + fn > 0) {
      REQUIRE(metrics.sensitivity.has_value());
      REQUIRE(*metrics.sensitivity ==
              static_cast<double>(tp) / static_cast<double>(tp + fn));
    } else {
      REQUIRE_FALSE(metrics.sensitivity.has_value());
    }
    if (tn + fp > 0) {
      REQUIRE(metrics.specificity.has_value());
      REQUIRE(*metrics.specificity ==
              static_cast<double>(tn) / static_cast<double>(tn + fp));
    } else {
      REQUIRE_FALSE(metrics.specificity.has_value());
    }
  }
}
