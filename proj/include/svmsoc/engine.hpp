#pragma once

#include <vector>

#include "svmsoc/model.hpp"

namespace svmsoc {

// Per-block outputs of one full-model classification.
struct BlockTrace {
  std::vector<float> z;   // support-vector summation output
  float distance = 0.0f;  // z dot x
  float margin = 0.0f;    // distance - bias
  Label label = Label::Benign;
};

struct FullClassification {
  Decision decision;
  BlockTrace trace;
};

// z[j] = sum_i alpha_y[i] * sv(i, j), accumulated in single precision with
// the outer loop over support vectors ascending and the inner loop over
// features ascending. The order is fixed so results are bit-reproducible
// across runs and platforms.
std::vector<float> accumulate_z(const SvmModel& model);

// Single-precision dot product, accumulated in ascending feature order.
float dot_distance(const std::vector<float>& z, const TestInstance& x);

// margin = distance - bias; the label is Melanoma iff margin >= threshold.
// A margin exactly on the threshold classifies as Melanoma.
Decision decide(float distance, float bias, float threshold);

// The three dataflow blocks in order: summation, distance, decision.
// Accumulation overflowing to infinity raises NonFiniteValue rather than
// producing a sign silently.
FullClassification classify_full(const SvmModel& model, const TestInstance& x);

// Distance calculation and decision only; z arrives precomputed. When pm.z
// was produced by accumulate_z(model), the returned distance is bit-identical
// to classify_full(model, x).
Decision classify_precomputed(const PrecomputedModel& pm,
                              const TestInstance& x);

struct ReferenceResult {
  int label = -1;  // +1 or -1
  double distance = 0.0;
};

// Double-precision oracle computing sum_i alpha_y[i] * (x dot sv_i): per-SV
// dot products first, the opposite association from the dataflow path, so the
// two routes stay independent.
ReferenceResult reference_classify(const SvmModel& model,
                                   const TestInstance& x);

}  // namespace svmsoc
