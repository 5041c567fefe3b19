#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "svmsoc/engine.hpp"
#include "svmsoc/model.hpp"

namespace svmsoc {

// Ordered chain of stage classifiers sharing one feature width. Each stage
// keeps its accumulated vector precomputed, so classifying an instance only
// costs one dot product per executed stage.
struct CascadeModel {
  std::vector<SvmModel> stages;
  std::vector<std::vector<float>> stage_z;  // accumulate_z of each stage
  std::vector<std::string> stage_roles;

  std::size_t num_features() const {
    return stages.empty() ? 0 : stages.front().num_features;
  }
};

struct CascadeResult {
  Label final_label = Label::Benign;
  std::size_t exit_stage = 0;            // 1-based stage that produced the label
  std::vector<Decision> stage_decisions;  // one per executed stage, in order
  bool needs_specialist_review = false;   // true iff the final label is positive
};

// Validates every stage, precomputes the accumulated vectors and tags roles:
// the first stage is "melanoma-sensitive", later ones
// "non-melanoma-sensitive". No stages raises EmptyModel; mixed feature
// widths raise DimensionMismatch.
CascadeModel build_cascade(std::vector<SvmModel> stages);

// Runs stages in order. A positive decision finalizes immediately; a negative
// one passes the instance to the next stage, and a negative from the last
// stage finalizes as Benign. Stages after the exit stage never execute.
CascadeResult cascade_classify(const CascadeModel& cascade,
                               const TestInstance& x);

struct LabeledInstance {
  TestInstance instance;
  int label = 0;  // +1 or -1
};

struct CascadeMetrics {
  std::size_t total = 0;
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
  std::size_t true_negatives = 0;
  std::size_t false_negatives = 0;
  double accuracy = 0.0;
  std::optional<double> sensitivity;  // empty when the set has no positives
  std::optional<double> specificity;  // empty when the set has no negatives
  std::vector<std::size_t> exit_counts;  // instances exiting at each stage
};

// Classifies every instance and tallies the confusion counts against the
// given labels. An empty dataset raises EmptyDataset; labels other than +1
// and -1 are rejected.
CascadeMetrics evaluate_cascade(const CascadeModel& cascade,
                                const std::vector<LabeledInstance>& dataset);

}  // namespace svmsoc
