#include "svmsoc/cascade.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "svmsoc/errors.hpp"

namespace svmsoc {

CascadeModel build_cascade(std::vector<SvmModel> stages) {
  if (stages.empty()) throw EmptyModel("cascade has no stages");
  CascadeModel c;
  c.stage_z.reserve(stages.size());
  c.stage_roles.reserve(stages.size());
  const std::size_t width = stages.front().num_features;
  for (std::size_t k = 0; k < stages.size(); ++k) {
    validate_model(stages[k]);
    if (stages[k].num_features != width)
      throw DimensionMismatch(
          "dimension mismatch: stage " + std::to_string(k + 1) + " has " +
          std::to_string(stages[k].num_features) + " features, stage 1 has " +
          std::to_string(width));
    std::vector<float> z = accumulate_z(stages[k]);
    for (std::size_t j = 0; j < z.size(); ++j)
      if (!std::isfinite(z[j]))
        throw NonFiniteValue("stage " + std::to_string(k + 1) +
                             " accumulation overflowed at z[" +
                             std::to_string(j) + "]");
    c.stage_z.push_back(std::move(z));
    c.stage_roles.push_back(k == 0 ? "melanoma-sensitive"
                                   : "non-melanoma-sensitive");
  }
  c.stages = std::move(stages);
  return c;
}

CascadeResult cascade_classify(const CascadeModel& cascade,
                               const TestInstance& x) {
  if (cascade.stages.empty()) throw EmptyModel("cascade has no stages");
  if (x.features.size() != cascade.num_features())
    throw DimensionMismatch("dimension mismatch: instance has " +
                            std::to_string(x.features.size()) +
                            " features, cascade expects " +
                            std::to_string(cascade.num_features()));
  CascadeResult r;
  for (std::size_t k = 0; k < cascade.stages.size(); ++k) {
    const PrecomputedModel pm{cascade.stage_z[k], cascade.stages[k].bias,
                              cascade.stages[k].threshold};
    const Decision d = classify_precomputed(pm, x);
    r.stage_decisions.push_back(d);
    r.exit_stage = k + 1;
    if (d.label == Label::Melanoma) break;
  }
  r.final_label = r.stage_decisions.back().label;
  r.needs_specialist_review = r.final_label == Label::Melanoma;
  return r;
}

CascadeMetrics evaluate_cascade(const CascadeModel& cascade,
                                const std::vector<LabeledInstance>& dataset) {
  if (cascade.stages.empty()) throw EmptyModel("cascade has no stages");
  if (dataset.empty()) throw EmptyDataset("dataset has no instances");
  CascadeMetrics m;
  m.total = dataset.size();
  m.exit_counts.assign(cascade.stages.size(), 0);
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const int actual = dataset[i].label;
    if (actual != 1 && actual != -1)
      throw ParseError("label must be +1 or -1 (instance " +
                       std::to_string(i + 1) + ")");
    const CascadeResult r = cascade_classify(cascade, dataset[i].instance);
    m.exit_counts[r.exit_stage - 1] += 1;
    const int predicted = label_value(r.final_label);
    if (actual == 1)
      predicted == 1 ? ++m.true_positives : ++m.false_negatives;
    else
      predicted == -1 ? ++m.true_negatives : ++m.false_positives;
  }
  m.accuracy = static_cast<double>(m.true_positives + m.true_negatives) /
               static_cast<double>(m.total);
  const std::size_t positives = m.true_positives + m.false_negatives;
  const std::size_t negatives = m.true_negatives + m.false_positives;
  if (positives > 0)
    m.sensitivity =
        static_cast<double>(m.true_positives) / static_cast<double>(positives);
  if (negatives > 0)
    m.specificity =
        static_cast<double>(m.true_negatives) / static_cast<double>(negatives);
  return m;
}

}  // namespace svmsoc
