#include "svmsoc/engine.hpp"

#include <cmath>
#include <string>

#include "svmsoc/errors.hpp"

namespace svmsoc {

std::vector<float> accumulate_z(const SvmModel& model) {
  std::vector<float> z(model.num_features, 0.0f);
  const float* row = model.support_vectors.data();
  for (std::size_t i = 0; i < model.num_sv; ++i, row += model.num_features) {
    const float w = model.alpha_y[i];
    for (std::size_t j = 0; j < model.num_features; ++j) {
      const float term = w * row[j];
      z[j] += term;
    }
  }
  return z;
}

float dot_distance(const std::vector<float>& z, const TestInstance& x) {
  if (z.size() != x.features.size())
    throw DimensionMismatch("dimension mismatch: z has " +
                            std::to_string(z.size()) +
                            " entries, instance has " +
                            std::to_string(x.features.size()));
  float d = 0.0f;
  for (std::size_t j = 0; j < z.size(); ++j) {
    const float term = x.features[j] * z[j];
    d += term;
  }
  return d;
}

Decision decide(float distance, float bias, float threshold) {
  if (!std::isfinite(distance)) throw NonFiniteValue("distance is not finite");
  if (!std::isfinite(bias)) throw NonFiniteValue("bias is not finite");
  if (!std::isfinite(threshold))
    throw NonFiniteValue("threshold is not finite");
  Decision d;
  d.distance = distance;
  d.margin = distance - bias;
  if (!std::isfinite(d.margin))
    throw NonFiniteValue("margin overflowed single precision");
  d.label = d.margin >= threshold ? Label::Melanoma : Label::Benign;
  return d;
}

FullClassification classify_full(const SvmModel& model,
                                 const TestInstance& x) {
  if (x.features.size() != model.num_features)
    throw DimensionMismatch("dimension mismatch: instance has " +
                            std::to_string(x.features.size()) +
                            " features, model expects " +
                            std::to_string(model.num_features));
  BlockTrace trace;
  trace.z = accumulate_z(model);
  for (std::size_t j = 0; j < trace.z.size(); ++j)
    if (!std::isfinite(trace.z[j]))
      throw NonFiniteValue("accumulation overflowed at z[" +
                           std::to_string(j) + "]");
  trace.distance = dot_distance(trace.z, x);
  const Decision d = decide(trace.distance, model.bias, model.threshold);
  trace.margin = d.margin;
  trace.label = d.label;
  return {d, std::move(trace)};
}

Decision classify_precomputed(const PrecomputedModel& pm,
                              const TestInstance& x) {
  if (pm.z.size() != x.features.size())
    throw DimensionMismatch("dimension mismatch: precomputed z has " +
                            std::to_string(pm.z.size()) +
                            " entries, instance has " +
                            std::to_string(x.features.size()));
  return decide(dot_distance(pm.z, x), pm.bias, pm.threshold);
}

ReferenceResult reference_classify(const SvmModel& model,
                                   const TestInstance& x) {
  if (x.features.size() != model.num_features)
    throw DimensionMismatch("dimension mismatch: instance has " +
                            std::to_string(x.features.size()) +
                            " features, model expects " +
                            std::to_string(model.num_features));
  double total = 0.0;
  for (std::size_t i = 0; i < model.num_sv; ++i) {
    double dot = 0.0;
    for (std::size_t j = 0; j < model.num_features; ++j)
      dot += static_cast<double>(x.features[j]) *
             static_cast<double>(model.sv(i, j));
    total += static_cast<double>(model.alpha_y[i]) * dot;
  }
  ReferenceResult r;
  r.distance = total;
  const double margin = total - static_cast<double>(model.bias);
  r.label = margin >= static_cast<double>(model.threshold) ? +1 : -1;
  return r;
}

}  // namespace svmsoc
