#include "svmsoc/model.hpp"

#include <cmath>
#include <random>
#include <string>

#include "svmsoc/errors.hpp"

namespace svmsoc {

void validate_model(const SvmModel& model) {
  if (model.num_sv == 0)
    throw EmptyModel("model has no support vectors");
  if (model.num_features == 0)
    throw EmptyModel("model has no features");
  if (model.support_vectors.size() != model.num_sv * model.num_features)
    throw DimensionMismatch(
        "dimension mismatch: support_vectors holds " +
        std::to_string(model.support_vectors.size()) + " values, expected " +
        std::to_string(model.num_sv) + " rows of " +
        std::to_string(model.num_features));
  if (model.alpha_y.size() != model.num_sv)
    throw DimensionMismatch("dimension mismatch: alpha_y holds " +
                            std::to_string(model.alpha_y.size()) +
                            " weights for " + std::to_string(model.num_sv) +
                            " support vectors");
  for (std::size_t i = 0; i < model.num_sv; ++i)
    for (std::size_t j = 0; j < model.num_features; ++j)
      if (!std::isfinite(model.sv(i, j)))
        throw NonFiniteValue("support_vectors[" + std::to_string(i) + "][" +
                             std::to_string(j) + "] is not finite");
  for (std::size_t i = 0; i < model.alpha_y.size(); ++i)
    if (!std::isfinite(model.alpha_y[i]))
      throw NonFiniteValue("alpha_y[" + std::to_string(i) + "] is not finite");
  if (!std::isfinite(model.bias)) throw NonFiniteValue("bias is not finite");
  if (!std::isfinite(model.threshold))
    throw NonFiniteValue("threshold is not finite");
}

void validate_precomputed(const PrecomputedModel& pm) {
  if (pm.z.empty()) throw EmptyModel("precomputed model has an empty z vector");
  for (std::size_t j = 0; j < pm.z.size(); ++j)
    if (!std::isfinite(pm.z[j]))
      throw NonFiniteValue("z[" + std::to_string(j) + "] is not finite");
  if (!std::isfinite(pm.bias)) throw NonFiniteValue("bias is not finite");
  if (!std::isfinite(pm.threshold))
    throw NonFiniteValue("threshold is not finite");
}

void validate_instance(const TestInstance& x) {
  if (x.features.empty()) throw EmptyModel("instance has no features");
  for (std::size_t j = 0; j < x.features.size(); ++j)
    if (!std::isfinite(x.features[j]))
      throw NonFiniteValue("features[" + std::to_string(j) +
                           "] is not finite");
}

namespace {

// Top 24 bits of one engine draw, mapped onto [-1, 1). The mapping uses only
// exactly representable steps so it is identical on every platform.
float unit_draw(std::mt19937_64& rng) {
  const auto bits = static_cast<std::uint32_t>(rng() >> 40);
  return 2.0f * (static_cast<float>(bits) * (1.0f / 16777216.0f)) - 1.0f;
}

}  // namespace

SvmModel gen_synthetic_model(std::size_t n_sv, std::size_t n_features,
                             std::uint64_t seed) {
  if (n_sv == 0 || n_features == 0)
    throw EmptyModel("synthetic model needs n_sv >= 1 and n_features >= 1");
  std::mt19937_64 rng(seed);
  SvmModel m;
  m.num_sv = n_sv;
  m.num_features = n_features;
  m.support_vectors.resize(n_sv * n_features);
  for (auto& v : m.support_vectors) v = unit_draw(rng);
  m.alpha_y.resize(n_sv);
  for (auto& v : m.alpha_y) v = unit_draw(rng);
  m.bias = unit_draw(rng);
  m.threshold = 0.0f;
  return m;
}

}  // namespace svmsoc
