#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace svmsoc {

// Binary class labels of the decision rule. Melanoma is the positive class.
enum class Label : int { Melanoma = +1, Benign = -1 };

inline int label_value(Label l) { return static_cast<int>(l); }

// Dense linear-SVM model. Only the products alpha_i*y_i are stored: the
// individual factors are not recoverable from trained-model files and the
// decision function never needs them separately. All values are
// single-precision; instances of this type are immutable once built and safe
// to share across threads.
struct SvmModel {
  std::size_t num_sv = 0;
  std::size_t num_features = 0;
  std::vector<float> support_vectors;  // row-major num_sv x num_features
  std::vector<float> alpha_y;          // one weight per support vector
  float bias = 0.0f;
  float threshold = 0.0f;  // decision threshold; not stored in model files

  float sv(std::size_t i, std::size_t j) const {
    return support_vectors[i * num_features + j];
  }
};

// Simplified model with the support-vector summation folded into a single
// accumulated vector.
struct PrecomputedModel {
  std::vector<float> z;
  float bias = 0.0f;
  float threshold = 0.0f;
};

struct TestInstance {
  std::vector<float> features;
};

// Outcome of one classification.
struct Decision {
  Label label = Label::Benign;
  float distance = 0.0f;  // X dot Z
  float margin = 0.0f;    // distance - bias
};

// Throws DimensionMismatch, NonFiniteValue or EmptyModel when the model is
// malformed. Non-finite values are reported with their indices.
void validate_model(const SvmModel& model);

void validate_precomputed(const PrecomputedModel& pm);
void validate_instance(const TestInstance& x);

// Deterministic test-fixture model. Every support-vector value, every weight
// and the bias are drawn from mt19937_64(seed), mapping the top 24 bits of
// each draw onto [-1, 1); the threshold is 0. Identical arguments produce
// bit-identical models on every platform.
SvmModel gen_synthetic_model(std::size_t n_sv, std::size_t n_features,
                             std::uint64_t seed);

}  // namespace svmsoc
