#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "svmsoc/model.hpp"

namespace svmsoc {

using Bytes = std::vector<std::uint8_t>;

// One "index:value" pair from a sparse line. Indices are 1-based.
struct SparseFeature {
  std::size_t index = 0;
  float value = 0.0f;
};

// Parses the text model format: an 11-line positional header (version
// banner, kernel type, five kernel parameters, highest feature index,
// training document count, support vector count plus one, bias) followed
// by exactly that many support vector lines of "alpha index:value ...".
// Any malformed input raises ParseError (UnsupportedKernel for a nonzero
// kernel type). Absent indices densify to zero.
SvmModel parse_model_file(std::string_view text);
SvmModel parse_model_file(const Bytes& bytes);

// Serializes a model to the text format. Round-trips bit-exactly:
// values are written with shortest-form formatting and reparsed as
// single precision. Features whose bit pattern is exactly +0.0 are
// omitted; negative zero is kept.
std::string write_model_file(const SvmModel& model);

// Parses one instance line: an optional integer label (+1, -1, or 0 for
// unlabeled) followed by "index:value" pairs, densified to `width`
// features. `line_no` is only used to prefix error messages.
std::pair<std::optional<int>, TestInstance> parse_instance_line(
    std::string_view line, std::size_t width, std::size_t line_no = 0);

// The three binary streams consumed by the on-chip memory banks.
struct SocFiles {
  Bytes svs;         // N x F row-major support vectors
  Bytes parameters;  // column vector [bias, alpha_y(0), ..., alpha_y(N-1)]
  Bytes x;           // column vector, F features
};

// Each stream starts with an 8-byte header of two little-endian uint32
// values (rows, cols) followed by rows*cols little-endian float32 words.
struct SocStream {
  std::uint32_t rows = 0;
  std::uint32_t cols = 0;
  std::vector<float> words;
};

Bytes encode_soc_stream(std::uint32_t rows, std::uint32_t cols,
                        const float* data);

// Decodes one stream, checking the byte count against the header exactly.
// `name` labels error messages ("svs", "parameters", "x").
SocStream decode_soc_stream(const Bytes& bytes, const std::string& name);

// Validates the model and instance, then encodes all three streams.
SocFiles export_soc_files(const SvmModel& model, const TestInstance& x);

// Inverse of export_soc_files. The decoded model has threshold zero;
// inconsistent shapes raise DimensionMismatch, malformed streams
// ParseError.
std::pair<SvmModel, TestInstance> import_soc_files(const Bytes& svs,
                                                   const Bytes& parameters,
                                                   const Bytes& x);

}  // namespace svmsoc
