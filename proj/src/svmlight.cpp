#include "svmsoc/svmlight.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "svmsoc/errors.hpp"
#include "svmsoc/numtext.hpp"

namespace svmsoc {
namespace {

constexpr std::size_t kHeaderLines = 11;

// Largest support_vectors allocation a model file may request (in floats).
// Caps hostile headers before any allocation happens.
constexpr unsigned long long kMaxCells = 1ull << 28;

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  for (;;) {
    const std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

std::string_view chomp(std::string_view s) {
  if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
  return s;
}

std::string_view strip_comment(std::string_view s) {
  const std::size_t hash = s.find('#');
  return hash == std::string_view::npos ? s : s.substr(0, hash);
}

bool is_space(char c) { return c == ' ' || c == '\t'; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

// Numeric part of a header line: everything before '#', trimmed.
std::string_view header_token(std::string_view raw_line) {
  return trim(strip_comment(chomp(raw_line)));
}

struct TokenStream {
  std::string_view s;
  std::size_t pos = 0;

  std::optional<std::string_view> next() {
    while (pos < s.size() && is_space(s[pos])) ++pos;
    if (pos >= s.size()) return std::nullopt;
    const std::size_t start = pos;
    while (pos < s.size() && !is_space(s[pos])) ++pos;
    return s.substr(start, pos - start);
  }
};

// Reads "index:value" tokens until the stream is exhausted, densifying into
// `dense` (which must hold `width` zeros). Indices are 1-based, strictly
// increasing and at most `width`.
void parse_feature_tokens(TokenStream& ts, std::size_t line_no, float* dense,
                          std::size_t width) {
  unsigned long long prev = 0;
  while (const auto tok = ts.next()) {
    const std::size_t colon = tok->find(':');
    if (colon == std::string_view::npos || colon == 0 ||
        colon + 1 >= tok->size())
      throw ParseError("malformed feature '" + std::string(*tok) + "'",
                       line_no);
    unsigned long long idx = 0;
    if (!parse_u64_text(tok->substr(0, colon), idx) || idx == 0)
      throw ParseError(
          "malformed feature index in '" + std::string(*tok) + "'", line_no);
    if (idx <= prev)
      throw ParseError("feature indices must be strictly increasing",
                       line_no);
    if (idx > width)
      throw ParseError("feature index " + std::to_string(idx) +
                           " exceeds declared maximum " +
                           std::to_string(width),
                       line_no);
    float v = 0.0f;
    if (!parse_float_text(tok->substr(colon + 1), v))
      throw ParseError(
          "malformed feature value in '" + std::string(*tok) + "'", line_no);
    if (!std::isfinite(v))
      throw ParseError("feature value is not finite", line_no);
    dense[idx - 1] = v;
    prev = idx;
  }
}

void put_u32le(Bytes& b, std::uint32_t v) {
  b.push_back(static_cast<std::uint8_t>(v & 0xff));
  b.push_back(static_cast<std::uint8_t>((v >> 8) & 0xff));
  b.push_back(static_cast<std::uint8_t>((v >> 16) & 0xff));
  b.push_back(static_cast<std::uint8_t>((v >> 24) & 0xff));
}

std::uint32_t get_u32le(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

}  // namespace

SvmModel parse_model_file(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.size() < kHeaderLines)
    throw ParseError("header needs " + std::to_string(kHeaderLines) +
                     " lines, found " + std::to_string(lines.size()));

  long long kernel = 0;
  if (!parse_i64_text(header_token(lines[1]), kernel))
    throw ParseError("expected kernel type", 2);
  if (kernel != 0)
    throw UnsupportedKernel("unsupported kernel type " +
                                std::to_string(kernel) +
                                "; only linear (0) is implemented",
                            2);

  unsigned long long highest = 0;
  if (!parse_u64_text(header_token(lines[7]), highest))
    throw ParseError("expected highest feature index", 8);
  if (highest == 0)
    throw ParseError("highest feature index must be at least 1", 8);

  unsigned long long sv_plus_1 = 0;
  if (!parse_u64_text(header_token(lines[9]), sv_plus_1))
    throw ParseError("expected support vector count", 10);
  if (sv_plus_1 < 2)
    throw ParseError("support vector count plus one must be at least 2", 10);
  const unsigned long long num_sv = sv_plus_1 - 1;
  if (highest > kMaxCells || num_sv > kMaxCells ||
      num_sv * highest > kMaxCells)
    throw ParseError("model dimensions too large", 10);

  float bias = 0.0f;
  if (!parse_float_text(header_token(lines[10]), bias))
    throw ParseError("expected bias", 11);
  if (!std::isfinite(bias)) throw ParseError("bias is not finite", 11);

  SvmModel m;
  m.num_sv = static_cast<std::size_t>(num_sv);
  m.num_features = static_cast<std::size_t>(highest);
  m.support_vectors.assign(m.num_sv * m.num_features, 0.0f);
  m.alpha_y.resize(m.num_sv);
  m.bias = bias;

  std::size_t next = kHeaderLines;
  for (std::size_t i = 0; i < m.num_sv; ++i, ++next) {
    const std::size_t line_no = next + 1;
    if (next >= lines.size())
      throw ParseError("expected " + std::to_string(m.num_sv) +
                           " support vector lines, found " +
                           std::to_string(i),
                       line_no);
    TokenStream ts{strip_comment(chomp(lines[next]))};
    const auto alpha_tok = ts.next();
    if (!alpha_tok)
      throw ParseError("expected " + std::to_string(m.num_sv) +
                           " support vector lines, found " +
                           std::to_string(i),
                       line_no);
    float alpha = 0.0f;
    if (!parse_float_text(*alpha_tok, alpha))
      throw ParseError("malformed weight '" + std::string(*alpha_tok) + "'",
                       line_no);
    if (!std::isfinite(alpha))
      throw ParseError("weight is not finite", line_no);
    m.alpha_y[i] = alpha;
    parse_feature_tokens(ts, line_no, &m.support_vectors[i * m.num_features],
                         m.num_features);
  }
  for (; next < lines.size(); ++next)
    if (!trim(strip_comment(chomp(lines[next]))).empty())
      throw ParseError("unexpected content after support vectors", next + 1);

  try {
    validate_model(m);
  } catch (const Error& e) {
    throw ParseError(e.what());
  }
  return m;
}

SvmModel parse_model_file(const Bytes& bytes) {
  return parse_model_file(std::string_view(
      reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

std::string write_model_file(const SvmModel& model) {
  validate_model(model);
  std::string out;
  out.reserve(32 * (model.num_sv * (model.num_features + 1) + kHeaderLines));
  out += "SVM-light Version V6.02\n";
  out += "0 # kernel type\n";
  out += "3 # kernel parameter -d\n";
  out += "1 # kernel parameter -g\n";
  out += "1 # kernel parameter -s\n";
  out += "1 # kernel parameter -r\n";
  out += "empty# kernel parameter -u\n";
  out += std::to_string(model.num_features) + " # highest feature index\n";
  out += "0 # number of training documents\n";
  out += std::to_string(model.num_sv + 1) +
         " # number of support vectors plus 1\n";
  out += float_text(model.bias) + " # threshold b\n";
  for (std::size_t i = 0; i < model.num_sv; ++i) {
    out += float_text(model.alpha_y[i]);
    for (std::size_t j = 0; j < model.num_features; ++j) {
      const float v = model.sv(i, j);
      // Only a positive zero bit pattern may be dropped: "-0" must survive
      // the round trip.
      if (std::bit_cast<std::uint32_t>(v) == 0u) continue;
      out += ' ';
      out += std::to_string(j + 1);
      out += ':';
      out += float_text(v);
    }
    out += '\n';
  }
  return out;
}

std::pair<std::optional<int>, TestInstance> parse_instance_line(
    std::string_view line, std::size_t width, std::size_t line_no) {
  const std::string_view body = strip_comment(chomp(line));
  TokenStream ts{body};
  const auto first = ts.next();
  if (!first) throw ParseError("empty instance line", line_no);

  std::optional<int> label;
  TestInstance x;
  x.features.assign(width, 0.0f);

  if (first->find(':') == std::string_view::npos) {
    long long value = 0;
    if (!parse_i64_text(*first, value))
      throw ParseError("malformed leading token '" + std::string(*first) +
                           "': expected a label or index:value pair",
                       line_no);
    if (value != 0 && value != 1 && value != -1)
      throw ParseError("label must be +1, -1, or 0", line_no);
    if (value != 0) label = static_cast<int>(value);
    parse_feature_tokens(ts, line_no, x.features.data(), width);
  } else {
    TokenStream all{body};
    parse_feature_tokens(all, line_no, x.features.data(), width);
  }
  return {label, std::move(x)};
}

Bytes encode_soc_stream(std::uint32_t rows, std::uint32_t cols,
                        const float* data) {
  const std::uint64_t count = static_cast<std::uint64_t>(rows) * cols;
  Bytes b;
  b.reserve(8 + 4 * count);
  put_u32le(b, rows);
  put_u32le(b, cols);
  for (std::uint64_t k = 0; k < count; ++k)
    put_u32le(b, std::bit_cast<std::uint32_t>(data[k]));
  return b;
}

SocStream decode_soc_stream(const Bytes& bytes, const std::string& name) {
  if (bytes.size() < 8)
    throw ParseError(name + ": stream has " + std::to_string(bytes.size()) +
                     " bytes, header needs 8");
  if ((bytes.size() - 8) % 4 != 0)
    throw ParseError(name + ": payload of " +
                     std::to_string(bytes.size() - 8) +
                     " bytes is not a whole number of words");
  SocStream s;
  s.rows = get_u32le(bytes.data());
  s.cols = get_u32le(bytes.data() + 4);
  const std::uint64_t count = static_cast<std::uint64_t>(s.rows) * s.cols;
  const std::uint64_t avail = (bytes.size() - 8) / 4;
  if (count != avail)
    throw ParseError(name + ": header declares " + std::to_string(s.rows) +
                     "x" + std::to_string(s.cols) + " words, stream carries " +
                     std::to_string(avail));
  s.words.resize(static_cast<std::size_t>(count));
  for (std::uint64_t k = 0; k < count; ++k)
    s.words[static_cast<std::size_t>(k)] =
        std::bit_cast<float>(get_u32le(bytes.data() + 8 + 4 * k));
  return s;
}

SocFiles export_soc_files(const SvmModel& model, const TestInstance& x) {
  validate_model(model);
  validate_instance(x);
  if (x.features.size() != model.num_features)
    throw DimensionMismatch("dimension mismatch: instance has " +
                            std::to_string(x.features.size()) +
                            " features, model expects " +
                            std::to_string(model.num_features));
  constexpr std::uint64_t kU32Max = 0xffffffffull;
  if (model.num_sv + 1 > kU32Max || model.num_features > kU32Max)
    throw DimensionMismatch(
        "dimension mismatch: model too large for stream headers");

  SocFiles f;
  f.svs = encode_soc_stream(static_cast<std::uint32_t>(model.num_sv),
                            static_cast<std::uint32_t>(model.num_features),
                            model.support_vectors.data());
  std::vector<float> par;
  par.reserve(model.num_sv + 1);
  par.push_back(model.bias);
  par.insert(par.end(), model.alpha_y.begin(), model.alpha_y.end());
  f.parameters = encode_soc_stream(
      static_cast<std::uint32_t>(model.num_sv + 1), 1, par.data());
  f.x = encode_soc_stream(static_cast<std::uint32_t>(x.features.size()), 1,
                          x.features.data());
  return f;
}

std::pair<SvmModel, TestInstance> import_soc_files(const Bytes& svs,
                                                   const Bytes& parameters,
                                                   const Bytes& x) {
  const SocStream svs_s = decode_soc_stream(svs, "svs");
  const SocStream par_s = decode_soc_stream(parameters, "parameters");
  const SocStream x_s = decode_soc_stream(x, "x");
  if (par_s.cols != 1)
    throw ParseError("parameters: expected a column vector, header declares " +
                     std::to_string(par_s.cols) + " columns");
  if (x_s.cols != 1)
    throw ParseError("x: expected a column vector, header declares " +
                     std::to_string(x_s.cols) + " columns");
  if (par_s.rows < 2)
    throw ParseError("parameters: need a bias plus at least one weight");
  const std::size_t n = par_s.rows - 1;
  if (svs_s.rows != n)
    throw ParseError("svs holds " + std::to_string(svs_s.rows) +
                     " support vectors, parameters imply " +
                     std::to_string(n));
  if (x_s.rows != svs_s.cols)
    throw ParseError("x has " + std::to_string(x_s.rows) +
                     " features, support vectors have " +
                     std::to_string(svs_s.cols));

  SvmModel m;
  m.num_sv = n;
  m.num_features = svs_s.cols;
  m.support_vectors = svs_s.words;
  m.alpha_y.assign(par_s.words.begin() + 1, par_s.words.end());
  m.bias = par_s.words[0];
  TestInstance xi{x_s.words};
  // Any invariant violation inside binary streams is a stream defect.
  try {
    validate_model(m);
    validate_instance(xi);
  } catch (const Error& e) {
    throw ParseError(e.what());
  }
  return {std::move(m), std::move(xi)};
}

}  // namespace svmsoc
