#include "svmsoc/timing.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "svmsoc/errors.hpp"
#include "svmsoc/numtext.hpp"

namespace svmsoc {
namespace {

double raw_cycles(const CalibrationProfile& p, double n, double f) {
  return p.c_nf * n * f + p.c_n * n + p.c_f * f + p.c_0;
}

// Solves a k x k system in place with partial pivoting. A vanishing pivot in
// a square fit means the system is genuinely singular; in the normal
// equations of an overdetermined fit it means the observations were not
// independent, which is an underdetermination.
std::vector<double> solve_linear(std::vector<std::vector<double>> a,
                                 std::vector<double> b, bool overdetermined) {
  const std::size_t k = b.size();
  double scale = 0.0;
  for (const auto& row : a)
    for (double v : row) scale = std::max(scale, std::fabs(v));
  const double tiny = scale > 0.0 ? scale * 1e-12 : 1e-300;
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < k; ++r)
      if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
    if (std::fabs(a[pivot][col]) <= tiny) {
      if (overdetermined)
        throw UnderdeterminedFit(
            "observations do not independently determine the free "
            "coefficients");
      throw SingularSystem("calibration system is singular");
    }
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    for (std::size_t r = col + 1; r < k; ++r) {
      const double m = a[r][col] / a[col][col];
      for (std::size_t c = col; c < k; ++c) a[r][c] -= m * a[col][c];
      b[r] -= m * b[col];
    }
  }
  std::vector<double> x(k, 0.0);
  for (std::size_t i = k; i-- > 0;) {
    double s = b[i];
    for (std::size_t c = i + 1; c < k; ++c) s -= a[i][c] * x[c];
    x[i] = s / a[i][i];
  }
  return x;
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

}  // namespace

const char* target_name(ExecutionTarget t) {
  switch (t) {
    case ExecutionTarget::PipelinedPl:
      return "pipelined_pl";
    case ExecutionTarget::SequentialPl:
      return "sequential_pl";
    case ExecutionTarget::EmbeddedProcessor:
      return "embedded_processor";
    case ExecutionTarget::SimplifiedStage:
      return "simplified_stage";
  }
  return "unknown";
}

ExecutionTarget target_from_name(std::string_view name) {
  if (name == "pipelined_pl") return ExecutionTarget::PipelinedPl;
  if (name == "sequential_pl") return ExecutionTarget::SequentialPl;
  if (name == "embedded_processor") return ExecutionTarget::EmbeddedProcessor;
  if (name == "simplified_stage") return ExecutionTarget::SimplifiedStage;
  throw ParseError("unknown target '" + std::string(name) + "'");
}

void validate_profile(const CalibrationProfile& p) {
  const double coefs[4] = {p.c_nf, p.c_n, p.c_f, p.c_0};
  const char* names[4] = {"c_nf", "c_n", "c_f", "c_0"};
  for (int i = 0; i < 4; ++i)
    if (!std::isfinite(coefs[i]))
      throw NonFiniteValue(std::string("profile coefficient ") + names[i] +
                           " is not finite");
  if (!std::isfinite(p.clock_hz))
    throw NonFiniteValue("clock_hz is not finite");
  if (p.clock_hz <= 0.0) throw ParseError("clock_hz must be positive");
  if (p.c_nf < 0.0) throw ParseError("c_nf must be non-negative");
  if (p.c_nf + p.c_n < 0.0)
    throw ParseError("per-row slope c_nf + c_n must be non-negative");
  if (p.c_nf + p.c_f < 0.0)
    throw ParseError("per-feature slope c_nf + c_f must be non-negative");
  if (raw_cycles(p, 1.0, 1.0) <= 0.0)
    throw ParseError(
        "profile predicts non-positive cycles at n_sv=1, n_features=1");
}

LatencyEstimate estimate_cycles(const CalibrationProfile& profile,
                                std::size_t n_sv, std::size_t n_features) {
  if (n_sv == 0) throw EmptyModel("estimate needs n_sv >= 1");
  if (n_features == 0) throw EmptyModel("estimate needs n_features >= 1");
  validate_profile(profile);
  LatencyEstimate e;
  e.cycles = std::round(raw_cycles(profile, static_cast<double>(n_sv),
                                   static_cast<double>(n_features)));
  e.seconds = e.cycles / profile.clock_hz;
  return e;
}

LatencyEstimate estimate_cascade_cycles(
    const CalibrationProfile& profile,
    const std::vector<std::size_t>& stage_features,
    std::size_t executed_stages) {
  if (executed_stages > stage_features.size())
    throw DimensionMismatch(
        "dimension mismatch: " + std::to_string(executed_stages) +
        " stages executed, cascade lists " +
        std::to_string(stage_features.size()));
  validate_profile(profile);
  double total = 0.0;
  for (std::size_t k = 0; k < executed_stages; ++k) {
    if (stage_features[k] == 0)
      throw EmptyModel("stage " + std::to_string(k + 1) + " has no features");
    total += profile.c_f * static_cast<double>(stage_features[k]) +
             profile.c_0;
  }
  LatencyEstimate e;
  e.cycles = std::round(total);
  e.seconds = e.cycles / profile.clock_hz;
  return e;
}

double speedup(const LatencyEstimate& baseline,
               const LatencyEstimate& accelerated) {
  if (!(accelerated.cycles > 0.0) || !(accelerated.seconds > 0.0))
    throw NonFiniteValue("speedup needs a positive accelerated estimate");
  const double ratio = baseline.seconds / accelerated.seconds;
  if (!std::isfinite(ratio)) throw NonFiniteValue("speedup is not finite");
  return ratio;
}

FitResult fit_profile(ExecutionTarget target,
                      const std::vector<CycleObservation>& observations,
                      const FixedCoefficients& fixed, double clock_hz) {
  const std::optional<double> fixed_by_col[4] = {fixed.c_nf, fixed.c_n,
                                                 fixed.c_f, fixed.c_0};
  for (const auto& f : fixed_by_col)
    if (f && !std::isfinite(*f))
      throw NonFiniteValue("fixed coefficient is not finite");
  for (const auto& obs : observations) {
    if (obs.n_sv == 0 || obs.n_features == 0)
      throw EmptyModel("observation needs n_sv >= 1 and n_features >= 1");
    if (!std::isfinite(obs.cycles))
      throw NonFiniteValue("observed cycle count is not finite");
  }

  std::vector<std::size_t> free_cols;
  for (std::size_t c = 0; c < 4; ++c)
    if (!fixed_by_col[c]) free_cols.push_back(c);
  const std::size_t k = free_cols.size();
  const std::size_t m = observations.size();
  if (m < k)
    throw UnderdeterminedFit(std::to_string(m) +
                             " observations cannot determine " +
                             std::to_string(k) + " free coefficients");

  const auto basis = [](const CycleObservation& o, std::size_t col) {
    const double n = static_cast<double>(o.n_sv);
    const double f = static_cast<double>(o.n_features);
    switch (col) {
      case 0:
        return n * f;
      case 1:
        return n;
      case 2:
        return f;
      default:
        return 1.0;
    }
  };
  std::vector<std::vector<double>> a(m, std::vector<double>(k, 0.0));
  std::vector<double> rhs(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    rhs[i] = observations[i].cycles;
    for (std::size_t c = 0; c < 4; ++c)
      if (fixed_by_col[c])
        rhs[i] -= *fixed_by_col[c] * basis(observations[i], c);
    for (std::size_t j = 0; j < k; ++j)
      a[i][j] = basis(observations[i], free_cols[j]);
  }

  std::vector<double> solution;
  if (k == 0) {
    // every coefficient pinned; nothing to solve
  } else if (m == k) {
    solution = solve_linear(std::move(a), std::move(rhs), false);
  } else {
    std::vector<std::vector<double>> ata(k, std::vector<double>(k, 0.0));
    std::vector<double> atb(k, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t r = 0; r < k; ++r) {
        atb[r] += a[i][r] * rhs[i];
        for (std::size_t c = 0; c < k; ++c) ata[r][c] += a[i][r] * a[i][c];
      }
    }
    solution = solve_linear(std::move(ata), std::move(atb), true);
  }

  FitResult result;
  result.profile.target = target;
  result.profile.clock_hz = clock_hz;
  double coef[4] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t c = 0; c < 4; ++c)
    if (fixed_by_col[c]) coef[c] = *fixed_by_col[c];
  for (std::size_t j = 0; j < k; ++j) coef[free_cols[j]] = solution[j];
  result.profile.c_nf = coef[0];
  result.profile.c_n = coef[1];
  result.profile.c_f = coef[2];
  result.profile.c_0 = coef[3];
  validate_profile(result.profile);
  result.residuals.reserve(m);
  for (const auto& obs : observations)
    result.residuals.push_back(
        obs.cycles - raw_cycles(result.profile,
                                static_cast<double>(obs.n_sv),
                                static_cast<double>(obs.n_features)));
  return result;
}

CalibrationProfile default_profile(ExecutionTarget target) {
  CalibrationProfile p;
  p.target = target;
  switch (target) {
    case ExecutionTarget::PipelinedPl:
      // Initiation interval 1; the measured points (61,27)->2865 and
      // (248,27)->8091 cycles pin the per-row and fixed terms.
      p.c_nf = 1.0;
      p.c_n = 177.0 / 187.0;
      p.c_0 = 1218.0 - 61.0 * (177.0 / 187.0);
      break;
    case ExecutionTarget::SequentialPl:
      // 10 cycles per multiply-accumulate iteration; the remainder of the
      // measured (248,27)->67294 total is fixed overhead.
      p.c_nf = 10.0;
      p.c_0 = 334.0;
      break;
    case ExecutionTarget::EmbeddedProcessor:
      // Pinned by the measured (61,27)->77340 cycles and (248,27)->310000
      // cycles (1.24 ms at 250 MHz).
      p.c_nf = 232660.0 / 5049.0;
      p.c_0 = 77340.0 - 1647.0 * (232660.0 / 5049.0);
      break;
    case ExecutionTarget::SimplifiedStage:
      // One dot product plus fixed overhead; two 27-feature stages cost
      // 450 cycles, the measured 1.8 us path.
      p.c_f = 1.0;
      p.c_0 = 198.0;
      break;
  }
  return p;
}

CalibrationProfile default_cascade_processor_profile() {
  CalibrationProfile p;
  p.target = ExecutionTarget::EmbeddedProcessor;
  // Software baseline of the two-stage path: 1125 cycles per 27-feature
  // stage, 2250 in total (9 us), five times the cascade's 450.
  p.c_f = 1.0;
  p.c_0 = 1098.0;
  return p;
}

const std::vector<ResourceRow>& reference_resource_table() {
  static const std::vector<ResourceRow> rows = {
      {"model_1", 10874, 10, 7218, 14, 874, 5, 48, 34, 5, 2, 2.06},
      {"model_2", 30006, 28, 17506, 33, 2873, 17, 48, 34, 5, 2, 2.65},
      {"cascaded_model", 4304, 4, 3414, 6, 215, 1, 2, 1, 10, 5, 1.74},
  };
  return rows;
}

DeviceTotals reference_device_totals() { return {}; }

CalibrationProfile parse_profile_text(std::string_view text) {
  CalibrationProfile p;
  bool seen_target = false;
  bool seen_coef[5] = {false, false, false, false, false};
  const char* coef_keys[5] = {"c_nf", "c_n", "c_f", "c_0", "clock_hz"};
  double* coef_slots[5] = {&p.c_nf, &p.c_n, &p.c_f, &p.c_0, &p.clock_hz};

  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = text.find('\n', start);
    std::string_view line =
        text.substr(start, end == std::string_view::npos ? text.size() - start
                                                         : end - start);
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (!line.empty()) {
      const std::size_t eq = line.find('=');
      if (eq == std::string_view::npos)
        throw ParseError("expected 'key = value'", line_no);
      const std::string_view key = trim(line.substr(0, eq));
      const std::string_view value = trim(line.substr(eq + 1));
      if (value.empty())
        throw ParseError("missing value for '" + std::string(key) + "'",
                         line_no);
      if (key == "target") {
        if (seen_target)
          throw ParseError("duplicate key 'target'", line_no);
        seen_target = true;
        try {
          p.target = target_from_name(value);
        } catch (const ParseError& e) {
          throw ParseError(e.what(), line_no);
        }
      } else {
        bool matched = false;
        for (int i = 0; i < 5; ++i) {
          if (key != coef_keys[i]) continue;
          if (seen_coef[i])
            throw ParseError("duplicate key '" + std::string(key) + "'",
                             line_no);
          seen_coef[i] = true;
          if (!parse_double_text(value, *coef_slots[i]))
            throw ParseError(
                "malformed value for '" + std::string(key) + "'", line_no);
          matched = true;
          break;
        }
        if (!matched)
          throw ParseError("unknown key '" + std::string(key) + "'", line_no);
      }
    }
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  if (!seen_target) throw ParseError("profile must set target");
  validate_profile(p);
  return p;
}

std::string write_profile_text(const CalibrationProfile& profile) {
  validate_profile(profile);
  std::string out;
  out += "target = ";
  out += target_name(profile.target);
  out += '\n';
  out += "c_nf = " + double_text(profile.c_nf) + "\n";
  out += "c_n = " + double_text(profile.c_n) + "\n";
  out += "c_f = " + double_text(profile.c_f) + "\n";
  out += "c_0 = " + double_text(profile.c_0) + "\n";
  out += "clock_hz = " + double_text(profile.clock_hz) + "\n";
  return out;
}

}  // namespace svmsoc
