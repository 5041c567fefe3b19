#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "svmsoc/cascade.hpp"
#include "svmsoc/engine.hpp"
#include "svmsoc/errors.hpp"
#include "svmsoc/model.hpp"
#include "svmsoc/numtext.hpp"
#include "svmsoc/report.hpp"
#include "svmsoc/soc.hpp"
#include "svmsoc/svmlight.hpp"
#include "svmsoc/timing.hpp"

namespace {

using namespace svmsoc;

// Configuration problems: unreadable/unwritable files, bad flag
// combinations, malformed profile configuration. Exit code 2, while data
// errors (svmsoc::Error) exit 1.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw UsageError("cannot read file '" + path + "'");
  return ss.str();
}

Bytes read_bytes(const std::string& path) {
  const std::string s = read_file(path);
  return Bytes(s.begin(), s.end());
}

void write_file(const std::string& path, const void* data, std::size_t size) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw UsageError("cannot write file '" + path + "'");
  out.write(static_cast<const char*>(data),
            static_cast<std::streamsize>(size));
  out.flush();
  if (!out) throw UsageError("cannot write file '" + path + "'");
}

bool blank_line(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  const std::size_t hash = line.find('#');
  if (hash != std::string_view::npos) line = line.substr(0, hash);
  for (char c : line)
    if (c != ' ' && c != '\t') return false;
  return true;
}

struct ParsedLine {
  std::optional<int> label;
  TestInstance instance;
  std::size_t line_no = 0;
};

// Reads an instance-per-line file, skipping blank and comment-only lines.
std::vector<ParsedLine> load_instances(const std::string& path,
                                       std::size_t width) {
  const std::string text = read_file(path);
  std::vector<ParsedLine> out;
  std::size_t start = 0;
  std::size_t line_no = 0;
  while (start <= text.size()) {
    const std::size_t end = text.find('\n', start);
    const std::string_view line(
        text.data() + start,
        (end == std::string_view::npos ? text.size() : end) - start);
    ++line_no;
    if (!blank_line(line)) {
      auto [label, instance] = parse_instance_line(line, width, line_no);
      out.push_back({label, std::move(instance), line_no});
    }
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return out;
}

std::vector<float> resolve_thresholds(const std::vector<double>& values,
                                      std::size_t n_stages) {
  if (values.empty()) return std::vector<float>(n_stages, 0.0f);
  if (values.size() == 1)
    return std::vector<float>(n_stages, static_cast<float>(values[0]));
  if (values.size() == n_stages) {
    std::vector<float> th(n_stages);
    for (std::size_t i = 0; i < n_stages; ++i)
      th[i] = static_cast<float>(values[i]);
    return th;
  }
  throw UsageError("--threshold takes one value for all stages or one per "
                   "stage (" +
                   std::to_string(n_stages) + " stages, " +
                   std::to_string(values.size()) + " values)");
}

CascadeModel load_cascade(const std::vector<std::string>& stage_paths,
                          const std::vector<double>& thresholds) {
  std::vector<SvmModel> stages;
  stages.reserve(stage_paths.size());
  for (const auto& path : stage_paths)
    stages.push_back(parse_model_file(read_file(path)));
  const auto th = resolve_thresholds(thresholds, stages.size());
  for (std::size_t i = 0; i < stages.size(); ++i)
    stages[i].threshold = th[i];
  return build_cascade(std::move(stages));
}

const char* label_sign(Label l) {
  return l == Label::Melanoma ? "+1" : "-1";
}

const char* label_word(Label l) {
  return l == Label::Melanoma ? "melanoma" : "benign";
}

std::string fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

long long whole_cycles(const LatencyEstimate& e) {
  return std::llround(e.cycles);
}

struct ClassifyArgs {
  std::string model_path;
  std::string instances_path;
  double threshold = 0.0;
  std::string engine = "full";
  std::size_t width = 0;
};

int run_classify(const ClassifyArgs& a) {
  SvmModel model = parse_model_file(read_file(a.model_path));
  model.threshold = static_cast<float>(a.threshold);
  const std::size_t width = a.width ? a.width : model.num_features;
  const auto lines = load_instances(a.instances_path, width);
  if (lines.empty())
    throw EmptyDataset("no instances in '" + a.instances_path + "'");

  std::optional<PrecomputedModel> pm;
  if (a.engine == "precomputed") {
    pm = PrecomputedModel{accumulate_z(model), model.bias, model.threshold};
    validate_precomputed(*pm);
  }
  std::size_t seq = 0;
  for (const auto& pl : lines) {
    ++seq;
    const Decision d = pm ? classify_precomputed(*pm, pl.instance)
                          : classify_full(model, pl.instance).decision;
    std::cout << seq << ' ' << label_sign(d.label) << ' '
              << label_word(d.label) << " distance=" << float_text(d.distance)
              << " margin=" << float_text(d.margin) << '\n';
  }
  return 0;
}

struct CascadeArgs {
  std::vector<std::string> stage_paths;
  std::string instances_path;
  std::vector<double> thresholds;
  std::size_t width = 0;
};

int run_cascade_cmd(const CascadeArgs& a) {
  const CascadeModel cascade = load_cascade(a.stage_paths, a.thresholds);
  const std::size_t width = a.width ? a.width : cascade.num_features();
  const auto lines = load_instances(a.instances_path, width);
  if (lines.empty())
    throw EmptyDataset("no instances in '" + a.instances_path + "'");

  std::vector<std::size_t> exits(cascade.stages.size(), 0);
  std::size_t seq = 0;
  for (const auto& pl : lines) {
    ++seq;
    const CascadeResult r = cascade_classify(cascade, pl.instance);
    exits[r.exit_stage - 1] += 1;
    std::cout << seq << ' ' << label_sign(r.final_label) << ' '
              << label_word(r.final_label) << " exit_stage=" << r.exit_stage
              << " review=" << (r.needs_specialist_review ? "yes" : "no")
              << '\n';
  }
  for (std::size_t k = 0; k < exits.size(); ++k)
    std::cout << "exits stage=" << k + 1 << " count=" << exits[k] << '\n';
  return 0;
}

struct EvaluateArgs {
  std::vector<std::string> stage_paths;
  std::string dataset_path;
  std::vector<double> thresholds;
  std::size_t width = 0;
};

int run_evaluate(const EvaluateArgs& a) {
  const CascadeModel cascade = load_cascade(a.stage_paths, a.thresholds);
  const std::size_t width = a.width ? a.width : cascade.num_features();
  const auto lines = load_instances(a.dataset_path, width);
  if (lines.empty())
    throw EmptyDataset("no instances in '" + a.dataset_path + "'");

  std::string unlabeled;
  for (const auto& pl : lines)
    if (!pl.label) {
      if (!unlabeled.empty()) unlabeled += ", ";
      unlabeled += std::to_string(pl.line_no);
    }
  if (!unlabeled.empty())
    throw ParseError("dataset has unlabeled lines: " + unlabeled);

  std::vector<LabeledInstance> dataset;
  dataset.reserve(lines.size());
  for (const auto& pl : lines) dataset.push_back({pl.instance, *pl.label});
  const CascadeMetrics m = evaluate_cascade(cascade, dataset);

  std::cout << "instances=" << m.total << '\n'
            << "tp=" << m.true_positives << '\n'
            << "fp=" << m.false_positives << '\n'
            << "tn=" << m.true_negatives << '\n'
            << "fn=" << m.false_negatives << '\n'
            << "accuracy=" << fixed6(m.accuracy) << '\n'
            << "sensitivity="
            << (m.sensitivity ? fixed6(*m.sensitivity) : "undefined") << '\n'
            << "specificity="
            << (m.specificity ? fixed6(*m.specificity) : "undefined") << '\n';
  for (std::size_t k = 0; k < m.exit_counts.size(); ++k)
    std::cout << "exits stage=" << k + 1 << " count=" << m.exit_counts[k]
              << '\n';
  return 0;
}

struct BenchArgs {
  std::vector<std::size_t> dims;
  std::string model_path;
  std::vector<std::string> profile_paths;
  std::string format = "table";
};

int run_bench(const BenchArgs& a) {
  if (!a.dims.empty() && !a.model_path.empty())
    throw UsageError("use --dims or --model, not both");
  std::size_t n_sv = 0;
  std::size_t n_features = 0;
  if (!a.model_path.empty()) {
    const SvmModel m = parse_model_file(read_file(a.model_path));
    n_sv = m.num_sv;
    n_features = m.num_features;
  } else if (a.dims.size() == 2) {
    n_sv = a.dims[0];
    n_features = a.dims[1];
    if (n_sv == 0 || n_features == 0)
      throw UsageError("--dims values must be >= 1");
  } else {
    throw UsageError("one of --dims or --model is required");
  }

  BenchProfiles profiles;
  for (const auto& path : a.profile_paths) {
    const std::string text = read_file(path);
    CalibrationProfile prof;
    try {
      prof = parse_profile_text(text);
    } catch (const Error& e) {
      throw UsageError("profile '" + path + "': " + e.what());
    }
    switch (prof.target) {
      case ExecutionTarget::PipelinedPl:
        profiles.pipelined = prof;
        break;
      case ExecutionTarget::SequentialPl:
        profiles.sequential = prof;
        break;
      case ExecutionTarget::EmbeddedProcessor:
        profiles.processor = prof;
        break;
      case ExecutionTarget::SimplifiedStage:
        profiles.cascade_stage = prof;
        break;
    }
  }
  const ReportFormat fmt =
      a.format == "csv" ? ReportFormat::Csv : ReportFormat::Table;
  std::cout << bench_report(n_sv, n_features, profiles, fmt);
  return 0;
}

struct ConvertArgs {
  std::string model_path;
  std::string instance_path;
  std::string out_prefix;
  std::size_t width = 0;
};

int run_convert(const ConvertArgs& a) {
  const SvmModel model = parse_model_file(read_file(a.model_path));
  const std::size_t width = a.width ? a.width : model.num_features;
  const auto lines = load_instances(a.instance_path, width);
  if (lines.empty())
    throw EmptyDataset("no instance in '" + a.instance_path + "'");
  const SocFiles files = export_soc_files(model, lines.front().instance);

  const std::pair<std::string, const Bytes*> outputs[3] = {
      {a.out_prefix + ".svs.bin", &files.svs},
      {a.out_prefix + ".par.bin", &files.parameters},
      {a.out_prefix + ".x.bin", &files.x},
  };
  for (const auto& [path, bytes] : outputs) {
    write_file(path, bytes->data(), bytes->size());
    std::cout << "wrote " << path << ' ' << bytes->size() << '\n';
  }
  return 0;
}

struct GenArgs {
  std::size_t n_sv = 0;
  std::size_t n_features = 0;
  std::uint64_t seed = 1;
  std::string out_path;
};

int run_gen(const GenArgs& a) {
  if (a.n_sv == 0 || a.n_features == 0)
    throw UsageError("--num-sv and --num-features must be >= 1");
  const std::string text =
      write_model_file(gen_synthetic_model(a.n_sv, a.n_features, a.seed));
  write_file(a.out_path, text.data(), text.size());
  std::cout << "wrote " << a.out_path << ' ' << text.size() << '\n';
  return 0;
}

struct SocArgs {
  std::string prefix;
  std::string target = "pipelined_pl";
  std::string profile_path;
  double threshold = 0.0;
};

int run_soc_cmd(const SocArgs& a) {
  const Bytes svs = read_bytes(a.prefix + ".svs.bin");
  const Bytes par = read_bytes(a.prefix + ".par.bin");
  const Bytes x = read_bytes(a.prefix + ".x.bin");

  CalibrationProfile profile;
  try {
    profile = a.profile_path.empty()
                  ? default_profile(target_from_name(a.target))
                  : parse_profile_text(read_file(a.profile_path));
  } catch (const Error& e) {
    throw UsageError(std::string("profile: ") + e.what());
  }

  const SocBanks banks = load_banks(svs, par, x);
  const RunRecord rec =
      run_soc(banks, profile, static_cast<float>(a.threshold));
  const Decision& d = std::get<Decision>(rec.decision);
  std::cout << "label=" << label_sign(d.label) << ' ' << label_word(d.label)
            << '\n'
            << "distance=" << float_text(d.distance) << '\n'
            << "margin=" << float_text(d.margin) << '\n'
            << "cycles=" << whole_cycles(rec.measured_cycles) << '\n'
            << "time_us=" << fixed2(rec.measured_cycles.seconds * 1e6) << '\n'
            << "bram_blocks_used=" << rec.bram_blocks_used << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linear-SVM inference engine and accelerator-latency "
               "simulator"};
  app.require_subcommand(1);

  ClassifyArgs classify_args;
  auto* classify_cmd =
      app.add_subcommand("classify", "Classify instances with one model");
  classify_cmd->add_option("--model", classify_args.model_path,
                           "Model file (text format)")
      ->required();
  classify_cmd->add_option("--instances", classify_args.instances_path,
                           "Instance file, one instance per line")
      ->required();
  classify_cmd->add_option("--threshold", classify_args.threshold,
                           "Decision threshold (default 0)");
  classify_cmd->add_option("--engine", classify_args.engine,
                           "full or precomputed")
      ->check(CLI::IsMember({"full", "precomputed"}));
  classify_cmd->add_option("--width", classify_args.width,
                           "Densify instances to this many features "
                           "(default: model width)")
      ->check(CLI::PositiveNumber);

  CascadeArgs cascade_args;
  auto* cascade_cmd = app.add_subcommand(
      "cascade", "Classify instances through a stage cascade");
  cascade_cmd->add_option("--stage", cascade_args.stage_paths,
                          "Stage model file, repeat in stage order")
      ->required();
  cascade_cmd->add_option("--instances", cascade_args.instances_path,
                          "Instance file, one instance per line")
      ->required();
  cascade_cmd->add_option("--threshold", cascade_args.thresholds,
                          "Decision threshold: one value or one per stage");
  cascade_cmd->add_option("--width", cascade_args.width,
                          "Densify instances to this many features "
                          "(default: cascade width)")
      ->check(CLI::PositiveNumber);

  EvaluateArgs evaluate_args;
  auto* evaluate_cmd = app.add_subcommand(
      "evaluate", "Score a cascade against a labeled dataset");
  evaluate_cmd->add_option("--stage", evaluate_args.stage_paths,
                           "Stage model file, repeat in stage order")
      ->required();
  evaluate_cmd->add_option("--dataset", evaluate_args.dataset_path,
                           "Labeled instance file (+1/-1 labels)")
      ->required();
  evaluate_cmd->add_option("--threshold", evaluate_args.thresholds,
                           "Decision threshold: one value or one per stage");
  evaluate_cmd->add_option("--width", evaluate_args.width,
                           "Densify instances to this many features "
                           "(default: cascade width)")
      ->check(CLI::PositiveNumber);

  BenchArgs bench_args;
  auto* bench_cmd = app.add_subcommand(
      "bench", "Latency, speedup and implementation-results report");
  bench_cmd->add_option("--dims", bench_args.dims,
                        "Model shape as two values: n_sv n_features")
      ->expected(2);
  bench_cmd->add_option("--model", bench_args.model_path,
                        "Take the shape from this model file");
  bench_cmd->add_option("--profile", bench_args.profile_paths,
                        "Calibration profile file; repeat to override "
                        "several targets");
  bench_cmd->add_option("--format", bench_args.format, "table or csv")
      ->check(CLI::IsMember({"table", "csv"}));

  ConvertArgs convert_args;
  auto* convert_cmd = app.add_subcommand(
      "convert", "Export a model and one instance to the binary bank triple");
  convert_cmd->add_option("--model", convert_args.model_path,
                          "Model file (text format)")
      ->required();
  convert_cmd->add_option("--instance", convert_args.instance_path,
                          "Instance file; the first instance line is used")
      ->required();
  convert_cmd->add_option("--out", convert_args.out_prefix,
                          "Output prefix for .svs.bin/.par.bin/.x.bin")
      ->required();
  convert_cmd->add_option("--width", convert_args.width,
                          "Densify the instance to this many features "
                          "(default: model width)")
      ->check(CLI::PositiveNumber);

  GenArgs gen_args;
  auto* gen_cmd = app.add_subcommand(
      "gen", "Write a deterministic synthetic model file");
  gen_cmd->add_option("--num-sv", gen_args.n_sv, "Support vector count")
      ->required();
  gen_cmd->add_option("--num-features", gen_args.n_features, "Feature count")
      ->required();
  gen_cmd->add_option("--seed", gen_args.seed, "Generator seed (default 1)");
  gen_cmd->add_option("--out", gen_args.out_path, "Output model file")
      ->required();

  SocArgs soc_args;
  auto* soc_cmd = app.add_subcommand(
      "soc", "Load a binary bank triple and simulate one run");
  soc_cmd->add_option("--prefix", soc_args.prefix,
                      "Input prefix of the .svs.bin/.par.bin/.x.bin triple")
      ->required();
  soc_cmd->add_option("--target", soc_args.target,
                      "Default profile to time with (pipelined_pl, "
                      "sequential_pl, embedded_processor)");
  soc_cmd->add_option("--profile", soc_args.profile_path,
                      "Calibration profile file (overrides --target)");
  soc_cmd->add_option("--threshold", soc_args.threshold,
                      "Decision threshold (default 0)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (classify_cmd->parsed()) return run_classify(classify_args);
    if (cascade_cmd->parsed()) return run_cascade_cmd(cascade_args);
    if (evaluate_cmd->parsed()) return run_evaluate(evaluate_args);
    if (bench_cmd->parsed()) return run_bench(bench_args);
    if (convert_cmd->parsed()) return run_convert(convert_args);
    if (gen_cmd->parsed()) return run_gen(gen_args);
    if (soc_cmd->parsed()) return run_soc_cmd(soc_args);
    throw UsageError("no subcommand given");
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  }
}
