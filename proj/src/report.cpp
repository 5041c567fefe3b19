#include "svmsoc/report.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <vector>

#include "svmsoc/errors.hpp"

namespace svmsoc {
namespace {

std::string fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string cycles_text(double cycles) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%lld",
                static_cast<long long>(std::llround(cycles)));
  return buf;
}

std::string us_text(double seconds) { return fixed2(seconds * 1e6); }

std::string pad_left(std::string s, std::size_t w) {
  if (s.size() < w) s.insert(0, w - s.size(), ' ');
  return s;
}

std::string pad_right(std::string s, std::size_t w) {
  if (s.size() < w) s.append(w - s.size(), ' ');
  return s;
}

std::string latency_row(const std::string& label, const std::string& cycles,
                        const std::string& time_us) {
  return "  " + pad_right(label, 18) + " " + pad_left(cycles, 8) + " " +
         pad_left(time_us, 10) + "\n";
}

std::string pct_cell(std::size_t value, int pct) {
  return std::to_string(value) + " (" + std::to_string(pct) + "%)";
}

std::string resource_row(const std::array<std::string, 7>& cells) {
  return "  " + pad_right(cells[0], 16) + " " + pad_left(cells[1], 11) + " " +
         pad_left(cells[2], 11) + " " + pad_left(cells[3], 10) + " " +
         pad_left(cells[4], 8) + " " + pad_left(cells[5], 7) + " " +
         pad_left(cells[6], 7) + "\n";
}

std::string csv_line(const std::array<std::string, 18>& fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) line += ',';
    line += fields[i];
  }
  line += '\n';
  return line;
}

}  // namespace

std::string bench_report(std::size_t n_sv, std::size_t n_features,
                         const BenchProfiles& profiles, ReportFormat format) {
  if (n_sv == 0 || n_features == 0)
    throw EmptyModel("benchmark needs n_sv >= 1 and n_features >= 1");

  const LatencyEstimate pipe =
      estimate_cycles(profiles.pipelined, n_sv, n_features);
  const LatencyEstimate seq =
      estimate_cycles(profiles.sequential, n_sv, n_features);
  const LatencyEstimate proc =
      estimate_cycles(profiles.processor, n_sv, n_features);
  const std::vector<std::size_t> stage_features = {n_features, n_features};
  const LatencyEstimate casc =
      estimate_cascade_cycles(profiles.cascade_stage, stage_features, 2);
  const LatencyEstimate casc_proc =
      estimate_cascade_cycles(profiles.cascade_processor, stage_features, 2);

  const std::string dims = "n_sv=" + std::to_string(n_sv) +
                           ", n_features=" + std::to_string(n_features);
  const auto& resources = reference_resource_table();
  const DeviceTotals device = reference_device_totals();

  if (format == ReportFormat::Csv) {
    std::string out;
    out += csv_line({"record", "target", "n_sv", "n_features", "cycles",
                     "time_us", "speedup_vs_processor", "slices",
                     "slices_pct", "lut", "lut_pct", "lut_ram", "lut_ram_pct",
                     "bram", "bram_pct", "dsp", "dsp_pct", "power_w"});
    const auto latency_csv = [&](const CalibrationProfile& p,
                                 const LatencyEstimate& e) {
      out += csv_line({"latency", target_name(p.target),
                       std::to_string(n_sv), std::to_string(n_features),
                       cycles_text(e.cycles), us_text(e.seconds),
                       fixed2(speedup(proc, e)), "", "", "", "", "", "", "",
                       "", "", "", ""});
    };
    latency_csv(profiles.pipelined, pipe);
    latency_csv(profiles.sequential, seq);
    latency_csv(profiles.processor, proc);
    const auto cascade_csv = [&](const CalibrationProfile& p,
                                 const LatencyEstimate& e) {
      out += csv_line({"cascade", target_name(p.target), "",
                       std::to_string(n_features), cycles_text(e.cycles),
                       us_text(e.seconds), fixed2(speedup(casc_proc, e)), "",
                       "", "", "", "", "", "", "", "", "", ""});
    };
    cascade_csv(profiles.cascade_stage, casc);
    cascade_csv(profiles.cascade_processor, casc_proc);
    for (const auto& r : resources)
      out += csv_line({r.name, "", "", "", "", "", "",
                       std::to_string(r.slices), std::to_string(r.slices_pct),
                       std::to_string(r.lut), std::to_string(r.lut_pct),
                       std::to_string(r.lut_ram),
                       std::to_string(r.lut_ram_pct), std::to_string(r.bram),
                       std::to_string(r.bram_pct), std::to_string(r.dsp),
                       std::to_string(r.dsp_pct), fixed2(r.power_w)});
    return out;
  }

  std::string out;
  out += "inference latency for " + dims + "\n";
  out += latency_row("target", "cycles", "time_us");
  out += latency_row(target_name(profiles.pipelined.target),
                     cycles_text(pipe.cycles), us_text(pipe.seconds));
  out += latency_row(target_name(profiles.sequential.target),
                     cycles_text(seq.cycles), us_text(seq.seconds));
  out += latency_row(target_name(profiles.processor.target),
                     cycles_text(proc.cycles), us_text(proc.seconds));
  out += "\n";
  out += std::string("speedup ") + target_name(profiles.pipelined.target) +
         " vs " + target_name(profiles.sequential.target) + ": " +
         fixed2(speedup(seq, pipe)) + "\n";
  out += std::string("speedup ") + target_name(profiles.pipelined.target) +
         " vs " + target_name(profiles.processor.target) + ": " +
         fixed2(speedup(proc, pipe)) + "\n";
  out += "\n";
  out += "two-stage cascade path at n_features=" +
         std::to_string(n_features) + " (both stages executed)\n";
  out += latency_row("target", "cycles", "time_us");
  out += latency_row(target_name(profiles.cascade_stage.target),
                     cycles_text(casc.cycles), us_text(casc.seconds));
  out += latency_row(target_name(profiles.cascade_processor.target),
                     cycles_text(casc_proc.cycles),
                     us_text(casc_proc.seconds));
  out += "\n";
  out += std::string("speedup ") +
         target_name(profiles.cascade_stage.target) + " vs " +
         target_name(profiles.cascade_processor.target) + ": " +
         fixed2(speedup(casc_proc, casc)) + "\n";
  out += "\n";

  const bool published_small = n_sv == 61 && n_features == 27;
  const bool published_large = n_sv == 248 && n_features == 27;
  if (published_small || published_large) {
    out += "reported hardware figures for " + dims + "\n";
    if (published_small) {
      out += "  reported latency 11.46 us (2865 cycles); reported "
             "acceleration factor 26 vs embedded processor (exact cycle "
             "ratio 26.99)\n";
    } else {
      out += "  reported latency 39.30 us; reported acceleration factor 32 "
             "vs embedded processor (ratio 1240.00/39.30 = 31.55)\n";
      out += "  discrepancy: the pipelined profile predicts " +
             cycles_text(pipe.cycles) + " cycles (" + us_text(pipe.seconds) +
             " us), but the reported 39.3 us at 250 MHz is 9825 cycles\n";
    }
    out += "\n";
  }

  out += "reference device totals: slices " + std::to_string(device.slices) +
         ", lut " + std::to_string(device.lut) + ", lut_ram " +
         std::to_string(device.lut_ram) + ", bram " +
         std::to_string(device.bram_blocks) + ", dsp " +
         std::to_string(device.dsp) + "\n";
  out += "\n";
  out += "reported implementation results\n";
  out += resource_row({"record", "slices", "lut", "lut_ram", "bram", "dsp",
                       "power_w"});
  for (const auto& r : resources)
    out += resource_row({r.name, pct_cell(r.slices, r.slices_pct),
                         pct_cell(r.lut, r.lut_pct),
                         pct_cell(r.lut_ram, r.lut_ram_pct),
                         pct_cell(r.bram, r.bram_pct),
                         pct_cell(r.dsp, r.dsp_pct), fixed2(r.power_w)});
  return out;
}

}  // namespace svmsoc
