#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "rmab/sim.hpp"

namespace rmab {

// The serialized portion of a trace. Column order is fixed:
// n, mean_reward, regret, regret_over_ln_n, reward_variance.
struct TraceTable {
  std::vector<std::int64_t> n;
  std::vector<double> mean_reward;
  std::vector<double> regret;
  std::vector<double> regret_over_ln_n;
  std::vector<double> reward_variance;
};

TraceTable to_table(const RegretTrace& trace);

// Values are printed with 17 significant digits, so write/read/write is
// byte-identical and doubles survive the round trip exactly.
void write_trace_csv(const TraceTable& table, const std::filesystem::path& path);
TraceTable read_trace_csv(const std::filesystem::path& path);

struct PlotSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

// Self-contained SVG line plot; x is drawn on a log10 axis when log_x is set.
void write_svg_plot(const std::string& title, const std::string& x_label,
                    const std::string& y_label, const std::vector<PlotSeries>& series,
                    const std::filesystem::path& path, bool log_x = true);

// One CSV per policy plus comparison plots, under out_dir.
void export_results(const std::map<std::string, RegretTrace>& traces,
                    const std::filesystem::path& out_dir);

}  // namespace rmab
