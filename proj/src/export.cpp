#include "rmab/export.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rmab/errors.hpp"

namespace rmab {

namespace {

constexpr const char* kHeader = "n,mean_reward,regret,regret_over_ln_n,reward_variance";

std::string fmt_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_real_field(const std::string& tok, const std::filesystem::path& path,
                        int line) {
  // from_chars, not stod: stod throws on subnormals and we must round-trip
  // every finite double we print.
  double v = 0.0;
  const char* end = tok.data() + tok.size();
  const auto res = std::from_chars(tok.data(), end, v);
  if (res.ec != std::errc{} || res.ptr != end) {
    std::ostringstream os;
    os << path.string() << ":" << line << ": malformed number '" << tok << "'";
    throw IoError(os.str());
  }
  return v;
}

std::int64_t parse_int_field(const std::string& tok, const std::filesystem::path& path,
                             int line) {
  std::int64_t v = 0;
  const char* end = tok.data() + tok.size();
  const auto res = std::from_chars(tok.data(), end, v);
  if (res.ec != std::errc{} || res.ptr != end) {
    std::ostringstream os;
    os << path.string() << ":" << line << ": malformed number '" << tok << "'";
    throw IoError(os.str());
  }
  return v;
}

const std::vector<std::string> kPalette = {"#1f77b4", "#d62728", "#2ca02c",
                                           "#9467bd", "#ff7f0e", "#8c564b"};

}  // namespace

TraceTable to_table(const RegretTrace& t) {
  TraceTable table;
  table.n = t.n;
  table.mean_reward = t.mean_reward;
  table.regret = t.regret;
  table.regret_over_ln_n = t.regret_over_ln_n;
  table.reward_variance = t.reward_variance;
  return table;
}

void write_trace_csv(const TraceTable& t, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << kHeader << "\n";
  for (std::size_t i = 0; i < t.n.size(); ++i) {
    out << t.n[i] << ',' << fmt_real(t.mean_reward[i]) << ',' << fmt_real(t.regret[i])
        << ',' << fmt_real(t.regret_over_ln_n[i]) << ','
        << fmt_real(t.reward_variance[i]) << "\n";
  }
  if (!out) throw IoError("failed writing " + path.string());
}

TraceTable read_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw IoError(path.string() + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kHeader)
    throw IoError(path.string() + ": unexpected header '" + line + "'");

  TraceTable t;
  int number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ls(line);
    std::string tok;
    while (std::getline(ls, tok, ',')) fields.push_back(tok);
    if (fields.size() != 5) {
      std::ostringstream os;
      os << path.string() << ":" << number << ": expected 5 fields, got "
         << fields.size();
      throw IoError(os.str());
    }
    t.n.push_back(parse_int_field(fields[0], path, number));
    t.mean_reward.push_back(parse_real_field(fields[1], path, number));
    t.regret.push_back(parse_real_field(fields[2], path, number));
    t.regret_over_ln_n.push_back(parse_real_field(fields[3], path, number));
    t.reward_variance.push_back(parse_real_field(fields[4], path, number));
  }
  return t;
}

void write_svg_plot(const std::string& title, const std::string& x_label,
                    const std::string& y_label, const std::vector<PlotSeries>& series,
                    const std::filesystem::path& path, bool log_x) {
  const double width = 880, height = 560;
  const double left = 84, right = 30, top = 46, bottom = 64;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;

  auto tx = [&](double x) { return log_x ? std::log10(x) : x; };

  double x_min = 0, x_max = 1, y_min = 0, y_max = 1;
  bool any = false;
  for (const auto& s : series)
    for (const auto& [x, y] : s.points) {
      if (log_x && x <= 0.0) continue;
      if (!std::isfinite(tx(x)) || !std::isfinite(y)) continue;
      if (!any) {
        x_min = x_max = tx(x);
        y_min = y_max = y;
        any = true;
      } else {
        x_min = std::min(x_min, tx(x));
        x_max = std::max(x_max, tx(x));
        y_min = std::min(y_min, y);
        y_max = std::max(y_max, y);
      }
    }
  if (!any) {
    x_min = 0;
    x_max = 1;
    y_min = 0;
    y_max = 1;
  }
  if (x_max - x_min < 1e-12) x_max = x_min + 1.0;
  const double y_pad = (y_max - y_min < 1e-12) ? 1.0 : 0.05 * (y_max - y_min);
  y_min -= y_pad;
  y_max += y_pad;

  auto px = [&](double x) { return left + (tx(x) - x_min) / (x_max - x_min) * plot_w; };
  auto py = [&](double y) { return top + (y_max - y) / (y_max - y_min) * plot_h; };

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " " << height
      << "\">\n";
  out << "<rect width=\"" << width << "\" height=\"" << height
      << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";

  // Axes.
  out << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\""
      << left + plot_w << "\" y2=\"" << top + plot_h
      << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
      << top + plot_h << "\" stroke=\"black\" stroke-width=\"1\"/>\n";

  // X ticks: decades when logarithmic, five even ticks otherwise.
  char buf[64];
  if (log_x) {
    for (int d = static_cast<int>(std::ceil(x_min)); d <= static_cast<int>(std::floor(x_max));
         ++d) {
      const double x = left + (d - x_min) / (x_max - x_min) * plot_w;
      out << "<line x1=\"" << x << "\" y1=\"" << top + plot_h << "\" x2=\"" << x
          << "\" y2=\"" << top + plot_h + 6 << "\" stroke=\"black\"/>\n";
      out << "<text x=\"" << x << "\" y=\"" << top + plot_h + 22
          << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">1e"
          << d << "</text>\n";
    }
  } else {
    for (int i = 0; i <= 4; ++i) {
      const double v = x_min + (x_max - x_min) * i / 4.0;
      const double x = left + plot_w * i / 4.0;
      std::snprintf(buf, sizeof(buf), "%.3g", v);
      out << "<line x1=\"" << x << "\" y1=\"" << top + plot_h << "\" x2=\"" << x
          << "\" y2=\"" << top + plot_h + 6 << "\" stroke=\"black\"/>\n";
      out << "<text x=\"" << x << "\" y=\"" << top + plot_h + 22
          << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
          << buf << "</text>\n";
    }
  }
  for (int i = 0; i <= 4; ++i) {
    const double v = y_min + (y_max - y_min) * i / 4.0;
    const double y = py(v);
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    out << "<line x1=\"" << left - 6 << "\" y1=\"" << y << "\" x2=\"" << left
        << "\" y2=\"" << y << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << left - 10 << "\" y=\"" << y + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" << buf
        << "</text>\n";
  }
  out << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 14
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
      << x_label << "</text>\n";
  out << "<text x=\"20\" y=\"" << top + plot_h / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
      << "transform=\"rotate(-90 20 " << top + plot_h / 2 << ")\">" << y_label
      << "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const auto& color = kPalette[s % kPalette.size()];
    out << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.8\" points=\"";
    for (const auto& [x, y] : series[s].points) {
      if (log_x && x <= 0.0) continue;
      if (!std::isfinite(tx(x)) || !std::isfinite(y)) continue;
      out << px(x) << "," << py(y) << " ";
    }
    out << "\"/>\n";
    // Legend entry.
    const double ly = top + 16 + 18 * static_cast<double>(s);
    out << "<line x1=\"" << left + plot_w - 150 << "\" y1=\"" << ly << "\" x2=\""
        << left + plot_w - 122 << "\" y2=\"" << ly << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << left + plot_w - 116 << "\" y=\"" << ly + 4
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << series[s].label
        << "</text>\n";
  }
  out << "</svg>\n";
  if (!out) throw IoError("failed writing " + path.string());
}

void export_results(const std::map<std::string, RegretTrace>& traces,
                    const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + out_dir.string());

  for (const auto& [name, trace] : traces)
    write_trace_csv(to_table(trace), out_dir / (name + ".csv"));

  struct Metric {
    const char* file;
    const char* title;
    const std::vector<double> RegretTrace::*column;
  };
  const std::vector<Metric> metrics = {
      {"regret.svg", "regret", &RegretTrace::regret},
      {"regret_over_ln_n.svg", "regret / ln n", &RegretTrace::regret_over_ln_n},
      {"reward_variance.svg", "reward variance", &RegretTrace::reward_variance},
  };
  for (const auto& m : metrics) {
    std::vector<PlotSeries> series;
    for (const auto& [name, trace] : traces) {
      PlotSeries s;
      s.label = name;
      for (std::size_t i = 0; i < trace.n.size(); ++i)
        s.points.emplace_back(static_cast<double>(trace.n[i]), (trace.*(m.column))[i]);
      series.push_back(std::move(s));
    }
    write_svg_plot(m.title, "slots", m.title, series, out_dir / m.file, true);
  }
}

}  // namespace rmab
