// Copyright 2026 The Cheaptalk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cheaptalk/figures.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "cheaptalk/equilibria.hpp"
#include "cheaptalk/records.hpp"

namespace cheaptalk {
namespace {

struct TidyRow {
  std::string series;
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  bool has_w = false;
};

// Minimal single-panel SVG plot. The tidy CSV is the contract; this image
// exists so results can be eyeballed without extra tooling.
class SvgPlot {
 public:
  SvgPlot(std::ostream& out, double left, double top, double width,
          double height, double x_min, double x_max, double y_min,
          double y_max)
      : out_(out),
        left_(left),
        top_(top),
        width_(width),
        height_(height),
        x_min_(x_min),
        x_max_(x_max > x_min ? x_max : x_min + 1.0),
        y_min_(y_min),
        y_max_(y_max > y_min ? y_max : y_min + 1.0) {}

  double px(double x) const {
    return left_ + (x - x_min_) / (x_max_ - x_min_) * width_;
  }
  double py(double y) const {
    return top_ + height_ - (y - y_min_) / (y_max_ - y_min_) * height_;
  }

  void frame(const std::string& title) {
    out_ << "<rect x='" << left_ << "' y='" << top_ << "' width='" << width_
         << "' height='" << height_
         << "' fill='none' stroke='#333' stroke-width='1'/>\n";
    label(left_, top_ - 6, title, "#333");
    label(left_, top_ + height_ + 14, trim(x_min_), "#666");
    label(left_ + width_ - 30, top_ + height_ + 14, trim(x_max_), "#666");
    label(left_ - 46, top_ + height_, trim(y_min_), "#666");
    label(left_ - 46, top_ + 10, trim(y_max_), "#666");
  }

  void polyline(const std::vector<std::pair<double, double>>& points,
                const std::string& color, bool dashed = false) {
    if (points.empty()) return;
    out_ << "<polyline fill='none' stroke='" << color << "' stroke-width='1.5'";
    if (dashed) out_ << " stroke-dasharray='4,3'";
    out_ << " points='";
    for (const auto& [x, y] : points) out_ << px(x) << ',' << py(y) << ' ';
    out_ << "'/>\n";
  }

  void point(double x, double y, const std::string& color, double r = 2.2,
             double opacity = 1.0) {
    out_ << "<circle cx='" << px(x) << "' cy='" << py(y) << "' r='" << r
         << "' fill='" << color << "' fill-opacity='" << opacity << "'/>\n";
  }

  void cell(double x, double y, double w, double h, const std::string& color,
            double opacity) {
    if (opacity <= 0.0) return;
    out_ << "<rect x='" << px(x) << "' y='" << py(y + h) << "' width='"
         << px(x + w) - px(x) << "' height='" << py(y) - py(y + h)
         << "' fill='" << color << "' fill-opacity='" << opacity << "'/>\n";
  }

  void label(double x_pixels, double y_pixels, const std::string& text,
             const std::string& color) {
    out_ << "<text x='" << x_pixels << "' y='" << y_pixels
         << "' font-size='11' font-family='sans-serif' fill='" << color
         << "'>" << text << "</text>\n";
  }

 private:
  static std::string trim(double v) {
    std::ostringstream s;
    s.precision(4);
    s << v;
    return s.str();
  }

  std::ostream& out_;
  double left_, top_, width_, height_;
  double x_min_, x_max_, y_min_, y_max_;
};

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::vector<AggregateRecord> load_aggregates(const FigureSpec& spec) {
  if (spec.aggregate_paths.empty()) {
    throw std::invalid_argument("figure: no aggregate inputs given");
  }
  std::vector<AggregateRecord> all;
  for (const std::string& path : spec.aggregate_paths) {
    auto part = read_aggregates_csv(path);
    all.insert(all.end(), part.begin(), part.end());
  }
  if (all.empty()) {
    throw std::runtime_error("figure: aggregates are empty, nothing to plot");
  }
  std::stable_sort(all.begin(), all.end(),
                   [](const AggregateRecord& lhs, const AggregateRecord& rhs) {
                     return lhs.bias < rhs.bias;
                   });
  return all;
}

void require_single_cell(const std::vector<AggregateRecord>& aggregates,
                         FigureKind kind) {
  for (const AggregateRecord& agg : aggregates) {
    if (agg.alpha != aggregates.front().alpha ||
        agg.lambda != aggregates.front().lambda) {
      throw std::runtime_error(
          "figure '" + figure_kind_name(kind) +
          "' expects one (alpha, lambda) cell per bias; use "
          "eps_nash_frequency_grid for hyperparameter grids");
    }
  }
}

double bias_band(const std::vector<AggregateRecord>& aggregates) {
  double band = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < aggregates.size(); ++i) {
    const double d = aggregates[i].bias - aggregates[i - 1].bias;
    if (d > 0.0) band = std::min(band, d);
  }
  return std::isfinite(band) ? band : 0.005;
}

void write_tidy_csv(const std::string& path, const std::vector<TidyRow>& rows) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "series,x,y,w\n";
  for (const TidyRow& row : rows) {
    out << row.series << ',' << format_double(row.x) << ','
        << format_double(row.y) << ','
        << (row.has_w ? format_double(row.w) : std::string()) << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::ofstream open_svg(const std::string& path, int width, int height) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width
      << "' height='" << height << "' viewBox='0 0 " << width << ' ' << height
      << "'>\n<rect width='100%' height='100%' fill='white'/>\n";
  return out;
}

// series -> (x, y) points, keeping first-seen series order.
struct SeriesMap {
  std::vector<std::string> order;
  std::map<std::string, std::vector<std::pair<double, double>>> points;

  void add(const std::string& series, double x, double y) {
    if (!points.count(series)) order.push_back(series);
    points[series].push_back({x, y});
  }
};

void render_line_figure(const std::string& path, const std::string& title,
                        const SeriesMap& series, double y_min, double y_max,
                        double x_min, double x_max) {
  std::ofstream svg = open_svg(path, 720, 440);
  SvgPlot plot(svg, 70, 30, 590, 330, x_min, x_max, y_min, y_max);
  plot.frame(title);
  int color = 0;
  double legend_y = 40;
  for (const std::string& name : series.order) {
    const char* c = kPalette[color++ % std::size(kPalette)];
    plot.polyline(series.points.at(name), c);
    plot.label(80, legend_y, name, c);
    legend_y += 14;
  }
  svg << "</svg>\n";
}

std::vector<TidyRow> deviation_rows(
    const std::vector<AggregateRecord>& aggregates) {
  std::vector<TidyRow> rows;
  for (const AggregateRecord& agg : aggregates) {
    rows.push_back({"max_subopt_sender_mean", agg.bias,
                    agg.max_subopt_sender.mean});
    rows.push_back({"max_subopt_receiver_mean", agg.bias,
                    agg.max_subopt_receiver.mean});
    rows.push_back({"gain_sender_mean", agg.bias, agg.gain_sender.mean});
    rows.push_back({"gain_receiver_mean", agg.bias, agg.gain_receiver.mean});
  }
  return rows;
}

std::vector<TidyRow> eps_nash_rows(
    const std::vector<AggregateRecord>& aggregates) {
  std::vector<TidyRow> rows;
  for (const AggregateRecord& agg : aggregates) {
    std::ostringstream name;
    name << "alpha=" << agg.alpha << " lambda=" << agg.lambda;
    rows.push_back({name.str(), agg.bias, agg.eps_nash_freq});
  }
  return rows;
}

std::vector<TidyRow> modal_rows(
    const std::vector<AggregateRecord>& aggregates) {
  std::vector<TidyRow> rows;
  for (const AggregateRecord& agg : aggregates) {
    std::ostringstream bias;
    bias << "bias=" << agg.bias;
    for (std::size_t s = 0; s < agg.modal_sender_actions.size(); ++s) {
      rows.push_back({"sender " + bias.str(), static_cast<double>(s),
                      static_cast<double>(agg.modal_sender_actions[s]),
                      agg.modal_sender_freqs[s], true});
    }
    for (std::size_t s = 0; s < agg.modal_receiver_actions.size(); ++s) {
      rows.push_back({"receiver " + bias.str(), static_cast<double>(s),
                      static_cast<double>(agg.modal_receiver_actions[s]),
                      agg.modal_receiver_freqs[s], true});
    }
  }
  if (rows.empty()) {
    throw std::runtime_error(
        "figure: no modal policies in the aggregates (no eps-Nash runs "
        "carried policies)");
  }
  return rows;
}

void append_histogram_rows(std::vector<TidyRow>& rows,
                           const std::string& series,
                           const AggregateRecord& agg, const DistSummary& s) {
  const double total = static_cast<double>(agg.n_converged);
  if (total <= 0.0) return;
  const double bin = (s.hist_hi - s.hist_lo) / kHistogramBins;
  for (int i = 0; i < kHistogramBins; ++i) {
    if (s.hist[i] == 0) continue;
    rows.push_back({series, agg.bias, s.hist_lo + (i + 0.5) * bin,
                    static_cast<double>(s.hist[i]) / total, true});
  }
}

struct HistFigure {
  std::string title;
  std::string hist_series;
  std::vector<TidyRow> rows;
  double y_min = 0.0, y_max = 1.0;
};

void render_hist_panels(const std::string& path,
                        const std::vector<AggregateRecord>& aggregates,
                        const std::vector<HistFigure>& panels,
                        const std::vector<TidyRow>& rows) {
  const double band = bias_band(aggregates);
  const double x_min = aggregates.front().bias;
  const double x_max = aggregates.back().bias + band;
  const int panel_height = 250;
  std::ofstream svg =
      open_svg(path, 720, 40 + panel_height * static_cast<int>(panels.size()));
  for (std::size_t p = 0; p < panels.size(); ++p) {
    const HistFigure& panel = panels[p];
    SvgPlot plot(svg, 70, 30 + panel_height * static_cast<double>(p), 590,
                 panel_height - 60, x_min, x_max, panel.y_min, panel.y_max);
    plot.frame(panel.title);
    const double bin_h = (panel.y_max - panel.y_min) / kHistogramBins;
    SeriesMap lines;
    for (const TidyRow& row : rows) {
      if (row.series == panel.hist_series) {
        plot.cell(row.x, row.y - bin_h / 2, band, bin_h, "#1f77b4",
                  std::min(1.0, 0.15 + row.w));
      }
    }
    for (const TidyRow& row : panel.rows) lines.add(row.series, row.x, row.y);
    int color = 1;
    double legend_y = 40 + panel_height * static_cast<double>(p);
    for (const std::string& name : lines.order) {
      const bool dotted = name.find("babbling") != std::string::npos;
      const char* c = dotted ? "#7f7f7f" : kPalette[color++ % 4];
      plot.polyline(lines.points.at(name), c, dotted);
      plot.label(560, legend_y, name, c);
      legend_y += 13;
    }
  }
  svg << "</svg>\n";
}

}  // namespace

FigureKind figure_kind_from_name(const std::string& name) {
  if (name == "deviation_vs_bias") return FigureKind::kDeviationVsBias;
  if (name == "eps_nash_frequency_grid") {
    return FigureKind::kEpsNashFrequencyGrid;
  }
  if (name == "modal_policy_heatmap") return FigureKind::kModalPolicyHeatmap;
  if (name == "payoff_distribution") return FigureKind::kPayoffDistribution;
  if (name == "mi_distribution") return FigureKind::kMiDistribution;
  if (name == "equilibrium_ladder") return FigureKind::kEquilibriumLadder;
  throw std::invalid_argument("unknown figure kind '" + name + "'");
}

std::string figure_kind_name(FigureKind kind) {
  switch (kind) {
    case FigureKind::kDeviationVsBias:
      return "deviation_vs_bias";
    case FigureKind::kEpsNashFrequencyGrid:
      return "eps_nash_frequency_grid";
    case FigureKind::kModalPolicyHeatmap:
      return "modal_policy_heatmap";
    case FigureKind::kPayoffDistribution:
      return "payoff_distribution";
    case FigureKind::kMiDistribution:
      return "mi_distribution";
    case FigureKind::kEquilibriumLadder:
      return "equilibrium_ladder";
  }
  return "?";
}

void render_figure(const FigureSpec& spec) {
  const std::vector<AggregateRecord> aggregates = load_aggregates(spec);
  const std::filesystem::path stem(spec.output_stem);
  if (stem.has_parent_path()) {
    std::filesystem::create_directories(stem.parent_path());
  }
  const std::string csv_path = spec.output_stem + ".csv";
  const std::string svg_path = spec.output_stem + ".svg";
  const double band = bias_band(aggregates);
  const double x_min = aggregates.front().bias;
  const double x_max = aggregates.back().bias + band;

  switch (spec.kind) {
    case FigureKind::kDeviationVsBias: {
      require_single_cell(aggregates, spec.kind);
      const auto rows = deviation_rows(aggregates);
      write_tidy_csv(csv_path, rows);
      SeriesMap series;
      double y_max = 0.0;
      for (const TidyRow& row : rows) {
        series.add(row.series, row.x, row.y);
        y_max = std::max(y_max, row.y);
      }
      render_line_figure(svg_path, "deviation from best response vs bias",
                         series, 0.0, std::max(y_max, 1e-3), x_min, x_max);
      return;
    }
    case FigureKind::kEpsNashFrequencyGrid: {
      const auto rows = eps_nash_rows(aggregates);
      write_tidy_csv(csv_path, rows);
      SeriesMap series;
      for (const TidyRow& row : rows) series.add(row.series, row.x, row.y);
      render_line_figure(svg_path, "eps-Nash frequency vs bias", series, 0.0,
                         1.0, x_min, x_max);
      return;
    }
    case FigureKind::kModalPolicyHeatmap: {
      require_single_cell(aggregates, spec.kind);
      const auto rows = modal_rows(aggregates);
      write_tidy_csv(csv_path, rows);
      double x_hi = 1.0, y_hi = 1.0;
      for (const TidyRow& row : rows) {
        x_hi = std::max(x_hi, row.x + 1.0);
        y_hi = std::max(y_hi, row.y + 1.0);
      }
      std::ofstream svg = open_svg(svg_path, 720, 440);
      SvgPlot plot(svg, 70, 30, 590, 330, 0.0, x_hi, 0.0, y_hi);
      plot.frame("modal action per state (darker = more frequent)");
      for (const TidyRow& row : rows) {
        const bool is_sender = row.series.rfind("sender", 0) == 0;
        plot.cell(row.x, row.y, 0.9, 0.9, is_sender ? "#1f77b4" : "#d62728",
                  0.2 + 0.8 * row.w);
      }
      svg << "</svg>\n";
      return;
    }
    case FigureKind::kPayoffDistribution: {
      require_single_cell(aggregates, spec.kind);
      std::vector<TidyRow> rows;
      HistFigure sender;
      sender.title = "sender ex-ante payoff vs bias";
      sender.hist_series = "u_sender_hist";
      HistFigure receiver;
      receiver.title = "receiver ex-ante payoff vs bias";
      receiver.hist_series = "u_receiver_hist";
      double lo_s = 0.0, lo_r = 0.0;
      for (const AggregateRecord& agg : aggregates) {
        append_histogram_rows(rows, "u_sender_hist", agg, agg.u_sender);
        append_histogram_rows(rows, "u_receiver_hist", agg, agg.u_receiver);
        sender.rows.push_back(
            {"u_sender_median", agg.bias, agg.u_sender.median});
        sender.rows.push_back(
            {"u_sender_optimal", agg.bias, agg.optimal_u_sender});
        sender.rows.push_back(
            {"u_sender_babbling", agg.bias, agg.babbling_u_sender});
        receiver.rows.push_back(
            {"u_receiver_median", agg.bias, agg.u_receiver.median});
        receiver.rows.push_back(
            {"u_receiver_optimal", agg.bias, agg.optimal_u_receiver});
        receiver.rows.push_back(
            {"u_receiver_babbling", agg.bias, agg.babbling_u_receiver});
        lo_s = std::min(lo_s, agg.u_sender.hist_lo);
        lo_r = std::min(lo_r, agg.u_receiver.hist_lo);
      }
      sender.y_min = lo_s;
      sender.y_max = 0.0 - lo_s * 0.02;
      receiver.y_min = lo_r;
      receiver.y_max = 0.0 - lo_r * 0.02;
      for (const HistFigure* panel : {&sender, &receiver}) {
        for (const TidyRow& row : panel->rows) {
          if (!std::isnan(row.y)) rows.push_back(row);
        }
      }
      write_tidy_csv(csv_path, rows);
      render_hist_panels(svg_path, aggregates, {sender, receiver}, rows);
      return;
    }
    case FigureKind::kMiDistribution: {
      require_single_cell(aggregates, spec.kind);
      std::vector<TidyRow> rows;
      HistFigure panel;
      panel.title = "normalised mutual information vs bias";
      panel.hist_series = "mutual_info_hist";
      for (const AggregateRecord& agg : aggregates) {
        append_histogram_rows(rows, "mutual_info_hist", agg, agg.mutual_info);
        panel.rows.push_back(
            {"mutual_info_median", agg.bias, agg.mutual_info.median});
        panel.rows.push_back({"optimal_mi", agg.bias, agg.optimal_mi});
        panel.rows.push_back({"babbling_mi", agg.bias, 0.0});
      }
      for (const TidyRow& row : panel.rows) {
        if (!std::isnan(row.y)) rows.push_back(row);
      }
      write_tidy_csv(csv_path, rows);
      render_hist_panels(svg_path, aggregates, {panel}, rows);
      return;
    }
    case FigureKind::kEquilibriumLadder: {
      require_single_cell(aggregates, spec.kind);
      std::vector<TidyRow> rows;
      for (const AggregateRecord& agg : aggregates) {
        GameConfig game = spec.game;
        game.bias = agg.bias;
        for (const PartitionalEquilibrium& eq :
             enumerate_equilibria(build_game(game))) {
          rows.push_back({"equilibrium_mi", agg.bias, eq.mutual_info});
        }
        if (!std::isnan(agg.modal_sender_mi)) {
          rows.push_back({"modal_mi", agg.bias, agg.modal_sender_mi});
        }
      }
      write_tidy_csv(csv_path, rows);
      std::ofstream svg = open_svg(svg_path, 720, 440);
      SvgPlot plot(svg, 70, 30, 590, 330, x_min, x_max, 0.0, 1.0);
      plot.frame("partitional equilibrium informativeness vs modal play");
      for (const TidyRow& row : rows) {
        if (row.series == "equilibrium_mi") {
          plot.point(row.x, row.y, "#9a9a9a", 1.8, 0.8);
        }
      }
      for (const TidyRow& row : rows) {
        if (row.series == "modal_mi") {
          plot.point(row.x, row.y, "#1f77b4", 2.6);
        }
      }
      plot.label(80, 40, "grey: all partitional equilibria", "#9a9a9a");
      plot.label(80, 54, "blue: modal converged play", "#1f77b4");
      svg << "</svg>\n";
      return;
    }
  }
  throw std::invalid_argument("unhandled figure kind");
}

}  // namespace cheaptalk
