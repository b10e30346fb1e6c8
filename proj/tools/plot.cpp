#include "plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "vabench/anova.hpp"
#include "vabench/error.hpp"

namespace vabench::app {

namespace {

using nlohmann::json;

const char* const kPalette[] = {"#1b9e77", "#d95f02", "#7570b3", "#e7298a",
                                "#66a61e", "#e6ab02", "#a6761d", "#666666"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

class Svg {
 public:
  Svg(double width, double height, const std::string& manifest_ref) {
    out_ << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\""
         << num(height) << "\" viewBox=\"0 0 " << num(width) << ' ' << num(height) << "\" "
         << "font-family=\"sans-serif\">\n";
    if (!manifest_ref.empty()) out_ << "<!-- manifest: " << escape(manifest_ref) << " -->\n";
    out_ << "<rect x=\"0\" y=\"0\" width=\"" << num(width) << "\" height=\"" << num(height)
         << "\" fill=\"white\"/>\n";
  }

  void rect(double x, double y, double w, double h, const std::string& fill,
            const std::string& stroke = "none") {
    out_ << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\"" << num(std::max(0.0, w))
         << "\" height=\"" << num(std::max(0.0, h)) << "\" fill=\"" << fill << "\" stroke=\""
         << stroke << "\"/>\n";
  }
  void line(double x1, double y1, double x2, double y2, const std::string& stroke = "#999999",
            double width = 1.0) {
    out_ << "<line x1=\"" << num(x1) << "\" y1=\"" << num(y1) << "\" x2=\"" << num(x2)
         << "\" y2=\"" << num(y2) << "\" stroke=\"" << stroke << "\" stroke-width=\"" << num(width)
         << "\"/>\n";
  }
  void circle(double x, double y, double r, const std::string& fill) {
    out_ << "<circle cx=\"" << num(x) << "\" cy=\"" << num(y) << "\" r=\"" << num(r)
         << "\" fill=\"" << fill << "\" fill-opacity=\"0.8\"/>\n";
  }
  void text(double x, double y, const std::string& s, double size = 10.0,
            const char* anchor = "middle", double rotate = 0.0) {
    out_ << "<text x=\"" << num(x) << "\" y=\"" << num(y) << "\" font-size=\"" << num(size)
         << "\" text-anchor=\"" << anchor << "\"";
    if (rotate != 0.0) out_ << " transform=\"rotate(" << num(rotate) << ' ' << num(x) << ' ' << num(y) << ")\"";
    out_ << '>' << escape(s) << "</text>\n";
  }
  std::string finish() {
    out_ << "</svg>\n";
    return out_.str();
  }

 private:
  std::ostringstream out_;
};

template <typename T>
void add_unique(std::vector<T>& v, const T& x) {
  if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(x);
}

void legend(Svg& svg, double x, double y, const std::vector<std::string>& labels) {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double lx = x + static_cast<double>(i) * 110.0;
    svg.rect(lx, y - 9, 10, 10, kPalette[i % 8]);
    svg.text(lx + 14, y, labels[i], 10, "start");
  }
}

}  // namespace

std::string render_grid_svg(const std::vector<MetricsRow>& all_rows, int replicate,
                            const std::string& title, const std::string& manifest_ref) {
  std::vector<MetricsRow> rows;
  for (const auto& r : all_rows) {
    if (r.replicate == replicate) rows.push_back(r);
  }
  if (rows.empty()) throw DataError("grid figure: no rows with replicate " + std::to_string(replicate));

  std::vector<std::string> test_sites, train_sites;
  std::vector<Algorithm> algorithms;
  for (const auto& r : rows) {
    add_unique(test_sites, r.test_site);
    add_unique(train_sites, r.train_site);
    add_unique(algorithms, r.algorithm);
  }
  std::map<std::tuple<std::string, std::string, Algorithm>, const MetricsRow*> index;
  double lo = 0.0;
  for (const auto& r : rows) {
    index[{r.test_site, r.train_site, r.algorithm}] = &r;
    for (Metric m : all_metrics()) lo = std::min(lo, metric_value(r, m));
  }
  lo = std::floor(lo * 10.0) / 10.0;
  const double hi = 1.0;

  const double panel_w = 40.0 + 24.0 * static_cast<double>(train_sites.size() * algorithms.size());
  const double panel_h = 120.0;
  const double left = 90.0, top = 60.0, gap = 16.0;
  const auto& metrics = all_metrics();
  const double width = left + static_cast<double>(metrics.size()) * (panel_w + gap) + 10.0;
  const double height = top + static_cast<double>(test_sites.size()) * (panel_h + gap) + 50.0;

  Svg svg(width, height, manifest_ref);
  svg.text(width / 2.0, 20.0, title, 14);
  std::vector<std::string> alg_labels;
  for (Algorithm a : algorithms) alg_labels.push_back(to_string(a));
  legend(svg, left, 42.0, alg_labels);

  const double group_w = (panel_w - 20.0) / static_cast<double>(train_sites.size());
  const double bar_w = group_w / (static_cast<double>(algorithms.size()) + 1.0);
  for (std::size_t ti = 0; ti < test_sites.size(); ++ti) {
    const double py = top + static_cast<double>(ti) * (panel_h + gap);
    svg.text(left - 50.0, py + panel_h / 2.0, "test " + test_sites[ti], 11, "middle", -90.0);
    for (std::size_t mi = 0; mi < metrics.size(); ++mi) {
      const double px = left + static_cast<double>(mi) * (panel_w + gap);
      svg.rect(px, py, panel_w, panel_h, "none", "#cccccc");
      if (ti == 0) svg.text(px + panel_w / 2.0, py - 4.0, to_string(metrics[mi]), 11);
      auto y_of = [&](double v) { return py + panel_h * (hi - v) / (hi - lo); };
      svg.line(px, y_of(0.0), px + panel_w, y_of(0.0), "#666666");
      if (mi == 0) {
        svg.text(px - 4.0, y_of(hi) + 4.0, num(hi), 8, "end");
        svg.text(px - 4.0, y_of(lo) + 4.0, num(lo), 8, "end");
      }
      for (std::size_t gi = 0; gi < train_sites.size(); ++gi) {
        const double gx = px + 10.0 + static_cast<double>(gi) * group_w;
        if (ti + 1 == test_sites.size()) {
          svg.text(gx + group_w / 2.0, py + panel_h + 12.0, train_sites[gi], 8);
        }
        for (std::size_t ai = 0; ai < algorithms.size(); ++ai) {
          auto it = index.find({test_sites[ti], train_sites[gi], algorithms[ai]});
          if (it == index.end()) continue;
          const double v = metric_value(*it->second, metrics[mi]);
          const double x = gx + bar_w * (0.5 + static_cast<double>(ai));
          const double y0 = y_of(std::max(v, 0.0));
          const double y1 = y_of(std::min(v, 0.0));
          svg.rect(x, y0, bar_w, y1 - y0, kPalette[ai % 8]);
        }
      }
    }
  }
  svg.text(width / 2.0, height - 10.0, "training site", 11);
  return svg.finish();
}

namespace {

struct Bar {
  std::string label;
  std::vector<std::pair<std::string, double>> segments;
};

std::vector<Bar> bars_from_doc(const json& doc) {
  std::vector<Bar> bars;
  const bool per_site = doc.value("per_test_site", false);
  for (const auto& rep : doc.at("reports")) {
    Bar bar;
    bar.label = rep.at("metric").get<std::string>();
    if (per_site) bar.label += " " + rep.at("scope").get<std::string>();
    for (const auto& f : rep.at("factors")) {
      bar.segments.emplace_back(f.at("factor").get<std::string>(), f.at("proportion").get<double>());
    }
    bar.segments.emplace_back("residual", rep.at("residual").at("proportion").get<double>());
    bars.push_back(std::move(bar));
  }
  return bars;
}

void check_decompose_doc(const json& doc) {
  if (!doc.is_object() || !doc.contains("experiment") || !doc.contains("reports")) {
    throw DataError("unknown input schema: expected a decompose report");
  }
}

}  // namespace

std::string render_variance_svg(const std::vector<json>& docs, bool per_test_site,
                                const std::string& manifest_ref) {
  std::vector<const json*> selected;
  for (const auto& d : docs) {
    check_decompose_doc(d);
    if (d.value("per_test_site", false) == per_test_site) selected.push_back(&d);
  }
  if (selected.empty()) throw DataError("variance figure: no matching decompose reports");
  std::stable_sort(selected.begin(), selected.end(), [](const json* a, const json* b) {
    return a->at("experiment").get<int>() < b->at("experiment").get<int>();
  });

  std::vector<std::string> terms;
  std::size_t max_bars = 0;
  std::vector<std::vector<Bar>> panels;
  for (const json* d : selected) {
    panels.push_back(bars_from_doc(*d));
    max_bars = std::max(max_bars, panels.back().size());
    for (const auto& b : panels.back()) {
      for (const auto& s : b.segments) add_unique(terms, s.first);
    }
  }
  // Residual is drawn last in every bar.
  terms.erase(std::remove(terms.begin(), terms.end(), std::string("residual")), terms.end());
  terms.push_back("residual");

  const double bar_w = 22.0, bar_gap = 8.0;
  const double panel_w = 30.0 + static_cast<double>(max_bars) * (bar_w + bar_gap);
  const double panel_h = 200.0;
  const double left = 50.0, top = 70.0, gap = 30.0;
  const std::size_t cols = std::min<std::size_t>(2, panels.size());
  const std::size_t rows = (panels.size() + cols - 1) / cols;
  const double width = left + static_cast<double>(cols) * (panel_w + gap) + 10.0;
  const double height = top + static_cast<double>(rows) * (panel_h + gap + 60.0) + 10.0;

  Svg svg(width, height, manifest_ref);
  svg.text(width / 2.0, 20.0,
           per_test_site ? "Variance decomposition per test site" : "Variance decomposition", 14);
  legend(svg, left, 44.0, terms);
  for (std::size_t p = 0; p < panels.size(); ++p) {
    const double px = left + static_cast<double>(p % cols) * (panel_w + gap);
    const double py = top + static_cast<double>(p / cols) * (panel_h + gap + 60.0);
    svg.rect(px, py, panel_w, panel_h, "none", "#cccccc");
    svg.text(px + panel_w / 2.0, py - 6.0,
             "experiment " + std::to_string(selected[p]->at("experiment").get<int>()), 11);
    svg.text(px - 4.0, py + 4.0, "1.00", 8, "end");
    svg.text(px - 4.0, py + panel_h + 4.0, "0.00", 8, "end");
    for (std::size_t b = 0; b < panels[p].size(); ++b) {
      const Bar& bar = panels[p][b];
      const double x = px + 15.0 + static_cast<double>(b) * (bar_w + bar_gap);
      double y = py + panel_h;
      for (std::size_t t = 0; t < terms.size(); ++t) {
        for (const auto& [name, share] : bar.segments) {
          if (name != terms[t]) continue;
          const double h = panel_h * std::clamp(share, 0.0, 1.0);
          y -= h;
          svg.rect(x, y, bar_w, h, kPalette[t % 8]);
        }
      }
      svg.text(x + bar_w / 2.0, py + panel_h + 8.0, bar.label, 8, "end", -60.0);
    }
  }
  return svg.finish();
}

std::string render_pvalue_svg(const std::vector<json>& docs, const std::string& manifest_ref) {
  struct Point {
    int experiment;
    double anova_p, friedman_p;
  };
  std::vector<Point> points;
  std::vector<int> experiments;
  for (const auto& d : docs) {
    check_decompose_doc(d);
    if (!d.contains("friedman")) continue;
    const int e = d.at("experiment").get<int>();
    std::map<std::pair<std::string, std::string>, double> anova_p;
    for (const auto& rep : d.at("reports")) {
      for (const auto& f : rep.at("factors")) {
        if (f.at("factor") == "train_site") {
          anova_p[{rep.at("scope").get<std::string>(), rep.at("metric").get<std::string>()}] =
              f.at("p").get<double>();
        }
      }
    }
    for (const auto& fr : d.at("friedman")) {
      auto it = anova_p.find({fr.at("scope").get<std::string>(), fr.at("metric").get<std::string>()});
      if (it == anova_p.end()) continue;
      points.push_back({e, it->second, fr.at("p").get<double>()});
      add_unique(experiments, e);
    }
  }
  if (points.empty()) throw DataError("p-value figure: no per-test-site reports with Friedman results");
  std::sort(experiments.begin(), experiments.end());

  const double size = 320.0, left = 60.0, top = 60.0;
  Svg svg(left + size + 30.0, top + size + 60.0, manifest_ref);
  svg.text(left + size / 2.0, 20.0, "Training-site p-values: ANOVA vs Friedman", 14);
  std::vector<std::string> labels;
  for (int e : experiments) labels.push_back("experiment " + std::to_string(e));
  legend(svg, left, 42.0, labels);
  svg.rect(left, top, size, size, "none", "#cccccc");
  svg.line(left, top + size, left + size, top, "#bbbbbb");
  svg.line(left, top + size * 0.95, left + size, top + size * 0.95, "#e0a0a0");
  svg.line(left + size * 0.05, top, left + size * 0.05, top + size, "#e0a0a0");
  svg.text(left + size / 2.0, top + size + 30.0, "ANOVA p-value (training site)", 11);
  svg.text(left - 35.0, top + size / 2.0, "Friedman p-value", 11, "middle", -90.0);
  svg.text(left, top + size + 12.0, "0", 8);
  svg.text(left + size, top + size + 12.0, "1", 8);
  svg.text(left - 6.0, top + 4.0, "1", 8, "end");
  for (const auto& pt : points) {
    const auto idx = static_cast<std::size_t>(
        std::find(experiments.begin(), experiments.end(), pt.experiment) - experiments.begin());
    svg.circle(left + size * pt.anova_p, top + size * (1.0 - pt.friedman_p), 3.5, kPalette[idx % 8]);
  }
  return svg.finish();
}

}  // namespace vabench::app
