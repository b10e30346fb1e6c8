#include "vabench/results_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "vabench/error.hpp"

namespace vabench {

using nlohmann::json;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

double parse_double(const std::string& s, std::size_t line_no) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw DataError("results CSV line " + std::to_string(line_no) + ": bad number '" + s + "'");
  }
  return v;
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

void write_metrics_csv(std::ostream& out, const std::vector<MetricsRow>& rows) {
  out << kMetricsHeader << '\n';
  for (const auto& r : rows) {
    out << r.train_site << ',' << r.test_site << ',' << to_string(r.algorithm) << ','
        << r.replicate << ',' << format_double(r.ccc) << ',' << format_double(r.csmf_accuracy)
        << ',' << format_double(r.top1) << ',' << format_double(r.top3) << '\n';
  }
}

std::vector<MetricsRow> read_metrics_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) break;
  }
  if (line != kMetricsHeader) {
    throw DataError(std::string("results CSV: expected header '") + kMetricsHeader + "'");
  }
  std::vector<MetricsRow> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 8) {
      throw DataError("results CSV line " + std::to_string(line_no) + ": expected 8 columns");
    }
    MetricsRow r;
    r.train_site = cells[0];
    r.test_site = cells[1];
    try {
      r.algorithm = parse_algorithm(cells[2]);
      r.replicate = std::stoi(cells[3]);
    } catch (const std::exception& e) {
      throw DataError("results CSV line " + std::to_string(line_no) + ": " + e.what());
    }
    r.ccc = parse_double(cells[4], line_no);
    r.csmf_accuracy = parse_double(cells[5], line_no);
    r.top1 = parse_double(cells[6], line_no);
    r.top3 = parse_double(cells[7], line_no);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<MetricsRow> load_metrics_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open results file '" + path + "'");
  return read_metrics_csv(in);
}

SynthConfig synth_config_from_json(const json& j) {
  SynthConfig c;
  try {
    c.n_sites = j.value("n_sites", c.n_sites);
    c.n_causes = j.value("n_causes", c.n_causes);
    c.n_symptoms = j.value("n_symptoms", c.n_symptoms);
    c.deaths_per_site = j.value("deaths_per_site", c.deaths_per_site);
    c.site_heterogeneity = j.value("site_heterogeneity", c.site_heterogeneity);
    c.missingness = j.value("missingness", c.missingness);
    c.seed = j.value("seed", c.seed);
    if (j.contains("base_condprob") && !j["base_condprob"].is_null()) {
      const auto rows = j["base_condprob"].get<std::vector<std::vector<double>>>();
      Matrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
      for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != m.cols()) throw ConfigError("base_condprob rows differ in length");
        for (std::size_t s = 0; s < m.cols(); ++s) m(r, s) = rows[r][s];
      }
      c.base_condprob = std::move(m);
    }
    if (j.contains("site_csmfs") && !j["site_csmfs"].is_null()) {
      c.site_csmfs = j["site_csmfs"].get<std::vector<std::vector<double>>>();
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("synthetic config: ") + e.what());
  }
  c.validate();
  return c;
}

namespace {
json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto row = m.row(r);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  return rows;
}
}  // namespace

json to_json(const SynthConfig& c) {
  json j{{"n_sites", c.n_sites},
         {"n_causes", c.n_causes},
         {"n_symptoms", c.n_symptoms},
         {"deaths_per_site", c.deaths_per_site},
         {"site_heterogeneity", c.site_heterogeneity},
         {"missingness", c.missingness},
         {"seed", c.seed}};
  if (c.base_condprob) j["base_condprob"] = matrix_json(*c.base_condprob);
  if (c.site_csmfs) j["site_csmfs"] = *c.site_csmfs;
  return j;
}

json to_json(const SynthTruth& t) {
  json sites = json::array();
  for (std::size_t k = 0; k < t.site_names.size(); ++k) {
    sites.push_back({{"site", t.site_names[k]},
                     {"csmf", t.site_csmfs[k]},
                     {"condprob", matrix_json(t.site_condprobs[k])}});
  }
  return {{"base_condprob", matrix_json(t.base_condprob)}, {"sites", sites}};
}

json to_json(const AnovaReport& r) {
  json factors = json::array();
  for (const auto& t : r.terms) {
    factors.push_back({{"factor", to_string(t.factor)},
                       {"df", t.df},
                       {"ss", t.ss},
                       {"proportion", t.proportion},
                       {"f", finite_or_null(t.f)},
                       {"p", t.p}});
  }
  return {{"metric", to_string(r.metric)},
          {"n", r.n},
          {"factors", factors},
          {"residual", {{"df", r.residual_df},
                        {"ss", r.residual_ss},
                        {"proportion", r.total_ss > 0.0 ? r.residual_ss / r.total_ss : 0.0}}},
          {"total_ss", r.total_ss}};
}

json to_json(const FriedmanResult& f) {
  return {{"statistic", f.statistic}, {"df", f.df},           {"p", f.p},
          {"blocks", f.blocks},       {"treatments", f.treatments}};
}

void append_flat_rows(std::vector<FlatAnovaRow>& out, int experiment, const std::string& scope,
                      const AnovaReport& report) {
  for (const auto& t : report.terms) {
    out.push_back({experiment, to_string(report.metric), scope, to_string(t.factor), t.df, t.ss,
                   t.proportion, t.f, t.p});
  }
  out.push_back({experiment, to_string(report.metric), scope, "residual", report.residual_df,
                 report.residual_ss,
                 report.total_ss > 0.0 ? report.residual_ss / report.total_ss : 0.0, 0.0, 1.0});
}

void write_flat_anova_csv(std::ostream& out, const std::vector<FlatAnovaRow>& rows) {
  out << "experiment,metric,scope,term,df,ss,proportion,f,p\n";
  for (const auto& r : rows) {
    out << r.experiment << ',' << r.metric << ',' << r.scope << ',' << r.term << ',' << r.df << ','
        << format_double(r.ss) << ',' << format_double(r.proportion) << ','
        << format_double(r.f) << ',' << format_double(r.p) << '\n';
  }
}

}  // namespace vabench
