#include "vabench/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "vabench/error.hpp"

namespace vabench {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

SymptomValue parse_symptom(const std::string& token, std::size_t line_no,
                           const std::string& column) {
  if (token == "Y") return SymptomValue::Yes;
  if (token == "N") return SymptomValue::No;
  if (token == ".") return SymptomValue::Missing;
  throw DataError("line " + std::to_string(line_no) + ", column '" + column +
                  "': malformed symptom token '" + token + "' (expected Y, N or .)");
}

template <typename Names>
void require_unique(const Names& names, const char* what) {
  std::unordered_set<std::string> seen;
  for (const auto& n : names) {
    if (!seen.insert(n).second) throw DataError(std::string("duplicate ") + what + " '" + n + "'");
  }
}

}  // namespace

char symptom_token(SymptomValue v) {
  switch (v) {
    case SymptomValue::Yes: return 'Y';
    case SymptomValue::No: return 'N';
    case SymptomValue::Missing: return '.';
  }
  return '.';
}

Dataset::Dataset(std::vector<std::string> symptom_names,
                 std::vector<std::string> cause_names,
                 std::vector<DeathRecord> records)
    : symptom_names_(std::move(symptom_names)),
      cause_names_(std::move(cause_names)),
      records_(std::move(records)) {
  require_unique(symptom_names_, "symptom name");
  require_unique(cause_names_, "cause name");
  std::unordered_set<std::string> ids;
  for (std::size_t i = 0; i < records_.size(); ++i) {
    const DeathRecord& r = records_[i];
    if (!ids.insert(r.id).second) throw DataError("duplicate record id '" + r.id + "'");
    if (r.symptoms.size() != symptom_names_.size()) {
      throw DataError("record '" + r.id + "' has " + std::to_string(r.symptoms.size()) +
                      " symptoms, expected " + std::to_string(symptom_names_.size()));
    }
    if (r.cause && *r.cause >= cause_names_.size()) {
      throw DataError("record '" + r.id + "' has cause index out of range");
    }
    auto [it, inserted] = site_index_.try_emplace(r.site);
    if (inserted) sites_.push_back(r.site);
    it->second.push_back(i);
  }
}

std::vector<std::pair<std::string, std::size_t>> Dataset::site_counts() const {
  std::vector<std::pair<std::string, std::size_t>> out;
  for (const auto& s : sites_) out.emplace_back(s, site_index_.at(s).size());
  return out;
}

bool Dataset::fully_labeled() const {
  return std::all_of(records_.begin(), records_.end(),
                     [](const DeathRecord& r) { return r.cause.has_value(); });
}

bool Dataset::same_catalogs(const Dataset& other) const {
  return symptom_names_ == other.symptom_names_ && cause_names_ == other.cause_names_;
}

Dataset parse_dataset(std::istream& in,
                      const std::optional<std::vector<std::string>>& cause_list) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (!line.empty()) {
      have_header = true;
      break;
    }
  }
  if (!have_header) throw DataError("empty file: no header line");

  std::vector<std::string> header = split_csv_line(line);
  if (header.size() < 3 || header[0] != "id" || header[1] != "site" || header[2] != "cause") {
    throw DataError("header must begin with id,site,cause");
  }
  std::vector<std::string> symptom_names(header.begin() + 3, header.end());
  const std::size_t width = header.size();

  struct RawRow {
    DeathRecord record;
    std::string cause_name;
    std::size_t line_no;
  };
  std::vector<RawRow> rows;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != width) {
      throw DataError("line " + std::to_string(line_no) + ": ragged row with " +
                      std::to_string(cells.size()) + " cells, expected " + std::to_string(width));
    }
    RawRow row;
    row.line_no = line_no;
    row.record.id = cells[0];
    row.record.site = cells[1];
    row.cause_name = cells[2];
    row.record.symptoms.reserve(symptom_names.size());
    for (std::size_t j = 3; j < width; ++j) {
      row.record.symptoms.push_back(parse_symptom(cells[j], line_no, header[j]));
    }
    rows.push_back(std::move(row));
  }

  std::vector<std::string> causes;
  if (cause_list) {
    causes = *cause_list;
  } else {
    std::set<std::string> unique;
    for (const auto& r : rows) {
      if (!r.cause_name.empty()) unique.insert(r.cause_name);
    }
    causes.assign(unique.begin(), unique.end());
  }
  require_unique(causes, "cause name");
  std::unordered_map<std::string, CauseIndex> cause_pos;
  for (std::size_t c = 0; c < causes.size(); ++c) cause_pos.emplace(causes[c], c);

  std::vector<DeathRecord> records;
  records.reserve(rows.size());
  for (auto& r : rows) {
    if (!r.cause_name.empty()) {
      auto it = cause_pos.find(r.cause_name);
      if (it == cause_pos.end()) {
        throw DataError("line " + std::to_string(r.line_no) + ": unknown cause '" +
                        r.cause_name + "'");
      }
      r.record.cause = it->second;
    }
    records.push_back(std::move(r.record));
  }
  return Dataset(std::move(symptom_names), std::move(causes), std::move(records));
}

Dataset load_dataset(const std::string& path,
                     const std::optional<std::vector<std::string>>& cause_list) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open dataset file '" + path + "'");
  try {
    return parse_dataset(in, cause_list);
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

void write_dataset(std::ostream& out, const Dataset& data) {
  out << "id,site,cause";
  for (const auto& s : data.symptom_names()) out << ',' << s;
  out << '\n';
  std::string line;
  for (const auto& r : data.records()) {
    line.clear();
    line += r.id;
    line += ',';
    line += r.site;
    line += ',';
    if (r.cause) line += data.cause_names()[*r.cause];
    for (SymptomValue v : r.symptoms) {
      line += ',';
      line += symptom_token(v);
    }
    line += '\n';
    out << line;
  }
}

std::vector<std::string> read_cause_list(std::istream& in) {
  std::vector<std::string> causes;
  std::string line;
  while (std::getline(in, line)) {
    strip_cr(line);
    if (!line.empty()) causes.push_back(line);
  }
  require_unique(causes, "cause name");
  return causes;
}

std::vector<std::string> load_cause_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open cause list '" + path + "'");
  return read_cause_list(in);
}

void write_cause_list(std::ostream& out, const std::vector<std::string>& causes) {
  for (const auto& c : causes) out << c << '\n';
}

Dataset merge_datasets(const std::vector<Dataset>& parts) {
  if (parts.empty()) throw DataError("no datasets to merge");
  std::vector<DeathRecord> records;
  for (const auto& p : parts) {
    if (!p.same_catalogs(parts.front())) {
      throw DataError("catalog mismatch: datasets do not share symptom and cause catalogs");
    }
    records.insert(records.end(), p.records().begin(), p.records().end());
  }
  return Dataset(parts.front().symptom_names(), parts.front().cause_names(),
                 std::move(records));
}

Dataset select_site(const Dataset& data, const std::string& site) {
  auto it = data.site_index().find(site);
  if (it == data.site_index().end()) throw DataError("unknown site '" + site + "'");
  std::vector<DeathRecord> records;
  records.reserve(it->second.size());
  for (std::size_t i : it->second) records.push_back(data.records()[i]);
  return Dataset(data.symptom_names(), data.cause_names(), std::move(records));
}

std::pair<Dataset, Dataset> split_by_site(const Dataset& data,
                                          const std::string& train_site,
                                          const std::string& test_site) {
  return {select_site(data, train_site), select_site(data, test_site)};
}

std::vector<double> empirical_csmf(const Dataset& data) {
  if (data.empty()) throw DataError("empirical CSMF of an empty dataset");
  std::vector<double> counts(data.num_causes(), 0.0);
  for (const auto& r : data.records()) {
    if (!r.cause) throw DataError("record '" + r.id + "' is unlabeled");
    counts[*r.cause] += 1.0;
  }
  const double n = static_cast<double>(data.size());
  for (double& c : counts) c /= n;
  return counts;
}

}  // namespace vabench
