#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace vabench {

enum class SymptomValue : std::uint8_t { No = 0, Yes = 1, Missing = 2 };

/// Canonical CSV token for a symptom value: `Y`, `N` or `.`.
char symptom_token(SymptomValue v);

/// Cause indices are zero-based positions in the dataset's cause catalog.
using CauseIndex = std::size_t;

struct DeathRecord {
  std::string id;
  std::string site;
  std::optional<CauseIndex> cause;
  std::vector<SymptomValue> symptoms;

  bool operator==(const DeathRecord&) const = default;
};

/// A validated, immutable collection of death records sharing one symptom
/// catalog and one cause catalog.
class Dataset {
 public:
  Dataset() = default;

  /// Validates every invariant and builds the site index. Throws DataError.
  Dataset(std::vector<std::string> symptom_names,
          std::vector<std::string> cause_names,
          std::vector<DeathRecord> records);

  const std::vector<std::string>& symptom_names() const { return symptom_names_; }
  const std::vector<std::string>& cause_names() const { return cause_names_; }
  const std::vector<DeathRecord>& records() const { return records_; }

  std::size_t num_symptoms() const { return symptom_names_.size(); }
  std::size_t num_causes() const { return cause_names_.size(); }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }

  /// Site labels in order of first appearance.
  const std::vector<std::string>& sites() const { return sites_; }
  /// Record positions per site label.
  const std::map<std::string, std::vector<std::size_t>>& site_index() const {
    return site_index_;
  }
  /// (site, record count) in order of first appearance.
  std::vector<std::pair<std::string, std::size_t>> site_counts() const;

  bool fully_labeled() const;
  bool same_catalogs(const Dataset& other) const;

  bool operator==(const Dataset& other) const {
    return symptom_names_ == other.symptom_names_ &&
           cause_names_ == other.cause_names_ && records_ == other.records_;
  }

 private:
  std::vector<std::string> symptom_names_;
  std::vector<std::string> cause_names_;
  std::vector<DeathRecord> records_;
  std::vector<std::string> sites_;
  std::map<std::string, std::vector<std::size_t>> site_index_;
};

/// Parses the canonical `id,site,cause,<symptom>...` CSV. When `cause_list`
/// is given it fixes the cause catalog and its order; otherwise the catalog
/// is the sorted set of non-empty cause cells.
Dataset parse_dataset(std::istream& in,
                      const std::optional<std::vector<std::string>>& cause_list = std::nullopt);
Dataset load_dataset(const std::string& path,
                     const std::optional<std::vector<std::string>>& cause_list = std::nullopt);

/// Writes the canonical CSV; `parse_dataset` with the same cause list reads
/// it back to an identical Dataset.
void write_dataset(std::ostream& out, const Dataset& data);

/// Reads a cause-list sidecar: one cause name per line, blank lines ignored.
std::vector<std::string> read_cause_list(std::istream& in);
std::vector<std::string> load_cause_list(const std::string& path);
void write_cause_list(std::ostream& out, const std::vector<std::string>& causes);

/// Concatenates datasets that share symptom and cause catalogs.
Dataset merge_datasets(const std::vector<Dataset>& parts);

/// Records of one site as a dataset with the same catalogs.
Dataset select_site(const Dataset& data, const std::string& site);

/// (train, test) subsets for one train/test site pair; equal labels yield
/// two identical copies.
std::pair<Dataset, Dataset> split_by_site(const Dataset& data,
                                          const std::string& train_site,
                                          const std::string& test_site);

/// Fraction of records per cause. Requires a nonempty, fully labeled dataset.
std::vector<double> empirical_csmf(const Dataset& data);

}  // namespace vabench
