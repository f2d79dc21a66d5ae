#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "histofeat/ingestion.hpp"
#include "histofeat/matrix.hpp"

namespace histofeat {

struct FeatureRow {
  Label label = Label::Normal;
  std::vector<double> values;

  bool operator==(const FeatureRow&) const = default;
};

/// Sample-id keyed descriptor table. Rows iterate in ascending byte order
/// of the id, which is also the on-disk order.
struct FeatureTable {
  std::string descriptor;
  std::size_t dim = 0;
  std::map<std::string, FeatureRow> rows;

  /// Throws Format on a ragged row, a non-finite value or dim == 0.
  void insert(std::string id, Label label, std::vector<double> values);
  void validate() const;

  bool operator==(const FeatureTable&) const = default;
};

/// Column name for feature j: "f" + j zero-padded to max(3, digits(dim - 1)).
std::string feature_column_name(std::size_t j, std::size_t dim);

// Feature CSV contract:
//   UTF-8, LF line endings, exactly one final LF
//   header: sample_id,label,f000,f001,...
//   label: normal | abnormal
//   values: printf("%.9g") (Python: format(v, ".9g"))
//   rows sorted ascending by sample_id (byte order)
std::string to_feature_csv(const FeatureTable& table);
/// `descriptor` names the resulting table. Errors carry 1-based line numbers.
FeatureTable parse_feature_csv(const std::string& text, const std::string& descriptor);

/// The descriptor name is the file stem.
FeatureTable read_feature_csv(const std::filesystem::path& path);
/// Writes to a sibling temporary file and renames it into place.
void write_feature_csv(const FeatureTable& table, const std::filesystem::path& path);

/// Per-sample concatenation in argument order; descriptor names joined by '+'.
/// Throws Alignment listing ids missing from any table or label conflicts.
FeatureTable combine(const std::vector<FeatureTable>& tables);

struct AlignedFeatures {
  Matrix x;
  std::vector<Label> y;
};

/// Rows in dataset order. Extra table rows are ignored; missing ids or a
/// label that disagrees with the dataset throw Alignment.
AlignedFeatures align_to_dataset(const FeatureTable& table, const Dataset& dataset);

}  // namespace histofeat
