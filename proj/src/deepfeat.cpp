#include "histofeat/deepfeat.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>
#include <string_view>

#include "histofeat/error.hpp"

namespace histofeat {

namespace fs = std::filesystem;

namespace {

void check_id(const std::string& id) {
  if (id.empty() || id.find_first_of(",\n\r") != std::string::npos)
    throw Error(ErrorKind::Format, "sample id '" + id + "' is empty or contains a comma or line break");
}

}  // namespace

void FeatureTable::insert(std::string id, Label label, std::vector<double> values) {
  check_id(id);
  if (values.empty()) throw Error(ErrorKind::Format, "row " + id + " has no feature values");
  if (dim == 0 && rows.empty()) dim = values.size();
  if (values.size() != dim)
    throw Error(ErrorKind::Format, "row " + id + " has " + std::to_string(values.size()) + " values, expected " +
                                       std::to_string(dim));
  for (double v : values)
    if (!std::isfinite(v)) throw Error(ErrorKind::Format, "row " + id + " holds a non-finite value");
  if (!rows.emplace(std::move(id), FeatureRow{label, std::move(values)}).second)
    throw Error(ErrorKind::Format, "duplicate sample id");
}

void FeatureTable::validate() const {
  if (dim == 0) throw Error(ErrorKind::Format, "feature table " + descriptor + " has no feature columns");
  for (const auto& [id, row] : rows) {
    check_id(id);
    if (row.values.size() != dim) throw Error(ErrorKind::Format, "row " + id + " is ragged");
    for (double v : row.values)
      if (!std::isfinite(v)) throw Error(ErrorKind::Format, "row " + id + " holds a non-finite value");
  }
}

std::string feature_column_name(std::size_t j, std::size_t dim) {
  std::size_t width = 3;
  for (std::size_t top = dim > 0 ? dim - 1 : 0; top >= 1000; top /= 10) ++width;
  std::string digits = std::to_string(j);
  if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
  return "f" + digits;
}

std::string to_feature_csv(const FeatureTable& table) {
  table.validate();
  std::string out = "sample_id,label";
  for (std::size_t j = 0; j < table.dim; ++j) {
    out += ',';
    out += feature_column_name(j, table.dim);
  }
  out += '\n';
  char buf[64];
  for (const auto& [id, row] : table.rows) {
    out += id;
    out += ',';
    out += to_string(row.label);
    for (double v : row.values) {
      std::snprintf(buf, sizeof buf, "%.9g", v);
      out += ',';
      out += buf;
    }
    out += '\n';
  }
  return out;
}

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      cells.push_back(line.substr(start));
      return cells;
    }
    cells.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw Error(ErrorKind::Format, "line " + std::to_string(line) + ": " + what);
}

bool valid_column_name(std::string_view name, std::size_t index) {
  if (name.size() < 2 || name[0] != 'f') return false;
  std::size_t value = 0;
  const auto* end = name.data() + name.size();
  const auto [ptr, ec] = std::from_chars(name.data() + 1, end, value);
  return ec == std::errc() && ptr == end && value == index;
}

}  // namespace

FeatureTable parse_feature_csv(const std::string& text, const std::string& descriptor) {
  if (text.find('\r') != std::string::npos) throw Error(ErrorKind::Format, "CR characters found; LF line endings required");
  std::string_view body(text);
  if (!body.empty() && body.back() == '\n') body.remove_suffix(1);
  const auto lines = split(body, '\n');

  const auto header = split(lines.front(), ',');
  if (header.size() < 2 || header[0] != "sample_id" || header[1] != "label")
    fail(1, "header must start with sample_id,label");
  if (header.size() == 2) fail(1, "no feature columns");
  const std::size_t dim = header.size() - 2;
  for (std::size_t j = 0; j < dim; ++j)
    if (!valid_column_name(header[j + 2], j)) fail(1, "bad feature column name '" + std::string(header[j + 2]) + "'");

  FeatureTable table;
  table.descriptor = descriptor;
  table.dim = dim;
  for (std::size_t ln = 1; ln < lines.size(); ++ln) {
    const std::size_t lineno = ln + 1;
    const auto cells = split(lines[ln], ',');
    if (cells.size() != dim + 2)
      fail(lineno, "expected " + std::to_string(dim + 2) + " columns, found " + std::to_string(cells.size()));
    if (cells[0].empty()) fail(lineno, "empty sample_id");
    const auto label = parse_label(cells[1]);
    if (!label) fail(lineno, "label must be 'normal' or 'abnormal', got '" + std::string(cells[1]) + "'");

    std::vector<double> values(dim);
    for (std::size_t j = 0; j < dim; ++j) {
      const auto cell = cells[j + 2];
      const auto* end = cell.data() + cell.size();
      const auto [ptr, ec] = std::from_chars(cell.data(), end, values[j]);
      if (ec != std::errc() || ptr != end || cell.empty())
        fail(lineno, "cannot parse '" + std::string(cell) + "' as a number");
      if (!std::isfinite(values[j])) fail(lineno, "non-finite value in column " + feature_column_name(j, dim));
    }
    std::string id(cells[0]);
    if (table.rows.count(id)) fail(lineno, "duplicate sample_id " + id);
    table.rows.emplace(std::move(id), FeatureRow{*label, std::move(values)});
  }
  return table;
}

FeatureTable read_feature_csv(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return parse_feature_csv(text, path.stem().string());
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

void write_feature_csv(const FeatureTable& table, const fs::path& path) {
  const std::string text = to_feature_csv(table);
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw Error(ErrorKind::Io, "cannot write " + path.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorKind::Io, "cannot move " + tmp.string() + " into place");
  }
}

FeatureTable combine(const std::vector<FeatureTable>& tables) {
  if (tables.size() < 2) throw Error(ErrorKind::Config, "combine needs at least two tables");

  std::set<std::string> all_ids;
  for (const auto& t : tables)
    for (const auto& [id, row] : t.rows) all_ids.insert(id);

  std::ostringstream problems;
  std::size_t n_problems = 0;
  for (const auto& t : tables) {
    for (const auto& id : all_ids) {
      if (t.rows.count(id)) continue;
      if (n_problems++ < 20) problems << "\n  " << t.descriptor << " is missing " << id;
    }
  }
  for (const auto& [id, row] : tables.front().rows) {
    for (std::size_t k = 1; k < tables.size(); ++k) {
      auto it = tables[k].rows.find(id);
      if (it != tables[k].rows.end() && it->second.label != row.label && n_problems++ < 20)
        problems << "\n  label of " << id << " differs between " << tables.front().descriptor << " and "
                 << tables[k].descriptor;
    }
  }
  if (n_problems > 0)
    throw Error(ErrorKind::Alignment, std::to_string(n_problems) + " alignment problem(s):" + problems.str());

  FeatureTable out;
  for (std::size_t k = 0; k < tables.size(); ++k) {
    out.descriptor += (k ? "+" : "") + tables[k].descriptor;
    out.dim += tables[k].dim;
  }
  for (const auto& id : all_ids) {
    FeatureRow row{tables.front().rows.at(id).label, {}};
    row.values.reserve(out.dim);
    for (const auto& t : tables) {
      const auto& v = t.rows.at(id).values;
      row.values.insert(row.values.end(), v.begin(), v.end());
    }
    out.rows.emplace(id, std::move(row));
  }
  return out;
}

AlignedFeatures align_to_dataset(const FeatureTable& table, const Dataset& dataset) {
  std::vector<std::string> missing;
  std::vector<std::string> mislabeled;
  for (const auto& s : dataset.samples) {
    auto it = table.rows.find(s.id);
    if (it == table.rows.end()) missing.push_back(s.id);
    else if (it->second.label != s.label) mislabeled.push_back(s.id);
  }
  if (!missing.empty() || !mislabeled.empty()) {
    std::string msg = table.descriptor + ": ";
    if (!missing.empty()) {
      msg += std::to_string(missing.size()) + " dataset sample(s) missing from the feature table:";
      for (std::size_t i = 0; i < std::min<std::size_t>(missing.size(), 20); ++i) msg += " " + missing[i];
    }
    if (!mislabeled.empty()) {
      msg += (missing.empty() ? "" : "; ") + std::to_string(mislabeled.size()) + " label mismatch(es):";
      for (std::size_t i = 0; i < std::min<std::size_t>(mislabeled.size(), 20); ++i) msg += " " + mislabeled[i];
    }
    throw Error(ErrorKind::Alignment, msg);
  }

  AlignedFeatures out{Matrix(dataset.size(), table.dim), dataset.labels()};
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto& v = table.rows.at(dataset.samples[i].id).values;
    std::copy(v.begin(), v.end(), out.x.row(i).begin());
  }
  return out;
}

}  // namespace histofeat
