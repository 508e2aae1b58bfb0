#include "catdag/data.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <stdexcept>

#include "catdag/errors.hpp"

namespace catdag {

Dataset::Dataset(std::vector<std::string> names, std::vector<std::vector<std::string>> levels,
                 std::vector<std::vector<int>> columns)
    : names_(std::move(names)), levels_(std::move(levels)), columns_(std::move(columns)) {
  if (names_.size() != levels_.size() || names_.size() != columns_.size()) {
    throw InputError("dataset: names, levels and columns disagree on variable count");
  }
  n_ = columns_.empty() ? 0 : columns_.front().size();
  for (std::size_t j = 0; j < columns_.size(); ++j) {
    if (levels_[j].size() < 2) {
      throw InputError("variable '" + names_[j] + "' has fewer than two levels; remove constant columns");
    }
    if (columns_[j].size() != n_) throw InputError("dataset: columns have different lengths");
    const int card = static_cast<int>(levels_[j].size());
    for (int code : columns_[j]) {
      if (code < 0 || code >= card) {
        throw InputError("variable '" + names_[j] + "': level code out of range");
      }
    }
  }
}

Dataset Dataset::from_rows(std::span<const int> cardinalities, const std::vector<std::vector<int>>& rows) {
  const std::size_t q = cardinalities.size();
  std::vector<std::string> names;
  std::vector<std::vector<std::string>> levels;
  std::vector<std::vector<int>> columns(q);
  for (std::size_t j = 0; j < q; ++j) {
    names.push_back("X" + std::to_string(j + 1));
    std::vector<std::string> lv;
    for (int m = 0; m < cardinalities[j]; ++m) lv.push_back(std::to_string(m));
    levels.push_back(std::move(lv));
    columns[j].reserve(rows.size());
  }
  for (const auto& row : rows) {
    if (row.size() != q) throw InputError("from_rows: row width differs from variable count");
    for (std::size_t j = 0; j < q; ++j) columns[j].push_back(row[j]);
  }
  return Dataset(std::move(names), std::move(levels), std::move(columns));
}

Dataset Dataset::empty(std::span<const int> cardinalities) { return from_rows(cardinalities, {}); }

std::vector<int> Dataset::cardinalities() const {
  std::vector<int> out;
  out.reserve(levels_.size());
  for (const auto& lv : levels_) out.push_back(static_cast<int>(lv.size()));
  return out;
}

int Dataset::find_variable(std::string_view name) const {
  for (std::size_t j = 0; j < names_.size(); ++j) {
    if (names_[j] == name) return static_cast<int>(j);
  }
  return -1;
}

int Dataset::find_level(int j, std::string_view label) const {
  const auto& lv = levels_[static_cast<std::size_t>(j)];
  for (std::size_t m = 0; m < lv.size(); ++m) {
    if (lv[m] == label) return static_cast<int>(m);
  }
  return -1;
}

Dataset Dataset::select_rows(std::span<const std::size_t> rows) const {
  std::vector<std::vector<int>> columns(columns_.size());
  for (std::size_t j = 0; j < columns_.size(); ++j) {
    columns[j].reserve(rows.size());
    for (std::size_t i : rows) columns[j].push_back(columns_[j].at(i));
  }
  return Dataset(names_, levels_, std::move(columns));
}

namespace {

// Splits one CSV record. Quoted fields may contain the delimiter and doubled quotes.
std::vector<std::string> split_record(const std::string& line, char delim, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(ch);
      }
    } else if (ch == '"' && field.empty() && !was_quoted) {
      quoted = true;
      was_quoted = true;
    } else if (ch == delim) {
      fields.push_back(std::move(field));
      field.clear();
      was_quoted = false;
    } else {
      field.push_back(ch);
    }
  }
  if (quoted) throw InputError("line " + std::to_string(line_no) + ": unterminated quoted field");
  fields.push_back(std::move(field));
  return fields;
}

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !(c == ' ' || c == '\t' || c == '\r'); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

}  // namespace

Dataset parse_csv(std::istream& in, const CsvOptions& options) {
  std::vector<std::string> names;
  std::vector<std::vector<std::string>> raw;  // per row
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  bool have_width = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    auto fields = split_record(line, options.delimiter, line_no);
    for (auto& f : fields) f = trim(std::move(f));
    if (!have_width) {
      width = fields.size();
      have_width = true;
      if (options.header) {
        names = std::move(fields);
        continue;
      }
    }
    if (fields.size() != width) {
      throw InputError("line " + std::to_string(line_no) + ": expected " + std::to_string(width) +
                       " fields, found " + std::to_string(fields.size()) + " (table is not rectangular)");
    }
    for (std::size_t j = 0; j < fields.size(); ++j) {
      if (fields[j].empty()) {
        const std::string col = options.header ? "'" + names[j] + "'" : std::to_string(j + 1);
        throw InputError("missing cell at line " + std::to_string(line_no) + ", column " + col);
      }
    }
    raw.push_back(std::move(fields));
  }
  if (!have_width) throw InputError("empty input: no header and no data rows");
  if (raw.empty()) throw InputError("no data rows");
  if (!options.header) {
    for (std::size_t j = 0; j < width; ++j) names.push_back("X" + std::to_string(j + 1));
  }

  std::vector<std::vector<std::string>> levels(width);
  std::vector<std::vector<int>> columns(width);
  for (std::size_t j = 0; j < width; ++j) {
    std::vector<std::string> lv;
    lv.reserve(raw.size());
    for (const auto& row : raw) lv.push_back(row[j]);
    std::sort(lv.begin(), lv.end());
    lv.erase(std::unique(lv.begin(), lv.end()), lv.end());
    if (lv.size() < 2) {
      throw InputError("column '" + names[j] + "' is constant (single level '" + lv.front() +
                       "'); remove it before learning");
    }
    columns[j].reserve(raw.size());
    for (const auto& row : raw) {
      columns[j].push_back(static_cast<int>(std::lower_bound(lv.begin(), lv.end(), row[j]) - lv.begin()));
    }
    levels[j] = std::move(lv);
  }
  return Dataset(std::move(names), std::move(levels), std::move(columns));
}

Dataset ingest_csv(const std::filesystem::path& path, const CsvOptions& options) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  return parse_csv(in, options);
}

void write_csv(std::ostream& out, const Dataset& ds, const CsvOptions& options) {
  const auto emit = [&](const std::string& s) {
    if (s.find(options.delimiter) != std::string::npos || s.find('"') != std::string::npos) {
      out << '"';
      for (char c : s) {
        if (c == '"') out << '"';
        out << c;
      }
      out << '"';
    } else {
      out << s;
    }
  };
  const int q = ds.num_vars();
  if (options.header) {
    for (int j = 0; j < q; ++j) {
      if (j) out << options.delimiter;
      emit(ds.name(j));
    }
    out << '\n';
  }
  for (std::size_t i = 0; i < ds.num_rows(); ++i) {
    for (int j = 0; j < q; ++j) {
      if (j) out << options.delimiter;
      emit(ds.levels(j)[static_cast<std::size_t>(ds.at(i, j))]);
    }
    out << '\n';
  }
}

ConfigCoder::ConfigCoder(std::span<const int> parents, std::span<const int> cardinalities) {
  strides_.reserve(parents.size());
  for (int p : parents) {
    const auto card = static_cast<std::uint64_t>(cardinalities[static_cast<std::size_t>(p)]);
    strides_.push_back(size_);
    cards_.push_back(static_cast<int>(card));
    if (size_ > (std::numeric_limits<std::uint64_t>::max() >> 1) / card) {
      throw InputError("parent configuration space exceeds 2^63 cells");
    }
    size_ *= card;
  }
}

std::uint64_t ConfigCoder::encode(std::span<const int> digits) const {
  std::uint64_t k = 0;
  for (std::size_t i = 0; i < strides_.size(); ++i) k += static_cast<std::uint64_t>(digits[i]) * strides_[i];
  return k;
}

std::vector<int> ConfigCoder::decode(std::uint64_t config) const {
  std::vector<int> digits(cards_.size());
  for (std::size_t i = 0; i < cards_.size(); ++i) {
    digits[i] = static_cast<int>(config % static_cast<std::uint64_t>(cards_[i]));
    config /= static_cast<std::uint64_t>(cards_[i]);
  }
  return digits;
}

const ConfigCounts* FamilyCounts::find(std::uint64_t config) const {
  auto it = std::lower_bound(table.begin(), table.end(), config,
                             [](const ConfigCounts& c, std::uint64_t k) { return c.config < k; });
  return (it != table.end() && it->config == config) ? &*it : nullptr;
}

std::uint64_t FamilyCounts::total() const {
  std::uint64_t sum = 0;
  for (const auto& row : table) {
    for (auto c : row.counts) sum += c;
  }
  return sum;
}

FamilyCounts family_counts(const Dataset& ds, int j, std::span<const int> parents) {
  const int q = ds.num_vars();
  if (j < 0 || j >= q) throw std::out_of_range("family_counts: node out of range");
  for (int p : parents) {
    if (p == j) throw std::logic_error("family_counts: node is listed among its own parents");
    if (p < 0 || p >= q) throw std::out_of_range("family_counts: parent out of range");
  }
  const auto cards = ds.cardinalities();
  const ConfigCoder coder(parents, cards);

  FamilyCounts fc;
  fc.node = j;
  fc.parents.assign(parents.begin(), parents.end());
  fc.node_cardinality = cards[static_cast<std::size_t>(j)];
  fc.num_configs = coder.size();

  const std::size_t n = ds.num_rows();
  std::vector<std::uint64_t> keys(n, 0);
  for (std::size_t i = 0; i < parents.size(); ++i) {
    const auto col = ds.column(parents[i]);
    const std::uint64_t stride = coder.stride(i);
    for (std::size_t r = 0; r < n; ++r) keys[r] += static_cast<std::uint64_t>(col[r]) * stride;
  }
  std::map<std::uint64_t, std::vector<std::uint32_t>> table;
  const auto xj = ds.column(j);
  for (std::size_t r = 0; r < n; ++r) {
    auto& counts = table[keys[r]];
    if (counts.empty()) counts.assign(static_cast<std::size_t>(fc.node_cardinality), 0);
    ++counts[static_cast<std::size_t>(xj[r])];
  }
  fc.table.reserve(table.size());
  for (auto& [k, counts] : table) fc.table.push_back({k, std::move(counts)});
  return fc;
}

std::size_t CountsCache::KeyHash::operator()(const Key& key) const noexcept {
  std::size_t h = 0x9e3779b97f4a7c15ULL;
  for (int v : key) h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

CountsCache::CountsCache(const Dataset& ds, std::size_t capacity)
    : ds_(&ds), capacity_(std::max<std::size_t>(capacity, 1)) {}

std::shared_ptr<const FamilyCounts> CountsCache::get(int j, std::span<const int> parents) {
  Key key;
  key.reserve(parents.size() + 1);
  key.push_back(j);
  key.insert(key.end(), parents.begin(), parents.end());
  std::sort(key.begin() + 1, key.end());
  {
    std::lock_guard lock(mu_);
    if (auto it = index_.find(key); it != index_.end()) {
      lru_.splice(lru_.begin(), lru_, it->second);
      ++hits_;
      return it->second->second;
    }
    ++misses_;
  }
  auto fresh = std::make_shared<const FamilyCounts>(
      family_counts(*ds_, j, std::span<const int>(key).subspan(1)));
  std::lock_guard lock(mu_);
  if (auto it = index_.find(key); it != index_.end()) return it->second->second;
  lru_.emplace_front(key, fresh);
  index_.emplace(std::move(key), lru_.begin());
  while (lru_.size() > capacity_) {
    index_.erase(lru_.back().first);
    lru_.pop_back();
  }
  return fresh;
}

std::size_t CountsCache::size() const {
  std::lock_guard lock(mu_);
  return lru_.size();
}

std::size_t CountsCache::hits() const {
  std::lock_guard lock(mu_);
  return hits_;
}

std::size_t CountsCache::misses() const {
  std::lock_guard lock(mu_);
  return misses_;
}

}  // namespace catdag
