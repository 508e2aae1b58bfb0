#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <list>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace catdag {

/// n x q matrix of categorical observations, each column coded 0..|levels_j|-1.
/// Stored column-major; immutable after construction.
class Dataset {
 public:
  Dataset() = default;

  /// `columns[j][i]` is the level index of row i for variable j. Throws
  /// InputError if a code is out of range, a variable has fewer than two
  /// levels, or columns differ in length.
  Dataset(std::vector<std::string> names, std::vector<std::vector<std::string>> levels,
          std::vector<std::vector<int>> columns);

  /// Convenience for synthetic data: variables named X1..Xq with levels "0".."c-1".
  static Dataset from_rows(std::span<const int> cardinalities, const std::vector<std::vector<int>>& rows);

  /// Zero-row dataset with the given cardinalities.
  static Dataset empty(std::span<const int> cardinalities);

  std::size_t num_rows() const { return n_; }
  int num_vars() const { return static_cast<int>(names_.size()); }

  int cardinality(int j) const { return static_cast<int>(levels_[static_cast<std::size_t>(j)].size()); }
  std::vector<int> cardinalities() const;
  const std::vector<std::string>& levels(int j) const { return levels_[static_cast<std::size_t>(j)]; }
  const std::string& name(int j) const { return names_[static_cast<std::size_t>(j)]; }
  const std::vector<std::string>& names() const { return names_; }

  int at(std::size_t row, int j) const { return columns_[static_cast<std::size_t>(j)][row]; }
  std::span<const int> column(int j) const { return columns_[static_cast<std::size_t>(j)]; }

  /// Variable index by name; -1 if absent.
  int find_variable(std::string_view name) const;
  /// Level index by label; -1 if absent.
  int find_level(int j, std::string_view label) const;

  /// Same variables, rows permuted / repeated as given.
  Dataset select_rows(std::span<const std::size_t> rows) const;

 private:
  std::size_t n_ = 0;
  std::vector<std::string> names_;
  std::vector<std::vector<std::string>> levels_;
  std::vector<std::vector<int>> columns_;
};

struct CsvOptions {
  char delimiter = ',';
  bool header = true;
};

/// Reads a rectangular categorical table. Levels per column are the distinct
/// labels sorted lexicographically (byte order).
Dataset parse_csv(std::istream& in, const CsvOptions& options = {});
Dataset ingest_csv(const std::filesystem::path& path, const CsvOptions& options = {});
void write_csv(std::ostream& out, const Dataset& ds, const CsvOptions& options = {});

/// Mixed-radix coding of a parent configuration; the first parent is the
/// least significant digit. Throws InputError if the configuration space
/// does not fit in 63 bits.
class ConfigCoder {
 public:
  ConfigCoder(std::span<const int> parents, std::span<const int> cardinalities);

  std::uint64_t size() const { return size_; }
  std::uint64_t stride(std::size_t i) const { return strides_[i]; }
  std::uint64_t encode(std::span<const int> digits) const;
  std::vector<int> decode(std::uint64_t config) const;

 private:
  std::vector<int> cards_;
  std::vector<std::uint64_t> strides_;
  std::uint64_t size_ = 1;
};

struct ConfigCounts {
  std::uint64_t config = 0;
  std::vector<std::uint32_t> counts;  // over the levels of the node
};

/// Contingency table of a family: one count vector per observed parent
/// configuration. Unobserved configurations are absent (all-zero).
struct FamilyCounts {
  int node = 0;
  std::vector<int> parents;
  int node_cardinality = 0;
  std::uint64_t num_configs = 1;  // |X_pa|
  std::vector<ConfigCounts> table;  // sorted by config

  const ConfigCounts* find(std::uint64_t config) const;
  std::uint64_t total() const;
};

/// Counts n_(m,k) = #{i : x_j = m, x_pa = k}. Throws std::logic_error if j is
/// among the parents.
FamilyCounts family_counts(const Dataset& ds, int j, std::span<const int> parents);

/// Memoized family tables keyed by (j, sorted parent set) with LRU eviction.
/// Safe for concurrent use.
class CountsCache {
 public:
  static constexpr std::size_t kDefaultCapacity = 4096;

  explicit CountsCache(const Dataset& ds, std::size_t capacity = kDefaultCapacity);

  /// `parents` is sorted before lookup.
  std::shared_ptr<const FamilyCounts> get(int j, std::span<const int> parents);

  const Dataset& dataset() const { return *ds_; }
  std::size_t size() const;
  std::size_t hits() const;
  std::size_t misses() const;

 private:
  using Key = std::vector<int>;  // node followed by sorted parents
  struct KeyHash {
    std::size_t operator()(const Key& key) const noexcept;
  };

  const Dataset* ds_;
  std::size_t capacity_;
  mutable std::mutex mu_;
  std::list<std::pair<Key, std::shared_ptr<const FamilyCounts>>> lru_;
  std::unordered_map<Key, decltype(lru_)::iterator, KeyHash> index_;
  std::size_t hits_ = 0;
  std::size_t misses_ = 0;
};

}  // namespace catdag
