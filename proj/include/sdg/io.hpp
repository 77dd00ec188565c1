#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sdg/common.hpp"
#include "sdg/graph.hpp"

namespace sdg {

/// Ordered key=value record, TOML-compatible when written. Used both for
/// configs and for the provenance header echoed into output files.
class ParamRecord {
 public:
  void set(std::string key, std::string value);
  void set(std::string key, double value) { set(std::move(key), format_double(value)); }
  void set(std::string key, std::int64_t value) { set(std::move(key), std::to_string(value)); }
  void set(std::string key, std::uint64_t value) { set(std::move(key), std::to_string(value)); }
  void set(std::string key, int value) { set(std::move(key), std::int64_t{value}); }
  void set(std::string key, bool value) { set(std::move(key), std::string(value ? "true" : "false")); }
  void set(std::string key, const char* value) { set(std::move(key), std::string(value)); }

  bool contains(std::string_view key) const;
  std::optional<std::string> find(std::string_view key) const;

  std::string get_string(std::string_view key, std::string_view fallback) const;
  double get_double(std::string_view key, double fallback) const;
  std::int64_t get_int(std::string_view key, std::int64_t fallback) const;
  /// Full 64-bit unsigned range, for RNG seeds.
  std::uint64_t get_seed(std::string_view key, std::uint64_t fallback) const;
  bool get_bool(std::string_view key, bool fallback) const;
  /// Comma separated list, "[a, b]" brackets optional.
  std::vector<double> get_doubles(std::string_view key, std::vector<double> fallback) const;
  std::vector<std::int64_t> get_ints(std::string_view key, std::vector<std::int64_t> fallback) const;

  const std::vector<std::pair<std::string, std::string>>& entries() const noexcept {
    return entries_;
  }

  /// "key = value" lines; strings that are not numbers/bools/lists are quoted.
  std::string to_toml() const;
  /// Same lines, each prefixed by `prefix` (e.g. "# ").
  std::string to_comment(std::string_view prefix) const;
  /// FNV-1a 64 of to_toml(), as 16 hex digits.
  std::string hash() const;

  /// Parses key = value lines; `[section]` headers prefix keys as "section.key".
  static ParamRecord parse(std::string_view text);
  static ParamRecord load(const std::string& path);

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

/// `src<TAB>dst<TAB>weight` per line; leading '#' lines are comments. Node count
/// is max id + 1 unless `num_nodes` is given (a "# num_nodes = N" header also works).
SignedDirectedGraph read_edge_tsv(std::istream& in, std::optional<std::size_t> num_nodes = {});
SignedDirectedGraph read_edge_tsv_file(const std::string& path,
                                       std::optional<std::size_t> num_nodes = {});
void write_edge_tsv(std::ostream& out, const SignedDirectedGraph& g, const ParamRecord* params);

/// CSV with header "node,label".
std::vector<int> read_labels_csv(std::istream& in);
std::vector<int> read_labels_csv_file(const std::string& path);
void write_labels_csv(std::ostream& out, std::span<const int> labels,
                      std::string_view column = "label");

/// CSV with a header row of column names, one node per row.
RealMatrix read_features_csv(std::istream& in);
void write_features_csv(std::ostream& out, const RealMatrix& features);

}  // namespace sdg
