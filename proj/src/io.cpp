#include "sdg/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace sdg {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view s, std::string_view what) {
  s = trim(s);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw ConfigError(std::string(what) + ": cannot parse number '" + std::string(s) + "'");
  }
  return v;
}

std::int64_t parse_int(std::string_view s, std::string_view what) {
  s = trim(s);
  std::int64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw ConfigError(std::string(what) + ": cannot parse integer '" + std::string(s) + "'");
  }
  return v;
}

std::uint64_t parse_seed(std::string_view s, std::string_view what) {
  s = trim(s);
  if (!s.empty() && s.front() == '-') {
    const std::int64_t v = parse_int(s, what);
    return static_cast<std::uint64_t>(v);
  }
  std::uint64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw ConfigError(std::string(what) + ": cannot parse seed '" + std::string(s) + "'");
  }
  return v;
}

std::string unquote(std::string_view v) {
  v = trim(v);
  if (v.size() >= 2 && (v.front() == '"' || v.front() == '\'') && v.back() == v.front()) {
    return std::string(v.substr(1, v.size() - 2));
  }
  return std::string(v);
}

bool looks_literal(std::string_view v) {
  if (v == "true" || v == "false") return true;
  if (!v.empty() && v.front() == '[') return true;
  double d;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), d);
  return res.ec == std::errc{} && res.ptr == v.data() + v.size();
}

std::vector<std::string_view> split_list(std::string_view v) {
  v = trim(v);
  if (!v.empty() && v.front() == '[') v.remove_prefix(1);
  if (!v.empty() && v.back() == ']') v.remove_suffix(1);
  std::vector<std::string_view> out;
  while (!trim(v).empty()) {
    const auto comma = v.find(',');
    out.push_back(trim(v.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    v.remove_prefix(comma + 1);
  }
  return out;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

void ParamRecord::set(std::string key, std::string value) {
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = std::move(value);
      return;
    }
  }
  entries_.emplace_back(std::move(key), std::move(value));
}

bool ParamRecord::contains(std::string_view key) const { return find(key).has_value(); }

std::optional<std::string> ParamRecord::find(std::string_view key) const {
  for (const auto& [k, v] : entries_)
    if (k == key) return v;
  return std::nullopt;
}

std::string ParamRecord::get_string(std::string_view key, std::string_view fallback) const {
  auto v = find(key);
  return v ? *v : std::string(fallback);
}

double ParamRecord::get_double(std::string_view key, double fallback) const {
  auto v = find(key);
  return v ? parse_double(*v, key) : fallback;
}

std::int64_t ParamRecord::get_int(std::string_view key, std::int64_t fallback) const {
  auto v = find(key);
  return v ? parse_int(*v, key) : fallback;
}

std::uint64_t ParamRecord::get_seed(std::string_view key, std::uint64_t fallback) const {
  auto v = find(key);
  return v ? parse_seed(*v, key) : fallback;
}

bool ParamRecord::get_bool(std::string_view key, bool fallback) const {
  auto v = find(key);
  if (!v) return fallback;
  if (*v == "true" || *v == "1") return true;
  if (*v == "false" || *v == "0") return false;
  throw ConfigError(std::string(key) + ": expected true/false, got '" + *v + "'");
}

std::vector<double> ParamRecord::get_doubles(std::string_view key,
                                             std::vector<double> fallback) const {
  auto v = find(key);
  if (!v) return fallback;
  std::vector<double> out;
  for (auto item : split_list(*v)) out.push_back(parse_double(item, key));
  return out;
}

std::vector<std::int64_t> ParamRecord::get_ints(std::string_view key,
                                                std::vector<std::int64_t> fallback) const {
  auto v = find(key);
  if (!v) return fallback;
  std::vector<std::int64_t> out;
  for (auto item : split_list(*v)) out.push_back(parse_int(item, key));
  return out;
}

std::string ParamRecord::to_toml() const {
  std::string out;
  for (const auto& [k, v] : entries_) {
    out += k;
    out += " = ";
    if (looks_literal(v)) {
      out += v;
    } else {
      out += '"';
      out += v;
      out += '"';
    }
    out += '\n';
  }
  return out;
}

std::string ParamRecord::to_comment(std::string_view prefix) const {
  std::string out;
  std::istringstream lines(to_toml());
  for (std::string line; std::getline(lines, line);) {
    out += prefix;
    out += line;
    out += '\n';
  }
  return out;
}

std::string ParamRecord::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : to_toml()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ParamRecord ParamRecord::parse(std::string_view text) {
  ParamRecord rec;
  std::string section;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    // Strip comments outside quotes.
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line = line.substr(0, i);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']' && line.find('=') == std::string_view::npos) {
      section = std::string(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    std::string key(trim(line.substr(0, eq)));
    if (key.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    if (!section.empty()) key = section + "." + key;
    rec.set(std::move(key), unquote(line.substr(eq + 1)));
  }
  return rec;
}

ParamRecord ParamRecord::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

SignedDirectedGraph read_edge_tsv(std::istream& in, std::optional<std::size_t> num_nodes) {
  std::vector<Edge> edges;
  std::size_t max_id_plus_one = 0;
  std::optional<std::size_t> declared = num_nodes;
  std::size_t line_no = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      auto body = trim(line.substr(1));
      if (!num_nodes && body.starts_with("num_nodes")) {
        const auto eq = body.find('=');
        if (eq != std::string_view::npos) {
          declared = static_cast<std::size_t>(parse_int(body.substr(eq + 1), "num_nodes"));
        }
      }
      continue;
    }
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
      const auto tab = line.find('\t', start);
      fields.push_back(trim(line.substr(start, tab - start)));
      if (tab == std::string_view::npos) break;
      start = tab + 1;
    }
    if (fields.size() != 3) {
      throw ConfigError("edge list line " + std::to_string(line_no) +
                        ": expected src<TAB>dst<TAB>weight");
    }
    const auto src = parse_int(fields[0], "src");
    const auto dst = parse_int(fields[1], "dst");
    if (src < 0 || dst < 0) throw ConfigError("edge list: negative node id");
    edges.push_back({static_cast<NodeId>(src), static_cast<NodeId>(dst),
                     parse_double(fields[2], "weight")});
    max_id_plus_one = std::max<std::size_t>(max_id_plus_one,
                                            static_cast<std::size_t>(std::max(src, dst)) + 1);
  }
  return SignedDirectedGraph(declared.value_or(max_id_plus_one), std::move(edges));
}

SignedDirectedGraph read_edge_tsv_file(const std::string& path,
                                       std::optional<std::size_t> num_nodes) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open edge list '" + path + "'");
  return read_edge_tsv(in, num_nodes);
}

void write_edge_tsv(std::ostream& out, const SignedDirectedGraph& g, const ParamRecord* params) {
  if (params) out << params->to_comment("# ");
  out << "# num_nodes = " << g.num_nodes() << '\n';
  for (const Edge& e : g.edges()) {
    out << e.src << '\t' << e.dst << '\t' << format_double(e.weight) << '\n';
  }
}

std::vector<int> read_labels_csv(std::istream& in) {
  std::vector<int> labels;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    const std::string_view row = trim(line);
    if (row.empty() || row.front() == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    const auto fields = split_csv(row);
    if (fields.size() < 2) throw ConfigError("labels CSV: expected node,label rows");
    const auto node = parse_int(fields[0], "node");
    if (node != static_cast<std::int64_t>(labels.size())) {
      throw ConfigError("labels CSV: rows must be in node index order");
    }
    labels.push_back(static_cast<int>(parse_int(fields[1], "label")));
  }
  return labels;
}

std::vector<int> read_labels_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open labels '" + path + "'");
  return read_labels_csv(in);
}

void write_labels_csv(std::ostream& out, std::span<const int> labels, std::string_view column) {
  out << "node," << column << '\n';
  for (std::size_t i = 0; i < labels.size(); ++i) out << i << ',' << labels[i] << '\n';
}

RealMatrix read_features_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  bool header = true;
  std::size_t cols = 0;
  while (std::getline(in, line)) {
    const std::string_view row = trim(line);
    if (row.empty() || row.front() == '#') continue;
    const auto fields = split_csv(row);
    if (header) {
      header = false;
      cols = fields.size();
      continue;
    }
    if (fields.size() != cols) throw ConfigError("features CSV: ragged row");
    std::vector<double> values;
    for (auto f : fields) values.push_back(parse_double(f, "feature"));
    rows.push_back(std::move(values));
  }
  RealMatrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c];
  return m;
}

void write_features_csv(std::ostream& out, const RealMatrix& features) {
  for (std::size_t c = 0; c < features.cols(); ++c) out << (c ? "," : "") << "x" << c;
  out << '\n';
  for (std::size_t r = 0; r < features.rows(); ++r) {
    for (std::size_t c = 0; c < features.cols(); ++c) {
      out << (c ? "," : "") << format_double(features(r, c));
    }
    out << '\n';
  }
}

}  // namespace sdg
