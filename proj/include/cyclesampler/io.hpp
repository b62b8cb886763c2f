#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "diagnostics.hpp"
#include "errors.hpp"
#include "graph.hpp"

namespace cyclesampler {

/// Preprocessing switches applied while reading an edge list, in this
/// order: dedupe, cap filter, scaling.
struct IngestionOptions {
  bool dedupe = false;
  /// Drop rows whose weight exceeds this cap (strictly above).
  std::optional<double> rating_cap;
  /// Affinely map the kept weights into the open unit interval.
  bool scale_to_unit = false;
  /// Keep source and target labels in distinct namespaces, as needed for
  /// (user, item, rating) triples where both columns may use the same raw
  /// strings.  Sources get the "u:" prefix, targets "i:".
  bool bipartite_prefixing = false;
};

struct IngestionStats {
  std::uint64_t rows_read = 0;
  std::uint64_t duplicates_dropped = 0;
  std::uint64_t cap_dropped = 0;
  bool scaled = false;
  double scale_min = 0.0;  // pre-scaling weight range, for invertibility
  double scale_max = 0.0;
};

/// Affine scaling writes into [epsilon, 1-epsilon]: honoring an open-(0,1)
/// target while staying a plain affine map.
inline constexpr double scale_epsilon = 1e-6;

/// An edge list as read from disk: interned labels, edges over dense ids in
/// post-filter file order, weights, and what preprocessing did.
struct ParsedEdges {
  std::vector<std::string> labels;                  // vertex id -> label
  std::unordered_map<std::string, VertexId> ids;    // label -> vertex id
  std::vector<Edge> edges;
  std::vector<double> weights;
  bool directed = false;
  IngestionStats stats;
};

namespace detail {

inline bool is_comment_or_blank(const std::string& line) {
  for (char c : line) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    return c == '#';
  }
  return true;
}

/// Splits on an explicit delimiter, or on runs of whitespace when
/// delim == '\0'.
inline std::vector<std::string> split_fields(const std::string& line, char delim) {
  std::vector<std::string> fields;
  if (delim == '\0') {
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      std::size_t j = i;
      while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
      if (j > i) fields.push_back(line.substr(i, j - i));
      i = j;
    }
    return fields;
  }
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == delim) {
      std::string f = line.substr(start, i - start);
      // Trim surrounding whitespace inside delimited fields.
      while (!f.empty() && std::isspace(static_cast<unsigned char>(f.front()))) f.erase(f.begin());
      while (!f.empty() && std::isspace(static_cast<unsigned char>(f.back()))) f.pop_back();
      fields.push_back(std::move(f));
      start = i + 1;
    }
  }
  return fields;
}

inline char detect_delimiter(const std::string& line) {
  if (line.find('\t') != std::string::npos) return '\t';
  if (line.find(',') != std::string::npos) return ',';
  return '\0';  // whitespace
}

inline double parse_double(const std::string& token, const std::string& path,
                           std::uint64_t line_no) {
  const char* begin = token.c_str();
  char* end = nullptr;
  const double value = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || !std::isfinite(value)) {
    throw io_error(path + ":" + std::to_string(line_no) +
                   ": non-numeric weight '" + token + "'");
  }
  return value;
}

/// Reads a text file line by line, stripping trailing CR, feeding only
/// data lines to the callback with their 1-based line number.  The
/// delimiter is auto-detected from the first data line.
inline void for_each_data_line(
    const std::filesystem::path& path,
    const std::function<void(std::uint64_t, const std::vector<std::string>&)>& fn) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open " + path.string());
  std::string line;
  std::uint64_t line_no = 0;
  char delim = '\1';  // unset
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (is_comment_or_blank(line)) continue;
    if (delim == '\1') delim = detect_delimiter(line);
    fn(line_no, split_fields(line, delim));
  }
}

/// Fixed-width shortest-round-trip double formatting: %.17g reproduces the
/// exact bit pattern on re-parse, which the determinism and round-trip
/// contracts rely on.
inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace detail

/// Reads delimiter-separated (source, target, weight) triples.  Lines
/// starting with '#' and blank lines are skipped; the delimiter (tab,
/// comma, or whitespace) is detected from the first data line.  Dedupe
/// keeps the first occurrence of a repeated pair — unordered for
/// undirected input, ordered for directed — then the cap filter and the
/// unit-interval scaling are applied, in that order.  Vertex ids are
/// assigned densely in order of first appearance among the kept rows.
inline ParsedEdges parse_edges(const std::filesystem::path& path,
                               const IngestionOptions& options,
                               bool directed = false) {
  if (options.rating_cap && *options.rating_cap <= 0.0) {
    throw argument_error("rating cap must be positive");
  }
  struct Row {
    std::string source, target;
    double weight;
  };
  std::vector<Row> rows;
  ParsedEdges out;
  out.directed = directed;

  detail::for_each_data_line(path, [&](std::uint64_t line_no,
                                       const std::vector<std::string>& fields) {
    if (fields.size() != 3) {
      throw io_error(path.string() + ":" + std::to_string(line_no) +
                     ": expected 3 fields (source, target, weight), got " +
                     std::to_string(fields.size()));
    }
    if (fields[0].empty() || fields[1].empty()) {
      throw io_error(path.string() + ":" + std::to_string(line_no) +
                     ": empty vertex label");
    }
    ++out.stats.rows_read;
    Row row{fields[0], fields[1],
            detail::parse_double(fields[2], path.string(), line_no)};
    if (options.bipartite_prefixing) {
      row.source = "u:" + row.source;
      row.target = "i:" + row.target;
    }
    rows.push_back(std::move(row));
  });
  if (rows.empty()) {
    throw io_error(path.string() + ": no edge rows found");
  }

  if (options.dedupe) {
    std::unordered_map<std::string, bool> seen;
    seen.reserve(rows.size() * 2);
    std::vector<Row> kept;
    kept.reserve(rows.size());
    for (Row& row : rows) {
      // Key on the label pair; undirected pairs are normalized so {a,b}
      // and {b,a} collide.
      std::string key =
          (!directed && row.target < row.source)
              ? row.target + '\x1f' + row.source
              : row.source + '\x1f' + row.target;
      if (seen.emplace(std::move(key), true).second) {
        kept.push_back(std::move(row));
      } else {
        ++out.stats.duplicates_dropped;
      }
    }
    rows = std::move(kept);
  }

  if (options.rating_cap) {
    std::vector<Row> kept;
    kept.reserve(rows.size());
    for (Row& row : rows) {
      if (row.weight > *options.rating_cap) {
        ++out.stats.cap_dropped;
      } else {
        kept.push_back(std::move(row));
      }
    }
    rows = std::move(kept);
    if (rows.empty()) {
      throw io_error(path.string() + ": cap filter removed every edge");
    }
  }

  if (options.scale_to_unit) {
    double lo = rows.front().weight, hi = rows.front().weight;
    for (const Row& row : rows) {
      lo = std::min(lo, row.weight);
      hi = std::max(hi, row.weight);
    }
    out.stats.scaled = true;
    out.stats.scale_min = lo;
    out.stats.scale_max = hi;
    for (Row& row : rows) {
      row.weight = (hi > lo)
                       ? scale_epsilon + (row.weight - lo) *
                                             (1.0 - 2.0 * scale_epsilon) / (hi - lo)
                       : 0.5;  // all weights equal: midpoint
    }
  }

  auto intern = [&out](const std::string& label) {
    const auto [it, inserted] =
        out.ids.emplace(label, static_cast<VertexId>(out.labels.size()));
    if (inserted) out.labels.push_back(label);
    return it->second;
  };
  out.edges.reserve(rows.size());
  out.weights.reserve(rows.size());
  for (const Row& row : rows) {
    const VertexId u = intern(row.source);
    const VertexId v = intern(row.target);
    out.edges.push_back(Edge{u, v});
    out.weights.push_back(row.weight);
  }
  return out;
}

/// Human-readable edge name: the two endpoint labels joined by '~', in
/// input order (which is also the direction for directed edges).  Used in
/// output headers and as the label column of per-edge constraint files.
inline std::string edge_label(const ParsedEdges& parsed, EdgeId e) {
  return parsed.labels[parsed.edges[e].u] + "~" + parsed.labels[parsed.edges[e].v];
}

/// How vertex-weight constraints are specified.
enum class VertexMode { exact, ratio, interval, file };

/// Full constraint configuration for one run.
struct ConstraintSpec {
  Interval edge_interval{0.0, 1.0};
  std::optional<std::filesystem::path> edge_bounds_file;  // overrides interval
  VertexMode vertex_mode = VertexMode::exact;
  double ratio = 0.0;                  // ratio mode: [(1−ρ)·W, (1+ρ)·W]
  Interval vertex_interval{0.0, 0.0};  // interval mode
  std::optional<std::filesystem::path> vertex_bounds_file;
  bool directed = false;
};

namespace detail {

/// Reads a (label, lo, hi) constraint file into a map.  Duplicate labels
/// are an error; validity of the labels themselves is checked by callers,
/// who know the namespace (vertex labels, edge labels, out:/in: prefixes).
inline std::unordered_map<std::string, Interval> read_bounds_file(
    const std::filesystem::path& path) {
  std::unordered_map<std::string, Interval> bounds;
  for_each_data_line(path, [&](std::uint64_t line_no,
                               const std::vector<std::string>& fields) {
    if (fields.size() != 3) {
      throw io_error(path.string() + ":" + std::to_string(line_no) +
                     ": expected 3 fields (label, lo, hi), got " +
                     std::to_string(fields.size()));
    }
    const double lo = parse_double(fields[1], path.string(), line_no);
    const double hi = parse_double(fields[2], path.string(), line_no);
    if (lo > hi) {
      throw io_error(path.string() + ":" + std::to_string(line_no) +
                     ": empty interval (lo > hi)");
    }
    if (!bounds.emplace(fields[0], Interval{lo, hi}).second) {
      throw io_error(path.string() + ":" + std::to_string(line_no) +
                     ": duplicate label '" + fields[0] + "'");
    }
  });
  return bounds;
}

inline std::vector<Interval> edge_bounds_for(const ParsedEdges& parsed,
                                             const ConstraintSpec& spec) {
  std::vector<Interval> bounds;
  bounds.reserve(parsed.edges.size());
  if (!spec.edge_bounds_file) {
    bounds.assign(parsed.edges.size(), spec.edge_interval);
    return bounds;
  }
  auto file = read_bounds_file(*spec.edge_bounds_file);
  for (EdgeId e = 0; e < parsed.edges.size(); ++e) {
    const std::string label = edge_label(parsed, e);
    const auto it = file.find(label);
    if (it == file.end()) {
      throw io_error(spec.edge_bounds_file->string() +
                     ": no bounds for edge '" + label + "'");
    }
    bounds.push_back(it->second);
  }
  if (file.size() != parsed.edges.size()) {
    throw io_error(spec.edge_bounds_file->string() +
                   ": file lists bounds for unknown edges");
  }
  return bounds;
}

inline Interval vertex_interval_for(double observed, const ConstraintSpec& spec) {
  switch (spec.vertex_mode) {
    case VertexMode::exact:
      return {observed, observed};
    case VertexMode::ratio: {
      const double a = (1.0 - spec.ratio) * observed;
      const double b = (1.0 + spec.ratio) * observed;
      return {std::min(a, b), std::max(a, b)};
    }
    case VertexMode::interval:
      return spec.vertex_interval;
    case VertexMode::file:
      throw invariant_error("file mode resolved per label, not per value");
  }
  throw invariant_error("unhandled vertex mode");
}

}  // namespace detail

/// Assembles the undirected constrained graph: edge bounds from the global
/// interval or per-edge file, vertex bounds from the chosen vertex mode.
/// In file mode, vertices without a row keep their observed weight as an
/// exact constraint.
inline WeightedGraph build_graph(const ParsedEdges& parsed,
                                 const ConstraintSpec& spec) {
  if (spec.directed || parsed.directed) {
    throw argument_error("build_graph expects undirected input");
  }
  if (spec.ratio < 0.0) throw argument_error("vertex ratio must be >= 0");
  std::vector<double> observed(parsed.labels.size(), 0.0);
  for (std::size_t e = 0; e < parsed.edges.size(); ++e) {
    const Edge& edge = parsed.edges[e];
    if (edge.is_loop()) {
      observed[edge.u] += 2.0 * parsed.weights[e];
    } else {
      observed[edge.u] += parsed.weights[e];
      observed[edge.v] += parsed.weights[e];
    }
  }
  std::vector<Interval> vertex_bounds(parsed.labels.size());
  if (spec.vertex_mode == VertexMode::file) {
    if (!spec.vertex_bounds_file) {
      throw argument_error("vertex file mode needs a bounds file path");
    }
    auto file = detail::read_bounds_file(*spec.vertex_bounds_file);
    for (VertexId v = 0; v < parsed.labels.size(); ++v) {
      const auto it = file.find(parsed.labels[v]);
      vertex_bounds[v] = (it != file.end())
                             ? it->second
                             : Interval{observed[v], observed[v]};
      if (it != file.end()) file.erase(it);
    }
    if (!file.empty()) {
      throw io_error(spec.vertex_bounds_file->string() +
                     ": bounds for unknown vertex '" + file.begin()->first + "'");
    }
  } else {
    for (VertexId v = 0; v < parsed.labels.size(); ++v) {
      vertex_bounds[v] = detail::vertex_interval_for(observed[v], spec);
    }
  }
  return WeightedGraph(static_cast<VertexId>(parsed.labels.size()), parsed.edges,
                       parsed.weights, detail::edge_bounds_for(parsed, spec),
                       std::move(vertex_bounds));
}

/// Assembles the directed constrained graph.  Vertex modes apply to the
/// out-sum and in-sum separately; in file mode, labels may be prefixed
/// "out:" or "in:" to constrain one side only, while a bare label
/// constrains both sides with the same interval.
inline DirectedWeightedGraph build_directed_graph(const ParsedEdges& parsed,
                                                  const ConstraintSpec& spec) {
  if (!parsed.directed) {
    throw argument_error("build_directed_graph expects directed input");
  }
  if (spec.ratio < 0.0) throw argument_error("vertex ratio must be >= 0");
  const auto n = static_cast<VertexId>(parsed.labels.size());
  std::vector<double> out_sum(n, 0.0), in_sum(n, 0.0);
  for (std::size_t e = 0; e < parsed.edges.size(); ++e) {
    out_sum[parsed.edges[e].u] += parsed.weights[e];
    in_sum[parsed.edges[e].v] += parsed.weights[e];
  }
  std::vector<Interval> out_bounds(n), in_bounds(n);
  if (spec.vertex_mode == VertexMode::file) {
    if (!spec.vertex_bounds_file) {
      throw argument_error("vertex file mode needs a bounds file path");
    }
    const auto file = detail::read_bounds_file(*spec.vertex_bounds_file);
    std::uint64_t used = 0;
    for (VertexId v = 0; v < n; ++v) {
      const std::string& label = parsed.labels[v];
      const auto both = file.find(label);
      const auto out_it = file.find("out:" + label);
      const auto in_it = file.find("in:" + label);
      if (both != file.end() && (out_it != file.end() || in_it != file.end())) {
        throw io_error(spec.vertex_bounds_file->string() + ": vertex '" + label +
                       "' has both a bare row and a prefixed row");
      }
      out_bounds[v] = Interval{out_sum[v], out_sum[v]};
      in_bounds[v] = Interval{in_sum[v], in_sum[v]};
      if (both != file.end()) {
        out_bounds[v] = in_bounds[v] = both->second;
        ++used;
      }
      if (out_it != file.end()) {
        out_bounds[v] = out_it->second;
        ++used;
      }
      if (in_it != file.end()) {
        in_bounds[v] = in_it->second;
        ++used;
      }
    }
    if (used != file.size()) {
      throw io_error(spec.vertex_bounds_file->string() +
                     ": file lists bounds for unknown vertices");
    }
  } else {
    for (VertexId v = 0; v < n; ++v) {
      out_bounds[v] = detail::vertex_interval_for(out_sum[v], spec);
      in_bounds[v] = detail::vertex_interval_for(in_sum[v], spec);
    }
  }
  return DirectedWeightedGraph(n, parsed.edges, parsed.weights,
                               detail::edge_bounds_for(parsed, spec),
                               std::move(out_bounds), std::move(in_bounds));
}

/// FNV-1a 64-bit content hash, rendered as fixed-width hex.  Used to bind
/// manifests to the exact bytes of their input and constraint files.
inline std::string file_hash(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open " + path.string() + " for hashing");
  std::uint64_t h = 14695981039346656037ULL;
  char buf[1 << 16];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    const std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ULL;
    }
  }
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
  return hex;
}

/// Serializes an edge list back to tab-separated triples (with a header
/// comment).  Weights are written with full round-trip precision, so
/// parse -> write -> parse is the identity on labels, edges, and weights.
inline void write_edge_list(const std::filesystem::path& path,
                            const ParsedEdges& parsed) {
  std::ofstream outf(path);
  if (!outf) throw io_error("cannot write " + path.string());
  outf << "# source\ttarget\tweight\n";
  for (std::size_t e = 0; e < parsed.edges.size(); ++e) {
    outf << parsed.labels[parsed.edges[e].u] << '\t'
         << parsed.labels[parsed.edges[e].v] << '\t'
         << detail::format_double(parsed.weights[e]) << '\n';
  }
  if (!outf.flush()) throw io_error("failed writing " + path.string());
}

/// Streams sample rows to a TSV file: a '#'-prefixed header naming every
/// edge, then one row per sample — sample index followed by the weights of
/// the original edges in input order, full precision.
class SamplesWriter {
 public:
  SamplesWriter(const std::filesystem::path& path,
                std::span<const std::string> edge_labels)
      : path_(path.string()), out_(path) {
    if (!out_) throw io_error("cannot write " + path_);
    out_ << "#sample";
    for (const std::string& label : edge_labels) {
      std::string clean = label;
      std::replace(clean.begin(), clean.end(), '\t', ' ');
      out_ << '\t' << clean;
    }
    out_ << '\n';
  }

  void write_row(std::uint64_t index, std::span<const double> weights) {
    out_ << index;
    for (double w : weights) out_ << '\t' << detail::format_double(w);
    out_ << '\n';
    if (!out_) throw io_error("failed writing " + path_);
  }

  void close() {
    if (out_.is_open() && !out_.flush()) {
      throw io_error("failed writing " + path_);
    }
    out_.close();
  }

 private:
  std::string path_;
  std::ofstream out_;
};

/// Reads a samples TSV produced by SamplesWriter, invoking the callback
/// per row with the sample index and its weights.  The column count must
/// match `expected_columns` (the original edge count).
inline void read_samples(
    const std::filesystem::path& path, std::size_t expected_columns,
    const std::function<void(std::uint64_t, std::span<const double>)>& fn) {
  std::vector<double> row(expected_columns, 0.0);
  bool any = false;
  detail::for_each_data_line(path, [&](std::uint64_t line_no,
                                       const std::vector<std::string>& fields) {
    if (fields.size() != expected_columns + 1) {
      throw io_error(path.string() + ":" + std::to_string(line_no) +
                     ": expected " + std::to_string(expected_columns + 1) +
                     " columns, got " + std::to_string(fields.size()));
    }
    char* end = nullptr;
    const unsigned long long index = std::strtoull(fields[0].c_str(), &end, 10);
    if (end == fields[0].c_str() || *end != '\0') {
      throw io_error(path.string() + ":" + std::to_string(line_no) +
                     ": malformed sample index '" + fields[0] + "'");
    }
    for (std::size_t i = 0; i < expected_columns; ++i) {
      row[i] = detail::parse_double(fields[i + 1], path.string(), line_no);
    }
    any = true;
    fn(index, row);
  });
  if (!any) throw io_error(path.string() + ": no sample rows found");
}

/// Writes the convergence trace: cumulative steps, raw distance, and the
/// distance normalized by the trace maximum.
inline void write_trace_csv(const std::filesystem::path& path,
                            const NormTrace& trace) {
  std::ofstream outf(path);
  if (!outf) throw io_error("cannot write " + path.string());
  outf << "steps,raw_norm,normalized_norm\n";
  const std::vector<double> normalized = trace.normalized();
  for (std::size_t i = 0; i < trace.points().size(); ++i) {
    outf << trace.points()[i].steps << ','
         << detail::format_double(trace.points()[i].raw) << ','
         << detail::format_double(normalized[i]) << '\n';
  }
  if (!outf.flush()) throw io_error("failed writing " + path.string());
}

/// Writes the range report: one row per edge and per vertex with its
/// min/max over all samples, then the two global ranges.  Slack loops are
/// not part of the report by construction.
inline void write_ranges_csv(const std::filesystem::path& path,
                             const RangeReport& report,
                             std::span<const std::string> edge_labels,
                             std::span<const std::string> vertex_labels) {
  if (edge_labels.size() != report.edge_min.size() ||
      vertex_labels.size() != report.vertex_min.size()) {
    throw argument_error("label counts do not match the range report");
  }
  std::ofstream outf(path);
  if (!outf) throw io_error("cannot write " + path.string());
  outf << "kind,label,min,max\n";
  auto sanitize = [](std::string s) {
    std::replace(s.begin(), s.end(), ',', ';');
    return s;
  };
  for (std::size_t e = 0; e < edge_labels.size(); ++e) {
    outf << "edge," << sanitize(edge_labels[e]) << ','
         << detail::format_double(report.edge_min[e]) << ','
         << detail::format_double(report.edge_max[e]) << '\n';
  }
  for (std::size_t v = 0; v < vertex_labels.size(); ++v) {
    outf << "vertex," << sanitize(vertex_labels[v]) << ','
         << detail::format_double(report.vertex_min[v]) << ','
         << detail::format_double(report.vertex_max[v]) << '\n';
  }
  const Interval ge = report.global_edge_range();
  const Interval gv = report.global_vertex_range();
  outf << "edge_global,," << detail::format_double(ge.lo) << ','
       << detail::format_double(ge.hi) << '\n';
  outf << "vertex_global,," << detail::format_double(gv.lo) << ','
       << detail::format_double(gv.hi) << '\n';
  if (!outf.flush()) throw io_error("failed writing " + path.string());
}

/// Everything needed to reproduce a sampling run bit for bit, plus summary
/// numbers.  Serialized as JSON; hashes bind it to the exact input bytes.
struct Manifest {
  std::string tool = "cyclesampler";
  std::string version;
  bool complete = false;

  std::string input_path;
  std::string input_hash;
  bool directed = false;
  IngestionOptions options;
  IngestionStats stats;

  std::string edge_mode;  // "interval" or "file"
  Interval edge_interval{0.0, 1.0};
  std::string edge_bounds_file, edge_bounds_hash;
  std::string vertex_mode;  // "exact", "ratio", "interval", "file"
  double ratio = 0.0;
  Interval vertex_interval{0.0, 0.0};
  std::string vertex_bounds_file, vertex_bounds_hash;

  std::uint64_t seed = 0;
  std::uint64_t samples = 0;
  std::uint64_t steps_per_sample = 0;  // resolved value, never 0
  std::uint64_t burn_in = 0;
  std::uint32_t chains = 1;
  std::uint32_t chain_index = 0;

  std::uint64_t vertices = 0;
  std::uint64_t edges = 0;
  std::uint64_t components = 0;
  std::uint64_t clean_count = 0;
  std::uint64_t dirty_count = 0;
  std::uint64_t generator_count = 0;
  std::uint64_t null_dim = 0;

  std::uint64_t samples_emitted = 0;
  double max_drift = 0.0;
  double seconds = 0.0;
};

inline void write_manifest(const std::filesystem::path& path, const Manifest& m) {
  nlohmann::json j;
  j["tool"] = m.tool;
  j["version"] = m.version;
  j["complete"] = m.complete;
  j["input"] = {{"path", m.input_path},
                {"hash", m.input_hash},
                {"directed", m.directed},
                {"dedupe", m.options.dedupe},
                {"rating_cap", m.options.rating_cap ? nlohmann::json(*m.options.rating_cap)
                                                    : nlohmann::json(nullptr)},
                {"scale_to_unit", m.options.scale_to_unit},
                {"bipartite_prefixing", m.options.bipartite_prefixing},
                {"rows_read", m.stats.rows_read},
                {"duplicates_dropped", m.stats.duplicates_dropped},
                {"cap_dropped", m.stats.cap_dropped},
                {"scaled", m.stats.scaled},
                {"scale_min", m.stats.scale_min},
                {"scale_max", m.stats.scale_max},
                {"scale_epsilon", scale_epsilon}};
  j["constraints"] = {{"edge_mode", m.edge_mode},
                      {"edge_lo", m.edge_interval.lo},
                      {"edge_hi", m.edge_interval.hi},
                      {"edge_bounds_file", m.edge_bounds_file},
                      {"edge_bounds_hash", m.edge_bounds_hash},
                      {"vertex_mode", m.vertex_mode},
                      {"ratio", m.ratio},
                      {"vertex_lo", m.vertex_interval.lo},
                      {"vertex_hi", m.vertex_interval.hi},
                      {"vertex_bounds_file", m.vertex_bounds_file},
                      {"vertex_bounds_hash", m.vertex_bounds_hash}};
  j["run"] = {{"seed", m.seed},
              {"samples", m.samples},
              {"steps_per_sample", m.steps_per_sample},
              {"burn_in", m.burn_in},
              {"chains", m.chains},
              {"chain_index", m.chain_index}};
  j["graph"] = {{"vertices", m.vertices},
                {"edges", m.edges},
                {"components", m.components},
                {"clean_off_tree", m.clean_count},
                {"dirty_off_tree", m.dirty_count},
                {"generator_count", m.generator_count},
                {"null_dim", m.null_dim}};
  j["results"] = {{"samples_emitted", m.samples_emitted},
                  {"max_drift", m.max_drift},
                  {"seconds", m.seconds}};
  std::ofstream outf(path);
  if (!outf) throw io_error("cannot write " + path.string());
  outf << j.dump(2) << '\n';
  if (!outf.flush()) throw io_error("failed writing " + path.string());
}

inline Manifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw io_error(path.string() + ": manifest is not valid JSON (" +
                   e.what() + ")");
  }
  Manifest m;
  try {
    m.tool = j.at("tool").get<std::string>();
    m.version = j.at("version").get<std::string>();
    m.complete = j.at("complete").get<bool>();
    const auto& in_j = j.at("input");
    m.input_path = in_j.at("path").get<std::string>();
    m.input_hash = in_j.at("hash").get<std::string>();
    m.directed = in_j.at("directed").get<bool>();
    m.options.dedupe = in_j.at("dedupe").get<bool>();
    if (!in_j.at("rating_cap").is_null()) {
      m.options.rating_cap = in_j.at("rating_cap").get<double>();
    }
    m.options.scale_to_unit = in_j.at("scale_to_unit").get<bool>();
    m.options.bipartite_prefixing = in_j.at("bipartite_prefixing").get<bool>();
    m.stats.rows_read = in_j.at("rows_read").get<std::uint64_t>();
    m.stats.duplicates_dropped = in_j.at("duplicates_dropped").get<std::uint64_t>();
    m.stats.cap_dropped = in_j.at("cap_dropped").get<std::uint64_t>();
    m.stats.scaled = in_j.at("scaled").get<bool>();
    m.stats.scale_min = in_j.at("scale_min").get<double>();
    m.stats.scale_max = in_j.at("scale_max").get<double>();
    const auto& c = j.at("constraints");
    m.edge_mode = c.at("edge_mode").get<std::string>();
    m.edge_interval = {c.at("edge_lo").get<double>(), c.at("edge_hi").get<double>()};
    m.edge_bounds_file = c.at("edge_bounds_file").get<std::string>();
    m.edge_bounds_hash = c.at("edge_bounds_hash").get<std::string>();
    m.vertex_mode = c.at("vertex_mode").get<std::string>();
    m.ratio = c.at("ratio").get<double>();
    m.vertex_interval = {c.at("vertex_lo").get<double>(),
                         c.at("vertex_hi").get<double>()};
    m.vertex_bounds_file = c.at("vertex_bounds_file").get<std::string>();
    m.vertex_bounds_hash = c.at("vertex_bounds_hash").get<std::string>();
    const auto& r = j.at("run");
    m.seed = r.at("seed").get<std::uint64_t>();
    m.samples = r.at("samples").get<std::uint64_t>();
    m.steps_per_sample = r.at("steps_per_sample").get<std::uint64_t>();
    m.burn_in = r.at("burn_in").get<std::uint64_t>();
    m.chains = r.at("chains").get<std::uint32_t>();
    m.chain_index = r.at("chain_index").get<std::uint32_t>();
    const auto& g = j.at("graph");
    m.vertices = g.at("vertices").get<std::uint64_t>();
    m.edges = g.at("edges").get<std::uint64_t>();
    m.components = g.at("components").get<std::uint64_t>();
    m.clean_count = g.at("clean_off_tree").get<std::uint64_t>();
    m.dirty_count = g.at("dirty_off_tree").get<std::uint64_t>();
    m.generator_count = g.at("generator_count").get<std::uint64_t>();
    m.null_dim = g.at("null_dim").get<std::uint64_t>();
    const auto& res = j.at("results");
    m.samples_emitted = res.at("samples_emitted").get<std::uint64_t>();
    m.max_drift = res.at("max_drift").get<double>();
    m.seconds = res.at("seconds").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw io_error(path.string() + ": manifest is missing fields (" + e.what() +
                   ")");
  }
  return m;
}

}  // namespace cyclesampler
