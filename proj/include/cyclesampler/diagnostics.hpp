#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "graph.hpp"

namespace cyclesampler {

/// Euclidean distance between two weight vectors of equal length.  Callers
/// pass vectors already restricted to the original edges; slack loops are
/// an internal artifact and never enter reported distances.
inline double frobenius_distance(std::span<const double> a,
                                 std::span<const double> b) {
  if (a.size() != b.size()) {
    throw argument_error("weight vectors have different lengths (" +
                         std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()) + ")");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

/// 1-based block indices at which a run should record its trace: roughly
/// `per_decade` points per factor-10 of progress, always including block 1
/// and the final block.  Early blocks are dense (every block up to the
/// point where the log spacing exceeds 1).
inline std::vector<std::uint64_t> log_schedule(std::uint64_t total_blocks,
                                               int per_decade = 20) {
  if (per_decade <= 0) throw argument_error("per_decade must be positive");
  std::vector<std::uint64_t> out;
  if (total_blocks == 0) return out;
  for (int k = 0;; ++k) {
    const double value =
        std::pow(10.0, static_cast<double>(k) / per_decade);
    const auto block = static_cast<std::uint64_t>(std::llround(value));
    if (block > total_blocks) break;
    if (out.empty() || out.back() != block) out.push_back(block);
  }
  if (out.empty() || out.back() != total_blocks) out.push_back(total_blocks);
  return out;
}

struct TracePoint {
  std::uint64_t steps = 0;
  double raw = 0.0;
};

/// Distance-from-start trace of a chain.  Stores raw distances keyed by
/// cumulative step count; normalization (to the maximum observed distance)
/// happens on read, matching how published convergence curves are scaled
/// to [0, 1] after the fact.
class NormTrace {
 public:
  /// Appends a point.  Steps must be strictly increasing, and the first
  /// point must be the starting state itself: (0, 0).
  void record(std::uint64_t steps, double raw) {
    if (points_.empty()) {
      if (steps != 0 || raw != 0.0) {
        throw argument_error("trace must start at (0 steps, 0 distance)");
      }
    } else if (steps <= points_.back().steps) {
      throw argument_error("trace steps must be strictly increasing");
    }
    if (!(raw >= 0.0)) throw argument_error("trace distance must be >= 0");
    points_.push_back({steps, raw});
  }

  const std::vector<TracePoint>& points() const { return points_; }
  bool empty() const { return points_.empty(); }

  /// Largest raw distance seen; 0 for an empty or frozen trace.
  double max_raw() const {
    double m = 0.0;
    for (const TracePoint& p : points_) m = std::max(m, p.raw);
    return m;
  }

  /// Raw values scaled by max_raw(), so the curve lives in [0, 1].  A
  /// flat-zero trace stays all zero.
  std::vector<double> normalized() const {
    const double m = max_raw();
    std::vector<double> out;
    out.reserve(points_.size());
    for (const TracePoint& p : points_) {
      out.push_back(m > 0.0 ? p.raw / m : 0.0);
    }
    return out;
  }

  /// Advisory convergence heuristic: the earliest recorded step count S at
  /// which the trace has flattened, judged by comparing the mean value over
  /// the final decade (S/10, S] against the decade before it (S/100, S/10],
  /// both scaled by the largest distance seen up to S.  When the scaled
  /// means differ by less than `slope_threshold` (per decade), the curve is
  /// declared plateaued at S.  Scaling by the running maximum rather than
  /// the final one keeps a still-growing curve from looking flat merely
  /// because its later values dwarf its earlier ones, and averaging whole
  /// decades keeps the estimate stable on low-dimensional chains whose
  /// pointwise trace fluctuates at stationarity.
  ///
  /// Returns nullopt when no recorded point qualifies (trace too short or
  /// still rising).  Purely advisory: reported, never enforced.
  std::optional<std::uint64_t> plateau_step(double slope_threshold = 0.01) const {
    // Earliest positive-step point; two full decades of history must exist
    // before a verdict is possible.
    std::size_t first_positive = points_.size();
    for (std::size_t i = 0; i < points_.size(); ++i) {
      if (points_[i].steps > 0) {
        first_positive = i;
        break;
      }
    }
    if (first_positive == points_.size()) return std::nullopt;
    const double s0 = static_cast<double>(points_[first_positive].steps);

    double running_max = 0.0;
    for (std::size_t i = 0; i < first_positive; ++i) {
      running_max = std::max(running_max, points_[i].raw);
    }
    for (std::size_t i = first_positive; i < points_.size(); ++i) {
      running_max = std::max(running_max, points_[i].raw);
      const double s = static_cast<double>(points_[i].steps);
      if (s < 100.0 * s0) continue;
      double sum_recent = 0.0, sum_prev = 0.0;
      int n_recent = 0, n_prev = 0;
      for (std::size_t j = first_positive; j <= i; ++j) {
        const double sj = static_cast<double>(points_[j].steps);
        if (sj > s / 10.0) {
          sum_recent += points_[j].raw;
          ++n_recent;
        } else if (sj > s / 100.0) {
          sum_prev += points_[j].raw;
          ++n_prev;
        }
      }
      if (n_recent < 2 || n_prev < 2) continue;
      const double scale = running_max > 0.0 ? running_max : 1.0;
      const double slope =
          (sum_recent / n_recent - sum_prev / n_prev) / scale;
      if (std::fabs(slope) < slope_threshold) return points_[i].steps;
    }
    return std::nullopt;
  }

 private:
  std::vector<TracePoint> points_;
};

/// Min/max envelope of weights over a sample stream: per original edge,
/// per vertex (vertex weights computed from original edges only — slack
/// loops never reach a report), plus the global ranges.
struct RangeReport {
  std::vector<double> edge_min, edge_max;      // per original edge
  std::vector<double> vertex_min, vertex_max;  // per vertex
  std::uint64_t samples = 0;

  Interval global_edge_range() const {
    Interval r{std::numeric_limits<double>::infinity(),
               -std::numeric_limits<double>::infinity()};
    for (double x : edge_min) r.lo = std::min(r.lo, x);
    for (double x : edge_max) r.hi = std::max(r.hi, x);
    return r;
  }

  Interval global_vertex_range() const {
    Interval r{std::numeric_limits<double>::infinity(),
               -std::numeric_limits<double>::infinity()};
    for (double x : vertex_min) r.lo = std::min(r.lo, x);
    for (double x : vertex_max) r.hi = std::max(r.hi, x);
    return r;
  }
};

/// Streaming accumulator behind range_report(), usable as a run() sink so
/// ranges come out of a sampling run without storing every snapshot.
class RangeAccumulator {
 public:
  explicit RangeAccumulator(const EqualityProblem& problem)
      : problem_(&problem),
        vertex_sums_(problem.graph.vertex_count(), 0.0) {
    const auto inf = std::numeric_limits<double>::infinity();
    report_.edge_min.assign(problem.origin_edge_count, inf);
    report_.edge_max.assign(problem.origin_edge_count, -inf);
    report_.vertex_min.assign(problem.graph.vertex_count(), inf);
    report_.vertex_max.assign(problem.graph.vertex_count(), -inf);
  }

  /// Folds one snapshot (weights on the original edges, input order).
  void update(std::span<const double> original_weights) {
    if (original_weights.size() != problem_->origin_edge_count) {
      throw argument_error("snapshot length does not match original edge count");
    }
    std::fill(vertex_sums_.begin(), vertex_sums_.end(), 0.0);
    for (EdgeId e = 0; e < problem_->origin_edge_count; ++e) {
      const double w = original_weights[e];
      report_.edge_min[e] = std::min(report_.edge_min[e], w);
      report_.edge_max[e] = std::max(report_.edge_max[e], w);
      const Edge& edge = problem_->graph.edge(e);
      if (edge.is_loop()) {
        vertex_sums_[edge.u] += 2.0 * w;
      } else {
        vertex_sums_[edge.u] += w;
        vertex_sums_[edge.v] += w;
      }
    }
    for (VertexId v = 0; v < problem_->graph.vertex_count(); ++v) {
      report_.vertex_min[v] = std::min(report_.vertex_min[v], vertex_sums_[v]);
      report_.vertex_max[v] = std::max(report_.vertex_max[v], vertex_sums_[v]);
    }
    ++report_.samples;
  }

  const RangeReport& report() const { return report_; }

 private:
  const EqualityProblem* problem_;
  std::vector<double> vertex_sums_;
  RangeReport report_;
};

/// Range report over a materialized sample set.  Requires at least one
/// sample so every min/max is well defined.
inline RangeReport range_report(std::span<const std::vector<double>> samples,
                                const EqualityProblem& problem) {
  if (samples.empty()) throw argument_error("range report needs >= 1 sample");
  RangeAccumulator acc(problem);
  for (const std::vector<double>& s : samples) acc.update(s);
  return acc.report();
}

}  // namespace cyclesampler
