#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace cyclesampler {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;

/// Sentinel for "no edge" in index arrays.
inline constexpr EdgeId no_edge = std::numeric_limits<EdgeId>::max();

/// Closed interval [lo, hi].  Degenerate intervals (lo == hi) are valid and
/// denote an exact constraint.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  bool contains(double x) const { return lo <= x && x <= hi; }
};

/// Undirected edge as an unordered pair of endpoints.  u == v denotes a
/// self-loop.  Endpoint order is preserved as given (it has no semantic
/// meaning but keeps traversal order reproducible).
struct Edge {
  VertexId u = 0;
  VertexId v = 0;

  bool is_loop() const { return u == v; }
  /// The endpoint that is not `w`.  For a self-loop returns u.
  VertexId other(VertexId w) const { return w == u ? v : u; }
};

namespace detail {

/// Packs an unordered vertex pair into one 64-bit key for duplicate checks.
inline std::uint64_t unordered_key(VertexId a, VertexId b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

inline std::uint64_t ordered_key(VertexId a, VertexId b) {
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

inline void check_finite(double x, const char* what, std::size_t index) {
  if (!std::isfinite(x)) {
    throw argument_error(std::string(what) + " at index " +
                         std::to_string(index) + " is not finite");
  }
}

}  // namespace detail

/// An undirected graph with one weight and one closed bound interval per
/// edge, plus one bound interval per vertex.  Vertices are dense 0-based
/// ids; edges keep their construction order, which every downstream
/// component (traversal, basis enumeration, output columns) treats as
/// canonical.
///
/// Parallel edges are not representable: a repeated unordered pair is
/// rejected at construction.  Self-loops are allowed.
class WeightedGraph {
 public:
  WeightedGraph(VertexId vertex_count, std::vector<Edge> edges,
                std::vector<double> weights, std::vector<Interval> edge_bounds,
                std::vector<Interval> vertex_bounds)
      : vertex_count_(vertex_count),
        edges_(std::move(edges)),
        weights_(std::move(weights)),
        edge_bounds_(std::move(edge_bounds)),
        vertex_bounds_(std::move(vertex_bounds)) {
    if (weights_.size() != edges_.size() || edge_bounds_.size() != edges_.size()) {
      throw argument_error("edge arrays have mismatched lengths");
    }
    if (vertex_bounds_.size() != vertex_count_) {
      throw argument_error("vertex bound array length does not match vertex count");
    }
    if (edges_.size() >= static_cast<std::size_t>(no_edge)) {
      throw argument_error("edge count exceeds index range");
    }
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(edges_.size() * 2);
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      const Edge& e = edges_[i];
      if (e.u >= vertex_count_ || e.v >= vertex_count_) {
        throw argument_error("edge " + std::to_string(i) +
                             " references vertex outside [0, " +
                             std::to_string(vertex_count_) + ")");
      }
      if (!seen.insert(detail::unordered_key(e.u, e.v)).second) {
        throw argument_error("duplicate edge {" + std::to_string(e.u) + "," +
                             std::to_string(e.v) + "} at index " +
                             std::to_string(i));
      }
      detail::check_finite(weights_[i], "edge weight", i);
      check_interval(edge_bounds_[i], "edge bound", i);
    }
    for (std::size_t v = 0; v < vertex_count_; ++v) {
      check_interval(vertex_bounds_[v], "vertex bound", v);
    }
    build_adjacency();
  }

  VertexId vertex_count() const { return vertex_count_; }
  EdgeId edge_count() const { return static_cast<EdgeId>(edges_.size()); }

  const Edge& edge(EdgeId e) const { return edges_[e]; }
  const std::vector<Edge>& edges() const { return edges_; }

  double weight(EdgeId e) const { return weights_[e]; }
  const std::vector<double>& weights() const { return weights_; }

  const Interval& edge_bounds(EdgeId e) const { return edge_bounds_[e]; }
  const Interval& vertex_bounds(VertexId v) const { return vertex_bounds_[v]; }

  bool has_self_loops() const { return has_self_loops_; }

  /// Edge ids incident to `v`, in input edge order.  A self-loop at v
  /// appears once in this list.
  std::span<const EdgeId> incident_edges(VertexId v) const {
    return {adjacency_.data() + adjacency_offsets_[v],
            adjacency_offsets_[v + 1] - adjacency_offsets_[v]};
  }

 private:
  static void check_interval(const Interval& iv, const char* what,
                             std::size_t index) {
    detail::check_finite(iv.lo, what, index);
    detail::check_finite(iv.hi, what, index);
    if (iv.lo > iv.hi) {
      throw argument_error(std::string(what) + " at index " +
                           std::to_string(index) + " is empty (lo > hi)");
    }
  }

  void build_adjacency() {
    adjacency_offsets_.assign(vertex_count_ + 1, 0);
    for (const Edge& e : edges_) {
      ++adjacency_offsets_[e.u + 1];
      if (!e.is_loop()) ++adjacency_offsets_[e.v + 1];
      has_self_loops_ = has_self_loops_ || e.is_loop();
    }
    for (std::size_t v = 0; v < vertex_count_; ++v) {
      adjacency_offsets_[v + 1] += adjacency_offsets_[v];
    }
    adjacency_.resize(adjacency_offsets_.back());
    std::vector<std::size_t> cursor(adjacency_offsets_.begin(),
                                    adjacency_offsets_.end() - 1);
    for (EdgeId e = 0; e < edge_count(); ++e) {
      adjacency_[cursor[edges_[e].u]++] = e;
      if (!edges_[e].is_loop()) adjacency_[cursor[edges_[e].v]++] = e;
    }
  }

  VertexId vertex_count_ = 0;
  std::vector<Edge> edges_;
  std::vector<double> weights_;
  std::vector<Interval> edge_bounds_;
  std::vector<Interval> vertex_bounds_;
  // CSR adjacency: edge ids incident to each vertex, input order.
  std::vector<std::size_t> adjacency_offsets_;
  std::vector<EdgeId> adjacency_;
  bool has_self_loops_ = false;
};

/// Weight carried by a vertex: the sum of incident edge weights, with
/// self-loops counting twice (a loop occupies both endpoint slots).  This
/// factor-2 convention is what lets a single slack loop absorb a vertex
/// interval, and it is baked into every constraint row in the library.
inline double vertex_weight(const WeightedGraph& g, VertexId v) {
  if (v >= g.vertex_count()) throw argument_error("vertex id out of range");
  double sum = 0.0;
  for (EdgeId e : g.incident_edges(v)) {
    sum += g.edge(e).is_loop() ? 2.0 * g.weight(e) : g.weight(e);
  }
  return sum;
}

/// One bound violation, reported as data so callers can render or count
/// them without string parsing.  `amount` is the distance past the bound.
struct BoundViolation {
  std::uint32_t index = 0;  // edge id or vertex id
  double value = 0.0;
  Interval bounds;
  double amount = 0.0;
};

struct ValidationReport {
  std::vector<BoundViolation> edge_violations;
  std::vector<BoundViolation> vertex_violations;

  bool ok() const { return edge_violations.empty() && vertex_violations.empty(); }

  std::string summary() const {
    if (ok()) return "all constraints satisfied";
    return std::to_string(edge_violations.size()) + " edge and " +
           std::to_string(vertex_violations.size()) +
           " vertex bound violations";
  }
};

namespace detail {

/// Relative feasibility slack used when comparing observed weights against
/// bounds: pure float noise should not flip a satisfiable instance to
/// infeasible, while real violations exceed it by many orders of magnitude.
inline double bound_tolerance(double value, const Interval& iv) {
  const double scale = std::max({1.0, std::fabs(value), std::fabs(iv.lo),
                                 std::fabs(iv.hi)});
  return 1e-9 * scale;
}

inline std::optional<BoundViolation> check_bound(std::uint32_t index,
                                                 double value,
                                                 const Interval& iv) {
  const double tol = bound_tolerance(value, iv);
  if (value < iv.lo - tol) return BoundViolation{index, value, iv, iv.lo - value};
  if (value > iv.hi + tol) return BoundViolation{index, value, iv, value - iv.hi};
  return std::nullopt;
}

}  // namespace detail

/// Checks every edge weight against its edge bounds and every vertex weight
/// against its vertex bounds.  Small float noise (1e-9 relative) is
/// forgiven; everything else lands in the report.
inline ValidationReport validate(const WeightedGraph& g) {
  ValidationReport report;
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    if (auto v = detail::check_bound(e, g.weight(e), g.edge_bounds(e))) {
      report.edge_violations.push_back(*v);
    }
  }
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (auto viol = detail::check_bound(v, vertex_weight(g, v), g.vertex_bounds(v))) {
      report.vertex_violations.push_back(*viol);
    }
  }
  return report;
}

/// A sampling problem in equality form: every vertex carries an exact
/// target weight, and interval freedom lives entirely in the edge bounds
/// (including the bounds of any slack self-loops added by the transform).
///
/// `graph` may contain more edges than the caller's input: indices below
/// `origin_edge_count` are the original edges in input order, the rest are
/// slack loops.  `loop_of_vertex[v]` is the slack loop added for v, or
/// `no_edge` if v needed none.
struct EqualityProblem {
  WeightedGraph graph;
  std::vector<double> vertex_target;
  std::vector<EdgeId> loop_of_vertex;
  EdgeId origin_edge_count = 0;

  bool is_slack(EdgeId e) const { return e >= origin_edge_count; }
};

/// Rewrites per-vertex interval constraints as exact constraints by giving
/// each vertex with a non-degenerate interval [A, B] a slack self-loop.
///
/// With observed vertex weight W, the loop starts at 0 and is bounded by
/// [(W-B)/2, (W-A)/2]: because a loop counts twice toward its vertex, a
/// loop value s shifts the non-slack part of the vertex sum to W - 2s,
/// which sweeps exactly [A, B] as s sweeps its bounds.  The interval
/// contains 0 precisely when W already satisfies [A, B], so the observed
/// assignment stays a feasible starting point.
///
/// Degenerate vertex intervals (A == B) get no loop; their target remains
/// the observed weight.  The input graph must be loop-free, since a slack
/// loop at a vertex that already has one would be a duplicate edge.
inline EqualityProblem to_equality_form(const WeightedGraph& g) {
  if (g.has_self_loops()) {
    throw argument_error(
        "interval-to-equality transform requires a loop-free graph; "
        "self-loops in the input already carry vertex weight");
  }
  std::vector<Edge> edges = g.edges();
  std::vector<double> weights = g.weights();
  std::vector<Interval> edge_bounds;
  edge_bounds.reserve(g.edge_count());
  for (EdgeId e = 0; e < g.edge_count(); ++e) edge_bounds.push_back(g.edge_bounds(e));

  EqualityProblem problem{
      WeightedGraph(0, {}, {}, {}, {}), {}, {}, g.edge_count()};
  problem.vertex_target.resize(g.vertex_count());
  problem.loop_of_vertex.assign(g.vertex_count(), no_edge);

  std::vector<Interval> vertex_bounds(g.vertex_count());
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    const Interval iv = g.vertex_bounds(v);
    const double w = vertex_weight(g, v);
    problem.vertex_target[v] = w;
    vertex_bounds[v] = {w, w};  // exact after the transform
    if (iv.width() == 0.0 && std::fabs(w - iv.lo) > detail::bound_tolerance(w, iv)) {
      // A degenerate interval gets no slack loop, so a mismatch here would
      // otherwise be silently replaced by the observed weight.
      throw infeasible_error("vertex " + std::to_string(v) + ": weight sum " +
                             std::to_string(w) +
                             " does not meet the exact constraint " +
                             std::to_string(iv.lo));
    }
    if (iv.width() > 0.0) {
      problem.loop_of_vertex[v] = static_cast<EdgeId>(edges.size());
      edges.push_back(Edge{v, v});
      weights.push_back(0.0);
      edge_bounds.push_back(Interval{(w - iv.hi) / 2.0, (w - iv.lo) / 2.0});
    }
  }
  problem.graph = WeightedGraph(g.vertex_count(), std::move(edges),
                                std::move(weights), std::move(edge_bounds),
                                std::move(vertex_bounds));
  return problem;
}

/// Treats the graph as already being in equality form: every vertex target
/// is its observed weight and no slack loops are added.  This is the entry
/// point for inputs that carry semantic self-loops of their own, and for
/// the exact vertex-constraint mode (where it coincides with
/// to_equality_form on a loop-free graph).
inline EqualityProblem make_exact(const WeightedGraph& g) {
  std::vector<Interval> vertex_bounds(g.vertex_count());
  std::vector<double> targets(g.vertex_count());
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    targets[v] = vertex_weight(g, v);
    vertex_bounds[v] = {targets[v], targets[v]};
  }
  std::vector<Interval> edge_bounds;
  edge_bounds.reserve(g.edge_count());
  for (EdgeId e = 0; e < g.edge_count(); ++e) edge_bounds.push_back(g.edge_bounds(e));
  EqualityProblem problem{
      WeightedGraph(g.vertex_count(), g.edges(), g.weights(),
                    std::move(edge_bounds), std::move(vertex_bounds)),
      std::move(targets),
      std::vector<EdgeId>(g.vertex_count(), no_edge),
      g.edge_count()};
  return problem;
}

/// A directed graph with per-edge weight and bounds, plus per-vertex bounds
/// on the *outgoing* and *incoming* weight sums separately.  Ordered pairs
/// must be unique; (u,v) and (v,u) may coexist, as may directed loops (v,v).
class DirectedWeightedGraph {
 public:
  DirectedWeightedGraph(VertexId vertex_count, std::vector<Edge> edges,
                        std::vector<double> weights,
                        std::vector<Interval> edge_bounds,
                        std::vector<Interval> out_bounds,
                        std::vector<Interval> in_bounds)
      : vertex_count_(vertex_count),
        edges_(std::move(edges)),
        weights_(std::move(weights)),
        edge_bounds_(std::move(edge_bounds)),
        out_bounds_(std::move(out_bounds)),
        in_bounds_(std::move(in_bounds)) {
    if (weights_.size() != edges_.size() || edge_bounds_.size() != edges_.size()) {
      throw argument_error("edge arrays have mismatched lengths");
    }
    if (out_bounds_.size() != vertex_count_ || in_bounds_.size() != vertex_count_) {
      throw argument_error("vertex bound array length does not match vertex count");
    }
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(edges_.size() * 2);
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      const Edge& e = edges_[i];
      if (e.u >= vertex_count_ || e.v >= vertex_count_) {
        throw argument_error("edge " + std::to_string(i) +
                             " references vertex outside [0, " +
                             std::to_string(vertex_count_) + ")");
      }
      if (!seen.insert(detail::ordered_key(e.u, e.v)).second) {
        throw argument_error("duplicate directed edge (" + std::to_string(e.u) +
                             "," + std::to_string(e.v) + ") at index " +
                             std::to_string(i));
      }
      detail::check_finite(weights_[i], "edge weight", i);
    }
  }

  VertexId vertex_count() const { return vertex_count_; }
  EdgeId edge_count() const { return static_cast<EdgeId>(edges_.size()); }
  const Edge& edge(EdgeId e) const { return edges_[e]; }
  const std::vector<Edge>& edges() const { return edges_; }
  double weight(EdgeId e) const { return weights_[e]; }
  const std::vector<double>& weights() const { return weights_; }
  const Interval& edge_bounds(EdgeId e) const { return edge_bounds_[e]; }
  const Interval& out_bounds(VertexId v) const { return out_bounds_[v]; }
  const Interval& in_bounds(VertexId v) const { return in_bounds_[v]; }

 private:
  VertexId vertex_count_ = 0;
  std::vector<Edge> edges_;
  std::vector<double> weights_;
  std::vector<Interval> edge_bounds_;
  std::vector<Interval> out_bounds_;
  std::vector<Interval> in_bounds_;
};

inline double out_weight(const DirectedWeightedGraph& d, VertexId v) {
  double sum = 0.0;
  for (EdgeId e = 0; e < d.edge_count(); ++e) {
    if (d.edge(e).u == v) sum += d.weight(e);
  }
  return sum;
}

inline double in_weight(const DirectedWeightedGraph& d, VertexId v) {
  double sum = 0.0;
  for (EdgeId e = 0; e < d.edge_count(); ++e) {
    if (d.edge(e).v == v) sum += d.weight(e);
  }
  return sum;
}

inline ValidationReport validate(const DirectedWeightedGraph& d) {
  ValidationReport report;
  for (EdgeId e = 0; e < d.edge_count(); ++e) {
    if (auto v = detail::check_bound(e, d.weight(e), d.edge_bounds(e))) {
      report.edge_violations.push_back(*v);
    }
  }
  // Vertex violations are reported with out-sums first, then in-sums, using
  // index v for the out constraint of v and vertex_count + v for its in
  // constraint, mirroring the bipartite image below.
  for (VertexId v = 0; v < d.vertex_count(); ++v) {
    if (auto viol = detail::check_bound(v, out_weight(d, v), d.out_bounds(v))) {
      report.vertex_violations.push_back(*viol);
    }
    if (auto viol = detail::check_bound(d.vertex_count() + v, in_weight(d, v),
                                        d.in_bounds(v))) {
      report.vertex_violations.push_back(*viol);
    }
  }
  return report;
}

/// Correspondence between a directed graph and its bipartite image,
/// sufficient to pull sampled weights back.  `forward[i]` is the directed
/// edge represented by bipartite edge i (the construction preserves input
/// order, so forward is the identity permutation, but callers should not
/// rely on that).  `vertex_offset` is the directed vertex count: bipartite
/// vertex v < offset is the out-copy of v, and offset + v the in-copy.
struct EdgeMapping {
  std::vector<EdgeId> forward;
  VertexId vertex_offset = 0;
};

/// Splits every directed vertex v into an out-copy v and an in-copy
/// offset + v, turning edge (u,v) into undirected edge {u, offset + v}.
/// The image is bipartite by construction, has no self-loops (a directed
/// loop lands as a regular edge between the two copies), and never has
/// parallel edges because ordered pairs were unique.  Out-sum bounds become
/// vertex bounds on the out-copies and in-sum bounds on the in-copies, so
/// sampling the image under vertex constraints is exactly sampling the
/// directed graph under separate out/in constraints.
inline std::pair<WeightedGraph, EdgeMapping> directed_to_bipartite(
    const DirectedWeightedGraph& d) {
  const VertexId offset = d.vertex_count();
  std::vector<Edge> edges;
  edges.reserve(d.edge_count());
  EdgeMapping mapping;
  mapping.vertex_offset = offset;
  mapping.forward.reserve(d.edge_count());
  for (EdgeId e = 0; e < d.edge_count(); ++e) {
    edges.push_back(Edge{d.edge(e).u, static_cast<VertexId>(offset + d.edge(e).v)});
    mapping.forward.push_back(e);
  }
  std::vector<Interval> vertex_bounds(2 * static_cast<std::size_t>(offset));
  for (VertexId v = 0; v < offset; ++v) {
    vertex_bounds[v] = d.out_bounds(v);
    vertex_bounds[offset + v] = d.in_bounds(v);
  }
  std::vector<Interval> edge_bounds;
  edge_bounds.reserve(d.edge_count());
  for (EdgeId e = 0; e < d.edge_count(); ++e) edge_bounds.push_back(d.edge_bounds(e));
  WeightedGraph g(2 * offset, std::move(edges), d.weights(),
                  std::move(edge_bounds), std::move(vertex_bounds));
  return {std::move(g), std::move(mapping)};
}

/// Pulls a bipartite weight assignment back to directed edge weights.
inline std::vector<double> map_back(std::span<const double> bipartite_weights,
                                    const EdgeMapping& mapping) {
  if (bipartite_weights.size() < mapping.forward.size()) {
    throw argument_error("weight vector shorter than the edge mapping");
  }
  std::vector<double> directed(mapping.forward.size());
  for (std::size_t i = 0; i < mapping.forward.size(); ++i) {
    directed[mapping.forward[i]] = bipartite_weights[i];
  }
  return directed;
}

/// Connected components of the underlying unweighted graph.  Isolated
/// vertices form singleton components.  Component ids are assigned in
/// order of their smallest vertex; vertex and edge lists keep input order.
struct Components {
  std::uint32_t count = 0;
  std::vector<std::uint32_t> vertex_component;
  std::vector<std::uint32_t> edge_component;
  std::vector<std::vector<VertexId>> vertices;
  std::vector<std::vector<EdgeId>> edges;
};

inline Components connected_components(const WeightedGraph& g) {
  Components comps;
  comps.vertex_component.assign(g.vertex_count(), ~0u);
  std::vector<VertexId> queue;
  for (VertexId start = 0; start < g.vertex_count(); ++start) {
    if (comps.vertex_component[start] != ~0u) continue;
    const std::uint32_t id = comps.count++;
    comps.vertex_component[start] = id;
    queue.assign(1, start);
    while (!queue.empty()) {
      const VertexId v = queue.back();
      queue.pop_back();
      for (EdgeId e : g.incident_edges(v)) {
        const VertexId w = g.edge(e).other(v);
        if (comps.vertex_component[w] == ~0u) {
          comps.vertex_component[w] = id;
          queue.push_back(w);
        }
      }
    }
  }
  comps.edge_component.resize(g.edge_count());
  comps.vertices.resize(comps.count);
  comps.edges.resize(comps.count);
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    comps.vertices[comps.vertex_component[v]].push_back(v);
  }
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const std::uint32_t id = comps.vertex_component[g.edge(e).u];
    comps.edge_component[e] = id;
    comps.edges[id].push_back(e);
  }
  return comps;
}

}  // namespace cyclesampler
