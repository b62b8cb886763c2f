#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "graph.hpp"

namespace cyclesampler {

/// Sparse integer vector over the edge set.  Entries are sorted by edge id
/// and never zero; coefficients are always in {-2, -1, +1, +2}.  Vectors in
/// the kernel of the vertex-sum constraint matrix are exactly the
/// directions along which edge weights can move without disturbing any
/// vertex weight.
struct CycleEntry {
  EdgeId edge = 0;
  std::int32_t coeff = 0;

  friend bool operator==(const CycleEntry&, const CycleEntry&) = default;
};

struct CycleVector {
  std::vector<CycleEntry> entries;

  bool empty() const { return entries.empty(); }
  std::size_t size() const { return entries.size(); }

  friend bool operator==(const CycleVector&, const CycleVector&) = default;
};

/// Rooted spanning tree of one connected component, produced by
/// breadth-first search that visits each vertex's incident edges in input
/// order (making the tree, and everything derived from it, a pure function
/// of the input file).  Self-loops are never tree edges.
///
/// Arrays are sized for the whole graph; entries outside the traversed
/// component are left untouched, so one structure can also accumulate a
/// spanning forest across successive roots.
struct SpanningTree {
  VertexId root = 0;
  std::vector<char> reached;                // per vertex
  std::vector<EdgeId> parent_edge;          // per vertex, no_edge at the root
  std::vector<std::uint32_t> vertex_depth;  // per vertex, 0 at the root
  std::vector<char> in_tree;                // per edge
  std::vector<std::uint32_t> edge_depth;    // per tree edge: min endpoint depth
  std::vector<EdgeId> tree_edges;           // discovery order
  std::vector<EdgeId> off_tree_edges;       // input order
};

namespace detail {

/// Runs BFS from `root` into `tree`, which must already be sized for the
/// graph.  Appends discovered tree edges and the component's off-tree edges
/// (in input order).  Previously traversed components are untouched, so the
/// same structure can be reused across components without reallocation.
inline void grow_spanning_tree(const WeightedGraph& g, VertexId root,
                               SpanningTree& tree) {
  if (root >= g.vertex_count()) {
    throw argument_error("spanning tree root out of range");
  }
  if (tree.reached[root]) {
    throw argument_error("spanning tree root already covered");
  }
  tree.root = root;
  tree.reached[root] = 1;
  tree.parent_edge[root] = no_edge;
  tree.vertex_depth[root] = 0;

  std::vector<VertexId> frontier{root};
  std::vector<VertexId> next;
  std::vector<VertexId> component_vertices{root};
  while (!frontier.empty()) {
    next.clear();
    for (VertexId v : frontier) {
      for (EdgeId e : g.incident_edges(v)) {
        if (g.edge(e).is_loop()) continue;
        const VertexId w = g.edge(e).other(v);
        if (tree.reached[w]) continue;
        tree.reached[w] = 1;
        tree.parent_edge[w] = e;
        tree.vertex_depth[w] = tree.vertex_depth[v] + 1;
        tree.in_tree[e] = 1;
        tree.edge_depth[e] = tree.vertex_depth[v];
        tree.tree_edges.push_back(e);
        component_vertices.push_back(w);
        next.push_back(w);
      }
    }
    frontier.swap(next);
  }
  // Off-tree edges of this component, in input order.  Collecting incident
  // edges per component vertex and deduplicating by the in-tree flag would
  // double-count, so mark and sweep instead.
  std::vector<EdgeId> seen;
  for (VertexId v : component_vertices) {
    for (EdgeId e : g.incident_edges(v)) {
      if (tree.in_tree[e]) continue;
      // A non-loop edge is visited from both endpoints; take it at its
      // smaller endpoint only.
      if (!g.edge(e).is_loop() && g.edge(e).other(v) < v) continue;
      seen.push_back(e);
    }
  }
  std::sort(seen.begin(), seen.end());
  tree.off_tree_edges.insert(tree.off_tree_edges.end(), seen.begin(), seen.end());
}

}  // namespace detail

/// Builds the spanning tree of the component containing `root`, rooted
/// there.  The traversal order (and hence the tree) depends only on the
/// graph's edge input order and the root choice.
inline SpanningTree build_spanning_tree(const WeightedGraph& g, VertexId root) {
  SpanningTree tree;
  tree.reached.assign(g.vertex_count(), 0);
  tree.parent_edge.assign(g.vertex_count(), no_edge);
  tree.vertex_depth.assign(g.vertex_count(), 0);
  tree.in_tree.assign(g.edge_count(), 0);
  tree.edge_depth.assign(g.edge_count(), 0);
  detail::grow_spanning_tree(g, root, tree);
  return tree;
}

/// Off-tree edges fall into two kinds that determine how they generate
/// kernel vectors:
///   clean — a non-loop whose endpoint depths have odd sum; its fundamental
///           cycle is a kernel vector on its own.
///   dirty — a self-loop, or a non-loop with even endpoint depth sum; its
///           fundamental cycle leaves a residual of +-2 at the root, and
///           kernel vectors arise only from pairs of dirty cycles whose
///           residuals cancel.
enum class CycleClass { clean, dirty };

inline CycleClass classify(const WeightedGraph& g, const SpanningTree& tree,
                           EdgeId e) {
  if (e >= g.edge_count()) throw argument_error("edge id out of range");
  if (tree.in_tree[e]) {
    throw argument_error("edge " + std::to_string(e) +
                         " is a tree edge and has no fundamental cycle class");
  }
  const Edge& edge = g.edge(e);
  if (!tree.reached[edge.u]) {
    throw argument_error("edge " + std::to_string(e) +
                         " lies outside the tree's component");
  }
  if (edge.is_loop()) return CycleClass::dirty;
  const std::uint32_t sum = tree.vertex_depth[edge.u] + tree.vertex_depth[edge.v];
  return (sum % 2 == 1) ? CycleClass::clean : CycleClass::dirty;
}

namespace detail {

/// Reusable accumulation buffer for building sparse cycle vectors.
struct CycleScratch {
  std::vector<std::int32_t> coeff;  // per edge, zero between uses
  std::vector<EdgeId> touched;

  explicit CycleScratch(EdgeId edge_count) : coeff(edge_count, 0) {}

  void add(EdgeId e, std::int32_t k) {
    if (coeff[e] == 0) touched.push_back(e);
    coeff[e] += k;
  }

  CycleVector take() {
    std::sort(touched.begin(), touched.end());
    CycleVector cv;
    cv.entries.reserve(touched.size());
    for (EdgeId e : touched) {
      if (coeff[e] != 0) {
        if (coeff[e] < -2 || coeff[e] > 2) {
          throw invariant_error("cycle coefficient " +
                                std::to_string(coeff[e]) + " out of range");
        }
        cv.entries.push_back({e, coeff[e]});
      }
      coeff[e] = 0;
    }
    touched.clear();
    return cv;
  }
};

/// Adds the root path of `v` with the alternating sign rule: each tree edge
/// e' on the path contributes (-1)^(depth(v) + depth(e')).
inline void accumulate_root_path(const WeightedGraph& g, const SpanningTree& tree,
                                 VertexId v, CycleScratch& scratch) {
  const std::uint32_t dv = tree.vertex_depth[v];
  VertexId x = v;
  while (tree.parent_edge[x] != no_edge) {
    const EdgeId pe = tree.parent_edge[x];
    const std::int32_t sign = ((dv + tree.edge_depth[pe]) % 2 == 0) ? 1 : -1;
    scratch.add(pe, sign);
    x = g.edge(pe).other(x);
  }
}

inline CycleVector fundamental_cycle_impl(const WeightedGraph& g,
                                          const SpanningTree& tree, EdgeId e,
                                          CycleScratch& scratch) {
  if (e >= g.edge_count()) throw argument_error("edge id out of range");
  if (tree.in_tree[e]) {
    throw argument_error("edge " + std::to_string(e) +
                         " is a tree edge; fundamental cycles exist only for "
                         "off-tree edges");
  }
  if (!tree.reached[g.edge(e).u]) {
    throw argument_error("edge " + std::to_string(e) +
                         " lies outside the tree's component");
  }
  scratch.add(e, 1);
  // Both endpoints contribute their root path; a self-loop therefore walks
  // its path twice, doubling every coefficient along it.
  accumulate_root_path(g, tree, g.edge(e).u, scratch);
  accumulate_root_path(g, tree, g.edge(e).v, scratch);
  return scratch.take();
}

}  // namespace detail

/// The fundamental cycle vector of off-tree edge `e`: coefficient +1 on `e`
/// plus alternating-sign contributions along both endpoints' root paths.
/// For a clean edge the result is a kernel vector; for a dirty edge it maps
/// to +-2 at the root under the constraint matrix.
inline CycleVector fundamental_cycle(const WeightedGraph& g,
                                     const SpanningTree& tree, EdgeId e) {
  detail::CycleScratch scratch(g.edge_count());
  return detail::fundamental_cycle_impl(g, tree, e, scratch);
}

/// Image of a cycle vector under the vertex-sum constraint matrix, as exact
/// integers times the underlying coefficients: entry (v, s) means the
/// weighted sum at v changes by s per unit step along the vector.  Loops
/// count twice.  Only nonzero entries are returned, sorted by vertex.
inline std::vector<std::pair<VertexId, std::int64_t>> incidence_image(
    const WeightedGraph& g, const CycleVector& cv) {
  std::vector<std::pair<VertexId, std::int64_t>> acc;
  for (const CycleEntry& entry : cv.entries) {
    const Edge& e = g.edge(entry.edge);
    if (e.is_loop()) {
      acc.emplace_back(e.u, 2ll * entry.coeff);
    } else {
      acc.emplace_back(e.u, entry.coeff);
      acc.emplace_back(e.v, entry.coeff);
    }
  }
  std::sort(acc.begin(), acc.end());
  std::vector<std::pair<VertexId, std::int64_t>> out;
  for (const auto& [v, s] : acc) {
    if (!out.empty() && out.back().first == v) {
      out.back().second += s;
    } else {
      out.emplace_back(v, s);
    }
  }
  std::erase_if(out, [](const auto& p) { return p.second == 0; });
  return out;
}

/// For a dirty fundamental cycle, the constraint image is +-2 at the tree
/// root and zero elsewhere; this returns that sign (+1 or -1).  Any other
/// image shape indicates a bug upstream and throws.
inline int root_residual_sign(const WeightedGraph& g, const SpanningTree& tree,
                              const CycleVector& cv) {
  const auto image = incidence_image(g, cv);
  if (image.size() == 1 && image[0].first == tree.root) {
    if (image[0].second == 2) return 1;
    if (image[0].second == -2) return -1;
  }
  throw invariant_error(
      "dirty cycle image is not a +-2 residual at the root (root " +
      std::to_string(tree.root) + ", " + std::to_string(image.size()) +
      " nonzero rows)");
}

/// Combines two dirty cycles into a kernel vector: y = c1 - (s1*s2) * c2,
/// where s1, s2 are the root residual signs.  Equal signs subtract and
/// opposite signs add, so the two root residuals always cancel.  Shared
/// tree-path segments cancel coefficient-for-coefficient, which keeps every
/// entry of the combination within {-2..2}; violations throw.
inline CycleVector pair_vector(const CycleVector& c1, int s1,
                               const CycleVector& c2, int s2) {
  if ((s1 != 1 && s1 != -1) || (s2 != 1 && s2 != -1)) {
    throw argument_error("residual signs must be +1 or -1");
  }
  const std::int32_t factor = -(s1 * s2);
  CycleVector out;
  out.entries.reserve(c1.entries.size() + c2.entries.size());
  std::size_t i = 0, j = 0;
  auto push = [&out](EdgeId e, std::int32_t k) {
    if (k == 0) return;
    if (k < -2 || k > 2) {
      throw invariant_error("pair combination coefficient " +
                            std::to_string(k) + " out of range");
    }
    out.entries.push_back({e, k});
  };
  while (i < c1.entries.size() && j < c2.entries.size()) {
    const CycleEntry& a = c1.entries[i];
    const CycleEntry& b = c2.entries[j];
    if (a.edge < b.edge) {
      push(a.edge, a.coeff);
      ++i;
    } else if (b.edge < a.edge) {
      push(b.edge, factor * b.coeff);
      ++j;
    } else {
      push(a.edge, a.coeff + factor * b.coeff);
      ++i;
      ++j;
    }
  }
  for (; i < c1.entries.size(); ++i) push(c1.entries[i].edge, c1.entries[i].coeff);
  for (; j < c2.entries.size(); ++j) push(c2.entries[j].edge, factor * c2.entries[j].coeff);
  return out;
}

/// Everything needed to draw kernel directions for one component without
/// ever materializing the full generator list: clean cycles are generators
/// as-is; dirty cycles combine pairwise on demand.
struct ComponentCatalog {
  std::vector<CycleVector> clean;      // off-tree order
  std::vector<CycleVector> dirty;      // off-tree order, raw cycles
  std::vector<std::int8_t> dirty_sign; // root residual sign per dirty cycle

  /// |clean| + |dirty| choose 2: the size of the implicit generator pool.
  std::uint64_t generator_count = 0;
  /// Dimension of the kernel restricted to this component:
  /// |clean| if there are no dirty cycles, else |clean| + |dirty| - 1.
  std::uint64_t null_dim = 0;

  bool frozen() const { return generator_count == 0; }
};

/// Lexicographic rank of dirty pair (i, j), i < j < n, and its inverse.
/// Pairs are ordered (0,1), (0,2), ..., (0,n-1), (1,2), ...; using the rank
/// as the sole pair index lets a sampler address all n*(n-1)/2 pairs with a
/// single uniform integer draw.
inline std::uint64_t pair_rank(std::uint64_t n, std::uint64_t i, std::uint64_t j) {
  if (!(i < j && j < n)) throw argument_error("pair indices must satisfy i < j < n");
  return i * (n - 1) - i * (i - 1) / 2 + (j - i - 1);
}

inline std::pair<std::uint64_t, std::uint64_t> pair_from_rank(std::uint64_t n,
                                                              std::uint64_t rank) {
  if (n < 2 || rank >= n * (n - 1) / 2) {
    throw argument_error("pair rank out of range");
  }
  // base(i) = rank of (i, i+1) is nondecreasing; binary-search the row.
  auto base = [n](std::uint64_t i) { return i * (n - 1) - i * (i - 1) / 2; };
  std::uint64_t lo = 0, hi = n - 1;  // row index in [lo, hi)
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (base(mid) <= rank) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {lo, lo + 1 + (rank - base(lo))};
}

namespace detail {

inline ComponentCatalog build_catalog_impl(const WeightedGraph& g,
                                           const SpanningTree& tree,
                                           CycleScratch& scratch) {
  ComponentCatalog catalog;
  for (EdgeId e : tree.off_tree_edges) {
    CycleVector cv = fundamental_cycle_impl(g, tree, e, scratch);
    if (classify(g, tree, e) == CycleClass::clean) {
      catalog.clean.push_back(std::move(cv));
    } else {
      catalog.dirty_sign.push_back(
          static_cast<std::int8_t>(root_residual_sign(g, tree, cv)));
      catalog.dirty.push_back(std::move(cv));
    }
  }
  const std::uint64_t nc = catalog.clean.size();
  const std::uint64_t nd = catalog.dirty.size();
  catalog.generator_count = nc + nd * (nd - 1) / 2;
  catalog.null_dim = (nd == 0) ? nc : nc + nd - 1;
  return catalog;
}

}  // namespace detail

/// Builds the generator catalog for the component spanned by `tree`.
inline ComponentCatalog build_catalog(const WeightedGraph& g,
                                      const SpanningTree& tree) {
  detail::CycleScratch scratch(g.edge_count());
  return detail::build_catalog_impl(g, tree, scratch);
}

/// Per-component catalogs for the whole graph, with prefix sums so a single
/// uniform draw over [0, total_generators) addresses every generator of
/// every component.
struct CatalogSet {
  std::vector<ComponentCatalog> catalogs;        // component order
  std::vector<std::uint64_t> generator_offset;   // size count+1, prefix sums
  std::uint64_t total_generators = 0;
  std::uint64_t total_null_dim = 0;

  std::size_t component_of_generator(std::uint64_t global_index) const {
    const auto it = std::upper_bound(generator_offset.begin(),
                                     generator_offset.end(), global_index);
    return static_cast<std::size_t>(it - generator_offset.begin()) - 1;
  }
};

/// Builds all component catalogs in one pass.  Components are traversed in
/// component order with the component's smallest vertex as root; scratch
/// buffers are shared, so total work and memory stay linear in the graph
/// size no matter how many components there are.
inline CatalogSet build_catalogs(const WeightedGraph& g, const Components& comps) {
  CatalogSet set;
  set.catalogs.reserve(comps.count);
  set.generator_offset.assign(1, 0);

  SpanningTree forest;
  forest.reached.assign(g.vertex_count(), 0);
  forest.parent_edge.assign(g.vertex_count(), no_edge);
  forest.vertex_depth.assign(g.vertex_count(), 0);
  forest.in_tree.assign(g.edge_count(), 0);
  forest.edge_depth.assign(g.edge_count(), 0);
  detail::CycleScratch scratch(g.edge_count());

  for (std::uint32_t c = 0; c < comps.count; ++c) {
    forest.tree_edges.clear();
    forest.off_tree_edges.clear();
    detail::grow_spanning_tree(g, comps.vertices[c].front(), forest);
    ComponentCatalog catalog = detail::build_catalog_impl(g, forest, scratch);
    set.total_generators += catalog.generator_count;
    set.total_null_dim += catalog.null_dim;
    set.generator_offset.push_back(set.total_generators);
    set.catalogs.push_back(std::move(catalog));
  }
  return set;
}

/// Materializes a component's full generator list: clean cycles first (in
/// off-tree order), then dirty pairs in lexicographic rank order.  Refuses
/// if the list would exceed `budget` entries, since the pair count grows
/// quadratically in the dirty cycle count.
inline std::vector<CycleVector> enumerate_generators(
    const ComponentCatalog& catalog, std::uint64_t budget = 1u << 20) {
  if (catalog.generator_count > budget) {
    throw refusal_error("generator list has " +
                        std::to_string(catalog.generator_count) +
                        " entries, over the budget of " + std::to_string(budget));
  }
  std::vector<CycleVector> out;
  out.reserve(catalog.generator_count);
  for (const CycleVector& cv : catalog.clean) out.push_back(cv);
  const std::uint64_t nd = catalog.dirty.size();
  for (std::uint64_t i = 0; i < nd; ++i) {
    for (std::uint64_t j = i + 1; j < nd; ++j) {
      out.push_back(pair_vector(catalog.dirty[i], catalog.dirty_sign[i],
                                catalog.dirty[j], catalog.dirty_sign[j]));
    }
  }
  return out;
}

}  // namespace cyclesampler
