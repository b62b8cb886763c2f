#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cycle_basis.hpp"
#include "errors.hpp"
#include "graph.hpp"
#include "rng.hpp"

namespace cyclesampler {

/// Independent reference implementations used to cross-check the sparse
/// machinery: a dense kernel basis via Gaussian elimination and a
/// brute-force rejection sampler.  Both carry hard size guards — they are
/// verification tools, not production paths — but ship in the library so
/// the CLI can offer an end-to-end self-check on small inputs.

/// Dense vertex-by-edge constraint matrix: 1 per regular endpoint, 2 for a
/// self-loop's single vertex.
inline std::vector<std::vector<double>> incidence_matrix(const WeightedGraph& g) {
  std::vector<std::vector<double>> a(
      g.vertex_count(), std::vector<double>(g.edge_count(), 0.0));
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const Edge& edge = g.edge(e);
    if (edge.is_loop()) {
      a[edge.u][e] = 2.0;
    } else {
      a[edge.u][e] = 1.0;
      a[edge.v][e] = 1.0;
    }
  }
  return a;
}

/// Orthonormal basis of a matrix kernel, produced by dense elimination.
struct DenseBasis {
  std::vector<std::vector<double>> vectors;  // orthonormal, length = edge count

  std::size_t dim() const { return vectors.size(); }
};

namespace detail {

/// Modified Gram-Schmidt: projects `v` against the orthonormal rows of
/// `basis` in place and returns the residual norm.
inline double project_residual(std::span<const std::vector<double>> basis,
                               std::vector<double>& v) {
  for (const std::vector<double>& b : basis) {
    double dot = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) dot += b[i] * v[i];
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= dot * b[i];
  }
  double norm = 0.0;
  for (double x : v) norm += x * x;
  return std::sqrt(norm);
}

}  // namespace detail

/// Kernel basis of the constraint matrix by straightforward Gaussian
/// elimination with partial pivoting (pivot threshold 1e-9), then
/// orthonormalized.  Exact and simple, but dense: refuses graphs with more
/// than `max_edges` edges.
inline DenseBasis dense_null_basis(const WeightedGraph& g,
                                   EdgeId max_edges = 200) {
  if (g.edge_count() > max_edges) {
    throw refusal_error("dense kernel solver is limited to " +
                        std::to_string(max_edges) + " edges; graph has " +
                        std::to_string(g.edge_count()));
  }
  const std::size_t rows = g.vertex_count();
  const std::size_t cols = g.edge_count();
  std::vector<std::vector<double>> m = incidence_matrix(g);
  constexpr double pivot_tol = 1e-9;

  // Reduced row echelon form, tracking pivot columns.
  std::vector<std::size_t> pivot_col_of_row;
  std::vector<char> is_pivot_col(cols, 0);
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t best = rank;
    for (std::size_t r = rank + 1; r < rows; ++r) {
      if (std::fabs(m[r][col]) > std::fabs(m[best][col])) best = r;
    }
    if (std::fabs(m[best][col]) < pivot_tol) continue;
    std::swap(m[rank], m[best]);
    const double inv = 1.0 / m[rank][col];
    for (std::size_t c = col; c < cols; ++c) m[rank][c] *= inv;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank || m[r][col] == 0.0) continue;
      const double factor = m[r][col];
      for (std::size_t c = col; c < cols; ++c) m[r][c] -= factor * m[rank][c];
    }
    pivot_col_of_row.push_back(col);
    is_pivot_col[col] = 1;
    ++rank;
  }

  // One kernel vector per free column: x[free] = 1, pivots balance it.
  DenseBasis basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot_col[free]) continue;
    std::vector<double> v(cols, 0.0);
    v[free] = 1.0;
    for (std::size_t r = 0; r < rank; ++r) {
      v[pivot_col_of_row[r]] = -m[r][free];
    }
    const double norm = detail::project_residual(basis.vectors, v);
    if (norm < pivot_tol) {
      throw invariant_error("kernel construction produced a dependent vector");
    }
    for (double& x : v) x /= norm;
    basis.vectors.push_back(std::move(v));
  }
  return basis;
}

/// How a set of sparse vectors sits relative to a dense kernel basis:
/// `max_residual` is the largest relative distance of any vector from the
/// basis span (0 means all vectors lie in the kernel), and `rank` is the
/// dimension the vectors span among themselves.
struct SpanCheck {
  double max_residual = 0.0;
  std::size_t rank = 0;
};

inline SpanCheck span_check(std::span<const CycleVector> vectors,
                            const DenseBasis& basis, EdgeId edge_count) {
  SpanCheck result;
  std::vector<std::vector<double>> independent;
  for (const CycleVector& cv : vectors) {
    std::vector<double> dense(edge_count, 0.0);
    double norm2 = 0.0;
    for (const CycleEntry& entry : cv.entries) {
      if (entry.edge >= edge_count) {
        throw argument_error("cycle entry beyond edge count");
      }
      dense[entry.edge] = entry.coeff;
      norm2 += static_cast<double>(entry.coeff) * entry.coeff;
    }
    const double norm = std::sqrt(norm2);
    if (norm == 0.0) continue;

    // Distance from the kernel span.
    std::vector<double> residual = dense;
    result.max_residual = std::max(
        result.max_residual,
        detail::project_residual(basis.vectors, residual) / norm);

    // Rank among the vectors themselves.
    std::vector<double> reduced = std::move(dense);
    const double left = detail::project_residual(independent, reduced);
    if (left > 1e-6 * norm) {
      for (double& x : reduced) x /= left;
      independent.push_back(std::move(reduced));
    }
  }
  result.rank = independent.size();
  return result;
}

/// Theorem-style kernel dimension computed from first principles, summed
/// over connected components: |E| - |V| + 1 for a bipartite component and
/// |E| - |V| otherwise.  A self-loop is an odd closed walk, so any
/// component containing one counts as non-bipartite.
inline bool is_bipartite(const WeightedGraph& g) {
  std::vector<int> color(g.vertex_count(), -1);
  std::vector<VertexId> stack;
  for (VertexId start = 0; start < g.vertex_count(); ++start) {
    if (color[start] != -1) continue;
    color[start] = 0;
    stack.assign(1, start);
    while (!stack.empty()) {
      const VertexId v = stack.back();
      stack.pop_back();
      for (EdgeId e : g.incident_edges(v)) {
        if (g.edge(e).is_loop()) return false;
        const VertexId w = g.edge(e).other(v);
        if (color[w] == -1) {
          color[w] = 1 - color[v];
          stack.push_back(w);
        } else if (color[w] == color[v]) {
          return false;
        }
      }
    }
  }
  return true;
}

inline std::uint64_t kernel_dimension_formula(const WeightedGraph& g) {
  const Components comps = connected_components(g);
  std::uint64_t dim = 0;
  std::vector<int> color(g.vertex_count(), -1);
  for (std::uint32_t c = 0; c < comps.count; ++c) {
    // Bipartiteness of the component, via 2-coloring over its vertices.
    bool bipartite = true;
    std::vector<VertexId> stack{comps.vertices[c].front()};
    color[stack.front()] = 0;
    while (!stack.empty() && bipartite) {
      const VertexId v = stack.back();
      stack.pop_back();
      for (EdgeId e : g.incident_edges(v)) {
        if (g.edge(e).is_loop()) {
          bipartite = false;
          break;
        }
        const VertexId w = g.edge(e).other(v);
        if (color[w] == -1) {
          color[w] = 1 - color[v];
          stack.push_back(w);
        } else if (color[w] == color[v]) {
          bipartite = false;
          break;
        }
      }
    }
    const std::uint64_t edges = comps.edges[c].size();
    const std::uint64_t vertices = comps.vertices[c].size();
    dim += edges + (bipartite ? 1 : 0) - vertices;
  }
  return dim;
}

/// Brute-force uniform sampler over the feasible set of an interval-form
/// graph: draw every edge weight uniformly within its edge bounds and
/// accept when all vertex weight sums land inside their vertex intervals.
/// Uniform by construction, so its output is the ground truth that chain
/// marginals are tested against — at exponential cost, hence the hard
/// 8-edge guard and the acceptance-rate floor.
///
/// A pilot of 10^5 attempts estimates the acceptance rate first; below
/// 10^-4 the request is refused (the message carries the estimate).
/// Degenerate vertex intervals make acceptance measure-zero, so exact
/// vertex constraints are out of this oracle's reach by design.
inline std::vector<std::vector<double>> rejection_sample(
    const WeightedGraph& g, std::size_t count, std::uint64_t seed,
    EdgeId max_edges = 8) {
  if (g.edge_count() > max_edges) {
    throw refusal_error("rejection oracle is limited to " +
                        std::to_string(max_edges) + " edges; graph has " +
                        std::to_string(g.edge_count()));
  }
  Xoshiro256PlusPlus rng(seed);
  std::vector<std::vector<double>> accepted;
  accepted.reserve(count);
  std::vector<double> w(g.edge_count(), 0.0);
  std::vector<double> sums(g.vertex_count(), 0.0);

  const std::uint64_t pilot = 100000;
  std::uint64_t attempts = 0;
  std::uint64_t pilot_accepts = 0;
  // After the pilot gate passes, keep attempting with a generous cap so a
  // legitimate run cannot loop forever on an unlucky stretch.
  std::uint64_t max_attempts = pilot;
  while (accepted.size() < count) {
    if (attempts == pilot) {
      const double rate =
          static_cast<double>(pilot_accepts) / static_cast<double>(pilot);
      if (rate < 1e-4) {
        throw refusal_error(
            "rejection oracle acceptance rate ~" + std::to_string(rate) +
            " after " + std::to_string(pilot) +
            " pilot draws, below the 1e-4 floor");
      }
      const auto needed = static_cast<std::uint64_t>(
          static_cast<double>(count) / rate * 4.0);
      max_attempts = attempts + needed + pilot;
    } else if (attempts >= max_attempts) {
      throw refusal_error("rejection oracle exceeded its attempt budget (" +
                          std::to_string(max_attempts) + " draws)");
    }
    ++attempts;
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      const Interval& b = g.edge_bounds(e);
      w[e] = rng.uniform(b.lo, b.hi);
    }
    std::fill(sums.begin(), sums.end(), 0.0);
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      const Edge& edge = g.edge(e);
      if (edge.is_loop()) {
        sums[edge.u] += 2.0 * w[e];
      } else {
        sums[edge.u] += w[e];
        sums[edge.v] += w[e];
      }
    }
    bool ok = true;
    for (VertexId v = 0; v < g.vertex_count() && ok; ++v) {
      ok = g.vertex_bounds(v).contains(sums[v]);
    }
    if (ok) {
      if (attempts <= pilot) ++pilot_accepts;
      accepted.push_back(w);
    }
  }
  return accepted;
}

}  // namespace cyclesampler
