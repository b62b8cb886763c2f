#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cycle_basis.hpp"
#include "errors.hpp"
#include "graph.hpp"
#include "rng.hpp"

namespace cyclesampler {

enum class StepKind {
  clean,   // moved along a single clean fundamental cycle
  pair,    // moved along a combination of two dirty cycles
  frozen,  // no generators exist; the step was a no-op
};

/// What one Markov step did.  `lo`/`hi` bound the feasible move interval
/// that `alpha` was drawn from; `touched_edges` is the generator's support
/// size (0 for a frozen step).
struct StepRecord {
  StepKind kind = StepKind::frozen;
  double alpha = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  std::uint32_t touched_edges = 0;
};

/// A proposed move direction: which generator was drawn and where its
/// vector lives.  For pair generators the vector is assembled into an
/// internal buffer that stays valid until the next proposal.
struct Proposal {
  StepKind kind = StepKind::frozen;
  std::uint64_t global_index = 0;  // position in the pooled generator list
  const CycleVector* vector = nullptr;
};

/// The structural (state-independent) half of a sampling problem: the
/// component decomposition and the generator catalogs.  Immutable once
/// built, so independent chains over the same problem can share one copy.
struct ProblemStructure {
  Components components;
  CatalogSet catalogs;
};

inline std::shared_ptr<const ProblemStructure> build_structure(
    const EqualityProblem& problem) {
  auto structure = std::make_shared<ProblemStructure>();
  structure->components = connected_components(problem.graph);
  structure->catalogs = build_catalogs(problem.graph, structure->components);
  return structure;
}

/// One Markov chain over the feasible weight assignments of an equality
/// problem.  The state is the full edge weight vector (original edges plus
/// slack loops); every step preserves all vertex sums exactly up to float
/// rounding, which is monitored rather than corrected.
///
/// Randomness protocol, fixed for reproducibility: each non-frozen step
/// consumes one bounded integer draw (the pooled generator index) followed
/// by one uniform draw (the move size).  Frozen steps consume nothing.
///
/// The chain keeps a pointer to the problem; the caller must keep the
/// problem alive for the chain's lifetime.
class ChainState {
 public:
  ChainState(const EqualityProblem& problem, std::uint64_t seed)
      : ChainState(problem, seed, build_structure(problem)) {}

  /// Shares a pre-built structure (see build_structure); the structure must
  /// have been built for this exact problem.
  ChainState(const EqualityProblem& problem, std::uint64_t seed,
             std::shared_ptr<const ProblemStructure> structure)
      : problem_(&problem),
        structure_(std::move(structure)),
        weights_(problem.graph.weights()),
        initial_weights_(problem.graph.weights()),
        rng_(seed) {
    check_feasible(problem);
    sweep_length_ =
        std::max<std::uint64_t>(1, structure_->catalogs.total_null_dim);
  }

  const EqualityProblem& problem() const { return *problem_; }
  const Components& components() const { return structure_->components; }
  const CatalogSet& catalogs() const { return structure_->catalogs; }

  /// Current weights for all edges, slack loops included.
  const std::vector<double>& weights() const { return weights_; }
  /// Current weights restricted to the caller's original edges.
  std::span<const double> original_weights() const {
    return {weights_.data(), problem_->origin_edge_count};
  }
  /// The starting assignment (the observed weights).
  const std::vector<double>& initial_weights() const { return initial_weights_; }

  std::uint64_t steps_taken() const { return steps_; }
  /// Steps per sweep: the total kernel dimension (at least 1, so frozen
  /// chains still advance their bookkeeping).
  std::uint64_t sweep_length() const { return sweep_length_; }
  /// True when no component has any generator: the assignment is the
  /// unique feasible point and every step is a no-op.
  bool degenerate() const { return catalogs().total_generators == 0; }

  /// Draws a generator uniformly from the pooled list across all
  /// components.  Clean cycles are used directly; a dirty pair is
  /// assembled on demand from its two stored cycles.
  Proposal propose_generator() {
    if (degenerate()) return {StepKind::frozen, 0, nullptr};
    const CatalogSet& set = catalogs();
    const std::uint64_t global = rng_.below(set.total_generators);
    const std::size_t comp = set.component_of_generator(global);
    const ComponentCatalog& catalog = set.catalogs[comp];
    const std::uint64_t local = global - set.generator_offset[comp];
    if (local < catalog.clean.size()) {
      return {StepKind::clean, global, &catalog.clean[local]};
    }
    const auto [i, j] =
        pair_from_rank(catalog.dirty.size(), local - catalog.clean.size());
    pair_buffer_ = pair_vector(catalog.dirty[i], catalog.dirty_sign[i],
                               catalog.dirty[j], catalog.dirty_sign[j]);
    return {StepKind::pair, global, &pair_buffer_};
  }

  /// Largest closed interval I such that moving the current weights by
  /// alpha times the generator stays within every edge bound, for all
  /// alpha in I.  Always contains 0 (the current state is feasible); the
  /// endpoints are clamped to enforce that against float rounding.
  Interval alpha_interval(const CycleVector& cv) const {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (const CycleEntry& entry : cv.entries) {
      const Interval& b = problem_->graph.edge_bounds(entry.edge);
      const double w = weights_[entry.edge];
      const double k = entry.coeff;
      // a <= w + alpha*k <= b, with the division flipping order for k < 0.
      const double c1 = (b.lo - w) / k;
      const double c2 = (b.hi - w) / k;
      lo = std::max(lo, std::min(c1, c2));
      hi = std::min(hi, std::max(c1, c2));
    }
    if (!std::isfinite(lo) || !std::isfinite(hi)) {
      throw invariant_error("move interval is unbounded (missing edge bounds)");
    }
    return {std::min(lo, 0.0), std::max(hi, 0.0)};
  }

  /// One Markov step: draw a generator, draw a move size uniformly from
  /// its feasible interval, apply.  Moved weights are clamped to their
  /// bounds to stop float rounding from accumulating past them.
  StepRecord step() {
    ++steps_;
    const Proposal p = propose_generator();
    if (p.kind == StepKind::frozen) return {StepKind::frozen, 0.0, 0.0, 0.0, 0};
    const Interval interval = alpha_interval(*p.vector);
    const double alpha = rng_.uniform(interval.lo, interval.hi);
    for (const CycleEntry& entry : p.vector->entries) {
      const Interval& b = problem_->graph.edge_bounds(entry.edge);
      weights_[entry.edge] = std::clamp(
          weights_[entry.edge] + alpha * entry.coeff, b.lo, b.hi);
    }
    if (paranoid_) check_step_invariants();
    return {p.kind, alpha, interval.lo, interval.hi,
            static_cast<std::uint32_t>(p.vector->entries.size())};
  }

  /// Debug mode: re-verify full feasibility and equality drift after every
  /// step.  Far too slow for production sweeps; meant for tests.
  void set_paranoid(bool on) { paranoid_ = on; }

  /// Largest absolute deviation of any vertex weight sum from its target.
  /// Steps preserve the sums exactly in exact arithmetic; this measures the
  /// accumulated float rounding instead of re-projecting it away.
  double max_drift() const {
    double drift = 0.0;
    for (VertexId v = 0; v < problem_->graph.vertex_count(); ++v) {
      double sum = 0.0;
      for (EdgeId e : problem_->graph.incident_edges(v)) {
        sum += problem_->graph.edge(e).is_loop() ? 2.0 * weights_[e] : weights_[e];
      }
      drift = std::max(drift, std::fabs(sum - problem_->vertex_target[v]));
    }
    return drift;
  }

 private:
  void check_step_invariants() const {
    for (EdgeId e = 0; e < problem_->graph.edge_count(); ++e) {
      const Interval& b = problem_->graph.edge_bounds(e);
      if (weights_[e] < b.lo || weights_[e] > b.hi) {
        throw invariant_error("edge " + std::to_string(e) +
                              " left its bounds after a step");
      }
    }
    double scale = 1.0;
    for (double t : problem_->vertex_target) scale = std::max(scale, std::fabs(t));
    if (max_drift() > 1e-8 * scale) {
      throw invariant_error("vertex equality drift exceeded 1e-8 of scale");
    }
  }

  static void check_feasible(const EqualityProblem& problem) {
    for (EdgeId e = 0; e < problem.graph.edge_count(); ++e) {
      const Interval& b = problem.graph.edge_bounds(e);
      const double w = problem.graph.weight(e);
      const double tol = detail::bound_tolerance(w, b);
      if (w >= b.lo - tol && w <= b.hi + tol) continue;
      if (problem.is_slack(e)) {
        // A slack loop starting outside its bounds means the vertex weight
        // sum misses its interval; report it in the caller's terms.
        const VertexId v = problem.graph.edge(e).u;
        throw infeasible_error(
            "vertex " + std::to_string(v) + ": weight sum " +
            std::to_string(problem.vertex_target[v]) +
            " lies outside the requested vertex interval");
      }
      throw infeasible_error("edge " + std::to_string(e) + ": weight " +
                             std::to_string(w) + " lies outside its bounds [" +
                             std::to_string(b.lo) + ", " + std::to_string(b.hi) +
                             "]");
    }
  }

  const EqualityProblem* problem_;
  std::shared_ptr<const ProblemStructure> structure_;
  std::vector<double> weights_;
  std::vector<double> initial_weights_;
  Xoshiro256PlusPlus rng_;
  std::uint64_t steps_ = 0;
  std::uint64_t sweep_length_ = 1;
  CycleVector pair_buffer_;
  bool paranoid_ = false;
};

/// Builds a chain positioned at the problem's observed weights.  Throws
/// infeasible_error if those weights violate any bound, naming the first
/// offending constraint.
inline ChainState init_chain(const EqualityProblem& problem, std::uint64_t seed) {
  return ChainState(problem, seed);
}

/// Progress callback payload: steps taken so far, samples emitted so far,
/// and the current Frobenius distance from the starting weights (original
/// edges only).  Block counts are included for percentage displays.
struct RunProgress {
  std::uint64_t steps = 0;
  std::uint64_t samples_emitted = 0;
  std::uint64_t blocks_done = 0;
  std::uint64_t blocks_total = 0;
  double distance = 0.0;
};

struct RunOptions {
  std::uint64_t samples = 1;
  /// Steps between successive emissions; 0 means one sweep.
  std::uint64_t steps_per_sample = 0;
  /// Blocks of steps_per_sample steps discarded before the first emission.
  std::uint64_t burn_in = 0;
  /// Called after each emitted sample with (sample index, weights on the
  /// original edges).  Returning false aborts the run.
  std::function<bool(std::uint64_t, std::span<const double>)> sink;
  /// Called after every block, burn-in included, with (1-based block index,
  /// steps taken, weights on the original edges).  This is the hook trace
  /// recorders attach to.
  std::function<void(std::uint64_t, std::uint64_t, std::span<const double>)>
      observer;
  /// Optional progress callback, invoked every `progress_interval` blocks.
  std::function<void(const RunProgress&)> progress;
  std::uint64_t progress_interval = 0;
};

struct RunSummary {
  std::uint64_t samples_emitted = 0;
  std::uint64_t steps = 0;
  std::uint64_t frozen_steps = 0;
  double mean_abs_alpha = 0.0;
  double mean_interval_width = 0.0;
  double max_drift = 0.0;
  double seconds = 0.0;
  bool aborted = false;
};

/// Advances the chain block by block, emitting one sample per block after
/// the burn-in blocks.  Drift is measured once per block.
inline RunSummary run(ChainState& chain, const RunOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  RunSummary summary;
  const std::uint64_t block_steps =
      opts.steps_per_sample == 0 ? chain.sweep_length() : opts.steps_per_sample;
  const std::uint64_t total_blocks = opts.burn_in + opts.samples;
  double alpha_sum = 0.0;
  double width_sum = 0.0;

  for (std::uint64_t block = 0; block < total_blocks; ++block) {
    for (std::uint64_t s = 0; s < block_steps; ++s) {
      const StepRecord rec = chain.step();
      ++summary.steps;
      if (rec.kind == StepKind::frozen) {
        ++summary.frozen_steps;
      } else {
        alpha_sum += std::fabs(rec.alpha);
        width_sum += rec.hi - rec.lo;
      }
    }
    summary.max_drift = std::max(summary.max_drift, chain.max_drift());
    if (opts.observer) {
      opts.observer(block + 1, summary.steps, chain.original_weights());
    }
    if (block >= opts.burn_in) {
      const std::uint64_t index = block - opts.burn_in;
      ++summary.samples_emitted;
      if (opts.sink && !opts.sink(index, chain.original_weights())) {
        summary.aborted = true;
        break;
      }
    }
    if (opts.progress && opts.progress_interval > 0 &&
        (block + 1) % opts.progress_interval == 0) {
      double dist = 0.0;
      const auto now = chain.original_weights();
      for (std::size_t i = 0; i < now.size(); ++i) {
        const double d = now[i] - chain.initial_weights()[i];
        dist += d * d;
      }
      opts.progress(RunProgress{summary.steps, summary.samples_emitted,
                                block + 1, total_blocks, std::sqrt(dist)});
    }
  }
  const std::uint64_t moves = summary.steps - summary.frozen_steps;
  if (moves > 0) {
    summary.mean_abs_alpha = alpha_sum / static_cast<double>(moves);
    summary.mean_interval_width = width_sum / static_cast<double>(moves);
  }
  summary.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return summary;
}

}  // namespace cyclesampler
