// Command-line front end: inspect constraint structure, sample surrogate
// weight assignments, and recompute diagnostics from stored samples.
//
// Exit codes: 0 success, 2 infeasible constraints, 3 I/O or usage errors,
// 4 internal invariant failure.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include <cyclesampler/cyclesampler.hpp>

namespace cs = cyclesampler;
namespace fs = std::filesystem;

namespace {

struct CommonArgs {
  std::string input;
  bool directed = false;
  bool dedupe = false;
  std::optional<double> cap;
  bool scale = false;
  bool bipartite = false;
  std::string vertex_mode = "exact";
  std::string edge_bounds;
};

void add_common_options(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("input", args.input, "edge list file (source, target, weight)")
      ->required();
  cmd->add_flag("--directed", args.directed,
                "treat rows as directed edges with separate out/in constraints");
  cmd->add_flag("--dedupe", args.dedupe, "drop repeated edges, keeping the first");
  cmd->add_option("--cap", args.cap, "drop edges with weight above this cap");
  cmd->add_flag("--scale", args.scale,
                "affinely map weights into the open unit interval");
  cmd->add_flag("--bipartite", args.bipartite,
                "keep source and target labels in distinct namespaces");
  cmd->add_option("--vertex-mode", args.vertex_mode,
                  "vertex constraints: exact | ratio=R | interval=lo,hi | "
                  "file=PATH (default exact)");
  cmd->add_option("--edge-bounds", args.edge_bounds,
                  "edge bounds: lo,hi | file=PATH (default 0,1 with --scale, "
                  "required otherwise)");
}

std::pair<double, double> parse_interval_text(const std::string& text,
                                              const std::string& what) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) {
    throw cs::argument_error(what + " expects 'lo,hi', got '" + text + "'");
  }
  try {
    std::size_t used = 0;
    const double lo = std::stod(text.substr(0, comma), &used);
    if (used != comma) throw std::invalid_argument(text);
    const std::string hi_text = text.substr(comma + 1);
    const double hi = std::stod(hi_text, &used);
    if (used != hi_text.size()) throw std::invalid_argument(text);
    if (lo > hi) throw cs::argument_error(what + ": empty interval (lo > hi)");
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw cs::argument_error(what + " expects numeric 'lo,hi', got '" + text +
                             "'");
  }
}

cs::ConstraintSpec make_spec(const CommonArgs& args) {
  cs::ConstraintSpec spec;
  spec.directed = args.directed;

  const std::string& vm = args.vertex_mode;
  if (vm == "exact") {
    spec.vertex_mode = cs::VertexMode::exact;
  } else if (vm.rfind("ratio=", 0) == 0) {
    spec.vertex_mode = cs::VertexMode::ratio;
    try {
      spec.ratio = std::stod(vm.substr(6));
    } catch (const std::logic_error&) {
      throw cs::argument_error("bad ratio in --vertex-mode '" + vm + "'");
    }
    if (spec.ratio < 0.0) throw cs::argument_error("vertex ratio must be >= 0");
    if (spec.ratio == 0.0) spec.vertex_mode = cs::VertexMode::exact;
  } else if (vm.rfind("interval=", 0) == 0) {
    spec.vertex_mode = cs::VertexMode::interval;
    const auto [lo, hi] = parse_interval_text(vm.substr(9), "--vertex-mode interval");
    spec.vertex_interval = {lo, hi};
  } else if (vm.rfind("file=", 0) == 0) {
    spec.vertex_mode = cs::VertexMode::file;
    spec.vertex_bounds_file = fs::path(vm.substr(5));
  } else {
    throw cs::argument_error("unknown --vertex-mode '" + vm + "'");
  }

  if (args.edge_bounds.empty()) {
    if (!args.scale) {
      throw cs::argument_error(
          "--edge-bounds is required unless --scale is given (scaled weights "
          "default to bounds 0,1)");
    }
    spec.edge_interval = {0.0, 1.0};
  } else if (args.edge_bounds.rfind("file=", 0) == 0) {
    spec.edge_bounds_file = fs::path(args.edge_bounds.substr(5));
  } else {
    const auto [lo, hi] = parse_interval_text(args.edge_bounds, "--edge-bounds");
    spec.edge_interval = {lo, hi};
  }
  return spec;
}

/// Everything the subcommands need about one constrained instance.
struct LoadedProblem {
  cs::ParsedEdges parsed;
  cs::ConstraintSpec spec;
  std::optional<cs::DirectedWeightedGraph> directed_graph;
  std::optional<cs::EdgeMapping> mapping;
  cs::EqualityProblem problem{cs::WeightedGraph(0, {}, {}, {}, {}), {}, {}, 0};
  cs::ValidationReport validation;  // of the interval-form instance
  std::vector<std::string> edge_labels;    // per output column
  std::vector<std::string> vertex_labels;  // per reported vertex constraint
};

void require_feasible(const cs::ValidationReport& report,
                      const std::vector<std::string>& edge_labels,
                      const std::vector<std::string>& vertex_labels) {
  if (report.ok()) return;
  std::ostringstream msg;
  msg << report.summary();
  std::size_t shown = 0;
  for (const cs::BoundViolation& v : report.edge_violations) {
    if (shown++ >= 10) break;
    msg << "\n  edge " << edge_labels[v.index] << ": weight "
        << cs::detail::format_double(v.value) << " outside ["
        << cs::detail::format_double(v.bounds.lo) << ", "
        << cs::detail::format_double(v.bounds.hi) << "]";
  }
  for (const cs::BoundViolation& v : report.vertex_violations) {
    if (shown++ >= 10) break;
    msg << "\n  vertex " << vertex_labels[v.index] << ": weight sum "
        << cs::detail::format_double(v.value) << " outside ["
        << cs::detail::format_double(v.bounds.lo) << ", "
        << cs::detail::format_double(v.bounds.hi) << "]";
  }
  if (shown > 10) msg << "\n  ... and " << (shown - 10) << " more";
  throw cs::infeasible_error(msg.str());
}

LoadedProblem load_problem(const CommonArgs& args) {
  LoadedProblem loaded;
  cs::IngestionOptions opts;
  opts.dedupe = args.dedupe;
  opts.rating_cap = args.cap;
  opts.scale_to_unit = args.scale;
  opts.bipartite_prefixing = args.bipartite;
  loaded.parsed = cs::parse_edges(args.input, opts, args.directed);
  loaded.spec = make_spec(args);

  for (cs::EdgeId e = 0; e < loaded.parsed.edges.size(); ++e) {
    loaded.edge_labels.push_back(cs::edge_label(loaded.parsed, e));
  }

  if (args.directed) {
    loaded.directed_graph = cs::build_directed_graph(loaded.parsed, loaded.spec);
    // Vertex constraint labels follow the bipartite indexing: all out-sums
    // first, then all in-sums.
    for (const std::string& label : loaded.parsed.labels) {
      loaded.vertex_labels.push_back("out:" + label);
    }
    for (const std::string& label : loaded.parsed.labels) {
      loaded.vertex_labels.push_back("in:" + label);
    }
    loaded.validation = cs::validate(*loaded.directed_graph);
    auto [bipartite, mapping] = cs::directed_to_bipartite(*loaded.directed_graph);
    loaded.mapping = std::move(mapping);
    loaded.problem = cs::to_equality_form(bipartite);
    return loaded;
  }

  const cs::WeightedGraph graph = cs::build_graph(loaded.parsed, loaded.spec);
  loaded.vertex_labels = loaded.parsed.labels;
  loaded.validation = cs::validate(graph);
  if (graph.has_self_loops()) {
    if (loaded.spec.vertex_mode != cs::VertexMode::exact) {
      throw cs::argument_error(
          "input contains self-loops; interval vertex modes need loop-free "
          "input (a slack loop would duplicate an existing loop). Use "
          "--vertex-mode exact");
    }
    loaded.problem = cs::make_exact(graph);
  } else {
    loaded.problem = cs::to_equality_form(graph);
  }
  return loaded;
}

int cmd_inspect(const CommonArgs& args, bool verify) {
  LoadedProblem loaded = load_problem(args);
  const auto structure = cs::build_structure(loaded.problem);
  const cs::CatalogSet& cats = structure->catalogs;

  std::uint64_t clean = 0, dirty = 0;
  for (const cs::ComponentCatalog& c : cats.catalogs) {
    clean += c.clean.size();
    dirty += c.dirty.size();
  }
  std::cout << "vertices: " << loaded.parsed.labels.size() << "\n"
            << "edges: " << loaded.parsed.edges.size() << "\n"
            << "components: " << structure->components.count << "\n"
            << "clean_off_tree: " << clean << "\n"
            << "dirty_off_tree: " << dirty << "\n"
            << "generator_count: " << cats.total_generators << "\n"
            << "null_dim: " << cats.total_null_dim << "\n"
            << "sweep_length: " << std::max<std::uint64_t>(1, cats.total_null_dim)
            << "\n";
  if (cats.total_generators == 0) {
    std::cout << "frozen: yes (weights are uniquely determined; sampling "
                 "would only return the input)\n";
  } else {
    std::cout << "frozen: no\n";
  }
  std::cout << "feasible: " << (loaded.validation.ok() ? "yes" : "no") << "\n";

  if (verify) {
    const cs::DenseBasis basis = cs::dense_null_basis(loaded.problem.graph);
    std::vector<cs::CycleVector> generators;
    for (const cs::ComponentCatalog& c : cats.catalogs) {
      const auto part = cs::enumerate_generators(c);
      generators.insert(generators.end(), part.begin(), part.end());
    }
    const cs::SpanCheck check =
        cs::span_check(generators, basis, loaded.problem.graph.edge_count());
    if (check.max_residual > 1e-9 || check.rank != basis.dim() ||
        cats.total_null_dim != basis.dim()) {
      throw cs::invariant_error(
          "kernel verification failed: residual " +
          std::to_string(check.max_residual) + ", generator rank " +
          std::to_string(check.rank) + ", catalog dimension " +
          std::to_string(cats.total_null_dim) + ", dense dimension " +
          std::to_string(basis.dim()));
    }
    std::cout << "verify: ok (rank " << check.rank
              << " matches dense kernel, max residual "
              << cs::detail::format_double(check.max_residual) << ")\n";
  }

  require_feasible(loaded.validation, loaded.edge_labels, loaded.vertex_labels);
  return 0;
}

struct SampleArgs {
  std::uint64_t seed = 1;
  std::uint64_t samples = 1;
  std::uint64_t steps_per_sample = 0;  // 0: one sweep
  std::uint64_t burn_in = 0;
  std::uint32_t chains = 1;
  std::string out_dir = ".";
  std::uint64_t progress = 0;
};

cs::Manifest base_manifest(const CommonArgs& args, const LoadedProblem& loaded,
                           const cs::CatalogSet& cats, const SampleArgs& sargs,
                           std::uint64_t block_steps) {
  cs::Manifest m;
  m.version = cs::version_string;
  m.input_path = args.input;
  m.input_hash = cs::file_hash(args.input);
  m.directed = args.directed;
  m.options.dedupe = args.dedupe;
  m.options.rating_cap = args.cap;
  m.options.scale_to_unit = args.scale;
  m.options.bipartite_prefixing = args.bipartite;
  m.stats = loaded.parsed.stats;
  m.edge_mode = loaded.spec.edge_bounds_file ? "file" : "interval";
  m.edge_interval = loaded.spec.edge_interval;
  if (loaded.spec.edge_bounds_file) {
    m.edge_bounds_file = loaded.spec.edge_bounds_file->string();
    m.edge_bounds_hash = cs::file_hash(*loaded.spec.edge_bounds_file);
  }
  switch (loaded.spec.vertex_mode) {
    case cs::VertexMode::exact: m.vertex_mode = "exact"; break;
    case cs::VertexMode::ratio: m.vertex_mode = "ratio"; break;
    case cs::VertexMode::interval: m.vertex_mode = "interval"; break;
    case cs::VertexMode::file: m.vertex_mode = "file"; break;
  }
  m.ratio = loaded.spec.ratio;
  m.vertex_interval = loaded.spec.vertex_interval;
  if (loaded.spec.vertex_bounds_file) {
    m.vertex_bounds_file = loaded.spec.vertex_bounds_file->string();
    m.vertex_bounds_hash = cs::file_hash(*loaded.spec.vertex_bounds_file);
  }
  m.seed = sargs.seed;
  m.samples = sargs.samples;
  m.steps_per_sample = block_steps;
  m.burn_in = sargs.burn_in;
  m.chains = sargs.chains;
  m.vertices = loaded.parsed.labels.size();
  m.edges = loaded.parsed.edges.size();
  m.components = cats.catalogs.size();
  for (const cs::ComponentCatalog& c : cats.catalogs) {
    m.clean_count += c.clean.size();
    m.dirty_count += c.dirty.size();
  }
  m.generator_count = cats.total_generators;
  m.null_dim = cats.total_null_dim;
  return m;
}

/// Runs one chain to completion in `dir`, writing samples, trace, ranges,
/// and its manifest.  Returns the completed manifest.
void run_one_chain(const LoadedProblem& loaded,
                   const std::shared_ptr<const cs::ProblemStructure>& structure,
                   cs::Manifest manifest, std::uint64_t seed,
                   std::uint32_t chain_index, const fs::path& dir,
                   const SampleArgs& sargs) {
  manifest.seed = seed;
  manifest.chain_index = chain_index;
  manifest.complete = false;
  fs::create_directories(dir);
  // Manifest goes down first, flagged incomplete, so an interrupted run
  // leaves an honest record next to its partial files.
  cs::write_manifest(dir / "manifest.json", manifest);

  cs::ChainState chain(loaded.problem, seed, structure);
  cs::SamplesWriter writer(dir / "samples.tsv", loaded.edge_labels);
  cs::RangeAccumulator ranges(loaded.problem);
  cs::NormTrace trace;
  trace.record(0, 0.0);

  const std::uint64_t total_blocks = sargs.burn_in + sargs.samples;
  const std::vector<std::uint64_t> schedule_vec = cs::log_schedule(total_blocks);
  const std::set<std::uint64_t> schedule(schedule_vec.begin(), schedule_vec.end());

  cs::RunOptions opts;
  opts.samples = sargs.samples;
  opts.steps_per_sample = sargs.steps_per_sample;
  opts.burn_in = sargs.burn_in;
  const std::span<const double> initial_original(
      chain.initial_weights().data(), loaded.problem.origin_edge_count);
  opts.observer = [&](std::uint64_t block, std::uint64_t steps,
                      std::span<const double> weights) {
    if (schedule.count(block) > 0) {
      trace.record(steps, cs::frobenius_distance(weights, initial_original));
    }
  };
  opts.sink = [&](std::uint64_t index, std::span<const double> weights) {
    if (loaded.mapping) {
      const std::vector<double> directed = cs::map_back(weights, *loaded.mapping);
      writer.write_row(index, directed);
      ranges.update(directed);
    } else {
      writer.write_row(index, weights);
      ranges.update(weights);
    }
    return true;
  };
  if (sargs.progress > 0) {
    opts.progress_interval = sargs.progress;
    opts.progress = [chain_index](const cs::RunProgress& p) {
      std::cerr << "chain " << chain_index << ": " << p.blocks_done << "/"
                << p.blocks_total << " blocks, " << p.steps
                << " steps, distance "
                << cs::detail::format_double(p.distance) << "\n";
    };
  }

  const cs::RunSummary summary = cs::run(chain, opts);
  writer.close();
  cs::write_trace_csv(dir / "trace.csv", trace);
  cs::write_ranges_csv(dir / "ranges.csv", ranges.report(), loaded.edge_labels,
                       loaded.vertex_labels);

  manifest.complete = !summary.aborted;
  manifest.samples_emitted = summary.samples_emitted;
  manifest.max_drift = summary.max_drift;
  manifest.seconds = summary.seconds;
  cs::write_manifest(dir / "manifest.json", manifest);
}

int cmd_sample(const CommonArgs& args, const SampleArgs& sargs) {
  if (sargs.samples == 0) throw cs::argument_error("--samples must be >= 1");
  if (sargs.chains == 0) throw cs::argument_error("--chains must be >= 1");
  LoadedProblem loaded = load_problem(args);
  require_feasible(loaded.validation, loaded.edge_labels, loaded.vertex_labels);

  const auto structure = cs::build_structure(loaded.problem);
  const std::uint64_t block_steps =
      sargs.steps_per_sample > 0
          ? sargs.steps_per_sample
          : std::max<std::uint64_t>(1, structure->catalogs.total_null_dim);
  if (structure->catalogs.total_generators == 0) {
    std::cerr << "warning: all components are frozen; every sample equals "
                 "the input weights\n";
  }
  const cs::Manifest manifest =
      base_manifest(args, loaded, structure->catalogs, sargs, block_steps);

  const fs::path out(sargs.out_dir);
  if (sargs.chains == 1) {
    run_one_chain(loaded, structure, manifest, sargs.seed, 0, out, sargs);
  } else {
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> errors(sargs.chains);
    for (std::uint32_t i = 0; i < sargs.chains; ++i) {
      threads.emplace_back([&, i]() {
        try {
          run_one_chain(loaded, structure, manifest, sargs.seed + i, i,
                        out / ("chain-" + std::to_string(i)), sargs);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      });
    }
    for (std::thread& t : threads) t.join();
    for (const std::exception_ptr& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  std::cout << "samples: " << sargs.samples << " x " << sargs.chains
            << " chain(s) -> " << out.string() << "\n"
            << "steps_per_sample: " << block_steps << "\n"
            << "null_dim: " << structure->catalogs.total_null_dim << "\n";
  return 0;
}

struct DiagnoseArgs {
  std::string run_dir;
  std::string input_override;
  std::string out_dir;
};

int cmd_diagnose(const DiagnoseArgs& dargs) {
  const fs::path run(dargs.run_dir);
  const cs::Manifest manifest = cs::read_manifest(run / "manifest.json");

  const std::string input_path =
      dargs.input_override.empty() ? manifest.input_path : dargs.input_override;
  if (cs::file_hash(input_path) != manifest.input_hash) {
    throw cs::io_error("input file '" + input_path +
                       "' does not match the manifest content hash; diagnostics "
                       "would be computed against the wrong baseline");
  }
  if (!manifest.edge_bounds_file.empty() &&
      cs::file_hash(manifest.edge_bounds_file) != manifest.edge_bounds_hash) {
    throw cs::io_error("edge bounds file changed since the run");
  }
  if (!manifest.vertex_bounds_file.empty() &&
      cs::file_hash(manifest.vertex_bounds_file) != manifest.vertex_bounds_hash) {
    throw cs::io_error("vertex bounds file changed since the run");
  }

  CommonArgs args;
  args.input = input_path;
  args.directed = manifest.directed;
  args.dedupe = manifest.options.dedupe;
  args.cap = manifest.options.rating_cap;
  args.scale = manifest.options.scale_to_unit;
  args.bipartite = manifest.options.bipartite_prefixing;
  if (manifest.vertex_mode == "exact") {
    args.vertex_mode = "exact";
  } else if (manifest.vertex_mode == "ratio") {
    args.vertex_mode = "ratio=" + cs::detail::format_double(manifest.ratio);
  } else if (manifest.vertex_mode == "interval") {
    args.vertex_mode =
        "interval=" + cs::detail::format_double(manifest.vertex_interval.lo) +
        "," + cs::detail::format_double(manifest.vertex_interval.hi);
  } else if (manifest.vertex_mode == "file") {
    args.vertex_mode = "file=" + manifest.vertex_bounds_file;
  } else {
    throw cs::io_error("manifest has unknown vertex mode '" +
                       manifest.vertex_mode + "'");
  }
  args.edge_bounds =
      !manifest.edge_bounds_file.empty()
          ? "file=" + manifest.edge_bounds_file
          : cs::detail::format_double(manifest.edge_interval.lo) + "," +
                cs::detail::format_double(manifest.edge_interval.hi);

  LoadedProblem loaded = load_problem(args);
  if (loaded.parsed.edges.size() != manifest.edges) {
    throw cs::io_error("reparsed input yields " +
                       std::to_string(loaded.parsed.edges.size()) +
                       " edges but the manifest recorded " +
                       std::to_string(manifest.edges));
  }

  // Initial weights in output order (directed runs store directed weights).
  std::span<const double> initial(loaded.problem.graph.weights().data(),
                                  loaded.problem.origin_edge_count);
  const std::vector<double> initial_mapped =
      loaded.mapping ? cs::map_back(initial, *loaded.mapping)
                     : std::vector<double>(initial.begin(), initial.end());

  cs::RangeAccumulator ranges(loaded.problem);
  cs::NormTrace trace;
  trace.record(0, 0.0);
  std::uint64_t rows = 0;
  cs::read_samples(
      run / "samples.tsv", initial_mapped.size(),
      [&](std::uint64_t index, std::span<const double> weights) {
        ++rows;
        ranges.update(weights);
        const std::uint64_t steps =
            (manifest.burn_in + index + 1) * manifest.steps_per_sample;
        trace.record(steps, cs::frobenius_distance(weights, initial_mapped));
      });

  const fs::path out = dargs.out_dir.empty() ? run / "diagnose"
                                             : fs::path(dargs.out_dir);
  fs::create_directories(out);
  cs::write_trace_csv(out / "trace.csv", trace);
  cs::write_ranges_csv(out / "ranges.csv", ranges.report(), loaded.edge_labels,
                       loaded.vertex_labels);

  const cs::Interval ge = ranges.report().global_edge_range();
  const cs::Interval gv = ranges.report().global_vertex_range();
  std::cout << "samples: " << rows << "\n"
            << "edge_range: [" << cs::detail::format_double(ge.lo) << ", "
            << cs::detail::format_double(ge.hi) << "]\n"
            << "vertex_range: [" << cs::detail::format_double(gv.lo) << ", "
            << cs::detail::format_double(gv.hi) << "]\n";
  const auto plateau = trace.plateau_step();
  if (plateau) {
    std::cout << "plateau_steps: " << *plateau << "\n";
  } else {
    std::cout << "plateau_steps: not reached\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "cyclesampler: uniform surrogate edge weights under vertex and edge "
      "constraints"};
  app.require_subcommand(1);

  CommonArgs inspect_args;
  bool verify = false;
  CLI::App* inspect = app.add_subcommand(
      "inspect", "report constraint structure and feasibility");
  add_common_options(inspect, inspect_args);
  inspect->add_flag("--verify", verify,
                    "cross-check the generator catalog against a dense kernel "
                    "solver (small graphs only)");

  CommonArgs sample_common;
  SampleArgs sample_args;
  CLI::App* sample =
      app.add_subcommand("sample", "run the chain and write surrogate samples");
  add_common_options(sample, sample_common);
  sample->add_option("--seed", sample_args.seed, "RNG seed (default 1)");
  sample->add_option("--samples", sample_args.samples,
                     "number of samples to emit (default 1)");
  sample->add_option("--steps-per-sample", sample_args.steps_per_sample,
                     "steps between samples (default: one sweep = null_dim)");
  sample->add_option("--burn-in", sample_args.burn_in,
                     "sample-sized blocks to discard before the first sample "
                     "(default 0)");
  sample->add_option("--chains", sample_args.chains,
                     "independent chains, seeds seed+0..k-1, each writing to "
                     "chain-<i>/ (default 1)");
  sample->add_option("--out", sample_args.out_dir,
                     "output directory (default .)");
  sample->add_option("--progress", sample_args.progress,
                     "print progress to stderr every N blocks (default off)");

  DiagnoseArgs diagnose_args;
  CLI::App* diagnose = app.add_subcommand(
      "diagnose", "recompute trace and ranges from a stored run");
  diagnose->add_option("run_dir", diagnose_args.run_dir,
                       "directory with samples.tsv and manifest.json")
      ->required();
  diagnose->add_option("--input", diagnose_args.input_override,
                       "input edge list (default: path recorded in manifest)");
  diagnose->add_option("--out", diagnose_args.out_dir,
                       "output directory (default: <run_dir>/diagnose)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 3;  // usage problems land in the I/O-error class
  }

  try {
    if (*inspect) return cmd_inspect(inspect_args, verify);
    if (*sample) return cmd_sample(sample_common, sample_args);
    if (*diagnose) return cmd_diagnose(diagnose_args);
    return 3;
  } catch (const cs::infeasible_error& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 2;
  } catch (const cs::invariant_error& e) {
    std::cerr << "internal invariant failure: " << e.what() << "\n";
    return 4;
  } catch (const cs::error& e) {
    // argument, I/O, and refusal errors: bad input or unusable request
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
}
