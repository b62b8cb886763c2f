#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"

using namespace cyclesampler;
namespace ts = testsupport;

namespace {

double kernel_residual(const WeightedGraph& g, const std::vector<double>& x) {
  const auto a = incidence_matrix(g);
  double worst = 0.0;
  for (const auto& row : a) {
    double dot = 0.0;
    for (std::size_t e = 0; e < x.size(); ++e) dot += row[e] * x[e];
    worst = std::max(worst, std::fabs(dot));
  }
  return worst;
}

}  // namespace

TEST_CASE("incidence matrix: endpoints get 1, a loop gets a single 2",
          "[oracle]") {
  const WeightedGraph g(2, {{0, 1}, {0, 0}}, {1.0, 1.0},
                        {{0.0, 9.0}, {0.0, 9.0}}, {{3.0, 3.0}, {1.0, 1.0}});
  const auto a = incidence_matrix(g);
  REQUIRE(a.size() == 2);
  REQUIRE(a[0].size() == 2);
  CHECK(a[0][0] == 1.0);
  CHECK(a[1][0] == 1.0);
  CHECK(a[0][1] == 2.0);
  CHECK(a[1][1] == 0.0);
}

TEST_CASE("dense kernel dimensions of the reference instances", "[oracle]") {
  CHECK(dense_null_basis(ts::golden_graph()).dim() == 3);
  CHECK(dense_null_basis(ts::phone_graph()).dim() == 1);
  CHECK(dense_null_basis(to_equality_form(ts::polygon_graph()).graph).dim() == 2);

  const WeightedGraph triangle(3, {{0, 1}, {1, 2}, {2, 0}}, {1.0, 1.0, 1.0},
                               std::vector<Interval>(3, {0.0, 9.0}),
                               std::vector<Interval>(3, {2.0, 2.0}));
  CHECK(dense_null_basis(triangle).dim() == 0);
}

TEST_CASE("dense kernel vectors are orthonormal and annihilated by the "
          "incidence matrix",
          "[oracle]") {
  const WeightedGraph g = ts::golden_graph();
  const DenseBasis basis = dense_null_basis(g);
  REQUIRE(basis.dim() == 3);
  for (std::size_t i = 0; i < basis.vectors.size(); ++i) {
    CHECK(kernel_residual(g, basis.vectors[i]) < 1e-9);
    for (std::size_t j = 0; j <= i; ++j) {
      double dot = 0.0;
      for (std::size_t e = 0; e < basis.vectors[i].size(); ++e) {
        dot += basis.vectors[i][e] * basis.vectors[j][e];
      }
      CHECK(dot == Catch::Approx(i == j ? 1.0 : 0.0).margin(1e-9));
    }
  }
}

TEST_CASE("dense solver refuses oversized graphs", "[oracle]") {
  CHECK_THROWS_AS(dense_null_basis(ts::golden_graph(), 5), refusal_error);
}

TEST_CASE("span check accepts the catalog generators and rejects foreign "
          "directions",
          "[oracle]") {
  const WeightedGraph g = ts::golden_graph();
  const DenseBasis basis = dense_null_basis(g);
  const std::vector<CycleVector> gens =
      enumerate_generators(build_catalog(g, build_spanning_tree(g, 0)));

  const SpanCheck ok = span_check(gens, basis, g.edge_count());
  CHECK(ok.max_residual < 1e-9);
  CHECK(ok.rank == 3);  // four generators spanning a three-dimensional kernel

  CycleVector off;  // a single tree edge is never a kernel direction
  off.entries = {{0, 1}};
  const std::vector<CycleVector> foreign = {off};
  const SpanCheck bad = span_check(foreign, basis, g.edge_count());
  CHECK(bad.max_residual > 0.1);
}

TEST_CASE("bipartiteness: odd circuits and loops break it", "[oracle]") {
  const WeightedGraph square(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}},
                             {1.0, 1.0, 1.0, 1.0},
                             std::vector<Interval>(4, {0.0, 9.0}),
                             std::vector<Interval>(4, {2.0, 2.0}));
  CHECK(is_bipartite(square));

  const WeightedGraph triangle(3, {{0, 1}, {1, 2}, {2, 0}}, {1.0, 1.0, 1.0},
                               std::vector<Interval>(3, {0.0, 9.0}),
                               std::vector<Interval>(3, {2.0, 2.0}));
  CHECK_FALSE(is_bipartite(triangle));

  const WeightedGraph loops(1, {{0, 0}}, {1.0}, {{0.0, 9.0}}, {{2.0, 2.0}});
  CHECK_FALSE(is_bipartite(loops));

  CHECK_FALSE(is_bipartite(ts::golden_graph()));  // self-loops
  CHECK_FALSE(is_bipartite(ts::phone_graph()));   // odd circuit 1-2-3
}

TEST_CASE("combinatorial dimension formula matches the dense kernel",
          "[oracle]") {
  CHECK(kernel_dimension_formula(ts::golden_graph()) == 3);
  CHECK(kernel_dimension_formula(ts::phone_graph()) == 1);
  CHECK(kernel_dimension_formula(to_equality_form(ts::polygon_graph()).graph) ==
        2);

  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 50; ++trial) {
    ts::RandomGraphOptions opt;
    opt.allow_loops = (trial % 2 == 0);
    opt.force_bipartite = (trial % 3 == 0) && !opt.allow_loops;
    opt.max_edges = 25;
    const WeightedGraph g = ts::random_connected_graph(rng, opt);
    CHECK(kernel_dimension_formula(g) == dense_null_basis(g).dim());
  }
}

TEST_CASE("rejection oracle: samples respect all bounds and the edge "
          "marginal is right",
          "[oracle]") {
  const WeightedGraph g(2, {{0, 1}}, {0.5}, {{0.0, 1.0}},
                        {{0.2, 0.8}, {0.2, 0.8}});
  const auto samples = rejection_sample(g, 2000, 99);
  REQUIRE(samples.size() == 2000);
  std::vector<double> xs;
  for (const auto& s : samples) {
    REQUIRE(s.size() == 1);
    CHECK(s[0] >= 0.2);
    CHECK(s[0] <= 0.8);
    xs.push_back(s[0]);
  }
  // Acceptance just truncates the proposal, so the law is uniform.
  std::sort(xs.begin(), xs.end());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = (xs[i] - 0.2) / 0.6;
    d = std::max(d, std::fabs(f - static_cast<double>(i) / xs.size()));
    d = std::max(d, std::fabs(static_cast<double>(i + 1) / xs.size() - f));
  }
  CHECK(d < 0.04);
}

TEST_CASE("rejection samples of the polygon instance stay in the polygon",
          "[oracle]") {
  const auto samples = rejection_sample(ts::polygon_graph(), 500, 5);
  REQUIRE(samples.size() == 500);
  for (const auto& s : samples) {
    REQUIRE(s.size() == 2);
    CHECK(ts::polygon_contains(s[0], s[1]));
  }
}

TEST_CASE("rejection oracle refuses oversized or hopeless instances",
          "[oracle]") {
  CHECK_THROWS_AS(rejection_sample(ts::golden_graph(), 10, 1), refusal_error);

  // Acceptance below the floor: the vertex windows admit roughly 1e-5 of
  // the proposal volume.
  const WeightedGraph harsh(2, {{0, 1}}, {0.400005, },
                            {{0.0, 1.0}},
                            {{0.4, 0.40001}, {0.4, 0.40001}});
  CHECK_THROWS_AS(rejection_sample(harsh, 10, 1), refusal_error);
}
