#include <gtest/gtest.h>

#include <chrono>
#include <cmath>

#include "../support/generators.hpp"
#include "../support/oracles.hpp"
#include "../support/single_order.hpp"
#include "hypermosbm/combinatorics.hpp"
#include "hypermosbm/evaluation.hpp"
#include "hypermosbm/model.hpp"
#include "hypermosbm/synthgen.hpp"

using namespace hypermosbm;

namespace {

struct Instance {
  Hypergraph h;
  OrderPartition partition;
  ModelParams params;
};

Instance random_instance(gen::Rng& rng, std::size_t max_n = 12, int max_d = 4,
                         std::size_t max_k = 3) {
  const int d = static_cast<int>(gen::uniform_int(rng, 2, max_d));
  const std::size_t n = gen::uniform_int(rng, std::max<std::size_t>(d, 4), max_n);
  const std::size_t k = gen::uniform_int(rng, 1, max_k);
  Instance inst{gen::hypergraph(rng, n, d, gen::uniform_int(rng, 1, 25)), gen::partition(rng, d), {}};
  inst.params = gen::params(rng, n, k, inst.partition.size());
  return inst;
}

}  // namespace

TEST(EdgeRate, Examples) {
  ModelParams ones{Matrix(4, 1, 1.0), {Matrix(1, 1, 1.0)}};
  const auto trivial = OrderPartition::trivial(3);
  EXPECT_DOUBLE_EQ(edge_rate(NodeSet{0, 1, 3}, ones, trivial), 6.0);

  gen::Rng rng(1);
  ModelParams zero = gen::params(rng, 4, 2, 1);
  for (std::size_t a = 0; a < 2; ++a) zero.memberships(1, a) = zero.memberships(2, a) = 0.0;
  EXPECT_EQ(edge_rate(NodeSet{1, 2}, zero, OrderPartition::trivial(2)), 0.0);
}

TEST(EdgeRate, MatchesQuadrupleSum) {
  gen::Rng rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const Instance inst = random_instance(rng);
    for (const auto& e : inst.h.edges()) {
      const double fast = edge_rate(e.nodes, inst.params, inst.partition);
      const double slow = oracle::rate(e.nodes, inst.params.memberships,
                                       oracle::affinity_for(inst.params, inst.partition, e.size()));
      EXPECT_LE(gen::rel_err(fast, slow), 1e-10);
    }
  }
}

TEST(EdgeRate, InvariantUnderScaleFamily) {
  gen::Rng rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const Instance inst = random_instance(rng);
    const double c = std::uniform_real_distribution<double>(0.1, 10.0)(rng);
    ModelParams scaled = inst.params;
    for (double& x : scaled.memberships.data()) x *= c;
    for (auto& w : scaled.affinities)
      for (double& x : w.data()) x /= c * c;
    for (const auto& e : inst.h.edges())
      EXPECT_LE(gen::rel_err(edge_rate(e.nodes, inst.params, inst.partition),
                             edge_rate(e.nodes, scaled, inst.partition)),
                1e-12);
  }
}

TEST(LogLikelihood, EmptyGraphZeroAffinity) {
  const Hypergraph h(5, 3, {});
  ModelParams p{Matrix(5, 2, 0.7), {Matrix(2, 2, 0.0)}};
  EXPECT_EQ(log_likelihood(h, p, OrderPartition::trivial(3)).value, 0.0);
}

TEST(LogLikelihood, ClosedFormMatchesEnumerationOfAllSubsets) {
  gen::Rng rng(3);
  // N = 6, D = 3 as a fixed case, then random small instances.
  {
    const Hypergraph h = gen::hypergraph(rng, 6, 3, 8);
    const auto part = OrderPartition::parse("2|3", 3);
    const ModelParams p = gen::params(rng, 6, 2, 2);
    EXPECT_LE(gen::rel_err(log_likelihood(h, p, part).value, oracle::log_likelihood(h, p, part)),
              1e-9);
  }
  for (int trial = 0; trial < 50; ++trial) {
    const Instance inst = random_instance(rng);
    EXPECT_LE(gen::rel_err(log_likelihood(inst.h, inst.params, inst.partition).value,
                           oracle::log_likelihood(inst.h, inst.params, inst.partition)),
              1e-9);
  }
}

TEST(LogLikelihood, FlooredEdgesAreCounted) {
  const Hypergraph h(4, 2, {{{0, 1}, 2}, {{2, 3}, 1}});
  ModelParams p{Matrix(4, 1, 1.0), {Matrix(1, 1, 1.0)}};
  p.memberships(0, 0) = 0.0;
  const auto ll = log_likelihood(h, p, OrderPartition::trivial(2), 1e-12);
  EXPECT_EQ(ll.floored_edges, 1u);
  EXPECT_NEAR(ll.value, 2.0 * std::log(1e-12) + std::log(2.0) - 6.0 * 1.0, 1e-9);
}

TEST(EStep, EachEdgeCarriesUnitPosteriorMass) {
  gen::Rng rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    const Instance inst = random_instance(rng);
    const MultiOrderModel model(inst.h, inst.partition);
    const auto stats = model.e_step(inst.params);
    double total_weight = 0.0;
    for (const auto& e : inst.h.edges()) total_weight += static_cast<double>(e.weight);
    double mass = 0.0;
    for (double x : stats.membership_numerator.data()) mass += x;
    EXPECT_NEAR(mass, total_weight, 1e-10 * total_weight);
    double aff_mass = 0.0;
    for (const auto& m : stats.affinity_numerator) {
      EXPECT_TRUE(m.is_symmetric());
      for (double x : m.data()) aff_mass += x;
    }
    EXPECT_NEAR(aff_mass, total_weight, 1e-10 * total_weight);
  }
}

TEST(EStep, SingleCommunityStatisticIsOne) {
  const Hypergraph h(5, 3, {{{0, 1, 2}, 1}});
  ModelParams p{Matrix(5, 1, 0.3), {Matrix(1, 1, 2.0)}};
  const auto stats = MultiOrderModel(h, OrderPartition::trivial(3)).e_step(p);
  EXPECT_NEAR(stats.affinity_numerator[0](0, 0), 1.0, 1e-15);
}

TEST(EStep, MatchesExplicitRhoAccumulation) {
  gen::Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const Instance inst = random_instance(rng);
    const MultiOrderModel model(inst.h, inst.partition);
    const auto fast = model.e_step(inst.params);
    const auto slow = oracle::e_step(inst.h, inst.params, inst.partition);
    EXPECT_LE(gen::rel_err(fast.membership_numerator, slow.membership), 1e-10);
    for (std::size_t l = 0; l < inst.partition.size(); ++l)
      EXPECT_LE(gen::rel_err(fast.affinity_numerator[l], slow.affinity[l]), 1e-10);
  }
}

TEST(MStep, MatchesNaiveLoops) {
  gen::Rng rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    const Instance inst = random_instance(rng);
    const MultiOrderModel model(inst.h, inst.partition);
    const auto stats = model.e_step(inst.params);
    const auto slow_stats = oracle::e_step(inst.h, inst.params, inst.partition);

    const Matrix u = model.m_step_memberships(inst.params, stats);
    const Matrix u_ref = oracle::update_memberships(inst.h, inst.params, inst.partition, slow_stats);
    EXPECT_LE(gen::rel_err(u, u_ref), 1e-10);

    ModelParams next = inst.params;
    next.memberships = u;
    const auto w = model.m_step_affinities(next, stats);
    const auto w_ref = oracle::update_affinities(inst.h, u_ref, inst.partition, slow_stats);
    for (std::size_t l = 0; l < w.size(); ++l) {
      EXPECT_LE(gen::rel_err(w[l], w_ref[l]), 1e-10);
      EXPECT_TRUE(w[l].is_symmetric());
    }
  }
}

TEST(MStep, IsolatedNodeGetsZeroRow) {
  const Hypergraph h(5, 2, {{{0, 1}, 1}, {{1, 2}, 1}, {{2, 3}, 1}});
  gen::Rng rng(7);
  ModelParams p = gen::params(rng, 5, 2, 1);
  const MultiOrderModel model(h, OrderPartition::trivial(2));
  model.em_iteration(p);
  EXPECT_EQ(p.memberships(4, 0), 0.0);
  EXPECT_EQ(p.memberships(4, 1), 0.0);
  for (double x : p.memberships.data()) EXPECT_GE(x, 0.0);
}

TEST(MStep, EmptySubsetGetsZeroAffinity) {
  // Order 3 exists in the partition but has no edges.
  const Hypergraph h(6, 3, {{{0, 1}, 1}, {{2, 3}, 1}});
  gen::Rng rng(8);
  ModelParams p = gen::params(rng, 6, 2, 2);
  const MultiOrderModel model(h, OrderPartition::parse("2|3", 3));
  model.em_iteration(p);
  for (double x : p.affinities[1].data()) EXPECT_EQ(x, 0.0);
}

TEST(MStep, SingleEdgeFixedPoint) {
  // N = 2, one edge {0,1}, K = 1, w held at 1. Stationarity of the
  // log-likelihood in U gives 2 u0 u1 w = 1, so every pair with u0 u1 = 1/2
  // is a fixed point of the membership update. Away from it the update maps
  // the product x to 1 / (4x).
  const Hypergraph h(2, 2, {{{0, 1}, 1}});
  const MultiOrderModel model(h, OrderPartition::trivial(2));
  for (double u0 : {0.25, 1.0, 3.0}) {
    ModelParams p{Matrix(2, 1), {Matrix(1, 1, 1.0)}};
    p.memberships(0, 0) = u0;
    p.memberships(1, 0) = 0.5 / u0;
    for (int it = 0; it < 20; ++it) p.memberships = model.m_step_memberships(p, model.e_step(p));
    EXPECT_NEAR(p.memberships(0, 0), u0, 1e-12 * u0);
    EXPECT_NEAR(p.memberships(0, 0) * p.memberships(1, 0), 0.5, 1e-12);
  }
  ModelParams p{Matrix(2, 1), {Matrix(1, 1, 1.0)}};
  p.memberships(0, 0) = 0.9;
  p.memberships(1, 0) = 0.2;
  p.memberships = model.m_step_memberships(p, model.e_step(p));
  EXPECT_NEAR(p.memberships(0, 0) * p.memberships(1, 0), 1.0 / (4.0 * 0.18), 1e-12);

  // Full EM: the affinity update absorbs the scale and the rate of the only
  // edge sits at 1 after every iteration.
  p.memberships(0, 0) = 0.9;
  p.memberships(1, 0) = 0.2;
  for (int it = 0; it < 5; ++it) {
    model.em_iteration(p);
    EXPECT_NEAR(model.edge_rate(h.edge(0).nodes, p), 1.0, 1e-12);
  }
}

TEST(Elbo, EqualsLogLikelihoodAtPosterior) {
  gen::Rng rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    const Instance inst = random_instance(rng);
    const MultiOrderModel model(inst.h, inst.partition);
    const double ll = model.log_likelihood(inst.params).value;
    EXPECT_LE(gen::rel_err(model.elbo(inst.params, inst.params), ll), 1e-10);
    ModelParams other = gen::params(rng, inst.h.num_nodes(), inst.params.num_communities(),
                                     inst.partition.size());
    const double bound = model.elbo(other, inst.params);
    EXPECT_LE(gen::rel_err(bound, oracle::elbo(inst.h, other, inst.params, inst.partition)), 1e-10);
    EXPECT_LE(bound, model.log_likelihood(other).value + 1e-9 * std::abs(bound));
  }
}

TEST(Elbo, TraceNeverDecreases) {
  gen::Rng rng(10);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = gen::uniform_int(rng, 8, 30);
    const int d = static_cast<int>(gen::uniform_int(rng, 2, 5));
    const Hypergraph h = gen::hypergraph(rng, n, d, gen::uniform_int(rng, 10, 60));
    FitConfig cfg;
    cfg.num_communities = gen::uniform_int(rng, 1, 3);
    cfg.num_iterations = 100;
    cfg.num_restarts = 1;
    cfg.seed = rng();
    cfg.record_elbo = true;
    const FitResult r = fit(h, gen::partition(rng, d), cfg);
    ASSERT_EQ(r.elbo_trace.size(), 100u);
    for (std::size_t t = 1; t < r.elbo_trace.size(); ++t)
      EXPECT_GE(r.elbo_trace[t] - r.elbo_trace[t - 1], -1e-8 * std::abs(r.elbo_trace[t - 1]))
          << "trial " << trial << " iteration " << t;
  }
}

TEST(Fit, DeterministicAndSelectsBestRestart) {
  gen::Rng rng(11);
  const Hypergraph h = gen::hypergraph(rng, 20, 4, 60);
  FitConfig cfg;
  cfg.num_iterations = 30;
  cfg.num_restarts = 4;
  cfg.seed = 77;
  const auto part = OrderPartition::parse("2,4|3", 4);
  const FitResult a = fit(h, part, cfg);
  const FitResult b = fit(h, part, cfg);
  EXPECT_EQ(a.params, b.params);
  EXPECT_EQ(a.per_restart_loglik, b.per_restart_loglik);
  ASSERT_EQ(a.per_restart_loglik.size(), 4u);
  EXPECT_EQ(a.log_likelihood, *std::max_element(a.per_restart_loglik.begin(), a.per_restart_loglik.end()));
  EXPECT_EQ(a.log_likelihood, a.per_restart_loglik[a.best_restart]);
  EXPECT_EQ(a.log_likelihood, log_likelihood(h, a.params, part).value);

  cfg.threads = 3;
  const FitResult c = fit(h, part, cfg);
  EXPECT_EQ(a.params, c.params);
  EXPECT_EQ(a.per_restart_loglik, c.per_restart_loglik);

  cfg.num_restarts = 1;
  cfg.threads = 1;
  EXPECT_EQ(fit(h, part, cfg).params, fit(h, part, cfg).params);
}

TEST(Fit, ParametersStayNonnegativeAndSymmetric) {
  gen::Rng rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    const Instance inst = random_instance(rng, 15, 4, 3);
    FitConfig cfg;
    cfg.num_communities = inst.params.num_communities();
    cfg.num_iterations = 40;
    cfg.num_restarts = 2;
    cfg.seed = trial;
    const FitResult r = fit(inst.h, inst.partition, cfg);
    for (double x : r.params.memberships.data()) EXPECT_GE(x, 0.0);
    for (const auto& w : r.params.affinities) {
      EXPECT_TRUE(w.is_symmetric());
      for (double x : w.data()) EXPECT_GE(x, 0.0);
    }
  }
}

TEST(Fit, ConfigValidation) {
  FitConfig cfg;
  cfg.num_communities = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = FitConfig{};
  cfg.rate_floor = 0.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = FitConfig{};
  cfg.num_iterations = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(Fit, PartitionMustCoverMaxOrder) {
  const Hypergraph h(6, 3, {{{0, 1}, 1}});
  EXPECT_THROW(MultiOrderModel(h, OrderPartition::trivial(4)), std::invalid_argument);
}

TEST(Fit, RecoversPlantedCommunities) {
  SyntheticConfig sc;
  sc.zeta = 0.0;
  sc.assortative = 5.0;
  sc.seed = 2024;
  const SyntheticInstance inst = generate(sc);
  FitConfig cfg;
  cfg.num_communities = 2;
  cfg.num_restarts = 5;
  cfg.seed = 1;
  const FitResult r = fit(inst.hypergraph, OrderPartition::trivial(4), cfg);
  EXPECT_GT(cosine_similarity(inst.ground_truth, r.params.memberships).value, 0.9);
}

TEST(SingleOrder, ReductionIsExact) {
  gen::Rng rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = static_cast<int>(gen::uniform_int(rng, 2, 5));
    const Hypergraph h = gen::hypergraph(rng, gen::uniform_int(rng, 8, 25), d, 50);
    const std::size_t k = gen::uniform_int(rng, 1, 3);
    const std::uint64_t seed = rng();
    const auto trivial = OrderPartition::trivial(d);
    const MultiOrderModel model(h, trivial);
    const single_order::Reference ref(h);

    Rng a(seed);
    std::mt19937_64 b(seed);
    ModelParams p = model.random_params(k, 1.0, a);
    single_order::Params q = ref.init(k, 1.0, b);
    ASSERT_EQ(p.memberships, q.u);
    ASSERT_EQ(p.affinities[0], q.w);
    for (int it = 0; it < 25; ++it) {
      EXPECT_EQ(model.log_likelihood(p).value, ref.log_likelihood(q));
      model.em_iteration(p);
      ref.iterate(q);
      ASSERT_EQ(p.memberships, q.u) << "iteration " << it;
      ASSERT_EQ(p.affinities[0], q.w) << "iteration " << it;
    }
    const HyperedgeScorer scorer(p, trivial, h.num_nodes());
    for (const auto& e : h.edges()) EXPECT_EQ(scorer(e.nodes), ref.score(e.nodes, q));
  }
}

TEST(Score, Examples) {
  const auto part = OrderPartition::trivial(3);
  // K = 1, u = 1, |e| = 3: lambda = 6; scale w so lambda = kappa(3, 10) = 24.
  ModelParams p{Matrix(10, 1, 1.0), {Matrix(1, 1, 4.0)}};
  EXPECT_NEAR(score_hyperedge(NodeSet{0, 1, 2}, p, part, 10), 0.0, 1e-15);

  ModelParams zero{Matrix(10, 1, 0.0), {Matrix(1, 1, 0.0)}};
  const double s1 = score_hyperedge(NodeSet{0, 1, 2}, zero, part, 10);
  const double s2 = score_hyperedge(NodeSet{3, 5, 9}, zero, part, 10);
  EXPECT_DOUBLE_EQ(s1, std::log(1e-12) - std::log(24.0));
  EXPECT_EQ(s1, s2);

  gen::Rng rng(14);
  const ModelParams r = gen::params(rng, 10, 2, 1);
  const NodeSet e1{0, 1, 2}, e2{4, 6, 8};
  const double l1 = edge_rate(e1, r, part), l2 = edge_rate(e2, r, part);
  const double f1 = score_hyperedge(e1, r, part, 10), f2 = score_hyperedge(e2, r, part, 10);
  EXPECT_EQ(l1 < l2, f1 < f2);
  const HyperedgeScorer scorer(r, part, 10);
  EXPECT_EQ(scorer(e1), f1);
}

TEST(Complexity, IterationCostGrowsLinearlyInEdges) {
  gen::Rng rng(15);
  auto time_per_iteration = [&](std::size_t edges) {
    const Hypergraph h = gen::hypergraph(rng, 400, 6, edges, 1);
    const MultiOrderModel model(h, OrderPartition::parse("2,3|4,5,6", 6));
    ModelParams p = gen::params(rng, 400, 4, 2);
    const auto start = std::chrono::steady_clock::now();
    for (int it = 0; it < 20; ++it) model.em_iteration(p);
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };
  time_per_iteration(2000);  // warm up
  const double small = time_per_iteration(4000);
  const double large = time_per_iteration(32000);
  // 8x the edges; quadratic growth would be ~64x.
  EXPECT_LT(large / small, 20.0) << small << " s vs " << large << " s";
}
