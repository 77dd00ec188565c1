#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "oracles.hpp"
#include "sdg/generators.hpp"

using namespace sdg;

namespace {

void expect_matrix(const RealMatrix& m, const std::vector<std::vector<double>>& want) {
  ASSERT_EQ(m.rows(), want.size());
  for (std::size_t i = 0; i < want.size(); ++i) {
    ASSERT_EQ(m.cols(), want[i].size());
    for (std::size_t j = 0; j < want[i].size(); ++j) {
      EXPECT_NEAR(m(i, j), want[i][j], 1e-15) << "(" << i << "," << j << ")";
    }
  }
}

}  // namespace

TEST(BlockSizes, ClosedForm) {
  EXPECT_EQ(block_sizes(10, 3, 1.0).sizes, (std::vector<std::size_t>{3, 3, 4}));
  EXPECT_EQ(block_sizes(1000, 3, 1.5).sizes, (std::vector<std::size_t>{268, 328, 404}));
  EXPECT_EQ(block_sizes(5, 5, 1.0).sizes, (std::vector<std::size_t>{1, 1, 1, 1, 1}));
  EXPECT_EQ(block_sizes(7, 1, 2.0).sizes, (std::vector<std::size_t>{7}));
}

TEST(BlockSizes, InvariantsAndErrors) {
  for (std::size_t k = 2; k <= 6; ++k) {
    for (double rho : {1.0, 1.5, 2.0, 3.0}) {
      const BlockSizes b = block_sizes(600, k, rho);
      EXPECT_EQ(b.total(), 600u);
      EXPECT_TRUE(std::is_sorted(b.sizes.begin(), b.sizes.end()));
      // Geometric growth with floors; the last block absorbs the remainder.
      const double r0 = std::pow(rho, 1.0 / static_cast<double>(k - 1));
      for (std::size_t i = 1; i + 1 < k; ++i) {
        EXPECT_EQ(b.sizes[i], static_cast<std::size_t>(std::floor(r0 * static_cast<double>(b.sizes[i - 1]))));
      }
      EXPECT_GE(static_cast<double>(b.sizes.back()), std::floor(r0 * static_cast<double>(b.sizes[k - 2])));
    }
  }
  EXPECT_THROW(block_sizes(2, 3, 1.0), ConfigError);
  EXPECT_THROW(block_sizes(10, 0, 1.0), ConfigError);
  EXPECT_THROW(block_sizes(10, 3, 0.5), ConfigError);
  EXPECT_THROW(block_sizes(4, 4, 100.0), ConfigError);  // first block rounds to zero
}

TEST(MetaGraph, Cycle) {
  const MetaGraph m = meta_graph(MetaKind::cycle, 3, 0.1, false);
  expect_matrix(m.f, {{0.5, 0.9, 0.1}, {0.1, 0.5, 0.9}, {0.9, 0.1, 0.5}});
  EXPECT_EQ(m.filled, m.f);
}

TEST(MetaGraph, PathFillsNonAdjacentPairs) {
  const MetaGraph m = meta_graph(MetaKind::path, 3, 0.0, false);
  expect_matrix(m.f, {{0.5, 1.0, 0.0}, {0.0, 0.5, 1.0}, {0.0, 0.0, 0.5}});
  // (1,0) is a structural arc with value eta = 0, so it stays 0.
  expect_matrix(m.filled, {{0.5, 1.0, 0.5}, {0.0, 0.5, 1.0}, {0.5, 0.0, 0.5}});
}

TEST(MetaGraph, CompleteIsComplementary) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const MetaGraph m = meta_graph(MetaKind::complete, 5, 0.2, false, seed);
    for (std::size_t a = 0; a < 5; ++a) {
      EXPECT_EQ(m.f(a, a), 0.5);
      for (std::size_t b = 0; b < 5; ++b) {
        if (a != b) {
          EXPECT_NEAR(m.f(a, b) + m.f(b, a), 1.0, 1e-15);
        }
      }
    }
  }
}

TEST(MetaGraph, FilledPairsAreComplementaryForEveryKind) {
  for (MetaKind kind : {MetaKind::cycle, MetaKind::path, MetaKind::complete, MetaKind::star})
    for (std::size_t k = 2; k <= 6; ++k)
      for (double eta : {0.0, 0.15, 0.5}) {
        const MetaGraph m = meta_graph(kind, k, eta, false, 3);
        for (std::size_t a = 0; a < k; ++a)
          for (std::size_t b = 0; b < k; ++b) {
            EXPECT_GE(m.filled(a, b), 0.0);
            EXPECT_LE(m.filled(a, b), 1.0);
            if (a != b) {
              EXPECT_NEAR(m.filled(a, b) + m.filled(b, a), 1.0, 1e-15)
                  << to_string(kind) << " K=" << k << " eta=" << eta;
            }
          }
      }
}

TEST(MetaGraph, Star) {
  const MetaGraph m = meta_graph(MetaKind::star, 4, 0.1, false);
  // centre (K-1)/2 = 1; odd leaves receive flow 1 - eta from the centre.
  expect_matrix(m.f, {{0.5, 0.9, 0.0, 0.0},
                      {0.1, 0.5, 0.1, 0.9},
                      {0.0, 0.9, 0.5, 0.0},
                      {0.0, 0.1, 0.0, 0.5}});
  expect_matrix(m.filled, {{0.5, 0.9, 0.5, 0.5},
                           {0.1, 0.5, 0.1, 0.9},
                           {0.5, 0.9, 0.5, 0.5},
                           {0.5, 0.1, 0.5, 0.5}});
}

TEST(MetaGraph, CycleWithAmbient) {
  const MetaGraph m = meta_graph(MetaKind::cycle, 4, 0.0, true);
  expect_matrix(m.f, {{0.5, 1.0, 0.0, 0.0},
                      {0.0, 0.5, 1.0, 0.0},
                      {1.0, 0.0, 0.5, 0.0},
                      {0.0, 0.0, 0.0, 0.0}});
  expect_matrix(m.filled, {{0.5, 1.0, 0.0, 0.5},
                           {0.0, 0.5, 1.0, 0.5},
                           {1.0, 0.0, 0.5, 0.5},
                           {0.5, 0.5, 0.5, 0.5}});
  expect_matrix(meta_graph(MetaKind::cycle, 2, 0.2, false).f, {{0.5, 0.8}, {0.2, 0.5}});
  EXPECT_THROW(meta_graph(MetaKind::cycle, 2, 0.0, true), ConfigError);
  EXPECT_THROW(meta_graph(MetaKind::cycle, 1, 0.0, false), ConfigError);
  EXPECT_THROW(meta_graph(MetaKind::cycle, 3, 0.7, false), ConfigError);
}

TEST(MetaGraph, F1AndF2) {
  expect_matrix(f1_meta(0.5).f, {{0.5, 0.5, -0.5}, {0.5, 0.5, -0.5}, {-0.5, -0.5, 0.5}});
  EXPECT_NEAR(f1_meta(0.1).f(0, 1), 0.1, 1e-15);
  EXPECT_NEAR(f1_meta(0.1).f(0, 2), -0.1, 1e-15);
  const MetaGraph f2 = f2_meta(0.3);
  for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(f2.f(3, j), -0.7, 1e-15);
  EXPECT_EQ(f2.f(3, 3), 0.5);
  const MetaGraph f1 = f1_meta(0.2);
  EXPECT_NEAR(std::abs(f1.f(0, 1) + f1.f(1, 0)), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(f1.f(0, 2) + f1.f(2, 0)), 1.0, 1e-15);
  EXPECT_THROW(f1_meta(1.5), ConfigError);
}

TEST(Ssbm, DeterministicLimit) {
  const GeneratedInstance inst = ssbm(SsbmParams::uniform(6, 2, 1.0, 0.0, 1.0, 1));
  EXPECT_EQ(inst.graph.num_edges(), 30u);
  for (const Edge& e : inst.graph.edges()) {
    EXPECT_NE(e.src, e.dst);
    const bool within = inst.labels[e.src] == inst.labels[e.dst];
    EXPECT_EQ(e.weight, within ? 1.0 : -1.0);
  }
  EXPECT_EQ(ssbm(SsbmParams::uniform(6, 2, 0.0, 0.0, 1.0, 1)).graph.num_edges(), 0u);
}

TEST(Ssbm, NoiseCensus) {
  const GeneratedInstance inst = ssbm(SsbmParams::uniform(2000, 3, 0.05, 0.1, 1.0, 7));
  EXPECT_FALSE(is_directed(inst.graph));
  double within = 0, within_neg = 0, across = 0, across_pos = 0;
  for (const Edge& e : inst.graph.edges()) {
    if (e.src > e.dst) continue;
    if (inst.labels[e.src] == inst.labels[e.dst]) {
      within += 1;
      within_neg += e.weight < 0;
    } else {
      across += 1;
      across_pos += e.weight > 0;
    }
  }
  EXPECT_LT(std::abs(oracle::binomial_z(within_neg, within, 0.1)), 3.0);
  EXPECT_LT(std::abs(oracle::binomial_z(across_pos, across, 0.1)), 3.0);
}

TEST(Ssbm, SeparateNoiseLevels) {
  SsbmParams p{1000, 2, 0.1, 0.1, 1.0, 0.0, 0.3, 5};
  const GeneratedInstance inst = ssbm(p);
  double within_neg = 0, across = 0, across_pos = 0;
  for (const Edge& e : inst.graph.edges()) {
    if (inst.labels[e.src] == inst.labels[e.dst]) {
      within_neg += e.weight < 0;
    } else {
      across += 1;
      across_pos += e.weight > 0;
    }
  }
  EXPECT_EQ(within_neg, 0.0);
  EXPECT_LT(std::abs(oracle::binomial_z(across_pos / 2, across / 2, 0.3)), 3.0);
}

TEST(Generators, DeterminismAndRegenerate) {
  ParamRecord rec;
  rec.set("model", "dsbm");
  rec.set("meta", "cycle");
  rec.set("K", std::int64_t{3});
  rec.set("n", std::int64_t{300});
  rec.set("p", 0.05);
  rec.set("eta", 0.1);
  rec.set("seed", std::int64_t{42});
  const GeneratedInstance a = generate(rec);
  const GeneratedInstance b = generate(rec);
  const GeneratedInstance c = regenerate(a);
  EXPECT_TRUE(std::equal(a.graph.edges().begin(), a.graph.edges().end(), b.graph.edges().begin(),
                         b.graph.edges().end()));
  EXPECT_TRUE(std::equal(a.graph.edges().begin(), a.graph.edges().end(), c.graph.edges().begin(),
                         c.graph.edges().end()));
  rec.set("seed", std::int64_t{43});
  const GeneratedInstance d = generate(rec);
  EXPECT_FALSE(std::equal(a.graph.edges().begin(), a.graph.edges().end(), d.graph.edges().begin(),
                          d.graph.edges().end()));

  for (const char* model : {"ssbm", "pol_ssbm", "sdsbm", "signed_er"}) {
    ParamRecord r;
    r.set("model", model);
    r.set("n", std::int64_t{200});
    r.set("r", std::int64_t{2});
    r.set("N", std::int64_t{50});
    r.set("seed", std::int64_t{3});
    const GeneratedInstance x = generate(r);
    const GeneratedInstance y = regenerate(x);
    EXPECT_TRUE(std::equal(x.graph.edges().begin(), x.graph.edges().end(),
                           y.graph.edges().begin(), y.graph.edges().end()))
        << model;
    EXPECT_EQ(x.labels, y.labels) << model;
  }
  ParamRecord bad;
  bad.set("model", "nope");
  EXPECT_THROW(generate(bad), ConfigError);
}

TEST(Generators, BlockCensusMatchesBlockSizes) {
  const GeneratedInstance inst = ssbm(SsbmParams::uniform(1000, 3, 0.01, 0.0, 1.5, 1));
  const BlockSizes b = block_sizes(1000, 3, 1.5);
  std::vector<std::size_t> census(3, 0);
  for (int l : inst.labels) ++census[static_cast<std::size_t>(l)];
  EXPECT_EQ(census, b.sizes);
}

TEST(PolSsbm, LabelsAndAmbient) {
  PolSsbmParams p;
  p.n = 1000;
  p.communities = 5;
  p.community_budget = 100;
  p.p = 0.05;
  p.rho = 1.5;
  const GeneratedInstance inst = pol_ssbm(p);
  EXPECT_EQ(inst.num_clusters, 11u);
  std::set<int> seen(inst.labels.begin(), inst.labels.end());
  EXPECT_EQ(*seen.begin(), 0);
  EXPECT_EQ(*seen.rbegin(), 10);
  EXPECT_EQ(std::count(inst.labels.begin(), inst.labels.end(), 10), 500);
  EXPECT_FALSE(is_directed(inst.graph));
  // Inside a planted community signs follow the block pattern exactly at eta = 0.
  for (const Edge& e : inst.graph.edges()) {
    const int a = inst.labels[e.src], b = inst.labels[e.dst];
    if (a == 10 || b == 10 || a / 2 != b / 2) continue;
    EXPECT_EQ(e.weight, a == b ? 1.0 : -1.0);
  }

  PolSsbmParams whole;
  whole.n = 200;
  whole.communities = 1;
  whole.community_budget = 200;
  whole.p = 0.1;
  const GeneratedInstance binary = pol_ssbm(whole);
  std::set<int> labels(binary.labels.begin(), binary.labels.end());
  EXPECT_EQ(labels, (std::set<int>{0, 1}));

  whole.community_budget = 300;
  EXPECT_THROW(pol_ssbm(whole), ConfigError);
}

TEST(Dsbm, ZeroNoiseCycleEdgesPointForward) {
  const GeneratedInstance inst =
      dsbm(meta_graph(MetaKind::cycle, 3, 0.0, false), DsbmParams{300, 0.1, 1.0, 2});
  EXPECT_TRUE(is_directed(inst.graph));
  for (const Edge& e : inst.graph.edges()) {
    EXPECT_NE(e.src, e.dst);
    EXPECT_EQ(e.weight, 1.0);
    const int a = inst.labels[e.src], b = inst.labels[e.dst];
    if (a != b) {
      EXPECT_EQ(b, (a + 1) % 3);
    }
  }
}

TEST(Dsbm, OrderedPairRatesMatchFilledMeta) {
  const MetaGraph meta = meta_graph(MetaKind::path, 3, 0.2, false);
  const GeneratedInstance inst = dsbm(meta, DsbmParams{1000, 0.1, 1.0, 9});
  const BlockSizes b = block_sizes(1000, 3, 1.0);
  RealMatrix counts(3, 3);
  for (const Edge& e : inst.graph.edges()) {
    counts(static_cast<std::size_t>(inst.labels[e.src]), static_cast<std::size_t>(inst.labels[e.dst])) += 1;
  }
  for (std::size_t k = 0; k < 3; ++k) {
    for (std::size_t l = 0; l < 3; ++l) {
      const double pairs = static_cast<double>(b.sizes[k]) *
                           static_cast<double>(b.sizes[l] - (k == l ? 1 : 0));
      EXPECT_LT(std::abs(oracle::binomial_z(counts(k, l), pairs, 0.1 * meta.filled(k, l))), 3.0)
          << k << "," << l;
    }
  }
}

TEST(Dsbm, HalfNoiseIsSymmetric) {
  const GeneratedInstance inst =
      dsbm(meta_graph(MetaKind::cycle, 3, 0.5, false), DsbmParams{2000, 0.02, 1.0, 17});
  RealMatrix counts(3, 3);
  for (const Edge& e : inst.graph.edges()) {
    counts(static_cast<std::size_t>(inst.labels[e.src]), static_cast<std::size_t>(inst.labels[e.dst])) += 1;
  }
  for (std::size_t k = 0; k < 3; ++k) {
    for (std::size_t l = k + 1; l < 3; ++l) {
      const double total = counts(k, l) + counts(l, k);
      // two-sided binomial test at alpha = 0.001
      EXPECT_LT(std::abs(oracle::binomial_z(counts(k, l), total, 0.5)), 3.2905);
    }
  }
}

TEST(Dsbm, RejectsDensityAboveOne) {
  EXPECT_THROW(dsbm(meta_graph(MetaKind::cycle, 3, 0.0, false), DsbmParams{30, 1.5, 1.0, 0}),
               ConfigError);
  RealMatrix neg(2, 2, 0.5);
  neg(0, 1) = -0.5;
  EXPECT_THROW(dsbm(custom_meta(neg), DsbmParams{30, 0.1, 1.0, 0}), ConfigError);
}

TEST(Sdsbm, SignsFollowMetaAtZeroNoise) {
  const MetaGraph meta = f1_meta(0.3);
  const GeneratedInstance inst = sdsbm(meta, SdsbmParams{600, 0.2, 1.0, 0.0, 4});
  EXPECT_TRUE(is_directed(inst.graph));
  for (const Edge& e : inst.graph.edges()) {
    const double f = meta.f(static_cast<std::size_t>(inst.labels[e.src]),
                            static_cast<std::size_t>(inst.labels[e.dst]));
    EXPECT_EQ(e.weight, f >= 0 ? 1.0 : -1.0);
  }
}

TEST(Sdsbm, NegativeEntryRate) {
  RealMatrix f(3, 3, 0.0);
  f(0, 2) = -0.5;
  const GeneratedInstance inst = sdsbm(custom_meta(f), SdsbmParams{900, 0.2, 1.0, 0.0, 8});
  double count = 0;
  for (const Edge& e : inst.graph.edges()) {
    ASSERT_EQ(inst.labels[e.src], 0);
    ASSERT_EQ(inst.labels[e.dst], 2);
    EXPECT_EQ(e.weight, -1.0);
    count += 1;
  }
  EXPECT_LT(std::abs(oracle::binomial_z(count, 300.0 * 300.0, 0.1)), 3.0);
}

TEST(Sdsbm, FlipCensusAgainstNoiselessTwin) {
  const MetaGraph meta = f1_meta(0.2);
  const GeneratedInstance clean = sdsbm(meta, SdsbmParams{1000, 0.1, 1.0, 0.0, 21});
  const GeneratedInstance noisy = sdsbm(meta, SdsbmParams{1000, 0.1, 1.0, 0.1, 21});
  ASSERT_EQ(clean.graph.num_edges(), noisy.graph.num_edges());
  double flips = 0;
  for (std::size_t i = 0; i < clean.graph.num_edges(); ++i) {
    ASSERT_EQ(clean.graph.edges()[i].src, noisy.graph.edges()[i].src);
    ASSERT_EQ(clean.graph.edges()[i].dst, noisy.graph.edges()[i].dst);
    flips += clean.graph.edges()[i].weight != noisy.graph.edges()[i].weight;
  }
  EXPECT_LT(std::abs(oracle::binomial_z(flips, static_cast<double>(clean.graph.num_edges()), 0.1)), 3.0);
}

TEST(SignedErdosRenyi, Basics) {
  EXPECT_EQ(signed_erdos_renyi(50, 0.0, 1).num_edges(), 0u);
  const auto full = signed_erdos_renyi(4, 1.0, 1);
  EXPECT_EQ(full.num_edges(), 12u);  // 6 undirected edges, both directions stored
  EXPECT_FALSE(is_directed(full));
  const auto g = signed_erdos_renyi(2000, 0.05, 3);
  double pos = 0, total = 0;
  for (const Edge& e : g.edges()) {
    if (e.src > e.dst) continue;
    total += 1;
    pos += e.weight > 0;
  }
  EXPECT_LT(std::abs(oracle::binomial_z(pos, total, 0.5)), 3.0);
  EXPECT_LT(std::abs(oracle::binomial_z(total, 2000.0 * 1999.0 / 2.0, 0.05)), 3.0);
}
