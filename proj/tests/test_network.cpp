#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "dgama/network.hpp"
#include "helpers.hpp"

using namespace dgama;

namespace {

Topology line2() {
  Topology topo;
  topo.n = 2;
  topo.p = 2;
  topo.adj = {{0, 1}, {1, 0}};
  topo.observed = {{0}, {1}};
  return topo;
}

}  // namespace

TEST_CASE("observable sets combine own and neighbor variables") {
  Topology solo;
  solo.n = 1;
  solo.p = 3;
  solo.adj = {{0}};
  solo.observed = {{0, 1}};
  CHECK(observable_set(solo, 0) == std::vector<int>{0, 1});

  Topology topo = line2();
  CHECK(observable_set(topo, 0) == std::vector<int>{0, 1});
  CHECK(observable_set(topo, 1) == std::vector<int>{0, 1});
}

TEST_CASE("complete graph spreads single observations everywhere") {
  Topology topo;
  topo.n = 3;
  topo.p = 2;
  topo.adj = {{0, 1, 1}, {1, 0, 1}, {1, 1, 0}};
  topo.observed = {{0}, {}, {1}};
  for (int i = 0; i < 3; ++i) {
    auto mask = observability_mask(topo, i);
    CHECK(mask[0] == 1);
    CHECK(mask[1] == 1);
  }
}

TEST_CASE("joint observability") {
  Topology solo = testutil::solo_topology(4);
  CHECK(check_joint_observability(solo).jointly_observable);

  // connected communication but a variable nobody sees
  Topology topo;
  topo.n = 2;
  topo.p = 3;
  topo.adj = {{0, 1}, {1, 0}};
  topo.observed = {{0}, {1}};
  CHECK_FALSE(check_joint_observability(topo).jointly_observable);

  // observation-isolated halves with no communication: no cross pairs
  Topology split;
  split.n = 2;
  split.p = 4;
  split.adj = {{0, 0}, {0, 0}};
  split.observed = {{0, 1}, {2, 3}};
  auto rep = check_joint_observability(split);
  CHECK_FALSE(rep.jointly_observable);
  CHECK(rep.leaders[pair_index(4, 0, 2)].empty());

  CHECK(check_joint_observability(testutil::fig1_topology()).jointly_observable);
}

TEST_CASE("fig1 reading: nontrivial but jointly observable") {
  Topology topo = testutil::fig1_topology();
  REQUIRE(topo.n == 4);
  REQUIRE(topo.p == 5);
  CHECK(observable_set(topo, 0) == std::vector<int>{0, 1, 2, 4});
  CHECK(observable_set(topo, 1) == std::vector<int>{0, 1, 2, 3});
  CHECK(observable_set(topo, 2) == std::vector<int>{2, 3, 4});
  CHECK(observable_set(topo, 3) == std::vector<int>{0, 1, 3, 4});
  auto rep = consensus_rate(topo);
  CHECK(rep.jointly_observable);
  CHECK(rep.sigma > 0.0);
  CHECK(rep.sigma < 1.0);
  CHECK(rep.c >= 1.0);
}

TEST_CASE("disconnected topologies are rejected") {
  Topology topo;
  topo.n = 3;
  topo.p = 2;
  topo.adj = {{0, 1, 0}, {1, 0, 0}, {0, 0, 0}};
  topo.observed = {{0}, {1}, {0}};
  CHECK_FALSE(is_connected(topo));
  CHECK_THROWS_AS(validate_topology(topo), ValidationError);
}

TEST_CASE("follower block for the single-leader path") {
  Topology topo = testutil::path3_topology();
  PffBlock block = build_pff_partition(topo, {0});
  REQUIRE(block.followers == std::vector<int>{1, 2});
  CHECK(block.p_ff(0, 0) == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(block.p_ff(0, 1) == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(block.p_ff(1, 0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(block.p_ff(1, 1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(spectral_radius(block.p_ff) == doctest::Approx(5.0 / 6).epsilon(1e-12));
}

TEST_CASE("two-agent path has the half block") {
  Topology topo;
  topo.n = 2;
  topo.p = 1;
  topo.adj = {{0, 1}, {1, 0}};
  topo.observed = {{0}, {}};
  // both agents observe x0 through the edge, so force the partition
  PffBlock block = build_pff_partition(topo, {0});
  REQUIRE(block.followers == std::vector<int>{1});
  CHECK(block.p_ff(0, 0) == 0.5);
}

TEST_CASE("empty leader set and all-leader partitions") {
  Topology topo = testutil::path3_topology();
  CHECK_THROWS_AS(build_pff_partition(topo, {}), NoLeader);
  PffBlock all = build_pff_partition(topo, {0, 1, 2});
  CHECK(all.followers.empty());
  CHECK(all.p_ff.rows() == 0);
  CHECK(spectral_radius(all.p_ff) == 0.0);
}

TEST_CASE("all-leader topology has rate zero") {
  Topology topo;
  topo.n = 2;
  topo.p = 2;
  topo.adj = {{0, 1}, {1, 0}};
  topo.observed = {{0, 1}, {0, 1}};
  auto rep = consensus_rate(topo);
  CHECK(rep.sigma == 0.0);
  CHECK(rep.c == 1.0);
}

TEST_CASE("follower rows sum to one over the closed neighborhood") {
  Rng rng(91);
  for (int rep = 0; rep < 10; ++rep) {
    Topology topo = random_topology(3 + static_cast<int>(rng.uniform01() * 5), 4,
                                    0.3, rng);
    auto obs = check_joint_observability(topo);
    std::set<std::vector<int>> partitions(obs.leaders.begin(), obs.leaders.end());
    for (const auto& leaders : partitions) {
      PffBlock block = build_pff_partition(topo, leaders);
      for (int r = 0; r < block.p_ff.rows(); ++r) {
        int agent = block.followers[r];
        double row_sum = 0.0;
        for (int c = 0; c < block.p_ff.cols(); ++c) row_sum += block.p_ff(r, c);
        CHECK(row_sum <= 1.0 + 1e-12);
        // strict deficit when a leader sits in the neighborhood
        bool leader_neighbor = false;
        for (int l : block.leaders)
          if (topo.adj[agent][l]) leader_neighbor = true;
        if (leader_neighbor) CHECK(row_sum < 1.0 - 1e-12);
      }
    }
  }
}

TEST_CASE("sigma stays below one on random connected topologies") {
  Rng rng(123);
  for (int rep = 0; rep < 8; ++rep) {
    int n = 3 + static_cast<int>(rng.uniform01() * 6);
    Topology topo = random_topology(n, 5, 0.25, rng);
    auto report = consensus_rate(topo);
    CHECK(report.jointly_observable);
    CHECK(report.sigma >= 0.0);
    CHECK(report.sigma < 1.0);
    CHECK(report.c >= 1.0);
  }
}

TEST_CASE("entries sharing a partition share the block") {
  Topology topo = testutil::fig1_topology();
  auto obs = check_joint_observability(topo);
  for (int l = 0; l < topo.p; ++l)
    for (int m = l; m < topo.p; ++m) {
      PffBlock direct = build_pff(topo, l, m);
      PffBlock via_partition =
          build_pff_partition(topo, obs.leaders[pair_index(topo.p, l, m)]);
      CHECK(direct.leaders == via_partition.leaders);
      CHECK(direct.p_ff.data() == via_partition.p_ff.data());
    }
}

TEST_CASE("topology files parse and report errors with line numbers") {
  CHECK_THROWS_AS(parse_topology("agents 2\n", "mem"), ParseError);
  CHECK_THROWS_AS(parse_topology("agents 2\nvars 2\nedge 0 5\n", "mem"), ParseError);
  CHECK_THROWS_AS(parse_topology("agents x\n", "mem"), ParseError);
  CHECK_THROWS_AS(parse_topology("agents 2\nvars 1\nwhatever 1\n", "mem"),
                  ParseError);

  Topology topo = parse_topology(
      "# comment\nagents 2\nvars 2\nedge 0 1\nobserve 0 0\nobserve 1 1\n", "mem");
  CHECK(topo.n == 2);
  CHECK(topo.observed[0] == std::vector<int>{0});
}
