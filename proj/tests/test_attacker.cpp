#include <doctest.h>

#include <algorithm>

#include "slpsim/attacker.hpp"
#include "slpsim/protocols.hpp"

using namespace slpsim;

namespace {

// 0 - 1 - 2 - 3 - 4 along the x axis, BS at node 0.
NetworkGraph line5() {
  std::vector<Position> pos;
  std::vector<std::vector<NodeId>> adj(5);
  for (NodeId i = 0; i < 5; ++i) {
    pos.push_back({50.0 * i, 0.0});
    if (i > 0) adj[i].push_back(i - 1);
    if (i < 4) adj[i].push_back(i + 1);
  }
  return NetworkGraph::from_adjacency(pos, adj, 0, 50.0);
}

RouteTrace path(std::vector<NodeId> hops) {
  RouteTrace t;
  t.source = hops.front();
  t.phantom = t.source;
  t.hops = std::move(hops);
  t.phase_labels.assign(t.hops.size() - 1, Phase::SPR);
  t.ttl_series.assign(t.hops.size() - 1, 0);
  return t;
}

}  // namespace

TEST_CASE("passive attacker backtracks one hop per packet on a line") {
  const auto g = line5();
  auto s = AttackerState::passive(g);
  CHECK(s.position == 0);
  const auto t = path({4, 3, 2, 1, 0});
  for (NodeId expect : {1u, 2u, 3u}) {
    s = observe_and_move(s, t);
    CHECK(s.position == expect);
    CHECK_FALSE(s.captured);
  }
  s = observe_and_move(s, t);
  CHECK(s.position == 4);
  CHECK(s.captured);
  CHECK(s.hops_backtracked == 4);
  CHECK(s.observed_upstream == std::vector<NodeId>{1, 2, 3, 4});

  // Capture is final.
  const auto after = observe_and_move(s, path({4, 3, 2, 1, 0}));
  CHECK(after.position == 4);
  CHECK(after.captured);
  CHECK(after.hops_backtracked == 4);
}

TEST_CASE("packets that miss the attacker's node leave it in place") {
  const auto g = line5();
  auto s = AttackerState::passive(g);
  s.position = 3;
  const auto moved = observe_and_move(s, path({2, 1, 0}));
  CHECK(moved.position == 3);
  CHECK(moved.hops_backtracked == 0);
}

TEST_CASE("the first arrival at the attacker's node is the one followed") {
  const auto g = line5();
  auto s = AttackerState::passive(g);
  s.position = 2;
  // Walk 4 -> 3 -> 2 -> 1 -> 2 -> 1 -> 0 reaches node 2 from 3 first.
  const auto t = path({4, 3, 2, 1, 2, 1, 0});
  CHECK(observe_and_move(s, t).position == 3);
}

TEST_CASE("direction estimate uses the mean upstream x") {
  const auto g = build_grid({9, 50.0, 72.0, std::nullopt});
  AttackerState s = AttackerState::hybrid(g);
  CHECK_THROWS_AS(estimate_direction(s, g, 3), std::logic_error);
  s.hops_backtracked = 3;
  s.observed_upstream = {41, 42, 43};  // x = 50, 100, 150
  CHECK(estimate_direction(s, g, 3) == Direction::Right);
  s.observed_upstream = {39, 38, 37};  // x < 0
  CHECK(estimate_direction(s, g, 3) == Direction::Left);
  s.observed_upstream = {41, 39, 31};  // mean exactly 0
  CHECK(estimate_direction(s, g, 3) == Direction::Right);
}

TEST_CASE("compromised nodes split by majority fraction") {
  const auto g = build_grid({});
  Rng rng(5);
  auto count_sides = [&](const NodeSet& s) {
    int right = 0, left = 0;
    for (NodeId n : s) {
      CHECK(n != g.bs());
      CHECK(g.position(n).x != 0.0);
      (g.position(n).x > 0 ? right : left)++;
    }
    return std::pair{right, left};
  };
  auto p = place_compromised_nodes(g, Direction::Right, 10, 0.8, {}, rng);
  CHECK(p.nodes.size() == 10);
  CHECK(count_sides(p.nodes) == std::pair{8, 2});

  p = place_compromised_nodes(g, Direction::Left, 20, 0.8, {}, rng);
  CHECK(count_sides(p.nodes) == std::pair{4, 16});
  CHECK_FALSE(p.topped_up);

  p = place_compromised_nodes(g, Direction::Right, 5, 0.8, {}, rng);
  CHECK(count_sides(p.nodes) == std::pair{4, 1});

  CHECK(place_compromised_nodes(g, Direction::Right, 0, 0.8, {}, rng).nodes.empty());
  CHECK_THROWS_AS(place_compromised_nodes(g, Direction::Right, 5, 0.5, {}, rng), std::invalid_argument);
  CHECK_THROWS_AS(place_compromised_nodes(g, Direction::Right, 5, 1.2, {}, rng), std::invalid_argument);
}

TEST_CASE("placement never picks protected nodes and tops up from the minority side") {
  const auto g = build_grid({3, 50.0, 72.0, std::nullopt});  // three nodes each side of x = 0
  Rng rng(11);
  const NodeSet protect{2};
  for (int i = 0; i < 50; ++i) {
    const auto p = place_compromised_nodes(g, Direction::Right, 5, 0.8, protect, rng);
    CHECK(p.nodes.size() == 5);
    CHECK(p.topped_up);
    CHECK_FALSE(p.nodes.contains(2));
    CHECK_FALSE(p.nodes.contains(g.bs()));
  }
  CHECK_THROWS_AS(place_compromised_nodes(g, Direction::Right, 6, 0.8, protect, rng),
                  std::invalid_argument);
}

TEST_CASE("hybrid attacker compromises nodes after h_est backtracks") {
  const auto g = build_grid({9, 50.0, 72.0, std::nullopt});
  Rng rng(3);
  const CnParams params{10, 0.8, 3};
  auto s = AttackerState::hybrid(g);
  // Straight path in from the right: 44 -> 43 -> 42 -> 41 -> 40 (BS).
  const auto t = path({44, 43, 42, 41, 40});
  s = step_hybrid(s, t, g, params, rng);
  s = step_hybrid(s, t, g, params, rng);
  CHECK(s.mode == AttackerMode::HybridObserving);
  CHECK(s.compromised.empty());
  s = step_hybrid(s, t, g, params, rng);
  CHECK(s.mode == AttackerMode::HybridActive);
  CHECK(s.estimated_direction == Direction::Right);
  CHECK(s.compromised.size() == 10);
  CHECK_FALSE(s.compromised.contains(44));

  const auto before = s.compromised;
  s = step_hybrid(s, t, g, params, rng);
  CHECK(s.compromised == before);
  CHECK(s.captured);

  CHECK_THROWS_AS(step_hybrid(AttackerState::passive(g), t, g, params, rng), std::logic_error);
}

TEST_CASE("hybrid attacker with no compromised nodes moves exactly like the passive one") {
  const auto g = build_grid({9, 50.0, 72.0, std::nullopt});
  const RoutingPolicy pol{ProtocolKind::PRS, 3, 180.0, TieBreak::Random};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto passive = AttackerState::passive(g);
    auto hybrid = AttackerState::hybrid(g);
    Rng cn_rng(seed);
    for (int packet = 0; packet < 200 && !passive.captured; ++packet) {
      Rng rng(seed * 1000 + static_cast<std::uint64_t>(packet));
      const auto t = route_packet(g, 0, pol, hybrid.compromised, rng);
      passive = observe_and_move(passive, t);
      hybrid = step_hybrid(hybrid, t, g, {0, 0.8, 3}, cn_rng);
      REQUIRE(passive.position == hybrid.position);
      REQUIRE(passive.captured == hybrid.captured);
      REQUIRE(passive.hops_backtracked == hybrid.hops_backtracked);
    }
  }
}

TEST_CASE("attacker backtracks along a path shortened by a compromised node") {
  // 7x7 grid, BS = 24 at (3,3). The CN at (0,3) = node 3 has d = 3 and its
  // lowest-id SPR chain is 3 -> 9 -> 16 -> 24.
  const auto g = build_grid({7, 50.0, 72.0, std::nullopt});
  const RoutingPolicy pol{ProtocolKind::PRS, 6, 180.0, TieBreak::LowestId};
  const NodeSet cns{3};
  RouteTrace truncated;
  for (std::uint64_t seed = 0;; ++seed) {
    REQUIRE(seed < 10000);
    Rng rng(seed);
    truncated = route_prs(g, 1, pol, cns, rng);
    if (!truncated.truncated_by) continue;
    // The walk before the CN must not touch the SPR suffix, or the attacker
    // would follow that earlier arrival instead.
    const auto cut = std::find(truncated.hops.begin(), truncated.hops.end(), NodeId{3});
    if (std::none_of(truncated.hops.begin(), cut, [](NodeId n) { return n == 9 || n == 16; })) break;
  }
  REQUIRE(*truncated.truncated_by == 3);
  const std::vector<NodeId> suffix(truncated.hops.end() - 4, truncated.hops.end());
  CHECK(suffix == std::vector<NodeId>{3, 9, 16, 24});

  AttackerState s = AttackerState::hybrid(g);
  s.mode = AttackerMode::HybridActive;
  s.compromised = cns;
  Rng rng(0);
  for (NodeId expect : {16u, 9u, 3u}) {
    s = step_hybrid(s, truncated, g, {1, 0.8, 3}, rng);
    CHECK(s.position == expect);
  }
  CHECK(s.compromised == cns);
}
