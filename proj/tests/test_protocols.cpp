#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <set>

#include "slpsim/protocols.hpp"
#include "trace_checks.hpp"

using namespace slpsim;
using slpsim::testing::check_all;

namespace {

const NetworkGraph& grid9() {
  static const auto g = build_grid({9, 50.0, 72.0, std::nullopt});
  return g;
}

NodeId at(int row, int col, int side = 9) { return static_cast<NodeId>(row * side + col); }

RoutingPolicy policy(ProtocolKind kind, int ttl = 5, TieBreak tie = TieBreak::Random) {
  return {kind, ttl, 180.0, tie};
}

}  // namespace

TEST_CASE("spr_next_hop follows the min-hop rule") {
  const auto& g = grid9();
  Rng rng(1);
  const NodeId n = at(4, 7);  // d = 3
  REQUIRE(g.hop_distance(n) == 3);
  for (int i = 0; i < 20; ++i) CHECK(g.hop_distance(spr_next_hop(g, n, TieBreak::Random, rng)) == 2);
  CHECK_THROWS_AS(spr_next_hop(g, g.bs(), TieBreak::LowestId, rng), RoutingError);
}

TEST_CASE("deterministic ties pick the lowest candidate id on a 5x5 grid") {
  const auto g = build_grid({5, 50.0, 72.0, std::nullopt});
  Rng rng(7);
  for (NodeId n = 0; n < g.size(); ++n) {
    if (n == g.bs()) continue;
    std::set<NodeId> candidates;
    for (NodeId m = 0; m < g.size(); ++m) {
      const int dr = static_cast<int>(m) / 5 - static_cast<int>(n) / 5;
      const int dc = static_cast<int>(m) % 5 - static_cast<int>(n) % 5;
      if (m != n && std::abs(dr) <= 1 && std::abs(dc) <= 1 && g.hop_distance(m) == g.hop_distance(n) - 1)
        candidates.insert(m);
    }
    REQUIRE(!candidates.empty());
    CHECK(spr_next_hop(g, n, TieBreak::LowestId, rng) == *candidates.begin());
    for (int i = 0; i < 10; ++i) CHECK(candidates.count(spr_next_hop(g, n, TieBreak::Random, rng)) == 1);
  }
  // (0,1) has two candidates, (1,1) and (1,2).
  CHECK(spr_next_hop(g, 1, TieBreak::LowestId, rng) == 6);
}

TEST_CASE("PRS with ttl 0 is pure shortest path") {
  const auto& g = grid9();
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    const NodeId src = at(0, static_cast<int>(seed % 9));
    const auto t = route_prs(g, src, policy(ProtocolKind::PRS, 0), {}, rng);
    CHECK(t.hop_count() == static_cast<std::size_t>(g.hop_distance(src)));
    CHECK(t.phantom == src);
    for (auto p : t.phase_labels) CHECK(p == Phase::SPR);
    CHECK(check_all(g, t).empty());
  }
}

TEST_CASE("PRS with ttl 5 walks five random hops before SPR") {
  const auto g = build_grid({});
  const NodeId src = 0;  // d = 19, a five-hop walk cannot reach the BS
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    const auto t = route_prs(g, src, policy(ProtocolKind::PRS, 5), {}, rng);
    REQUIRE(t.hop_count() >= 5);
    for (int i = 0; i < 5; ++i) {
      CHECK(t.phase_labels[i] == Phase::RW);
      CHECK(t.ttl_series[i] == 4 - i);
    }
    for (std::size_t i = 5; i < t.hop_count(); ++i) CHECK(t.phase_labels[i] == Phase::SPR);
    CHECK(t.phantom == t.hops[5]);
    CHECK_FALSE(t.truncated_by);
    CHECK(check_all(g, t).empty());
  }
}

TEST_CASE("a compromised node on the walk zeroes the TTL") {
  const auto g = build_grid({});
  const NodeId src = 0;
  const auto pol = policy(ProtocolKind::PRS, 4);
  int exercised = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Rng free_rng(seed);
    const auto free = route_prs(g, src, pol, {}, free_rng);
    const NodeId cn = free.hops[2];
    if (cn == src || cn == free.hops[1]) continue;
    Rng rng(seed);
    const auto t = route_prs(g, src, pol, NodeSet{cn}, rng);
    REQUIRE(t.truncated_by);
    CHECK(*t.truncated_by == cn);
    CHECK(t.phantom == cn);
    CHECK(t.ttl_series[0] == 3);
    CHECK(t.ttl_series[1] == 0);
    CHECK(t.hops[2] == cn);
    for (std::size_t i = 2; i < t.hop_count(); ++i) CHECK(t.phase_labels[i] == Phase::SPR);
    CHECK(t.hop_count() == 2 + static_cast<std::size_t>(g.hop_distance(cn)));
    CHECK(check_all(g, t).empty());
    ++exercised;
  }
  CHECK(exercised > 20);
}

TEST_CASE("a compromised node reached as the walk ends naturally does not count as truncation") {
  const auto g = build_grid({});
  Rng free_rng(3);
  const auto pol = policy(ProtocolKind::PRS, 3);
  const auto free = route_prs(g, 0, pol, {}, free_rng);
  const NodeId pn = free.hops[3];
  if (pn != free.hops[1] && pn != free.hops[2] && pn != 0) {
    Rng rng(3);
    const auto t = route_prs(g, 0, pol, NodeSet{pn}, rng);
    CHECK_FALSE(t.truncated_by);
    CHECK(t.hops == free.hops);
  }
}

TEST_CASE("SLP-R walks outward, along the ring, then min-hop") {
  const auto& g = grid9();
  constexpr double eps = 1e-12;
  int ring_hops = 0;
  int idr_traces = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    Rng rng(seed);
    const NodeId src = static_cast<NodeId>(seed % g.size());
    if (src == g.bs()) continue;
    const auto t = route_slpr(g, src, policy(ProtocolKind::SLPR, 2), {}, rng);
    REQUIRE(check_all(g, t).empty());

    bool saw_idr = false;
    Phase prev = Phase::BRW;
    for (std::size_t i = 0; i < t.hop_count(); ++i) {
      const Phase p = t.phase_labels[i];
      // Order is BRW* IDR* SPR*.
      CHECK(static_cast<int>(p) >= static_cast<int>(prev));
      prev = p;
      if (p != Phase::IDR) continue;
      saw_idr = true;
      const NodeId a = t.hops[i], b = t.hops[i + 1];
      if (g.hop_distance(a) == g.hop_distance(b)) {
        ++ring_hops;
        continue;
      }
      // Off-ring move is only allowed when no same-depth neighbour advanced
      // in the same rotational direction.
      double delta = g.bearing(b) - g.bearing(a);
      while (delta <= -std::numbers::pi) delta += 2 * std::numbers::pi;
      while (delta > std::numbers::pi) delta -= 2 * std::numbers::pi;
      const bool ccw = delta > 0;
      for (NodeId n : g.neighbors(a)) {
        if (n == g.bs() || g.hop_distance(n) != g.hop_distance(a)) continue;
        double dn = g.bearing(n) - g.bearing(a);
        while (dn <= -std::numbers::pi) dn += 2 * std::numbers::pi;
        while (dn > std::numbers::pi) dn -= 2 * std::numbers::pi;
        CHECK_FALSE((ccw ? dn > eps : dn < -eps));
      }
    }
    idr_traces += saw_idr;
  }
  CHECK(ring_hops > 500);
  CHECK(idr_traces > 300);
}

TEST_CASE("SLP-R truncated during IDR finishes with min-hop routing") {
  const auto g = build_grid({});
  const auto pol = policy(ProtocolKind::SLPR, 5);
  int exercised = 0;
  for (std::uint64_t seed = 0; seed < 200 && exercised < 30; ++seed) {
    Rng free_rng(seed);
    const NodeId src = at(12, 12, 40);
    const auto free = route_slpr(g, src, pol, {}, free_rng);
    const auto first_idr =
        std::find(free.phase_labels.begin(), free.phase_labels.end(), Phase::IDR) - free.phase_labels.begin();
    const auto idr_len = std::count(free.phase_labels.begin(), free.phase_labels.end(), Phase::IDR);
    if (idr_len < 3) continue;
    const NodeId cn = free.hops[static_cast<std::size_t>(first_idr) + 1];
    if (std::count(free.hops.begin(), free.hops.begin() + first_idr + 1, cn) > 0) continue;
    Rng rng(seed);
    const auto t = route_slpr(g, src, pol, NodeSet{cn}, rng);
    REQUIRE(t.truncated_by);
    CHECK(*t.truncated_by == cn);
    CHECK(check_all(g, t).empty());
    const auto idr_after = std::count(t.phase_labels.begin(), t.phase_labels.end(), Phase::IDR);
    CHECK(idr_after == 1);
    ++exercised;
  }
  CHECK(exercised >= 10);
}

TEST_CASE("SLP-R compromised phantom skips the ring walk") {
  const auto g = build_grid({});
  const auto pol = policy(ProtocolKind::SLPR, 5);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Rng free_rng(seed);
    const NodeId src = at(10, 10, 40);
    const auto free = route_slpr(g, src, pol, {}, free_rng);
    if (free.dead_end) continue;
    const NodeId pn = free.hops[5];
    if (std::count(free.hops.begin(), free.hops.begin() + 5, pn) > 0) continue;
    Rng rng(seed);
    const auto t = route_slpr(g, src, pol, NodeSet{pn}, rng);
    REQUIRE(t.truncated_by);
    CHECK(std::count(t.phase_labels.begin(), t.phase_labels.end(), Phase::IDR) == 0);
    CHECK(check_all(g, t).empty());
  }
}

TEST_CASE("IDR hop budget converts the sweep angle to ring hops") {
  CHECK(idr_hop_budget(180.0, 80) == 40);
  CHECK(idr_hop_budget(0.0, 80) == 0);
  CHECK(idr_hop_budget(90.0, 8) == 2);
  CHECK(idr_hop_budget(360.0, 24) == 24);
}

TEST_CASE("PSSLP segments split the network radius in thirds") {
  const auto g = build_grid({});  // d_max = 20
  CHECK(psslp_segment(g, 1) == 1);
  CHECK(psslp_segment(g, 6) == 1);
  CHECK(psslp_segment(g, 7) == 2);
  CHECK(psslp_segment(g, 13) == 2);
  CHECK(psslp_segment(g, 14) == 3);
  CHECK(psslp_segment(g, 20) == 3);
}

TEST_CASE("PSSLP strategies per segment on a 9x9 grid") {
  const auto& g = grid9();  // d_max = 4: segment 1 is d = 1, segment 2 is d = 2
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    Rng rng(seed);
    // Outer segment: no random walk at all.
    const auto outer = route_psslp(g, at(0, 0), policy(ProtocolKind::PSSLP), {}, rng);
    CHECK(outer.hop_count() == 4);
    for (auto p : outer.phase_labels) CHECK(p == Phase::SPR);

    // Inner segment: walk outward until no neighbour is farther away.
    const auto inner = route_psslp(g, at(4, 5), policy(ProtocolKind::PSSLP), {}, rng);
    REQUIRE(check_all(g, inner).empty());
    for (NodeId n : g.neighbors(inner.phantom)) CHECK(g.hop_distance(n) <= g.hop_distance(inner.phantom));
    CHECK(g.hop_distance(inner.phantom) == 4);

    // Middle segment: TTL-bounded backward walk.
    const auto middle = route_psslp(g, at(2, 4), policy(ProtocolKind::PSSLP, 5), {}, rng);
    REQUIRE(check_all(g, middle).empty());
    const auto brw = std::count(middle.phase_labels.begin(), middle.phase_labels.end(), Phase::BRW);
    if (middle.dead_end) CHECK(brw < 5);
    else CHECK(brw == 5);
  }
}

TEST_CASE("route invariants over random compromised sets") {
  const auto& g = grid9();
  for (auto kind : {ProtocolKind::PRS, ProtocolKind::SLPR, ProtocolKind::PSSLP, ProtocolKind::SPR}) {
    CAPTURE(to_string(kind));
    const auto pol = policy(kind, 5);
    for (std::uint64_t seed = 0; seed < 2000; ++seed) {
      Rng rng(seed * 31 + 7);
      NodeSet cns;
      std::uniform_int_distribution<NodeId> node(0, static_cast<NodeId>(g.size() - 1));
      const NodeId src = static_cast<NodeId>(seed % g.size());
      if (src == g.bs()) continue;
      if (seed % 2)
        for (int i = 0; i < 6; ++i)
          if (NodeId c = node(rng); c != src && c != g.bs()) cns.insert(c);
      const auto t = route_packet(g, src, pol, cns, rng);
      REQUIRE_MESSAGE(check_all(g, t).empty(), check_all(g, t));
      CHECK(t.hop_count() <= max_route_hops(g, pol));
      if (cns.empty()) CHECK_FALSE(t.truncated_by);
      if (t.truncated_by) CHECK(cns.contains(*t.truncated_by));
    }
  }
}

TEST_CASE("PRS with ttl 0 matches SPR path lengths") {
  const auto& g = grid9();
  std::map<std::size_t, int> prs_lengths, spr_lengths;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const NodeId src = static_cast<NodeId>(seed % g.size());
    if (src == g.bs()) continue;
    Rng a(seed), b(seed);
    ++prs_lengths[route_prs(g, src, policy(ProtocolKind::PRS, 0), {}, a).hop_count()];
    ++spr_lengths[route_spr(g, src, policy(ProtocolKind::SPR), b).hop_count()];
  }
  CHECK(prs_lengths == spr_lengths);
}

TEST_CASE("policy validation and parsing") {
  CHECK_THROWS_AS(policy(ProtocolKind::PRS, -1).validate(), std::invalid_argument);
  RoutingPolicy p;
  p.idr_angle_max = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  CHECK(parse_protocol("SLP-R") == ProtocolKind::SLPR);
  CHECK(parse_protocol("psslp") == ProtocolKind::PSSLP);
  CHECK_THROWS_AS(parse_protocol("flood"), std::invalid_argument);
  Rng rng(0);
  CHECK_THROWS_AS(route_prs(grid9(), grid9().bs(), p, {}, rng), RoutingError);
}
