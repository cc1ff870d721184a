#include "slpsim/net_model.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <ostream>

namespace slpsim {

double distance(Position a, Position b) noexcept { return std::hypot(a.x - b.x, a.y - b.y); }

void GridSpec::validate() const {
  if (side_count < 1) throw std::invalid_argument("grid side_count must be >= 1");
  if (!(spacing > 0.0)) throw std::invalid_argument("grid spacing must be > 0");
  if (!(radio_range >= 0.0)) throw std::invalid_argument("grid radio_range must be >= 0");
  const auto n = static_cast<std::size_t>(side_count) * static_cast<std::size_t>(side_count);
  if (bs_index && *bs_index >= n) throw std::invalid_argument("grid bs_index out of range");
}

DisconnectedGraphError::DisconnectedGraphError(std::size_t unreachable)
    : std::runtime_error(std::to_string(unreachable) + " node(s) unreachable from the base station"),
      unreachable_(unreachable) {}

HopDistances compute_hop_distances(const std::vector<std::vector<NodeId>>& adjacency, NodeId bs) {
  HopDistances out;
  out.hops.assign(adjacency.size(), kUnreachable);
  if (bs >= adjacency.size()) {
    out.unreachable_count = adjacency.size();
    return out;
  }
  std::deque<NodeId> queue{bs};
  out.hops[bs] = 0;
  while (!queue.empty()) {
    const NodeId u = queue.front();
    queue.pop_front();
    for (NodeId v : adjacency[u]) {
      if (out.hops[v] == kUnreachable) {
        out.hops[v] = out.hops[u] + 1;
        queue.push_back(v);
      }
    }
  }
  out.unreachable_count =
      static_cast<std::size_t>(std::count(out.hops.begin(), out.hops.end(), kUnreachable));
  return out;
}

NetworkGraph NetworkGraph::from_adjacency(std::vector<Position> positions,
                                          std::vector<std::vector<NodeId>> adjacency, NodeId bs,
                                          double spacing) {
  if (positions.size() != adjacency.size())
    throw std::invalid_argument("positions and adjacency sizes differ");
  if (bs >= positions.size()) throw std::invalid_argument("base station id out of range");

  std::size_t degree_sum = 0;
  for (auto& list : adjacency) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    degree_sum += list.size();
  }
  for (NodeId u = 0; u < adjacency.size(); ++u) {
    for (NodeId v : adjacency[u]) {
      if (v >= adjacency.size() || v == u) throw std::invalid_argument("bad neighbour id");
      if (!std::binary_search(adjacency[v].begin(), adjacency[v].end(), u))
        throw std::invalid_argument("adjacency is not symmetric");
    }
  }

  auto dist = compute_hop_distances(adjacency, bs);
  if (dist.unreachable_count > 0) throw DisconnectedGraphError(dist.unreachable_count);

  NetworkGraph g;
  const Position origin = positions[bs];
  for (auto& p : positions) p = {p.x - origin.x, p.y - origin.y};
  g.positions_ = std::move(positions);
  g.adjacency_ = std::move(adjacency);
  g.hops_ = std::move(dist.hops);
  g.link_count_ = degree_sum / 2;
  g.bs_ = bs;
  g.spacing_ = spacing;
  g.max_hops_ = *std::max_element(g.hops_.begin(), g.hops_.end());
  g.ring_sizes_.assign(static_cast<std::size_t>(g.max_hops_) + 1, 0);
  for (int h : g.hops_) ++g.ring_sizes_[static_cast<std::size_t>(h)];
  g.max_ring_ = *std::max_element(g.ring_sizes_.begin(), g.ring_sizes_.end());
  return g;
}

int NetworkGraph::ring_size(int d) const {
  if (d < 0 || d > max_hops_) return 0;
  return ring_sizes_[static_cast<std::size_t>(d)];
}

double NetworkGraph::bearing(NodeId n) const {
  const Position p = position(n);
  return std::atan2(p.y, p.x);
}

void NetworkGraph::write_csv(std::ostream& out) const {
  out << "node,x,y,d,neighbors\n";
  for (NodeId n = 0; n < size(); ++n) {
    out << n << ',' << positions_[n].x << ',' << positions_[n].y << ',' << hops_[n] << ',';
    for (std::size_t i = 0; i < adjacency_[n].size(); ++i)
      out << (i ? " " : "") << adjacency_[n][i];
    out << '\n';
  }
}

NetworkGraph build_grid(const GridSpec& spec) {
  spec.validate();
  const auto side = static_cast<std::size_t>(spec.side_count);
  const std::size_t n = side * side;

  std::vector<Position> positions(n);
  for (std::size_t row = 0; row < side; ++row)
    for (std::size_t col = 0; col < side; ++col)
      positions[row * side + col] = {static_cast<double>(col) * spec.spacing,
                                     static_cast<double>(row) * spec.spacing};

  NodeId bs = 0;
  if (spec.bs_index) {
    bs = *spec.bs_index;
  } else {
    const double extent = static_cast<double>(side - 1) * spec.spacing;
    const Position centroid{extent / 2.0, extent / 2.0};
    double best = std::numeric_limits<double>::infinity();
    for (NodeId i = 0; i < n; ++i) {
      const double d = distance(positions[i], centroid);
      if (d < best - 1e-9) {
        best = d;
        bs = i;
      }
    }
  }

  // Only lattice offsets within the radio range can be linked.
  const auto reach = static_cast<std::ptrdiff_t>(std::floor(spec.radio_range / spec.spacing + 1e-9));
  const double range_eps = spec.radio_range + 1e-9;
  std::vector<std::vector<NodeId>> adjacency(n);
  for (std::ptrdiff_t row = 0; row < static_cast<std::ptrdiff_t>(side); ++row) {
    for (std::ptrdiff_t col = 0; col < static_cast<std::ptrdiff_t>(side); ++col) {
      const auto u = static_cast<NodeId>(row * static_cast<std::ptrdiff_t>(side) + col);
      for (std::ptrdiff_t dr = -reach; dr <= reach; ++dr) {
        for (std::ptrdiff_t dc = -reach; dc <= reach; ++dc) {
          if (dr == 0 && dc == 0) continue;
          const auto r2 = row + dr;
          const auto c2 = col + dc;
          if (r2 < 0 || c2 < 0 || r2 >= static_cast<std::ptrdiff_t>(side) ||
              c2 >= static_cast<std::ptrdiff_t>(side))
            continue;
          const auto v = static_cast<NodeId>(r2 * static_cast<std::ptrdiff_t>(side) + c2);
          if (distance(positions[u], positions[v]) <= range_eps) adjacency[u].push_back(v);
        }
      }
    }
  }
  return NetworkGraph::from_adjacency(std::move(positions), std::move(adjacency), bs, spec.spacing);
}

}  // namespace slpsim
