#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace slpsim {

using NodeId = std::uint32_t;

struct Position {
  double x = 0.0;
  double y = 0.0;
};

double distance(Position a, Position b) noexcept;

/// Regular square lattice deployment.
struct GridSpec {
  int side_count = 40;
  double spacing = 50.0;       // meters between lattice neighbours
  double radio_range = 72.0;   // r_s, meters
  /// Base station node. When unset, the node nearest the area centroid
  /// (lowest id on ties) is used.
  std::optional<NodeId> bs_index;

  void validate() const;  // throws std::invalid_argument
};

class DisconnectedGraphError : public std::runtime_error {
 public:
  explicit DisconnectedGraphError(std::size_t unreachable);
  std::size_t unreachable_count() const noexcept { return unreachable_; }

 private:
  std::size_t unreachable_;
};

inline constexpr int kUnreachable = -1;

struct HopDistances {
  std::vector<int> hops;  // kUnreachable for nodes not connected to the BS
  std::size_t unreachable_count = 0;
};

/// Breadth-first hop counts from `bs` over an adjacency list.
HopDistances compute_hop_distances(const std::vector<std::vector<NodeId>>& adjacency, NodeId bs);

/// Immutable connectivity graph with hop distances to the base station.
/// Coordinates are translated so that the base station sits at (0, 0).
class NetworkGraph {
 public:
  /// Builds a graph from explicit positions and a symmetric adjacency list.
  /// Neighbour lists are sorted by id. Throws std::invalid_argument on an
  /// asymmetric or out-of-range adjacency and DisconnectedGraphError when
  /// some node cannot reach the BS.
  static NetworkGraph from_adjacency(std::vector<Position> positions,
                                     std::vector<std::vector<NodeId>> adjacency, NodeId bs,
                                     double spacing);

  std::size_t size() const noexcept { return positions_.size(); }
  NodeId bs() const noexcept { return bs_; }
  Position position(NodeId n) const { return positions_.at(n); }
  std::span<const Position> positions() const noexcept { return positions_; }
  std::span<const NodeId> neighbors(NodeId n) const { return adjacency_.at(n); }
  int hop_distance(NodeId n) const { return hops_.at(n); }
  std::span<const int> hop_distances() const noexcept { return hops_; }
  std::size_t link_count() const noexcept { return link_count_; }
  int max_hop_distance() const noexcept { return max_hops_; }
  /// Number of nodes whose hop distance equals `d`.
  int ring_size(int d) const;
  int max_ring_size() const noexcept { return max_ring_; }
  /// Lattice spacing the graph was built with; used for distance tolerances.
  double spacing() const noexcept { return spacing_; }
  double distance_to_bs(NodeId n) const { return distance(position(n), position(bs_)); }
  /// Angle of the node about the BS, radians in (-pi, pi].
  double bearing(NodeId n) const;

  /// Debug dump: node,x,y,d,neighbors (neighbour ids separated by spaces).
  void write_csv(std::ostream& out) const;

 private:
  NetworkGraph() = default;

  std::vector<Position> positions_;
  std::vector<std::vector<NodeId>> adjacency_;
  std::vector<int> hops_;
  std::vector<int> ring_sizes_;
  std::size_t link_count_ = 0;
  NodeId bs_ = 0;
  int max_hops_ = 0;
  int max_ring_ = 0;
  double spacing_ = 1.0;
};

/// Places side_count^2 nodes row-major (id = row * side + col), links every
/// pair within radio range and designates the base station.
NetworkGraph build_grid(const GridSpec& spec);

}  // namespace slpsim
