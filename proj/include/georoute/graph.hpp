#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace georoute {

using NodeId = int;
using LinkId = int;

struct Link {
  NodeId tail = -1;
  NodeId head = -1;
  LinkId id = -1;
};

// Directed graph with a fixed source/destination pair. Link ids are dense:
// link i is links()[i], and every |E|-dimensional vector (weights, theta,
// counters, path masks) is indexed by link id.
class NetworkTopology {
 public:
  // Links are given as (tail, head) pairs in id order; ids are assigned by
  // position. Requires at least one directed s->d path.
  NetworkTopology(int num_nodes, std::vector<Link> links, NodeId source,
                  NodeId destination);

  int num_nodes() const { return num_nodes_; }
  std::size_t num_links() const { return links_.size(); }
  const std::vector<Link>& links() const { return links_; }
  const Link& link(LinkId id) const { return links_[static_cast<std::size_t>(id)]; }
  NodeId source() const { return source_; }
  NodeId destination() const { return destination_; }

  // Outgoing link ids of a node, ascending by id.
  const std::vector<LinkId>& outgoing(NodeId v) const {
    return out_[static_cast<std::size_t>(v)];
  }

 private:
  int num_nodes_;
  std::vector<Link> links_;
  NodeId source_;
  NodeId destination_;
  std::vector<std::vector<LinkId>> out_;
};

// A loop-free s->d path: the ordered link sequence plus its incidence mask
// (mask[i] == 1 iff link i is on the path).
struct Path {
  std::vector<LinkId> links;
  std::vector<std::uint8_t> mask;

  int hops() const { return static_cast<int>(links.size()); }
  bool contains(LinkId id) const { return mask[static_cast<std::size_t>(id)] != 0; }
};

bool operator==(const Path& a, const Path& b);

// Validates that the sequence is a loop-free s->d walk and builds the mask.
Path make_path(const NetworkTopology& topo, std::vector<LinkId> seq);

// Per-link nonnegative weights (expected slots per link).
using WeightVector = std::vector<double>;

// All simple s->d paths in lexicographic order of their link-id sequences.
// Throws PathExplosionError when more than `cap` paths exist and NoPathError
// when there are none.
std::vector<Path> enumerate_paths(const NetworkTopology& topo,
                                  std::size_t cap = 10000);

// Minimum-total-weight s->d path. Equal-cost ties resolve to the
// lexicographically smallest link-id sequence.
Path shortest_path(const NetworkTopology& topo, const WeightVector& weights);

struct NodeCost {
  double cost = 0.0;    // +inf when the node cannot reach the destination
  LinkId next = -1;     // smallest-id outgoing link consistent with cost
};

// Minimum weight from every node to the destination (Bellman-Ford).
std::vector<NodeCost> min_cost_to_destination(const NetworkTopology& topo,
                                              const WeightVector& weights);

int max_hops(const std::vector<Path>& paths);

// Built-in generators. The line network has nodes 0..hops and
// `links_per_hop` parallel links per hop; ids are hop-major. The grid is a
// directed lattice (right and down edges), source at the top-left corner and
// destination at the bottom-right, so every path has (rows-1)+(cols-1) hops.
NetworkTopology make_line_network(int hops, int links_per_hop);
NetworkTopology make_grid_network(int rows, int cols);

}  // namespace georoute
