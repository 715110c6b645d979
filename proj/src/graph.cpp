#include "georoute/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>
#include <string>

#include "georoute/errors.hpp"

namespace georoute {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool destination_reachable(const NetworkTopology& topo) {
  std::vector<char> seen(static_cast<std::size_t>(topo.num_nodes()), 0);
  std::deque<NodeId> queue{topo.source()};
  seen[static_cast<std::size_t>(topo.source())] = 1;
  while (!queue.empty()) {
    NodeId v = queue.front();
    queue.pop_front();
    if (v == topo.destination()) return true;
    for (LinkId id : topo.outgoing(v)) {
      NodeId w = topo.link(id).head;
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = 1;
        queue.push_back(w);
      }
    }
  }
  return false;
}

void check_weights(const NetworkTopology& topo, const WeightVector& weights) {
  if (weights.size() != topo.num_links())
    throw std::invalid_argument("weight vector size does not match link count");
  for (double w : weights) {
    if (std::isnan(w) || w < 0.0)
      throw std::invalid_argument("link weights must be nonnegative");
  }
}

}  // namespace

NetworkTopology::NetworkTopology(int num_nodes, std::vector<Link> links,
                                 NodeId source, NodeId destination)
    : num_nodes_(num_nodes),
      links_(std::move(links)),
      source_(source),
      destination_(destination) {
  if (num_nodes_ <= 0) throw std::invalid_argument("topology needs nodes");
  if (source_ < 0 || source_ >= num_nodes_ || destination_ < 0 ||
      destination_ >= num_nodes_ || source_ == destination_)
    throw std::invalid_argument("bad source/destination pair");
  out_.resize(static_cast<std::size_t>(num_nodes_));
  for (std::size_t i = 0; i < links_.size(); ++i) {
    Link& l = links_[i];
    l.id = static_cast<LinkId>(i);
    if (l.tail < 0 || l.tail >= num_nodes_ || l.head < 0 || l.head >= num_nodes_)
      throw std::invalid_argument("link endpoint out of range");
    if (l.tail == l.head) throw std::invalid_argument("self-loop link");
    out_[static_cast<std::size_t>(l.tail)].push_back(l.id);
  }
  for (auto& adj : out_) std::sort(adj.begin(), adj.end());
  if (!destination_reachable(*this))
    throw NoPathError("destination unreachable from source");
}

bool operator==(const Path& a, const Path& b) { return a.links == b.links; }

Path make_path(const NetworkTopology& topo, std::vector<LinkId> seq) {
  if (seq.empty()) throw std::invalid_argument("empty path");
  Path p;
  p.mask.assign(topo.num_links(), 0);
  std::vector<char> visited(static_cast<std::size_t>(topo.num_nodes()), 0);
  NodeId at = topo.source();
  visited[static_cast<std::size_t>(at)] = 1;
  for (LinkId id : seq) {
    if (id < 0 || static_cast<std::size_t>(id) >= topo.num_links())
      throw std::invalid_argument("link id out of range");
    const Link& l = topo.link(id);
    if (l.tail != at) throw std::invalid_argument("disconnected link sequence");
    if (visited[static_cast<std::size_t>(l.head)])
      throw std::invalid_argument("path revisits a node");
    visited[static_cast<std::size_t>(l.head)] = 1;
    p.mask[static_cast<std::size_t>(id)] = 1;
    at = l.head;
  }
  if (at != topo.destination())
    throw std::invalid_argument("path does not end at the destination");
  p.links = std::move(seq);
  return p;
}

std::vector<Path> enumerate_paths(const NetworkTopology& topo, std::size_t cap) {
  if (cap < 1) throw std::invalid_argument("cap must be >= 1");
  std::vector<Path> result;
  std::vector<char> visited(static_cast<std::size_t>(topo.num_nodes()), 0);
  std::vector<LinkId> seq;

  // Depth-first over outgoing links in ascending id order; emits paths in
  // lexicographic order of their link-id sequences.
  struct Frame {
    NodeId node;
    std::size_t next;  // index into outgoing(node)
  };
  std::vector<Frame> stack;
  stack.push_back({topo.source(), 0});
  visited[static_cast<std::size_t>(topo.source())] = 1;

  while (!stack.empty()) {
    Frame& f = stack.back();
    const auto& adj = topo.outgoing(f.node);
    if (f.next >= adj.size()) {
      visited[static_cast<std::size_t>(f.node)] = 0;
      stack.pop_back();
      if (!seq.empty()) seq.pop_back();
      continue;
    }
    LinkId id = adj[f.next++];
    NodeId w = topo.link(id).head;
    if (visited[static_cast<std::size_t>(w)]) continue;
    seq.push_back(id);
    if (w == topo.destination()) {
      if (result.size() >= cap)
        throw PathExplosionError("path count exceeds cap " + std::to_string(cap));
      result.push_back(make_path(topo, seq));
      seq.pop_back();
      continue;
    }
    visited[static_cast<std::size_t>(w)] = 1;
    stack.push_back({w, 0});
  }

  if (result.empty()) throw NoPathError("no s->d path");
  return result;
}

std::vector<NodeCost> min_cost_to_destination(const NetworkTopology& topo,
                                              const WeightVector& weights) {
  check_weights(topo, weights);
  const std::size_t n = static_cast<std::size_t>(topo.num_nodes());
  std::vector<NodeCost> table(n, NodeCost{kInf, -1});
  table[static_cast<std::size_t>(topo.destination())] = NodeCost{0.0, -1};

  // Relax to an exact fixpoint. Weights are nonnegative, so the fixpoint is
  // the minimum over loop-free paths and is reached within num_nodes passes.
  for (int pass = 0; pass <= topo.num_nodes(); ++pass) {
    bool changed = false;
    for (const Link& l : topo.links()) {
      double via = weights[static_cast<std::size_t>(l.id)] +
                   table[static_cast<std::size_t>(l.head)].cost;
      if (via < table[static_cast<std::size_t>(l.tail)].cost) {
        table[static_cast<std::size_t>(l.tail)].cost = via;
        changed = true;
      }
    }
    if (!changed) break;
  }

  // Next-hop pointers: smallest link id whose relaxation is tight. The
  // comparison is exact because the cost table stores these same sums.
  for (std::size_t v = 0; v < n; ++v) {
    if (static_cast<NodeId>(v) == topo.destination()) continue;
    if (table[v].cost == kInf) continue;
    for (LinkId id : topo.outgoing(static_cast<NodeId>(v))) {
      const Link& l = topo.link(id);
      double via = weights[static_cast<std::size_t>(id)] +
                   table[static_cast<std::size_t>(l.head)].cost;
      if (via == table[v].cost) {
        table[v].next = id;
        break;
      }
    }
  }
  return table;
}

namespace {

// Walks tight edges depth-first in link-id order and returns the first
// loop-free s->d path found, i.e. the lexicographically smallest minimum-cost
// path. Every minimum-cost simple path consists solely of tight edges, so
// with strictly positive weights this cannot fail. Zero-weight cycles can in
// principle exhaust the search; callers fall back to a hop-count-guarded
// label walk in that case.
bool tight_dfs(const NetworkTopology& topo, const WeightVector& weights,
               const std::vector<NodeCost>& table, std::vector<LinkId>& seq) {
  struct Frame {
    NodeId node;
    std::size_t next;
  };
  std::vector<char> visited(static_cast<std::size_t>(topo.num_nodes()), 0);
  std::vector<Frame> stack;
  stack.push_back({topo.source(), 0});
  visited[static_cast<std::size_t>(topo.source())] = 1;
  seq.clear();

  while (!stack.empty()) {
    Frame& f = stack.back();
    const auto& adj = topo.outgoing(f.node);
    bool descended = false;
    while (f.next < adj.size()) {
      LinkId id = adj[f.next++];
      const Link& l = topo.link(id);
      if (visited[static_cast<std::size_t>(l.head)]) continue;
      double head_cost = table[static_cast<std::size_t>(l.head)].cost;
      if (head_cost == kInf) continue;
      double via = weights[static_cast<std::size_t>(id)] + head_cost;
      if (via != table[static_cast<std::size_t>(f.node)].cost) continue;
      seq.push_back(id);
      if (l.head == topo.destination()) return true;
      visited[static_cast<std::size_t>(l.head)] = 1;
      stack.push_back({l.head, 0});
      descended = true;
      break;
    }
    if (descended) continue;
    if (f.next >= adj.size()) {
      visited[static_cast<std::size_t>(f.node)] = 0;
      stack.pop_back();
      if (!seq.empty()) seq.pop_back();
    }
  }
  return false;
}

// Fallback for graphs with zero-weight cycles: labels (cost, hops) ordered
// lexicographically make the greedy walk strictly decrease the hop label, so
// it terminates with a simple path of minimum cost.
Path cost_hops_walk(const NetworkTopology& topo, const WeightVector& weights) {
  const std::size_t n = static_cast<std::size_t>(topo.num_nodes());
  std::vector<double> cost(n, kInf);
  std::vector<int> hops(n, std::numeric_limits<int>::max());
  cost[static_cast<std::size_t>(topo.destination())] = 0.0;
  hops[static_cast<std::size_t>(topo.destination())] = 0;
  for (int pass = 0; pass <= topo.num_nodes() * topo.num_nodes(); ++pass) {
    bool changed = false;
    for (const Link& l : topo.links()) {
      std::size_t u = static_cast<std::size_t>(l.tail);
      std::size_t w = static_cast<std::size_t>(l.head);
      if (cost[w] == kInf) continue;
      double c = weights[static_cast<std::size_t>(l.id)] + cost[w];
      int h = hops[w] + 1;
      if (c < cost[u] || (c == cost[u] && h < hops[u])) {
        cost[u] = c;
        hops[u] = h;
        changed = true;
      }
    }
    if (!changed) break;
  }
  std::vector<LinkId> seq;
  NodeId at = topo.source();
  while (at != topo.destination()) {
    LinkId chosen = -1;
    for (LinkId id : topo.outgoing(at)) {
      const Link& l = topo.link(id);
      std::size_t w = static_cast<std::size_t>(l.head);
      if (cost[w] == kInf) continue;
      if (weights[static_cast<std::size_t>(id)] + cost[w] ==
              cost[static_cast<std::size_t>(at)] &&
          hops[w] + 1 == hops[static_cast<std::size_t>(at)]) {
        chosen = id;
        break;
      }
    }
    if (chosen < 0)
      throw NoConvergenceError("inconsistent shortest-path labels");
    seq.push_back(chosen);
    at = topo.link(chosen).head;
  }
  return make_path(topo, std::move(seq));
}

}  // namespace

Path shortest_path(const NetworkTopology& topo, const WeightVector& weights) {
  auto table = min_cost_to_destination(topo, weights);
  if (table[static_cast<std::size_t>(topo.source())].cost == kInf)
    throw NoPathError("destination unreachable from source");
  std::vector<LinkId> seq;
  if (tight_dfs(topo, weights, table, seq)) return make_path(topo, std::move(seq));
  return cost_hops_walk(topo, weights);
}

int max_hops(const std::vector<Path>& paths) {
  int h = 0;
  for (const Path& p : paths) h = std::max(h, p.hops());
  return h;
}

NetworkTopology make_line_network(int hops, int links_per_hop) {
  if (hops < 1 || links_per_hop < 1)
    throw std::invalid_argument("line network needs hops >= 1, links >= 1");
  std::vector<Link> links;
  links.reserve(static_cast<std::size_t>(hops) * links_per_hop);
  for (int h = 0; h < hops; ++h)
    for (int j = 0; j < links_per_hop; ++j) links.push_back({h, h + 1, -1});
  return NetworkTopology(hops + 1, std::move(links), 0, hops);
}

NetworkTopology make_grid_network(int rows, int cols) {
  if (rows < 2 || cols < 2)
    throw std::invalid_argument("grid needs rows >= 2 and cols >= 2");
  auto node = [cols](int r, int c) { return r * cols + c; };
  std::vector<Link> links;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) links.push_back({node(r, c), node(r, c + 1), -1});
      if (r + 1 < rows) links.push_back({node(r, c), node(r + 1, c), -1});
    }
  }
  return NetworkTopology(rows * cols, std::move(links), 0, rows * cols - 1);
}

}  // namespace georoute
