#pragma once

// Directed port-labeled multigraphs: the static topology the simulator runs
// on. Each wire leaves its source through a numbered out-port and enters its
// destination through a numbered in-port; a processor never sees neighbor
// identities, only port numbers.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace snakenet {

struct Edge {
  int src = 0;
  std::uint8_t out_port = 0;
  int dst = 0;
  std::uint8_t in_port = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct ValidationReport {
  std::vector<std::string> violations;
  [[nodiscard]] bool ok() const { return violations.empty(); }
};

class PortGraph {
 public:
  // Throws std::invalid_argument only for structurally unusable input
  // (nodes < 1, delta outside 2..kMaxDelta, root/node index out of range,
  // port outside 1..delta). Everything else — duplicate port use, self
  // loops, dangling ports, disconnectedness — is reported by validate().
  static PortGraph from_edges(int nodes, int delta, int root,
                              std::vector<Edge> edges);

  [[nodiscard]] int nodes() const { return nodes_; }
  [[nodiscard]] int delta() const { return delta_; }
  [[nodiscard]] int root() const { return root_; }
  [[nodiscard]] const std::vector<Edge>& edges() const { return edges_; }

  // Edge leaving `node` through `out_port`, if wired. Ports are 1-based.
  [[nodiscard]] std::optional<int> edge_out(int node, int out_port) const;
  // Edge entering `node` through `in_port`, if wired.
  [[nodiscard]] std::optional<int> edge_in(int node, int in_port) const;

  [[nodiscard]] const Edge& edge(int idx) const { return edges_[static_cast<size_t>(idx)]; }
  [[nodiscard]] int edge_count() const { return static_cast<int>(edges_.size()); }

  // Connected out-ports of a node in increasing port order.
  [[nodiscard]] std::vector<int> out_ports(int node) const;
  [[nodiscard]] std::vector<int> in_ports(int node) const;

  // Full model check: unique port usage, no self loops, every node has at
  // least one in and one out wire, strong connectivity, node count >= 2.
  [[nodiscard]] ValidationReport validate() const;

  friend bool operator==(const PortGraph&, const PortGraph&) = default;

 private:
  int nodes_ = 0;
  int delta_ = 2;
  int root_ = 0;
  std::vector<Edge> edges_;
  // out_[node*delta + (port-1)] / in_[node*delta + (port-1)] -> edge index
  // or -1.
  std::vector<int> out_;
  std::vector<int> in_;
};

// A walk described purely in port terms, as a processor would experience it:
// start node (instrumentation only) plus the (out_port, in_port) pair of each
// hop.
struct PortPath {
  int start = 0;
  std::vector<std::pair<std::uint8_t, std::uint8_t>> hops;

  friend bool operator==(const PortPath&, const PortPath&) = default;
};

// The canonical shortest path from src to dst: BFS layering where each node
// adopts, among the wires arriving from the previous layer, the one with the
// lowest in-port. This is exactly the path the growing-snake wavefront
// carves. Throws std::invalid_argument if dst is unreachable from src or the
// nodes coincide without a cycle back (src == dst asks for the empty path).
[[nodiscard]] PortPath bfs_oracle_path(const PortGraph& g, int src, int dst);

// Longest shortest-path distance over all ordered node pairs.
[[nodiscard]] int diameter(const PortGraph& g);

// Resolves the node reached by following `path.hops` from `path.start`.
// Throws if a hop names an unwired port or the in-port does not match.
[[nodiscard]] int walk_path(const PortGraph& g, const PortPath& path);

// True when the two graphs are indistinguishable to a port-aware traversal
// from their roots: there is a bijection of reachable structure that fixes
// the roots and preserves every (out_port, in_port) wire. Node numbering and
// the nominal delta value are ignored.
[[nodiscard]] bool rooted_port_isomorphic(const PortGraph& a, const PortGraph& b);

// --- generators ------------------------------------------------------------

// Random strongly connected network: a Hamiltonian cycle over a seeded
// shuffle guarantees strong connectivity, then extra wires are sprinkled in
// until port capacity or an edge target is met. Deterministic in (n, delta,
// seed) across platforms.
[[nodiscard]] PortGraph random_strongly_connected(int n, int delta,
                                                  std::uint64_t seed);

// Directed n-cycle, every port 1. Root is node 0.
[[nodiscard]] PortGraph directed_cycle(int n);

// The tree-with-leaf-loop family used for distinctness experiments: a full
// binary tree of the given depth wired bidirectionally, plus a directed cycle
// visiting the leaves in `leaf_order` (a permutation of 0..2^depth-1). Root
// of the network is the tree root. delta is 3.
[[nodiscard]] PortGraph tree_loop_family(int depth,
                                         const std::vector<int>& leaf_order);

// --- serialization ---------------------------------------------------------

// Canonical JSON form; edges sorted by (src, out_port). Round-trips exactly.
[[nodiscard]] std::string to_json(const PortGraph& g);
[[nodiscard]] PortGraph graph_from_json(const std::string& text);

// Graphviz rendering with "o<out>/i<in>" edge labels.
[[nodiscard]] std::string to_dot(const PortGraph& g);

}  // namespace snakenet
