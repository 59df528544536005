#include "snakenet/portgraph.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "snakenet/constructs.hpp"

namespace snakenet {

namespace {

// Seed-stable uniform integer in [0, bound): std::uniform_int_distribution is
// implementation-defined, so generator output would not be reproducible
// across standard libraries.
std::uint64_t next_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

template <typename T>
void seeded_shuffle(std::vector<T>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i)
    std::swap(v[i - 1], v[next_below(rng, i)]);
}

}  // namespace

PortGraph PortGraph::from_edges(int nodes, int delta, int root,
                                std::vector<Edge> edges) {
  if (nodes < 1) throw std::invalid_argument("graph needs at least one node");
  if (delta < 2 || delta > kMaxDelta)
    throw std::invalid_argument("delta must be in 2.." +
                                std::to_string(kMaxDelta));
  if (root < 0 || root >= nodes)
    throw std::invalid_argument("root index out of range");
  for (const Edge& e : edges) {
    if (e.src < 0 || e.src >= nodes || e.dst < 0 || e.dst >= nodes)
      throw std::invalid_argument("edge endpoint out of range");
    if (e.out_port < 1 || e.out_port > delta || e.in_port < 1 ||
        e.in_port > delta)
      throw std::invalid_argument("port outside 1..delta");
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.src, a.out_port, a.dst, a.in_port) <
           std::tie(b.src, b.out_port, b.dst, b.in_port);
  });

  PortGraph g;
  g.nodes_ = nodes;
  g.delta_ = delta;
  g.root_ = root;
  g.edges_ = std::move(edges);
  g.out_.assign(static_cast<size_t>(nodes) * delta, -1);
  g.in_.assign(static_cast<size_t>(nodes) * delta, -1);
  for (int i = 0; i < g.edge_count(); ++i) {
    const Edge& e = g.edges_[static_cast<size_t>(i)];
    int& out_slot = g.out_[static_cast<size_t>(e.src) * delta + e.out_port - 1];
    int& in_slot = g.in_[static_cast<size_t>(e.dst) * delta + e.in_port - 1];
    // First writer wins; validate() reports the collision.
    if (out_slot == -1) out_slot = i;
    if (in_slot == -1) in_slot = i;
  }
  return g;
}

std::optional<int> PortGraph::edge_out(int node, int out_port) const {
  if (node < 0 || node >= nodes_ || out_port < 1 || out_port > delta_)
    throw std::invalid_argument("edge_out: bad node or port");
  int idx = out_[static_cast<size_t>(node) * delta_ + out_port - 1];
  if (idx < 0) return std::nullopt;
  return idx;
}

std::optional<int> PortGraph::edge_in(int node, int in_port) const {
  if (node < 0 || node >= nodes_ || in_port < 1 || in_port > delta_)
    throw std::invalid_argument("edge_in: bad node or port");
  int idx = in_[static_cast<size_t>(node) * delta_ + in_port - 1];
  if (idx < 0) return std::nullopt;
  return idx;
}

std::vector<int> PortGraph::out_ports(int node) const {
  std::vector<int> ports;
  for (int p = 1; p <= delta_; ++p)
    if (edge_out(node, p)) ports.push_back(p);
  return ports;
}

std::vector<int> PortGraph::in_ports(int node) const {
  std::vector<int> ports;
  for (int p = 1; p <= delta_; ++p)
    if (edge_in(node, p)) ports.push_back(p);
  return ports;
}

ValidationReport PortGraph::validate() const {
  ValidationReport r;
  auto complain = [&r](std::string msg) { r.violations.push_back(std::move(msg)); };

  if (nodes_ < 2) complain("network needs at least two processors");

  std::map<std::pair<int, int>, int> out_seen, in_seen;
  for (const Edge& e : edges_) {
    if (e.src == e.dst)
      complain("self loop at node " + std::to_string(e.src));
    if (++out_seen[{e.src, e.out_port}] == 2)
      complain("out-port " + std::to_string(int(e.out_port)) + " of node " +
               std::to_string(e.src) + " wired twice");
    if (++in_seen[{e.dst, e.in_port}] == 2)
      complain("in-port " + std::to_string(int(e.in_port)) + " of node " +
               std::to_string(e.dst) + " wired twice");
  }

  std::vector<int> out_deg(static_cast<size_t>(nodes_), 0),
      in_deg(static_cast<size_t>(nodes_), 0);
  for (const Edge& e : edges_) {
    ++out_deg[static_cast<size_t>(e.src)];
    ++in_deg[static_cast<size_t>(e.dst)];
  }
  for (int v = 0; v < nodes_; ++v) {
    if (out_deg[static_cast<size_t>(v)] == 0)
      complain("node " + std::to_string(v) + " has no outgoing wire");
    if (in_deg[static_cast<size_t>(v)] == 0)
      complain("node " + std::to_string(v) + " has no incoming wire");
  }

  // Strong connectivity: forward and backward reachability from node 0.
  auto reach = [this](bool forward) {
    std::vector<char> seen(static_cast<size_t>(nodes_), 0);
    std::deque<int> q{0};
    seen[0] = 1;
    int count = 1;
    while (!q.empty()) {
      int v = q.front();
      q.pop_front();
      for (const Edge& e : edges_) {
        int from = forward ? e.src : e.dst;
        int to = forward ? e.dst : e.src;
        if (from == v && !seen[static_cast<size_t>(to)]) {
          seen[static_cast<size_t>(to)] = 1;
          ++count;
          q.push_back(to);
        }
      }
    }
    return count;
  };
  if (nodes_ >= 1) {
    if (reach(true) != nodes_) complain("not strongly connected (forward)");
    if (reach(false) != nodes_) complain("not strongly connected (backward)");
  }
  return r;
}

PortPath bfs_oracle_path(const PortGraph& g, int src, int dst) {
  if (src < 0 || src >= g.nodes() || dst < 0 || dst >= g.nodes())
    throw std::invalid_argument("bfs_oracle_path: node out of range");
  if (src == dst) return PortPath{src, {}};

  // parent_edge[v]: among wires from the previous BFS layer into v, the one
  // with the lowest in-port at v.
  std::vector<int> dist(static_cast<size_t>(g.nodes()), -1);
  std::vector<int> parent_edge(static_cast<size_t>(g.nodes()), -1);
  dist[static_cast<size_t>(src)] = 0;
  std::vector<int> layer{src};
  while (!layer.empty() && dist[static_cast<size_t>(dst)] < 0) {
    std::vector<int> next;
    for (int v : layer) {
      for (int p : g.out_ports(v)) {
        const Edge& e = g.edge(*g.edge_out(v, p));
        int w = e.dst;
        if (dist[static_cast<size_t>(w)] >= 0 &&
            dist[static_cast<size_t>(w)] <= dist[static_cast<size_t>(v)])
          continue;  // already settled in an earlier or this layer's sources
        if (dist[static_cast<size_t>(w)] < 0) {
          dist[static_cast<size_t>(w)] = dist[static_cast<size_t>(v)] + 1;
          parent_edge[static_cast<size_t>(w)] = *g.edge_out(v, p);
          next.push_back(w);
        } else {
          // Same new layer: keep the wire with the lowest in-port.
          const Edge& cur = g.edge(parent_edge[static_cast<size_t>(w)]);
          if (e.in_port < cur.in_port)
            parent_edge[static_cast<size_t>(w)] = *g.edge_out(v, p);
        }
      }
    }
    layer = std::move(next);
  }
  if (dist[static_cast<size_t>(dst)] < 0)
    throw std::invalid_argument("bfs_oracle_path: destination unreachable");

  std::vector<std::pair<std::uint8_t, std::uint8_t>> rev;
  for (int v = dst; v != src;) {
    const Edge& e = g.edge(parent_edge[static_cast<size_t>(v)]);
    rev.emplace_back(e.out_port, e.in_port);
    v = e.src;
  }
  std::reverse(rev.begin(), rev.end());
  return PortPath{src, std::move(rev)};
}

int diameter(const PortGraph& g) {
  int best = 0;
  for (int s = 0; s < g.nodes(); ++s) {
    std::vector<int> dist(static_cast<size_t>(g.nodes()), -1);
    dist[static_cast<size_t>(s)] = 0;
    std::deque<int> q{s};
    while (!q.empty()) {
      int v = q.front();
      q.pop_front();
      for (int p : g.out_ports(v)) {
        int w = g.edge(*g.edge_out(v, p)).dst;
        if (dist[static_cast<size_t>(w)] < 0) {
          dist[static_cast<size_t>(w)] = dist[static_cast<size_t>(v)] + 1;
          q.push_back(w);
        }
      }
    }
    for (int v = 0; v < g.nodes(); ++v) {
      if (dist[static_cast<size_t>(v)] < 0)
        throw std::invalid_argument("diameter: graph not strongly connected");
      best = std::max(best, dist[static_cast<size_t>(v)]);
    }
  }
  return best;
}

int walk_path(const PortGraph& g, const PortPath& path) {
  int v = path.start;
  for (auto [op, ip] : path.hops) {
    auto idx = g.edge_out(v, op);
    if (!idx) throw std::invalid_argument("walk_path: out-port not wired");
    const Edge& e = g.edge(*idx);
    if (e.in_port != ip)
      throw std::invalid_argument("walk_path: in-port mismatch");
    v = e.dst;
  }
  return v;
}

bool rooted_port_isomorphic(const PortGraph& a, const PortGraph& b) {
  if (a.nodes() != b.nodes() || a.edge_count() != b.edge_count()) return false;
  // Parallel traversal from the roots. Port-determinism makes the candidate
  // map unique; any conflict refutes.
  std::vector<int> a_to_b(static_cast<size_t>(a.nodes()), -1);
  std::vector<int> b_to_a(static_cast<size_t>(b.nodes()), -1);
  auto bind = [&](int va, int vb) {
    if (a_to_b[static_cast<size_t>(va)] == -1 &&
        b_to_a[static_cast<size_t>(vb)] == -1) {
      a_to_b[static_cast<size_t>(va)] = vb;
      b_to_a[static_cast<size_t>(vb)] = va;
      return true;
    }
    return a_to_b[static_cast<size_t>(va)] == vb &&
           b_to_a[static_cast<size_t>(vb)] == va;
  };
  if (!bind(a.root(), b.root())) return false;
  std::deque<int> q{a.root()};
  std::vector<char> queued(static_cast<size_t>(a.nodes()), 0);
  queued[static_cast<size_t>(a.root())] = 1;
  int max_port = std::max(a.delta(), b.delta());
  while (!q.empty()) {
    int va = q.front();
    q.pop_front();
    int vb = a_to_b[static_cast<size_t>(va)];
    for (int p = 1; p <= max_port; ++p) {
      auto ea = p <= a.delta() ? a.edge_out(va, p) : std::nullopt;
      auto eb = p <= b.delta() ? b.edge_out(vb, p) : std::nullopt;
      if (ea.has_value() != eb.has_value()) return false;
      if (!ea) continue;
      const Edge& xa = a.edge(*ea);
      const Edge& xb = b.edge(*eb);
      if (xa.in_port != xb.in_port) return false;
      if (!bind(xa.dst, xb.dst)) return false;
      if (!queued[static_cast<size_t>(xa.dst)]) {
        queued[static_cast<size_t>(xa.dst)] = 1;
        q.push_back(xa.dst);
      }
    }
  }
  // Strong connectivity of valid inputs makes the traversal total, but an
  // unvalidated graph may have unreached nodes; those must pair off too.
  for (int v = 0; v < a.nodes(); ++v)
    if ((a_to_b[static_cast<size_t>(v)] == -1) !=
        (b_to_a[static_cast<size_t>(v)] == -1))
      return false;
  int unreached_a = static_cast<int>(std::count(a_to_b.begin(), a_to_b.end(), -1));
  int unreached_b = static_cast<int>(std::count(b_to_a.begin(), b_to_a.end(), -1));
  if (unreached_a != unreached_b) return false;
  if (unreached_a > 0) return false;  // traversal could not certify them
  return true;
}

PortGraph random_strongly_connected(int n, int delta, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("need at least two nodes");
  if (delta < 2 || delta > kMaxDelta)
    throw std::invalid_argument("delta out of range");
  std::mt19937_64 rng(seed);

  std::vector<int> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  seeded_shuffle(order, rng);

  // Backbone cycle guarantees strong connectivity. Ports are granted in
  // construction order.
  std::vector<int> next_out(static_cast<size_t>(n), 1),
      next_in(static_cast<size_t>(n), 1);
  std::vector<Edge> edges;
  auto try_wire = [&](int u, int v) {
    if (u == v) return false;
    if (next_out[static_cast<size_t>(u)] > delta) return false;
    if (next_in[static_cast<size_t>(v)] > delta) return false;
    edges.push_back(Edge{u, static_cast<std::uint8_t>(next_out[static_cast<size_t>(u)]++),
                         v, static_cast<std::uint8_t>(next_in[static_cast<size_t>(v)]++)});
    return true;
  };
  for (int i = 0; i < n; ++i)
    try_wire(order[static_cast<size_t>(i)], order[static_cast<size_t>((i + 1) % n)]);

  // Sprinkle extras: aim for about half the remaining port capacity.
  const int extra_target = static_cast<int>(next_below(rng, static_cast<std::uint64_t>(n * (delta - 1)) + 1));
  int placed = 0;
  for (int attempts = 0; attempts < 20 * n * delta && placed < extra_target;
       ++attempts) {
    int u = static_cast<int>(next_below(rng, static_cast<std::uint64_t>(n)));
    int v = static_cast<int>(next_below(rng, static_cast<std::uint64_t>(n)));
    // Keep the multigraph but avoid exact duplicate wires between the same
    // pair only when ports run out naturally; duplicates on distinct ports
    // are legitimate parallel edges.
    if (try_wire(u, v)) ++placed;
  }
  return PortGraph::from_edges(n, delta, order[0], std::move(edges));
}

PortGraph directed_cycle(int n) {
  if (n < 2) throw std::invalid_argument("cycle needs at least two nodes");
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i)
    edges.push_back(Edge{i, 1, (i + 1) % n, 1});
  return PortGraph::from_edges(n, 2, 0, std::move(edges));
}

PortGraph tree_loop_family(int depth, const std::vector<int>& leaf_order) {
  if (depth < 1) throw std::invalid_argument("depth must be >= 1");
  const int leaves = 1 << depth;
  if (static_cast<int>(leaf_order.size()) != leaves)
    throw std::invalid_argument("leaf_order must permute 0..2^depth-1");
  {
    std::vector<char> seen(static_cast<size_t>(leaves), 0);
    for (int x : leaf_order) {
      if (x < 0 || x >= leaves || seen[static_cast<size_t>(x)])
        throw std::invalid_argument("leaf_order must permute 0..2^depth-1");
      seen[static_cast<size_t>(x)] = 1;
    }
  }

  // Heap numbering: node 0 is the tree root, children of v are 2v+1, 2v+2.
  // Internal nodes use out/in ports 1 (left child), 2 (right child), 3
  // (parent); leaves use port 3 for the parent and ports 1/2 for the loop.
  const int n = 2 * leaves - 1;
  const int first_leaf = leaves - 1;
  std::vector<Edge> edges;
  for (int v = 0; v < first_leaf; ++v) {
    for (int side = 0; side < 2; ++side) {
      int c = 2 * v + 1 + side;
      auto child_port = static_cast<std::uint8_t>(1 + side);
      std::uint8_t parent_port = 3;
      edges.push_back(Edge{v, child_port, c, parent_port});  // down
      edges.push_back(Edge{c, parent_port, v, child_port});  // up
    }
  }
  for (int i = 0; i < leaves; ++i) {
    int u = first_leaf + leaf_order[static_cast<size_t>(i)];
    int v = first_leaf + leaf_order[static_cast<size_t>((i + 1) % leaves)];
    edges.push_back(Edge{u, 1, v, 2});
  }
  return PortGraph::from_edges(n, 3, 0, std::move(edges));
}

std::string to_json(const PortGraph& g) {
  nlohmann::ordered_json j;
  j["delta"] = g.delta();
  j["root"] = g.root();
  j["nodes"] = g.nodes();
  auto arr = nlohmann::ordered_json::array();
  for (const Edge& e : g.edges())
    arr.push_back({e.src, e.out_port, e.dst, e.in_port});
  j["edges"] = std::move(arr);
  return j.dump(2) + "\n";
}

PortGraph graph_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  std::vector<Edge> edges;
  for (const auto& row : j.at("edges")) {
    if (!row.is_array() || row.size() != 4)
      throw std::invalid_argument("edge rows must be [src, out, dst, in]");
    edges.push_back(Edge{row[0].get<int>(),
                         static_cast<std::uint8_t>(row[1].get<int>()),
                         row[2].get<int>(),
                         static_cast<std::uint8_t>(row[3].get<int>())});
  }
  return PortGraph::from_edges(j.at("nodes").get<int>(),
                               j.at("delta").get<int>(),
                               j.at("root").get<int>(), std::move(edges));
}

std::string to_dot(const PortGraph& g) {
  std::ostringstream os;
  os << "digraph network {\n";
  os << "  rankdir=LR;\n";
  for (int v = 0; v < g.nodes(); ++v) {
    os << "  n" << v << " [label=\"" << v;
    if (v == g.root()) os << " (root)";
    os << "\"];\n";
  }
  for (const Edge& e : g.edges())
    os << "  n" << e.src << " -> n" << e.dst << " [label=\"o"
       << int(e.out_port) << "/i" << int(e.in_port) << "\"];\n";
  os << "}\n";
  return os.str();
}

}  // namespace snakenet
