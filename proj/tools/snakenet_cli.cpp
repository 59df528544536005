// Command-line front end: graph generation, full traversal runs with
// reconstruction verdicts, isolated call debugging, and timing benchmarks.
// Every verdict here is a thin shell over the library.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "snakenet/engine.hpp"
#include "snakenet/mapper.hpp"
#include "snakenet/portgraph.hpp"
#include "snakenet/protocol.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitMismatch = 1;
constexpr int kExitFault = 2;
constexpr int kExitUsage = 64;

using namespace snakenet;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write " + path);
  out << text;
}

PortGraph load_graph(const std::string& path) {
  return graph_from_json(read_file(path));
}

void emit_text(const std::optional<std::string>& path, const std::string& text) {
  if (path)
    write_file(*path, text);
  else
    std::cout << text;
}

// Derails one forward edge report so the reconstruction no longer matches:
// the negative control for the verdict path.
void corrupt_transcript(Transcript& t) {
  for (TranscriptEvent& ev : t) {
    if ((ev.kind == TranscriptKind::RootEdge ||
         ev.kind == TranscriptKind::LoopToken) &&
        ev.ch.cls == CharClass::FORWARD) {
      ev.ch.in_port = static_cast<std::uint8_t>((ev.ch.in_port % kMaxDelta) + 1);
      return;
    }
  }
}

struct GenerateArgs {
  std::string family;
  int n = 8;
  int delta = 3;
  std::uint64_t seed = 1;
  int depth = 2;
  std::vector<int> perm;  // 1-based leaf positions
  std::optional<std::string> out;
};

PortGraph build_family_graph(const GenerateArgs& a) {
  if (a.family == "random") {
    if (a.n < 2) throw std::invalid_argument("random family requires --n >= 2");
    return random_strongly_connected(a.n, a.delta, a.seed);
  }
  if (a.family == "cycle") {
    if (a.n < 2) throw std::invalid_argument("cycle family requires --n >= 2");
    return directed_cycle(a.n);
  }
  if (a.family == "treeloop") {
    if (a.depth < 1) throw std::invalid_argument("treeloop requires --depth >= 1");
    const int leaves = 1 << a.depth;
    std::vector<int> order(static_cast<size_t>(leaves));
    std::iota(order.begin(), order.end(), 0);
    if (!a.perm.empty()) {
      if (static_cast<int>(a.perm.size()) != leaves)
        throw std::invalid_argument("--perm must list all " +
                                    std::to_string(leaves) + " leaves");
      std::vector<bool> seen(static_cast<size_t>(leaves), false);
      for (int i = 0; i < leaves; ++i) {
        const int p = a.perm[static_cast<size_t>(i)];
        if (p < 1 || p > leaves || seen[static_cast<size_t>(p - 1)])
          throw std::invalid_argument("--perm must be a permutation of 1.." +
                                      std::to_string(leaves));
        seen[static_cast<size_t>(p - 1)] = true;
        order[static_cast<size_t>(i)] = p - 1;
      }
    }
    return tree_loop_family(a.depth, order);
  }
  throw std::invalid_argument("unknown family " + a.family);
}

int cmd_generate(const GenerateArgs& a) {
  const PortGraph g = build_family_graph(a);
  std::cerr << "n=" << g.nodes() << " delta=" << g.delta()
            << " diameter=" << diameter(g) << "\n";
  emit_text(a.out, to_json(g));
  return kExitOk;
}

struct RunArgs {
  std::string graph_path;
  std::int64_t budget_mult = 0;  // 0: library default
  std::optional<std::string> transcript_out;
  std::optional<std::string> map_out;
  bool corrupt = false;
};

int cmd_run(const RunArgs& a) {
  const PortGraph g = load_graph(a.graph_path);
  const int dia = diameter(g);
  const std::int64_t mult =
      a.budget_mult > 0 ? a.budget_mult : tick_budget_multiplier();
  const std::int64_t budget = mult * g.nodes() * std::max(1, dia);

  GtdResult res;
  try {
    res = run_gtd(g, budget);
  } catch (const TickBudgetExceeded& e) {
    std::cerr << "BUDGET EXCEEDED: " << e.what() << " (n=" << g.nodes()
              << " diameter=" << dia << " budget=" << budget << ")\n";
    return kExitFault;
  } catch (const SimulationFault& e) {
    std::cerr << "PROTOCOL FAULT: " << e.what() << "\n";
    return kExitFault;
  }

  if (a.corrupt) corrupt_transcript(res.transcript);
  if (a.transcript_out)
    write_file(*a.transcript_out, transcript_to_json(res.transcript));

  bool iso = false;
  try {
    const PortGraph rebuilt = map_transcript(res.transcript);
    if (a.map_out) write_file(*a.map_out, to_json(rebuilt));
    iso = rooted_port_isomorphic(g, rebuilt);
  } catch (const MapperError& e) {
    std::cerr << "reconstruction failed: " << e.what() << "\n";
    iso = false;
  }

  std::cout << "ticks=" << res.ticks << " n=" << g.nodes()
            << " diameter=" << dia << "\n";
  std::cout << (iso ? "VERDICT=ISOMORPHIC" : "VERDICT=MISMATCH") << "\n";
  return iso ? kExitOk : kExitMismatch;
}

struct RcaArgs {
  std::string graph_path;
  int initiator = 1;
};

int cmd_rca(const RcaArgs& a) {
  const PortGraph g = load_graph(a.graph_path);
  if (a.initiator == g.root())
    throw std::invalid_argument("--initiator must not be the root");
  const RcaTrace tr = run_rca_isolated(g, a.initiator,
                                       make_token(CharClass::FORWARD),
                                       default_tick_budget(g));
  auto path_text = [](const std::vector<std::pair<std::uint8_t, std::uint8_t>>& p) {
    std::string s = "[";
    for (size_t i = 0; i < p.size(); ++i) {
      if (i) s += " ";
      s += "(" + std::to_string(p[i].first) + "," + std::to_string(p[i].second) + ")";
    }
    return s + "]";
  };
  std::cout << "ticks=" << tr.ticks << " kill=" << tr.kill_tick
            << " absorb=" << tr.token_absorb_tick
            << " eradicated=" << (tr.eradicated_on_time ? 1 : 0)
            << " pristine=" << (tr.pristine_at_completion ? 1 : 0) << "\n";
  std::cout << "in_path=" << path_text(tr.in_path)
            << " out_path=" << path_text(tr.out_path) << "\n";
  std::cout << transcript_to_text(tr.transcript);
  return kExitOk;
}

struct BcaArgs {
  std::string graph_path;
  std::vector<int> edge;  // src,out_port,dst,in_port
};

int cmd_bca(const BcaArgs& a) {
  const PortGraph g = load_graph(a.graph_path);
  if (a.edge.size() != 4)
    throw std::invalid_argument("--edge takes src,out_port,dst,in_port");
  const Edge e{a.edge[0], static_cast<std::uint8_t>(a.edge[1]), a.edge[2],
               static_cast<std::uint8_t>(a.edge[3])};
  const BcaTrace tr = run_bca_isolated(g, e, default_tick_budget(g));
  std::cout << "ticks=" << tr.ticks << " delivered_tick=" << tr.delivered_tick
            << " delivered_node=" << tr.delivered_node
            << " marks=" << tr.marks.size()
            << " pristine=" << (tr.pristine_at_completion ? 1 : 0) << "\n";
  return kExitOk;
}

struct BenchArgs {
  std::string family = "cycle";
  std::vector<int> sizes;
  std::vector<int> depths;
  int delta = 3;
  std::uint64_t seed = 1;
  std::optional<std::string> out;
};

int cmd_bench(const BenchArgs& a) {
  std::vector<PortGraph> graphs;
  if (a.family == "cycle") {
    if (a.sizes.empty()) throw std::invalid_argument("--sizes required");
    for (int n : a.sizes) graphs.push_back(directed_cycle(n));
  } else if (a.family == "random") {
    if (a.sizes.empty()) throw std::invalid_argument("--sizes required");
    for (size_t i = 0; i < a.sizes.size(); ++i)
      graphs.push_back(random_strongly_connected(
          a.sizes[i], a.delta, a.seed + static_cast<std::uint64_t>(i)));
  } else if (a.family == "treeloop") {
    if (a.depths.empty()) throw std::invalid_argument("--depths required");
    for (int d : a.depths) {
      std::vector<int> order(static_cast<size_t>(1) << d);
      std::iota(order.begin(), order.end(), 0);
      graphs.push_back(tree_loop_family(d, order));
    }
  } else {
    throw std::invalid_argument("unknown family " + a.family);
  }

  std::string csv = "n,d,edges,ticks,ticks_per_nd\n";
  for (const PortGraph& g : graphs) {
    try {
      const int dia = std::max(1, diameter(g));
      const GtdResult res = run_gtd(g);
      const PortGraph rebuilt = map_transcript(res.transcript);
      if (!rooted_port_isomorphic(g, rebuilt))
        throw std::runtime_error("reconstruction mismatch at n=" +
                                 std::to_string(g.nodes()));
      char row[128];
      std::snprintf(row, sizeof row, "%d,%d,%d,%lld,%.3f\n", g.nodes(), dia,
                    g.edge_count(), static_cast<long long>(res.ticks),
                    static_cast<double>(res.ticks) / (g.nodes() * dia));
      csv += row;
    } catch (const std::exception& e) {
      csv += std::string("# ABORTED: ") + e.what() + "\n";
      emit_text(a.out, csv);
      return kExitFault;
    }
  }
  emit_text(a.out, csv);
  return kExitOk;
}

int cmd_export_dot(const std::string& graph_path,
                   const std::optional<std::string>& out) {
  const PortGraph g = load_graph(graph_path);
  emit_text(out, to_dot(g));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"synchronous anonymous-network topology discovery simulator"};
  app.require_subcommand(1);

  GenerateArgs gen;
  std::string gen_out, run_transcript_out, run_map_out, bench_out, dot_out;
  auto* c_gen = app.add_subcommand("generate", "emit a family graph as JSON");
  c_gen->add_option("--family", gen.family, "random | cycle | treeloop")
      ->required();
  c_gen->add_option("--n", gen.n, "node count");
  c_gen->add_option("--delta", gen.delta, "port capacity");
  c_gen->add_option("--seed", gen.seed, "generator seed");
  c_gen->add_option("--depth", gen.depth, "treeloop depth");
  c_gen->add_option("--perm", gen.perm, "treeloop leaf order (1-based)")
      ->delimiter(',');
  c_gen->add_option("--out", gen_out, "output path (default stdout)");

  RunArgs run;
  auto* c_run = app.add_subcommand("run", "full traversal + reconstruction verdict");
  c_run->add_option("--graph", run.graph_path, "graph JSON path")->required();
  c_run->add_option("--budget-mult", run.budget_mult,
                    "tick budget multiplier override");
  c_run->add_option("--transcript-out", run_transcript_out,
                    "write the transcript JSON here");
  c_run->add_option("--map-out", run_map_out,
                    "write the reconstructed graph JSON here");
  c_run->add_flag("--corrupt", run.corrupt)->group("");  // negative control

  RcaArgs rca;
  auto* c_rca = app.add_subcommand("rca", "isolated call debug run");
  c_rca->add_option("--graph", rca.graph_path, "graph JSON path")->required();
  c_rca->add_option("--initiator", rca.initiator, "initiating node")->required();

  BcaArgs bca;
  auto* c_bca = app.add_subcommand("bca", "isolated backwards delivery debug run");
  c_bca->add_option("--graph", bca.graph_path, "graph JSON path")->required();
  c_bca->add_option("--edge", bca.edge, "src,out_port,dst,in_port")
      ->delimiter(',')
      ->required();

  BenchArgs bench;
  auto* c_bench = app.add_subcommand("bench", "timing sweep CSV");
  c_bench->add_option("--family", bench.family, "cycle | random | treeloop");
  c_bench->add_option("--sizes", bench.sizes, "node counts")->delimiter(',');
  c_bench->add_option("--depths", bench.depths, "treeloop depths")->delimiter(',');
  c_bench->add_option("--delta", bench.delta, "port capacity (random)");
  c_bench->add_option("--seed", bench.seed, "seed base (random)");
  c_bench->add_option("--out", bench_out, "output path (default stdout)");

  std::string dot_graph;
  auto* c_dot = app.add_subcommand("export-dot", "Graphviz rendering");
  c_dot->add_option("--graph", dot_graph, "graph JSON path")->required();
  c_dot->add_option("--out", dot_out, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return kExitUsage;
  }

  auto opt = [](const std::string& s) {
    return s.empty() ? std::optional<std::string>{} : std::optional<std::string>{s};
  };

  try {
    if (c_gen->parsed()) {
      gen.out = opt(gen_out);
      return cmd_generate(gen);
    }
    if (c_run->parsed()) {
      run.transcript_out = opt(run_transcript_out);
      run.map_out = opt(run_map_out);
      return cmd_run(run);
    }
    if (c_rca->parsed()) return cmd_rca(rca);
    if (c_bca->parsed()) return cmd_bca(bca);
    if (c_bench->parsed()) {
      bench.out = opt(bench_out);
      return cmd_bench(bench);
    }
    if (c_dot->parsed()) return cmd_export_dot(dot_graph, opt(dot_out));
  } catch (const TickBudgetExceeded& e) {
    std::cerr << "BUDGET EXCEEDED: " << e.what() << "\n";
    return kExitFault;
  } catch (const SimulationFault& e) {
    std::cerr << "PROTOCOL FAULT: " << e.what() << "\n";
    return kExitFault;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFault;
  }
  return kExitUsage;
}
