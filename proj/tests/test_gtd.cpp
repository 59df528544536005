// Full traversal runs: exact cycle goldens, event sequences against the
// graph-side replay oracle, and reconstruction round trips.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numeric>
#include <string>
#include <vector>

#include "snakenet/engine.hpp"
#include "snakenet/mapper.hpp"
#include "snakenet/portgraph.hpp"
#include "snakenet/protocol.hpp"
#include "test_util.hpp"

using namespace snakenet;
using testutil::TraversalReplay;
using testutil::event_texts;

TEST_CASE("two-cycle traversal, tick by tick") {
  const PortGraph g = directed_cycle(2);
  const GtdResult res = run_gtd(g);
  CHECK(res.ticks == 79);
  CHECK(transcript_to_text(res.transcript) ==
        "tick=0 event=Start\n"
        "tick=4 event=PathChar:IGH(1,1)\n"
        "tick=5 event=PathChar:IGT\n"
        "tick=11 event=PathChar:IDH(1,1)\n"
        "tick=12 event=PathChar:IDT\n"
        "tick=16 event=Loop:FWD(1,1)\n"
        "tick=24 event=RootEdge:FWD(1,1)\n"
        "tick=43 event=PathChar:IGH(1,1)\n"
        "tick=44 event=PathChar:IGT\n"
        "tick=50 event=PathChar:IDH(1,1)\n"
        "tick=51 event=PathChar:IDT\n"
        "tick=55 event=Loop:BACK\n"
        "tick=78 event=RootEdge:BACK\n"
        "tick=79 event=Terminated\n");
}

TEST_CASE("replay oracle matches the pinned two-cycle sequence") {
  // Validates the oracle itself against the hand-derived golden.
  const std::vector<std::string> expect{
      "Start",
      "PathChar:IGH(1,1)", "PathChar:IGT",
      "PathChar:IDH(1,1)", "PathChar:IDT",
      "Loop:FWD(1,1)",
      "RootEdge:FWD(1,1)",
      "PathChar:IGH(1,1)", "PathChar:IGT",
      "PathChar:IDH(1,1)", "PathChar:IDT",
      "Loop:BACK",
      "RootEdge:BACK",
      "Terminated"};
  CHECK(TraversalReplay(directed_cycle(2)).run() == expect);
}

TEST_CASE("three-cycle traversal event sequence") {
  const PortGraph g = directed_cycle(3);
  const GtdResult res = run_gtd(g);
  const std::vector<std::string> expect{
      "Start",
      // forward to node 1 (its loop: 2 hops in, 1 hop out)
      "PathChar:IGH(1,1)", "PathChar:IG(1,1)", "PathChar:IGT",
      "PathChar:IDH(1,1)", "PathChar:IDT",
      "Loop:FWD(1,1)",
      // forward to node 2 (1 hop in, 2 hops out)
      "PathChar:IGH(1,1)", "PathChar:IGT",
      "PathChar:IDH(1,1)", "PathChar:ID(1,1)", "PathChar:IDT",
      "Loop:FWD(1,1)",
      // node 2 probes the root
      "RootEdge:FWD(1,1)",
      // token returns to node 2
      "PathChar:IGH(1,1)", "PathChar:IGT",
      "PathChar:IDH(1,1)", "PathChar:ID(1,1)", "PathChar:IDT",
      "Loop:BACK",
      // node 2 exhausted, back to node 1
      "PathChar:IGH(1,1)", "PathChar:IG(1,1)", "PathChar:IGT",
      "PathChar:IDH(1,1)", "PathChar:IDT",
      "Loop:BACK",
      // node 1 exhausted, back to the root
      "RootEdge:BACK",
      "Terminated"};
  CHECK(event_texts(res.transcript) == expect);
  CHECK(TraversalReplay(g).run() == expect);
}

TEST_CASE("traversal matches the replay oracle across families") {
  std::vector<PortGraph> corpus;
  for (int n : {2, 3, 4, 5, 8}) corpus.push_back(directed_cycle(n));
  for (int depth : {1, 2}) {
    std::vector<int> order(static_cast<size_t>(1) << depth);
    std::iota(order.begin(), order.end(), 0);
    corpus.push_back(tree_loop_family(depth, order));
  }
  for (std::uint64_t seed = 1; seed <= 12; ++seed)
    corpus.push_back(random_strongly_connected(2 + static_cast<int>(seed),
                                               2 + seed % 3, seed * 977));

  for (size_t i = 0; i < corpus.size(); ++i) {
    CAPTURE(i);
    const PortGraph& g = corpus[i];
    const GtdResult res = run_gtd(g);
    CHECK(event_texts(res.transcript) == TraversalReplay(g).run());
  }
}

TEST_CASE("reconstruction is isomorphic across families") {
  std::vector<PortGraph> corpus;
  for (int n : {2, 3, 4, 7}) corpus.push_back(directed_cycle(n));
  {
    std::vector<int> order{1, 0, 3, 2};
    corpus.push_back(tree_loop_family(2, order));
  }
  for (std::uint64_t seed = 50; seed < 62; ++seed)
    corpus.push_back(random_strongly_connected(3 + static_cast<int>(seed % 9),
                                               2 + seed % 3, seed));

  for (size_t i = 0; i < corpus.size(); ++i) {
    CAPTURE(i);
    const PortGraph& g = corpus[i];
    const GtdResult res = run_gtd(g);
    const PortGraph rebuilt = map_transcript(res.transcript);
    CHECK(rebuilt.nodes() == g.nodes());
    CHECK(rebuilt.edge_count() == g.edge_count());
    CHECK(rooted_port_isomorphic(g, rebuilt));
    CHECK(rooted_port_isomorphic(rebuilt, g));
  }
}

TEST_CASE("sparse graphs with long stray-snake paths still terminate") {
  // Both shapes once wedged the run. In the first, leftover flood characters
  // from a finished call outpaced their cleanup down a long fresh path and
  // re-entered the reopened root; in the second, one node lies on both halves
  // of a call loop and must ferry the two dying streams at once.
  struct Shape { int n; int delta; std::uint64_t seed; };
  const Shape shapes[] = {
      {13, 2, 13341321406597963395ULL},
      {31, 3, 15569057424048895179ULL},
  };
  for (const Shape& s : shapes) {
    CAPTURE(s.seed);
    const PortGraph g = random_strongly_connected(s.n, s.delta, s.seed);
    const GtdResult res = run_gtd(g);
    const PortGraph rebuilt = map_transcript(res.transcript);
    CHECK(rooted_port_isomorphic(g, rebuilt));
    CHECK(rooted_port_isomorphic(rebuilt, g));
  }
}
