#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <vector>

#include "snakenet/constructs.hpp"
#include "snakenet/engine.hpp"
#include "snakenet/mapper.hpp"
#include "snakenet/portgraph.hpp"
#include "snakenet/protocol.hpp"

using namespace snakenet;

namespace {

TranscriptEvent ev(TranscriptKind k, Character c = {}) {
  return TranscriptEvent{0, k, c};
}

TranscriptEvent igh(int o, int i) {
  return ev(TranscriptKind::PathChar,
            make_snake(CharClass::IG, CharKind::Head, std::uint8_t(o), std::uint8_t(i)));
}
TranscriptEvent ig(int o, int i) {
  return ev(TranscriptKind::PathChar,
            make_snake(CharClass::IG, CharKind::Body, std::uint8_t(o), std::uint8_t(i)));
}
TranscriptEvent igt() {
  return ev(TranscriptKind::PathChar, make_snake(CharClass::IG, CharKind::Tail, 0, 0));
}
TranscriptEvent idh(int o, int i) {
  return ev(TranscriptKind::PathChar,
            make_snake(CharClass::ID, CharKind::Head, std::uint8_t(o), std::uint8_t(i)));
}
TranscriptEvent id(int o, int i) {
  return ev(TranscriptKind::PathChar,
            make_snake(CharClass::ID, CharKind::Body, std::uint8_t(o), std::uint8_t(i)));
}
TranscriptEvent idt() {
  return ev(TranscriptKind::PathChar, make_snake(CharClass::ID, CharKind::Tail, 0, 0));
}
TranscriptEvent fwd(int o, int i) {
  return ev(TranscriptKind::LoopToken,
            make_token(CharClass::FORWARD, std::uint8_t(o), std::uint8_t(i)));
}
TranscriptEvent back() {
  return ev(TranscriptKind::LoopToken, make_token(CharClass::BACK));
}
TranscriptEvent redge_fwd(int o, int i) {
  return ev(TranscriptKind::RootEdge,
            make_token(CharClass::FORWARD, std::uint8_t(o), std::uint8_t(i)));
}
TranscriptEvent redge_back() {
  return ev(TranscriptKind::RootEdge, make_token(CharClass::BACK));
}
TranscriptEvent start() { return ev(TranscriptKind::Start); }
TranscriptEvent done() { return ev(TranscriptKind::Terminated); }

// The smallest legal transcript: a two-node network with one wire each way.
Transcript minimal_two_node() {
  return {start(),         igh(1, 1), igt(), idh(1, 1), idt(), fwd(1, 1),
          redge_fwd(1, 1), igh(1, 1), igt(), idh(1, 1), idt(), back(),
          redge_back(),    done()};
}

}  // namespace

TEST_CASE("minimal transcript reconstructs the two-cycle") {
  const PortGraph g = map_transcript(minimal_two_node());
  CHECK(g.nodes() == 2);
  CHECK(g.edge_count() == 2);
  CHECK(g.root() == 0);
  CHECK(rooted_port_isomorphic(g, directed_cycle(2)));
}

TEST_CASE("repeat visitors resolve to the same name") {
  // The token walks root -> A -> B, then backtracks through A; A's second
  // report must resolve to the existing name, not mint a new one.
  MapState m;
  m.ingest_event(start());
  m.ingest_event(igh(1, 1));
  m.ingest_event(igt());
  m.ingest_event(idh(1, 1));
  m.ingest_event(idt());
  m.ingest_event(fwd(1, 1));
  CHECK(m.names_assigned() == 2);
  m.ingest_event(igh(2, 1));
  m.ingest_event(ig(1, 1));
  m.ingest_event(igt());
  m.ingest_event(idh(1, 1));
  m.ingest_event(id(1, 2));
  m.ingest_event(idt());
  m.ingest_event(fwd(1, 1));
  CHECK(m.names_assigned() == 3);
  // Backtrack lands on A: same paths as A's first report.
  m.ingest_event(igh(1, 1));
  m.ingest_event(igt());
  m.ingest_event(idh(1, 1));
  m.ingest_event(idt());
  m.ingest_event(back());
  CHECK(m.names_assigned() == 3);
  // And home onto the root.
  m.ingest_event(redge_back());
  m.ingest_event(done());
  CHECK(m.complete());
}

TEST_CASE("distinct paths mint distinct names") {
  MapState m;
  m.ingest_event(start());
  m.ingest_event(igh(1, 1));
  m.ingest_event(igt());
  m.ingest_event(idh(1, 1));
  m.ingest_event(idt());
  m.ingest_event(fwd(1, 1));
  // A two-hop reporter: different key, new name.
  m.ingest_event(igh(2, 1));
  m.ingest_event(ig(1, 1));
  m.ingest_event(igt());
  m.ingest_event(idh(1, 1));
  m.ingest_event(id(1, 2));
  m.ingest_event(idt());
  m.ingest_event(fwd(1, 1));
  CHECK(m.names_assigned() == 3);
}

TEST_CASE("a fresh inward head supersedes a cut-off report") {
  // Cleanup can sever a stream between its head and tail; the reader keeps
  // only the report that finishes. The stale prefix must not leak into the
  // path key or the reconstruction.
  Transcript t = {start(),
                  igh(2, 2),  // severed stream: no tail ever follows
                  ig(2, 2),
                  igh(1, 1),  // the report that completes
                  igt(),      idh(1, 1), idt(), fwd(1, 1), redge_fwd(1, 1),
                  igh(1, 1),  igt(),     idh(1, 1), idt(), back(),
                  redge_back(), done()};
  const PortGraph g = map_transcript(t);
  CHECK(g.nodes() == 2);
  CHECK(rooted_port_isomorphic(g, directed_cycle(2)));
}

TEST_CASE("malformed transcripts are rejected") {
  auto feed = [](const std::vector<TranscriptEvent>& evs) {
    MapState m;
    for (const auto& e : evs) m.ingest_event(e);
  };

  // Events before Start.
  CHECK_THROWS_AS(feed({igh(1, 1)}), MapperError);
  CHECK_THROWS_AS(feed({done()}), MapperError);
  // Second Start.
  CHECK_THROWS_AS(feed({start(), start()}), MapperError);
  // Inward body before its head.
  CHECK_THROWS_AS(feed({start(), ig(1, 1)}), MapperError);
  // Empty inward path.
  CHECK_THROWS_AS(feed({start(), igt()}), MapperError);
  // Outward stream before the inward one finished.
  CHECK_THROWS_AS(feed({start(), idh(1, 1)}), MapperError);
  CHECK_THROWS_AS(feed({start(), igh(1, 1), idh(1, 1)}), MapperError);
  // Loop token before both reports are in.
  CHECK_THROWS_AS(feed({start(), fwd(1, 1)}), MapperError);
  CHECK_THROWS_AS(feed({start(), igh(1, 1), igt(), fwd(1, 1)}), MapperError);
  // Wrong class as a path character.
  CHECK_THROWS_AS(feed({start(), ev(TranscriptKind::PathChar,
                                    make_snake(CharClass::OG, CharKind::Head, 1, 1))}),
                  MapperError);
  // Backtrack by a node that never reported forward.
  CHECK_THROWS_AS(feed({start(), igh(2, 2), igt(), idh(2, 2), idt(), back()}),
                  MapperError);
  // Backtrack below the root.
  CHECK_THROWS_AS(feed({start(), redge_back()}), MapperError);
  // Root edge with a dangling path report.
  CHECK_THROWS_AS(feed({start(), igh(1, 1), redge_fwd(1, 1)}), MapperError);
  // Termination with an open stack.
  CHECK_THROWS_AS(feed({start(), igh(1, 1), igt(), idh(1, 1), idt(), fwd(1, 1), done()}),
                  MapperError);
  // Termination with a dangling report.
  CHECK_THROWS_AS(feed({start(), igh(1, 1), done()}), MapperError);

  // Events after Terminated.
  {
    MapState m;
    for (const auto& e : minimal_two_node()) m.ingest_event(e);
    CHECK(m.complete());
    CHECK_THROWS_AS(m.ingest_event(start()), MapperError);
  }

  // Backtrack to the wrong node: two children of the root, the second one
  // claims the first one's paths on its way back.
  {
    MapState m;
    m.ingest_event(start());
    m.ingest_event(igh(1, 1));
    m.ingest_event(igt());
    m.ingest_event(idh(1, 1));
    m.ingest_event(idt());
    m.ingest_event(fwd(1, 1));  // node A on the stack
    m.ingest_event(igh(2, 2));
    m.ingest_event(igt());
    m.ingest_event(idh(2, 2));
    m.ingest_event(idt());
    m.ingest_event(fwd(2, 2));  // node B on the stack
    // A backtrack is reported by the node the token lands on, so after
    // popping B the reporter must be A. Reporting B's own paths instead is
    // the inconsistency.
    m.ingest_event(igh(2, 2));
    m.ingest_event(igt());
    m.ingest_event(idh(2, 2));
    m.ingest_event(idt());
    CHECK_THROWS_AS(m.ingest_event(back()), MapperError);
  }
}

TEST_CASE("finalize guards") {
  MapState m;
  CHECK_THROWS_AS((void)m.finalize(), MapperError);
  m.ingest_event(start());
  CHECK_THROWS_AS((void)m.finalize(), MapperError);
  CHECK_THROWS_AS((void)map_transcript({start()}), MapperError);
}

TEST_CASE("finalize carries delta = max(2, highest port)") {
  // Ports never exceed 1 in the minimal transcript, yet delta floors at 2.
  const PortGraph g = map_transcript(minimal_two_node());
  CHECK(g.delta() == 2);
}

TEST_CASE("mapper output on real traversals matches the source graph") {
  for (int n : {2, 3, 6}) {
    const PortGraph g = directed_cycle(n);
    const GtdResult r = run_gtd(g);
    const PortGraph rebuilt = map_transcript(r.transcript);
    CHECK(rebuilt.nodes() == n);
    CHECK(rebuilt.edge_count() == n);
    CHECK(rooted_port_isomorphic(g, rebuilt));
    CHECK(rooted_port_isomorphic(rebuilt, g));
  }
}
