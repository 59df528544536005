#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <stdexcept>

#include "snakenet/constructs.hpp"
#include "snakenet/node_state.hpp"

using namespace snakenet;

TEST_CASE("speed classes and dwell times") {
  CHECK(dwell_ticks(SpeedClass::Speed1) == 3);
  CHECK(dwell_ticks(SpeedClass::Speed3) == 1);

  // Snakes and loop tokens crawl; cleanup and traversal tokens sprint.
  for (CharClass c : {CharClass::IG, CharClass::OG, CharClass::ID,
                      CharClass::OD, CharClass::BIG, CharClass::BID,
                      CharClass::FORWARD, CharClass::BACK})
    CHECK(speed_of(c) == SpeedClass::Speed1);
  for (CharClass c : {CharClass::KILL, CharClass::UNMARK, CharClass::DFS})
    CHECK(speed_of(c) == SpeedClass::Speed3);
}

TEST_CASE("class predicates") {
  for (CharClass c : {CharClass::IG, CharClass::OG, CharClass::BIG, CharClass::BOG}) {
    CHECK(is_growing_class(c));
    CHECK(!is_dying_class(c));
    CHECK(is_snake_class(c));
  }
  for (CharClass c : {CharClass::ID, CharClass::OD, CharClass::BID, CharClass::BOD}) {
    CHECK(!is_growing_class(c));
    CHECK(is_dying_class(c));
    CHECK(is_snake_class(c));
  }
  for (CharClass c : {CharClass::FORWARD, CharClass::BACK, CharClass::KILL,
                      CharClass::UNMARK, CharClass::DFS}) {
    CHECK(!is_snake_class(c));
    CHECK(is_loop_token_class(c) == (c == CharClass::FORWARD || c == CharClass::BACK));
  }
}

TEST_CASE("character display forms") {
  CHECK(make_snake(CharClass::IG, CharKind::Head, 2, 3).display() == "IGH(2,3)");
  CHECK(make_snake(CharClass::IG, CharKind::Body, 2, 3).display() == "IG(2,3)");
  CHECK(make_snake(CharClass::IG, CharKind::Tail, 0, 0).display() == "IGT");
  CHECK(make_snake(CharClass::OG, CharKind::Head, 1, 1).display() == "OGH(1,1)");
  CHECK(make_snake(CharClass::ID, CharKind::Head, 4, 1).display() == "IDH(4,1)");
  CHECK(make_snake(CharClass::ID, CharKind::Tail, 0, 0).display() == "IDT");
  CHECK(make_snake(CharClass::OD, CharKind::Body, 1, 2).display() == "OD(1,2)");
  CHECK(make_snake(CharClass::BIG, CharKind::Head, 3, 1).display() == "BIGH(3,1)");
  CHECK(make_snake(CharClass::BID, CharKind::Tail, 0, 0).display() == "BIDT");
  CHECK(make_token(CharClass::FORWARD, 4, 1).display() == "FWD(4,1)");
  CHECK(make_token(CharClass::BACK).display() == "BACK");
  CHECK(make_token(CharClass::KILL).display() == "KILL");
  CHECK(make_token(CharClass::UNMARK).display() == "UNMARK");
  CHECK(make_token(CharClass::DFS, 4, 1).display() == "DFS(4,1)");
}

TEST_CASE("character serialization is four bytes and faithful") {
  const Character c = make_snake(CharClass::OD, CharKind::Body, 5, 7);
  const auto bytes = c.serialize();
  CHECK(bytes.size() == 4);
  CHECK(bytes[0] == static_cast<std::uint8_t>(CharClass::OD));
  CHECK(bytes[1] == static_cast<std::uint8_t>(CharKind::Body));
  CHECK(bytes[2] == 5);
  CHECK(bytes[3] == 7);

  // Distinct characters serialize distinctly.
  CHECK(make_token(CharClass::DFS, 1, 2).serialize() !=
        make_token(CharClass::DFS, 2, 1).serialize());
}

TEST_CASE("constructor preconditions") {
  // Snake constructor rejects token classes and vice versa.
  CHECK_THROWS_AS((void)make_snake(CharClass::KILL, CharKind::Head, 1, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)make_snake(CharClass::DFS, CharKind::Body, 1, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)make_token(CharClass::IG), std::invalid_argument);
  CHECK_THROWS_AS((void)make_token(CharClass::BID), std::invalid_argument);
  // A snake character cannot be of token kind.
  CHECK_THROWS_AS((void)make_snake(CharClass::IG, CharKind::Token, 1, 1),
                  std::invalid_argument);
}

TEST_CASE("rewrite_star resolves the in-port exactly once") {
  const Character fresh = make_snake(CharClass::IG, CharKind::Head, 2, kStarPort);
  const Character fixed = rewrite_star(fresh, 3, 4);
  CHECK(fixed.in_port == 3);
  CHECK(fixed.out_port == 2);
  CHECK(fixed.cls == CharClass::IG);
  CHECK(fixed.kind == CharKind::Head);

  // Already-resolved characters pass through unchanged.
  CHECK(rewrite_star(fixed, 1, 4) == fixed);

  // Port must be in 1..delta.
  CHECK_THROWS_AS((void)rewrite_star(fresh, 0, 4), std::invalid_argument);
  CHECK_THROWS_AS((void)rewrite_star(fresh, 5, 4), std::invalid_argument);
}

TEST_CASE("convert_class preserves kind and ports") {
  const Character ogh = make_snake(CharClass::OG, CharKind::Head, 2, 3);
  const Character idh = convert_class(ogh, CharClass::ID);
  CHECK(idh.cls == CharClass::ID);
  CHECK(idh.kind == CharKind::Head);
  CHECK(idh.out_port == 2);
  CHECK(idh.in_port == 3);

  CHECK(convert_class(make_snake(CharClass::IG, CharKind::Tail, 0, 0), CharClass::OG)
            .display() == "OGT");

  // Only snake classes may convert.
  CHECK_THROWS_AS((void)convert_class(make_token(CharClass::KILL), CharClass::ID),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)convert_class(ogh, CharClass::KILL), std::invalid_argument);
}

TEST_CASE("frame rejects duplicate classes and overflow") {
  Frame f;
  CHECK(f.empty());
  f.push(make_snake(CharClass::IG, CharKind::Head, 1, 1));
  f.push(make_token(CharClass::KILL));
  CHECK(f.size() == 2);
  CHECK(f.find(CharClass::IG) != nullptr);
  CHECK(f.find(CharClass::IG)->kind == CharKind::Head);
  CHECK(f.find(CharClass::OG) == nullptr);

  // One character per class per wire per tick.
  CHECK_THROWS_AS(f.push(make_snake(CharClass::IG, CharKind::Body, 1, 1)),
                  std::runtime_error);

  // Filling every remaining class then one more overflows.
  f.push(make_snake(CharClass::OG, CharKind::Head, 1, 1));
  f.push(make_snake(CharClass::ID, CharKind::Head, 1, 1));
  f.push(make_snake(CharClass::OD, CharKind::Head, 1, 1));
  f.push(make_snake(CharClass::BIG, CharKind::Head, 1, 1));
  f.push(make_snake(CharClass::BID, CharKind::Head, 1, 1));
  f.push(make_token(CharClass::DFS, 1, 1));
  CHECK(f.size() == Frame::kCapacity);
  CHECK_THROWS_AS(f.push(make_token(CharClass::UNMARK)), std::runtime_error);
}

TEST_CASE("pipe enforces emission order and capacity") {
  Pipe p;
  CHECK(p.empty());
  p.push(make_snake(CharClass::IG, CharKind::Head, 1, 1), 10, false);
  p.push(make_snake(CharClass::IG, CharKind::Body, 1, 1), 11, false);
  p.push(make_snake(CharClass::IG, CharKind::Tail, 0, 0), 12, true);
  CHECK(p.size() == 3);

  // A fourth co-resident character is a protocol violation.
  CHECK_THROWS_AS(p.push(make_snake(CharClass::IG, CharKind::Body, 1, 1), 13, false),
                  std::runtime_error);

  // Entries must be scheduled in nondecreasing emission order.
  Pipe q;
  q.push(make_snake(CharClass::IG, CharKind::Head, 1, 1), 10, false);
  CHECK_THROWS_AS(q.push(make_snake(CharClass::IG, CharKind::Body, 1, 1), 9, false),
                  std::runtime_error);

  // Pop returns entries front first and preserves the per-port flag.
  const Pipe::Entry e = p.pop();
  CHECK(e.emit_at == 10);
  CHECK(e.ch.kind == CharKind::Head);
  CHECK(!e.per_port_out);
  CHECK(p.size() == 2);
  CHECK(p.front().emit_at == 11);
  p.clear();
  CHECK(p.empty());
}

TEST_CASE("node state serialization is fixed width") {
  NodeState st;
  const auto base = st.serialize();
  CHECK(base.size() == NodeState::serialized_size());

  // Any state mutation must stay within the same width and change the bytes.
  st.lane(CharClass::IG).visited = true;
  st.lane(CharClass::IG).parent_in = 2;
  st.slot1.pred_set = true;
  st.slot1.pred = 3;
  st.rca_phase = RcaPhase::AwaitToken;
  st.dfs.visited = true;
  st.dfs.finished = 0b101;
  const auto mutated = st.serialize();
  CHECK(mutated.size() == NodeState::serialized_size());
  CHECK(mutated != base);

  // Pipes contribute to the dump too.
  NodeState with_pipe;
  with_pipe.lane(CharClass::OG).pipe.push(make_token(CharClass::KILL), 5, false);
  CHECK(with_pipe.serialize().size() == NodeState::serialized_size());
  CHECK(with_pipe.serialize() != base);
}

TEST_CASE("pristine and clean predicates") {
  NodeState st;
  CHECK(st.non_dfs_pristine());
  CHECK(st.growing_clean());

  // Traversal bookkeeping is allowed to persist.
  st.dfs.visited = true;
  st.dfs.finished = 7;
  st.dfs.parent_in = 2;
  CHECK(st.non_dfs_pristine());

  // Any call residue breaks pristinity.
  NodeState marked = st;
  marked.slot1.pred_set = true;
  CHECK(!marked.non_dfs_pristine());

  NodeState phased = st;
  phased.rca_phase = RcaPhase::AwaitOG;
  CHECK(!phased.non_dfs_pristine());

  // Growing residue breaks the clean predicate; a marked slot does not.
  NodeState infected = st;
  infected.lane(CharClass::BIG).visited = true;
  CHECK(!infected.growing_clean());
  NodeState piped = st;
  piped.lane(CharClass::IG).pipe.push(make_snake(CharClass::IG, CharKind::Tail, 0, 0),
                                      3, false);
  CHECK(!piped.growing_clean());
  CHECK(marked.growing_clean());
}

TEST_CASE("lane lookup by class") {
  NodeState st;
  st.lane(CharClass::IG).parent_in = 1;
  st.lane(CharClass::OG).parent_in = 2;
  st.lane(CharClass::BIG).parent_in = 3;
  st.lane(CharClass::BOG).parent_in = 4;
  const NodeState& cst = st;
  CHECK(cst.lane(CharClass::IG).parent_in == 1);
  CHECK(cst.lane(CharClass::OG).parent_in == 2);
  CHECK(cst.lane(CharClass::BIG).parent_in == 3);
  CHECK(cst.lane(CharClass::BOG).parent_in == 4);
  CHECK_THROWS_AS((void)st.lane(CharClass::KILL), std::invalid_argument);
}
