#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "erst/model.hpp"
#include "testutil.hpp"

using namespace erst;
using test::GraphBuilder;

namespace {

// Small treebank-shaped fragment over EDUs 24..28: manner satellite on a
// nucleus EDU, a list multinuc, a result satellite, a concession on top.
DocumentGraph fragment_fixture() {
  return GraphBuilder("GUM_test_fragment")
      .edu(24, "Answer the question")
      .edu(25, "with a slow song")
      .edu(26, "even though it is late")
      .edu(27, "and everyone is tired")
      .edu(28, "so we stop now")
      .span(30)      // 24-25
      .multinuc(31)  // 26-27
      .span(32)      // 26-28
      .span(33)      // 24-28 root
      .nuc(24, 30)
      .sat(25, 30, "mode-manner")
      .multi(26, 31, "joint-list")
      .multi(27, 31, "joint-list")
      .nuc(31, 32)
      .sat(28, 32, "causal-result")
      .nuc(30, 33)
      .sat(32, 33, "adversative-concession")
      .build();
}

}  // namespace

TEST_CASE("coarse class strips the first hyphenated suffix") {
  CHECK(coarse_class("adversative-concession") == "adversative");
  CHECK(coarse_class("joint") == "joint");
  CHECK(coarse_class("same-unit") == "same");
}

TEST_CASE("node_yield of an EDU is the singleton of itself") {
  DocumentGraph g = fragment_fixture();
  CHECK(node_yield(g, 26) == std::vector<NodeId>{26});
}

TEST_CASE("node_yield of the root covers every EDU") {
  DocumentGraph g = fragment_fixture();
  CHECK(node_yield(g, 33) == std::vector<NodeId>{24, 25, 26, 27, 28});
}

TEST_CASE("node_yield of inner nodes is their contiguous run") {
  DocumentGraph g = fragment_fixture();
  CHECK(node_yield(g, 30) == std::vector<NodeId>{24, 25});
  CHECK(node_yield(g, 32) == std::vector<NodeId>{26, 27, 28});
}

TEST_CASE("node_yield rejects unknown ids") {
  DocumentGraph g = fragment_fixture();
  CHECK_THROWS_AS(node_yield(g, 99), Error);
}

TEST_CASE("single-EDU document: S equals V") {
  DocumentGraph g = GraphBuilder().edu(1, "Hello world").build();
  CHECK(node_yield(g, 1) == std::vector<NodeId>{1});
  GraphIndex idx = GraphIndex::build(g);
  CHECK(idx.root() == 1);
}

TEST_CASE("edu_of_token maps token indices to their EDU") {
  DocumentGraph g = fragment_fixture();
  GraphIndex idx = GraphIndex::build(g);
  CHECK(idx.edu_of_token(1) == 24);
  CHECK(idx.edu_of_token(4) == 25);
  CHECK(idx.edu_of_token(static_cast<int>(g.tokens.size())) == 28);
  CHECK(idx.edu_of_token(0) == 0);
  CHECK(idx.edu_of_token(1000) == 0);
}

TEST_CASE("signal majors round-trip through their names") {
  for (SignalMajor m :
       {SignalMajor::Dm, SignalMajor::Orphan, SignalMajor::Graphical, SignalMajor::Lexical,
        SignalMajor::Morphological, SignalMajor::Numerical, SignalMajor::Reference,
        SignalMajor::Semantic, SignalMajor::Syntactic}) {
    auto back = signal_major_from_string(to_string(m));
    REQUIRE(back.has_value());
    CHECK(*back == m);
  }
  CHECK(!signal_major_from_string("nonsense").has_value());
}

TEST_CASE("default vocabulary covers the built-in signal types") {
  DocumentGraph g = GraphBuilder().edu(1, "x").build();
  CHECK(vocabulary_contains(g, {SignalMajor::Dm, "dm"}));
  CHECK(vocabulary_contains(g, {SignalMajor::Orphan, "orphan"}));
  CHECK(vocabulary_contains(g, {SignalMajor::Semantic, "lexical-chain"}));
  CHECK(!vocabulary_contains(g, {SignalMajor::Semantic, "made-up"}));
}

TEST_CASE("default inventory marks same-unit as a pseudo-relation") {
  DocumentGraph g = GraphBuilder().edu(1, "x").build();
  const RelationLabel* same_unit = find_relation(g, "same-unit");
  REQUIRE(same_unit != nullptr);
  CHECK(same_unit->is_pseudo());
  CHECK(same_unit->kind == RelationKind::Multinuclear);
  CHECK(!find_relation(g, "causal-result")->is_pseudo());
}
