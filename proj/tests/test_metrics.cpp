#include "doctest.h"
#include "erst/metrics.hpp"
#include "erst/validate.hpp"
#include "testutil.hpp"

#include <random>

using namespace erst;
using test::GraphBuilder;

namespace {

DecisionSequence seq(int edu_count, std::vector<Decision> decisions) {
  DecisionSequence s;
  s.edu_count = edu_count;
  s.decisions = std::move(decisions);
  return s;
}

}  // namespace

TEST_CASE("identical sequences score 1.0 on all four metrics") {
  DecisionSequence gold = seq(3, {{{0, 0}, {1, 1}, Nuclearity::NS, "elaboration-additional"},
                                  {{0, 1}, {2, 2}, Nuclearity::NS, "evaluation-comment"}});
  ParsevalScores p = parseval(gold, gold);
  CHECK(p.S == 1.0);
  CHECK(p.N == 1.0);
  CHECK(p.R == 1.0);
  CHECK(p.F == 1.0);
}

TEST_CASE("label and nuclearity mismatch on one of two decisions") {
  DecisionSequence gold = seq(3, {{{0, 0}, {1, 1}, Nuclearity::NS, "elaboration-additional"},
                                  {{0, 1}, {2, 2}, Nuclearity::NS, "evaluation-comment"}});
  DecisionSequence pred = seq(3, {{{0, 0}, {1, 1}, Nuclearity::NS, "elaboration-additional"},
                                  {{0, 1}, {2, 2}, Nuclearity::SN, "causal-result"}});
  ParsevalScores p = parseval(gold, pred);
  CHECK(p.S == 1.0);
  CHECK(p.N == 0.5);
  CHECK(p.R == 0.5);
  CHECK(p.F == 0.5);
}

TEST_CASE("one crossing span absent from gold gives S = 2/3") {
  // 4 EDUs, 3 decisions; the predicted sequence replaces one gold decision
  // with a span crossing the gold bracketing (no tree derives it, which is
  // exactly why it cannot match).
  DecisionSequence gold = seq(4, {{{0, 0}, {1, 1}, Nuclearity::NN, "joint-list"},
                                  {{0, 1}, {2, 2}, Nuclearity::NN, "joint-list"},
                                  {{0, 2}, {3, 3}, Nuclearity::NS, "evaluation-comment"}});
  DecisionSequence pred = seq(4, {{{0, 0}, {1, 1}, Nuclearity::NN, "joint-list"},
                                  {{1, 1}, {2, 2}, Nuclearity::NN, "joint-list"},
                                  {{0, 2}, {3, 3}, Nuclearity::NS, "evaluation-comment"}});
  ParsevalScores p = parseval(gold, pred);
  CHECK(p.S == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("parseval rejects mismatched segmentations") {
  CHECK_THROWS_AS(parseval(seq(3, {}), seq(4, {})), Error);
}

TEST_CASE("secondary parseval conventions for empty sides") {
  ParsevalScores both_empty = parseval_secondary({}, {});
  CHECK(both_empty.S == 1.0);
  CHECK(both_empty.F == 1.0);

  std::vector<SecondaryDecision> gold{
      {{0, 0}, {1, 1}, Direction::SourceBeforeTarget, "causal-result"}};
  ParsevalScores one_empty = parseval_secondary(gold, {});
  CHECK(one_empty.S == 0.0);
  CHECK(one_empty.N == 0.0);
  CHECK(one_empty.R == 0.0);
  CHECK(one_empty.F == 0.0);
}

TEST_CASE("secondary records differing only in direction match S but not N") {
  std::vector<SecondaryDecision> gold{
      {{2, 2}, {0, 1}, Direction::TargetBeforeSource, "adversative-concession"}};
  std::vector<SecondaryDecision> pred{
      {{0, 1}, {2, 2}, Direction::SourceBeforeTarget, "adversative-concession"}};
  ParsevalScores p = parseval_secondary(gold, pred);
  CHECK(p.S == 1.0);
  CHECK(p.N == 0.0);
  CHECK(p.R == 1.0);
  CHECK(p.F == 0.0);
}

namespace {

GraphBuilder signal_base() {
  GraphBuilder b;
  b.edu(1, "We left early on purpose")
      .edu(2, "because the host got dull and loud")
      .span(3)
      .nuc(1, 3)
      .sat(2, 3, "causal-cause");
  return b;
}

}  // namespace

TEST_CASE("identical signal sets score perfect detection and anchoring") {
  DocumentGraph g = signal_base()
                        .signal(SignalEdgeRef::primary(2), SignalMajor::Dm, "dm", {6})
                        .signal(SignalEdgeRef::primary(2), SignalMajor::Lexical,
                                "indicative-word", {9})
                        .build();
  SignalScores det = signal_prf(g, g);
  CHECK(det.overall.precision == 1.0);
  CHECK(det.overall.recall == 1.0);
  SignalScores anc = signal_token_prf(g, g);
  CHECK(anc.overall.precision == 1.0);
  CHECK(anc.overall.recall == 1.0);
}

TEST_CASE("two gold signals vs one predicted in the same group") {
  DocumentGraph gold = signal_base()
                           .signal(SignalEdgeRef::primary(2), SignalMajor::Dm, "dm", {5})
                           .signal(SignalEdgeRef::primary(2), SignalMajor::Dm, "dm", {9})
                           .build();
  DocumentGraph pred =
      signal_base().signal(SignalEdgeRef::primary(2), SignalMajor::Dm, "dm", {5}).build();
  SignalScores det = signal_prf(gold, pred);
  CHECK(det.overall.precision == 1.0);  // 1/1
  CHECK(det.overall.recall == 0.5);     // 1/2
}

TEST_CASE("anchored metric pairs signals to maximize token overlap") {
  DocumentGraph gold = signal_base()
                           .signal(SignalEdgeRef::primary(2), SignalMajor::Dm, "dm", {5})
                           .signal(SignalEdgeRef::primary(2), SignalMajor::Dm, "dm", {9})
                           .build();
  DocumentGraph pred =
      signal_base().signal(SignalEdgeRef::primary(2), SignalMajor::Dm, "dm", {5, 9}).build();
  SignalScores anc = signal_token_prf(gold, pred);
  CHECK(anc.overall.precision == 0.5);  // best pairing overlaps one token of two
  CHECK(anc.overall.recall == 0.5);
}

TEST_CASE("a predicted signal on an unmatched yield adds only to the denominator") {
  DocumentGraph gold = signal_base()
                           .signal(SignalEdgeRef::primary(2), SignalMajor::Dm, "dm", {6})
                           .build();
  DocumentGraph pred = signal_base()
                           .signal(SignalEdgeRef::primary(2), SignalMajor::Dm, "dm", {6})
                           .signal(SignalEdgeRef::primary(1), SignalMajor::Dm, "dm", {2})
                           .build();
  SignalScores det = signal_prf(gold, pred);
  CHECK(det.overall.precision == 0.5);
  CHECK(det.overall.recall == 1.0);
}

TEST_CASE("tokenless signals count for detection but not anchoring") {
  DocumentGraph g = signal_base()
                        .signal(SignalEdgeRef::primary(2), SignalMajor::Graphical, "layout", {})
                        .build();
  SignalScores det = signal_prf(g, g);
  CHECK(det.overall.precision == 1.0);
  SignalScores anc = signal_token_prf(g, g);
  // No anchored tokens on either side: the empty-vs-empty convention.
  CHECK(anc.overall.precision == 1.0);
  CHECK(anc.counts.gold_tokens == 0);
}

TEST_CASE("signal metrics are symmetric: S_P(g,p) = S_R(p,g), W_P(g,p) = W_R(p,g)") {
  std::mt19937 rng(77);
  for (int i = 0; i < 60; ++i) {
    test::GenOptions options;
    options.max_edus = 6;
    options.secondary = true;
    options.signals = true;
    DocumentGraph a = test::random_document(rng, options);
    DocumentGraph b = test::random_restructure(rng, a, options);
    SignalScores det_ab = signal_prf(a, b);
    SignalScores det_ba = signal_prf(b, a);
    CHECK(det_ab.overall.precision == doctest::Approx(det_ba.overall.recall));
    CHECK(det_ab.overall.recall == doctest::Approx(det_ba.overall.precision));
    SignalScores anc_ab = signal_token_prf(a, b);
    SignalScores anc_ba = signal_token_prf(b, a);
    CHECK(anc_ab.overall.precision == doctest::Approx(anc_ba.overall.recall));
    CHECK(anc_ab.overall.recall == doctest::Approx(anc_ba.overall.precision));
  }
}

TEST_CASE("parseval agrees with the brute-force oracle and stays monotone") {
  std::mt19937 rng(13);
  for (int i = 0; i < 100; ++i) {
    test::GenOptions options;
    options.max_edus = 8;
    DocumentGraph a = test::random_document(rng, options);
    DocumentGraph b = test::random_restructure(rng, a, options);
    DecisionSequence da = extract_decisions(binarize(a));
    DecisionSequence db = extract_decisions(binarize(b));
    ParsevalScores p = parseval(da, db);
    test::OracleParseval o = test::parseval_oracle(da, db);
    CHECK(p.S == o.S);
    CHECK(p.N == o.N);
    CHECK(p.R == o.R);
    CHECK(p.F == o.F);
    CHECK(p.F <= p.N);
    CHECK(p.F <= p.R);
    CHECK(p.N <= p.S);
    CHECK(p.R <= p.S);
  }
}

TEST_CASE("metrics are invariant under node-id renaming") {
  std::mt19937 rng(31);
  test::GenOptions options;
  options.max_edus = 6;
  options.secondary = true;
  options.signals = true;
  DocumentGraph a = test::random_document(rng, options);
  DocumentGraph b = test::random_restructure(rng, a, options);

  // Shift every non-EDU id in b by a constant.
  DocumentGraph renamed = b;
  auto shift = [&](NodeId id) {
    for (const auto& edu : b.edus)
      if (edu.id == id) return id;
    return id + 1000;
  };
  for (auto& node : renamed.nodes) node.id = shift(node.id);
  for (auto& att : renamed.attachments) {
    att.child = shift(att.child);
    att.parent = shift(att.parent);
  }
  for (auto& edge : renamed.secondary) {
    edge.source = shift(edge.source);
    edge.target = shift(edge.target);
  }
  for (auto& signal : renamed.signals) {
    if (signal.edge.is_secondary) {
      signal.edge.source = shift(signal.edge.source);
      signal.edge.target = shift(signal.edge.target);
    } else {
      signal.edge.child = shift(signal.edge.child);
    }
  }

  ScoreReport before = score_pair(a, b);
  ScoreReport after = score_pair(a, renamed);
  CHECK(flatten_scores(before) == flatten_scores(after));
}

TEST_CASE("score_pair on a document against itself is all ones") {
  std::mt19937 rng(41);
  test::GenOptions options;
  options.secondary = true;
  options.signals = true;
  DocumentGraph g = test::random_document(rng, options);
  ScoreReport report = score_pair(g, g);
  for (const auto& [name, value] : flatten_scores(report)) {
    INFO(name);
    CHECK(value == 1.0);
  }
}

TEST_CASE("micro average pools counts across documents") {
  // Two 5-EDU documents with four decisions each: doc1 identical (S = 1.0),
  // doc2 shares two of four spans (S = 0.5), so micro S = 6/8 = 0.75.
  auto five_edus = [] {
    GraphBuilder b;
    b.edu(1, "a").edu(2, "b").edu(3, "c").edu(4, "d").edu(5, "e");
    return b;
  };
  // Gold: left-branching chain ((((1 2) 3) 4) 5).
  DocumentGraph gold = five_edus()
                           .span(6)
                           .span(7)
                           .span(8)
                           .span(9)
                           .nuc(1, 6)
                           .sat(2, 6, "mode-manner")
                           .nuc(6, 7)
                           .sat(3, 7, "mode-manner")
                           .nuc(7, 8)
                           .sat(4, 8, "mode-manner")
                           .nuc(8, 9)
                           .sat(5, 9, "mode-manner")
                           .build();
  REQUIRE(validate(gold).valid());
  DocumentGraph gold1 = gold;
  gold1.doc_id = "doc1";
  DocumentGraph pred1 = gold1;
  DocumentGraph gold2 = gold;
  gold2.doc_id = "doc2";
  // Pred2: (((1 2) 3) (4 5)) shares the {1,2} and {1-2,3} spans only.
  DocumentGraph pred2 = five_edus()
                            .span(6)
                            .span(7)
                            .span(8)
                            .span(9)
                            .nuc(1, 6)
                            .sat(2, 6, "mode-manner")
                            .nuc(6, 7)
                            .sat(3, 7, "mode-manner")
                            .nuc(4, 8)
                            .sat(5, 8, "mode-manner")
                            .nuc(7, 9)
                            .sat(8, 9, "mode-manner")
                            .build();
  pred2.doc_id = "doc2";
  REQUIRE(validate(pred2).valid());

  CorpusScore score = score_corpus({gold1, gold2}, {pred1, pred2});
  CHECK(score.micro.primary.S == 0.75);
  // Macro averages the per-document ratios: (1.0 + 0.5) / 2.
  for (const auto& [name, value] : score.macro)
    if (name == "primary.S") CHECK(value == 0.75);
  CHECK(score.per_doc.size() == 2);
}

TEST_CASE("corpus scoring warns about unmatched documents and proceeds") {
  std::mt19937 rng(55);
  test::GenOptions options;
  DocumentGraph a = test::random_document(rng, options);
  a.doc_id = "shared";
  DocumentGraph extra = test::random_document(rng, options);
  extra.doc_id = "gold-only";
  CorpusScore score = score_corpus({a, extra}, {a});
  CHECK(score.per_doc.size() == 1);
  REQUIRE(score.warnings.size() == 1);
  CHECK(score.warnings[0].find("gold-only") != std::string::npos);
}

TEST_CASE("same-unit decisions can be excluded from scoring") {
  // EDUs 1 and 3 form a discontinuous unit bridged by same-unit; the
  // appositive 2 elaborates EDU 1 inside the first part.
  DocumentGraph gold = GraphBuilder()
                           .edu(1, "The author ,")
                           .edu(2, "a recluse ,")
                           .edu(3, "agreed .")
                           .span(5)
                           .multinuc(4)
                           .nuc(1, 5)
                           .sat(2, 5, "elaboration-additional")
                           .multi(5, 4, "same-unit")
                           .multi(3, 4, "same-unit")
                           .build();
  REQUIRE(validate(gold).valid());
  ScoreOptions strip;
  strip.exclude_same_unit = true;
  ScoreReport with = score_pair(gold, gold);
  ScoreReport without = score_pair(gold, gold, strip);
  CHECK(with.primary.counts.pred_decisions == 2);
  CHECK(without.primary.counts.pred_decisions == 1);
  CHECK(without.primary.S == 1.0);
}

TEST_CASE("kv report uses the stable field names") {
  std::mt19937 rng(3);
  test::GenOptions options;
  DocumentGraph g = test::random_document(rng, options);
  ScoreReport report = score_pair(g, g);
  std::string kv = format_report_kv(report);
  CHECK(kv.find("primary.S 1.000000") != std::string::npos);
  CHECK(kv.find("signals.anchored.W_P") != std::string::npos);
  CHECK(kv.find("signals.unanchored.S_R") != std::string::npos);
  CHECK(kv.find("signals.types.dm.detection.P") != std::string::npos);
}
