#include "doctest.h"
#include "erst/induce.hpp"
#include "erst/validate.hpp"
#include "testutil.hpp"

#include <algorithm>

using namespace erst;
using test::GraphBuilder;

namespace {

class AuxBuilder {
 public:
  AuxBuilder& tok(const char* form, const char* lemma, const char* pos, int head,
                  const char* deprel) {
    int index = static_cast<int>(aux_.tokens.size()) + 1;
    aux_.tokens.push_back({index, form, lemma, pos, head, deprel});
    if (sentence_start_ == 0) sentence_start_ = index;
    return *this;
  }
  AuxBuilder& sent() {
    if (sentence_start_ > 0)
      aux_.sentences.emplace_back(sentence_start_, static_cast<int>(aux_.tokens.size()));
    sentence_start_ = 0;
    return *this;
  }
  AuxBuilder& mention(int chain, int start, int end) {
    aux_.mentions.push_back({chain, start, end, ""});
    aux_.has_coref = true;
    return *this;
  }
  AuxBuilder& coref() {
    aux_.has_coref = true;
    return *this;
  }
  AuxAnnotations build() {
    sent();
    return aux_;
  }

 private:
  AuxAnnotations aux_;
  int sentence_start_ = 0;
};

std::vector<std::string> combined_types(const std::vector<Signal>& signals) {
  std::vector<std::string> out;
  for (const auto& s : signals) out.push_back(s.type.combined());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("'a plan to win': infinitival clause and modified head, nothing else") {
  DocumentGraph g = GraphBuilder()
                        .edu(1, "They outlined a plan")
                        .edu(2, "to win")
                        .span(3)
                        .nuc(1, 3)
                        .sat(2, 3, "purpose-attribute")
                        .build();
  AuxAnnotations aux = AuxBuilder()
                           .tok("They", "they", "PRP", 2, "nsubj")
                           .tok("outlined", "outline", "VBD", 0, "root")
                           .tok("a", "a", "DT", 4, "det")
                           .tok("plan", "plan", "NN", 2, "obj")
                           .tok("to", "to", "TO", 6, "mark")
                           .tok("win", "win", "VB", 4, "acl")
                           .build();
  InduceResult result = induce_syntactic_morphological(g, aux, default_eligibility());
  REQUIRE(result.signals.size() == 2);
  auto types = combined_types(result.signals);
  CHECK(types[0] == "syntactic:modified-head");
  CHECK(types[1] == "syntactic:relative-or-infinitival");
  for (const auto& s : result.signals) {
    if (s.type.subtype == "relative-or-infinitival") CHECK(s.tokens == std::vector<int>{5});
    if (s.type.subtype == "modified-head") CHECK(s.tokens == std::vector<int>{4});
  }
}

TEST_CASE("'Had I known' heading a condition: inversion plus conditional mood") {
  DocumentGraph g = GraphBuilder()
                        .edu(1, "I would have helped")
                        .edu(2, "had I known")
                        .span(3)
                        .nuc(1, 3)
                        .sat(2, 3, "contingency-condition")
                        .build();
  AuxAnnotations aux = AuxBuilder()
                           .tok("I", "I", "PRP", 4, "nsubj")
                           .tok("would", "would", "MD", 4, "aux")
                           .tok("have", "have", "VB", 4, "aux")
                           .tok("helped", "help", "VBN", 0, "root")
                           .tok("had", "have", "VBD", 7, "aux")
                           .tok("I", "I", "PRP", 7, "nsubj")
                           .tok("known", "know", "VBN", 4, "advcl")
                           .build();
  InduceResult result = induce_syntactic_morphological(g, aux, default_eligibility());
  REQUIRE(result.signals.size() == 2);
  for (const auto& s : result.signals) {
    if (s.type.subtype == "subject-auxiliary-inversion") CHECK(s.tokens == std::vector<int>{5});
    if (s.type.subtype == "mood") CHECK(s.tokens == std::vector<int>{2});
  }
  auto types = combined_types(result.signals);
  CHECK(types == std::vector<std::string>{"morphological:mood",
                                          "syntactic:subject-auxiliary-inversion"});
}

TEST_CASE("question mark on a topic-question satellite") {
  DocumentGraph g = GraphBuilder()
                        .edu(1, "Did you ?")
                        .edu(2, "No .")
                        .span(3)
                        .nuc(2, 3)
                        .sat(1, 3, "topic-question")
                        .build();
  AuxAnnotations aux = AuxBuilder()
                           .tok("Did", "do", "VBD", 0, "root")
                           .tok("you", "you", "PRP", 1, "nsubj")
                           .tok("?", "?", ".", 1, "punct")
                           .sent()
                           .tok("No", "no", "UH", 0, "root")
                           .tok(".", ".", ".", 4, "punct")
                           .build();
  InduceResult result = induce_graphical(g, aux, default_eligibility());
  REQUIRE(result.signals.size() == 1);
  CHECK(result.signals[0].type.combined() == "graphical:question-mark");
  CHECK(result.signals[0].tokens == std::vector<int>{3});
}

TEST_CASE("a declarative sentence produces no graphical signals") {
  DocumentGraph g = GraphBuilder()
                        .edu(1, "We left early")
                        .edu(2, "before the rain")
                        .span(3)
                        .nuc(1, 3)
                        .sat(2, 3, "context-circumstance")
                        .build();
  AuxAnnotations aux = AuxBuilder()
                           .tok("We", "we", "PRP", 2, "nsubj")
                           .tok("left", "leave", "VBD", 0, "root")
                           .tok("early", "early", "RB", 2, "advmod")
                           .tok("before", "before", "IN", 6, "case")
                           .tok("the", "the", "DT", 6, "det")
                           .tok("rain", "rain", "NN", 2, "obl")
                           .build();
  CHECK(induce_graphical(g, aux, default_eligibility()).signals.empty());
}

TEST_CASE("the eligibility gate blocks patterns on ineligible relations") {
  // Same question-mark pattern, but the satellite carries mode-manner.
  DocumentGraph g = GraphBuilder()
                        .edu(1, "Did you ?")
                        .edu(2, "No .")
                        .span(3)
                        .nuc(2, 3)
                        .sat(1, 3, "mode-manner")
                        .build();
  AuxAnnotations aux = AuxBuilder()
                           .tok("Did", "do", "VBD", 0, "root")
                           .tok("you", "you", "PRP", 1, "nsubj")
                           .tok("?", "?", ".", 1, "punct")
                           .sent()
                           .tok("No", "no", "UH", 0, "root")
                           .tok(".", ".", ".", 4, "punct")
                           .build();
  CHECK(induce_graphical(g, aux, default_eligibility()).signals.empty());
}

TEST_CASE("paired parentheses enclosing the satellite's full yield") {
  DocumentGraph g = GraphBuilder()
                        .edu(1, "it rained")
                        .edu(2, "( and snowed a bit )")
                        .span(3)
                        .nuc(1, 3)
                        .sat(2, 3, "elaboration-additional")
                        .build();
  AuxAnnotations aux = AuxBuilder()
                           .tok("it", "it", "PRP", 2, "nsubj")
                           .tok("rained", "rain", "VBD", 0, "root")
                           .tok("(", "(", "-LRB-", 5, "punct")
                           .tok("and", "and", "CC", 5, "cc")
                           .tok("snowed", "snow", "VBD", 2, "conj")
                           .tok("a", "a", "DT", 7, "det")
                           .tok("bit", "bit", "NN", 5, "obl")
                           .tok(")", ")", "-RRB-", 5, "punct")
                           .build();
  InduceResult result = induce_graphical(g, aux, default_eligibility());
  REQUIRE(result.signals.size() == 1);
  CHECK(result.signals[0].type.combined() == "graphical:parentheses");
  CHECK(result.signals[0].tokens == std::vector<int>{3, 8});
}

TEST_CASE("colon at the satellite-nucleus boundary of a preparation") {
  DocumentGraph g = GraphBuilder()
                        .edu(1, "Let me tell you a story :")
                        .edu(2, "it begins at sea")
                        .span(3)
                        .nuc(2, 3)
                        .sat(1, 3, "organization-preparation")
                        .build();
  AuxAnnotations aux = AuxBuilder()
                           .tok("Let", "let", "VB", 0, "root")
                           .tok("me", "me", "PRP", 1, "obj")
                           .tok("tell", "tell", "VB", 1, "xcomp")
                           .tok("you", "you", "PRP", 3, "iobj")
                           .tok("a", "a", "DT", 6, "det")
                           .tok("story", "story", "NN", 3, "obj")
                           .tok(":", ":", ":", 1, "punct")
                           .sent()
                           .tok("it", "it", "PRP", 9, "nsubj")
                           .tok("begins", "begin", "VBZ", 0, "root")
                           .tok("at", "at", "IN", 11, "case")
                           .tok("sea", "sea", "NN", 9, "obl")
                           .build();
  InduceResult result = induce_graphical(g, aux, default_eligibility());
  REQUIRE(result.signals.size() == 1);
  CHECK(result.signals[0].type.combined() == "graphical:colon");
  CHECK(result.signals[0].tokens == std::vector<int>{7});
}

TEST_CASE("'pretty' is selected, 'kind' is blocked by part of speech") {
  DocumentGraph g = GraphBuilder()
                        .edu(1, "She smiles at me .")
                        .edu(2, "She 's kind of pretty .")
                        .span(3)
                        .nuc(1, 3)
                        .sat(2, 3, "evaluation-comment")
                        .build();
  AuxAnnotations aux = AuxBuilder()
                           .tok("She", "she", "PRP", 2, "nsubj")
                           .tok("smiles", "smile", "VBZ", 0, "root")
                           .tok("at", "at", "IN", 4, "case")
                           .tok("me", "me", "PRP", 2, "obl")
                           .tok(".", ".", ".", 2, "punct")
                           .sent()
                           .tok("She", "she", "PRP", 10, "nsubj")
                           .tok("'s", "be", "VBZ", 10, "cop")
                           .tok("kind", "kind", "RB", 10, "advmod")
                           .tok("of", "of", "IN", 8, "fixed")
                           .tok("pretty", "pretty", "JJ", 0, "root")
                           .tok(".", ".", ".", 10, "punct")
                           .build();
  IndicativeLexicon lexicon;
  lexicon.items[{"kind", "JJ"}] = {"evaluation"};
  lexicon.items[{"pretty", "JJ"}] = {"evaluation"};
  InduceResult result = induce_lexical(g, aux, default_eligibility(), lexicon);
  REQUIRE(result.signals.size() == 1);
  CHECK(result.signals[0].type.combined() == "lexical:indicative-word");
  CHECK(result.signals[0].tokens == std::vector<int>{10});
}

TEST_CASE("an empty indicative lexicon yields no lexical signals") {
  DocumentGraph g = GraphBuilder()
                        .edu(1, "nice work")
                        .edu(2, "really nice")
                        .span(3)
                        .nuc(1, 3)
                        .sat(2, 3, "evaluation-comment")
                        .build();
  AuxAnnotations aux = AuxBuilder()
                           .tok("nice", "nice", "JJ", 2, "amod")
                           .tok("work", "work", "NN", 0, "root")
                           .tok("really", "really", "RB", 4, "advmod")
                           .tok("nice", "nice", "JJ", 0, "root")
                           .build();
  CHECK(induce_lexical(g, aux, default_eligibility(), IndicativeLexicon{}).signals.empty());
}

TEST_CASE("attribution source anchored to the subject of the predicate") {
  DocumentGraph g = GraphBuilder()
                        .edu(1, "Bolden said")
                        .edu(2, "the mission was a success")
                        .span(3)
                        .nuc(2, 3)
                        .sat(1, 3, "attribution-positive")
                        .build();
  AuxAnnotations aux = AuxBuilder()
                           .tok("Bolden", "Bolden", "NNP", 2, "nsubj")
                           .tok("said", "say", "VBD", 0, "root")
                           .tok("the", "the", "DT", 4, "det")
                           .tok("mission", "mission", "NN", 7, "nsubj")
                           .tok("was", "be", "VBD", 7, "cop")
                           .tok("a", "a", "DT", 7, "det")
                           .tok("success", "success", "NN", 2, "ccomp")
                           .coref()
                           .build();
  InduceResult result = induce_reference_semantic(g, aux, default_eligibility());
  REQUIRE(result.signals.size() == 1);
  CHECK(result.signals[0].type.combined() == "semantic:attribution-source");
  CHECK(result.signals[0].tokens == std::vector<int>{1});
  CHECK(result.review.empty());

  // Reported speech comes from the dependency rules on the same fixture.
  InduceResult syn = induce_syntactic_morphological(g, aux, default_eligibility());
  REQUIRE(syn.signals.size() == 1);
  CHECK(syn.signals[0].type.combined() == "syntactic:reported-speech");
}

TEST_CASE("unresolvable attribution sources become review items, not signals") {
  DocumentGraph g = GraphBuilder()
                        .edu(1, "According to reports")
                        .edu(2, "the mission succeeded")
                        .span(3)
                        .nuc(2, 3)
                        .sat(1, 3, "attribution-positive")
                        .build();
  AuxAnnotations aux = AuxBuilder()
                           .tok("According", "accord", "VBG", 0, "root")
                           .tok("to", "to", "IN", 3, "case")
                           .tok("reports", "report", "NNS", 1, "obl")
                           .tok("the", "the", "DT", 5, "det")
                           .tok("mission", "mission", "NN", 6, "nsubj")
                           .tok("succeeded", "succeed", "VBD", 1, "ccomp")
                           .coref()
                           .build();
  InduceResult result = induce_reference_semantic(g, aux, default_eligibility());
  CHECK(result.signals.empty());
  REQUIRE(result.review.size() == 1);
  CHECK(result.review[0].find("attribution source") != std::string::npos);
}

TEST_CASE("personal reference across an elaboration") {
  DocumentGraph g = GraphBuilder()
                        .edu(1, "They met Kim .")
                        .edu(2, "She was thrilled .")
                        .span(3)
                        .nuc(1, 3)
                        .sat(2, 3, "elaboration-additional")
                        .build();
  AuxAnnotations aux = AuxBuilder()
                           .tok("They", "they", "PRP", 2, "nsubj")
                           .tok("met", "meet", "VBD", 0, "root")
                           .tok("Kim", "Kim", "NNP", 2, "obj")
                           .tok(".", ".", ".", 2, "punct")
                           .sent()
                           .tok("She", "she", "PRP", 7, "nsubj")
                           .tok("was", "be", "VBD", 7, "cop")
                           .tok("thrilled", "thrilled", "JJ", 0, "root")
                           .tok(".", ".", ".", 7, "punct")
                           .mention(1, 3, 3)
                           .mention(1, 5, 5)
                           .build();
  InduceResult result = induce_reference_semantic(g, aux, default_eligibility());
  REQUIRE(result.signals.size() == 1);
  CHECK(result.signals[0].type.combined() == "reference:personal");
  CHECK(result.signals[0].tokens == std::vector<int>{3, 5});
}

TEST_CASE("coreference entirely inside the nucleus produces no signal") {
  DocumentGraph g = GraphBuilder()
                        .edu(1, "They met Kim and she smiled .")
                        .edu(2, "The rain had stopped .")
                        .span(3)
                        .nuc(1, 3)
                        .sat(2, 3, "context-background")
                        .build();
  AuxAnnotations aux = AuxBuilder()
                           .tok("They", "they", "PRP", 2, "nsubj")
                           .tok("met", "meet", "VBD", 0, "root")
                           .tok("Kim", "Kim", "NNP", 2, "obj")
                           .tok("and", "and", "CC", 6, "cc")
                           .tok("she", "she", "PRP", 6, "nsubj")
                           .tok("smiled", "smile", "VBD", 2, "conj")
                           .tok(".", ".", ".", 2, "punct")
                           .sent()
                           .tok("The", "the", "DT", 9, "det")
                           .tok("rain", "rain", "NN", 11, "nsubj")
                           .tok("had", "have", "VBD", 11, "aux")
                           .tok("stopped", "stop", "VBN", 0, "root")
                           .tok(".", ".", ".", 11, "punct")
                           .mention(1, 3, 3)
                           .mention(1, 5, 5)
                           .build();
  InduceResult result = induce_reference_semantic(g, aux, default_eligibility());
  for (const auto& s : result.signals) CHECK(s.type.major != SignalMajor::Reference);
  // The background satellite carries a past perfect instead.
  InduceResult syn = induce_syntactic_morphological(g, aux, default_eligibility());
  REQUIRE(syn.signals.size() == 1);
  CHECK(syn.signals[0].type.combined() == "morphological:tense");
  CHECK(syn.signals[0].tokens == std::vector<int>{10, 11});
}

TEST_CASE("repetition with matching head lemmas straddling the relation") {
  DocumentGraph g = GraphBuilder()
                        .edu(1, "Dr Kim arrived .")
                        .edu(2, "Dr Kim spoke first .")
                        .span(3)
                        .nuc(1, 3)
                        .sat(2, 3, "elaboration-additional")
                        .build();
  AuxAnnotations aux = AuxBuilder()
                           .tok("Dr", "Dr", "NNP", 2, "compound")
                           .tok("Kim", "Kim", "NNP", 3, "nsubj")
                           .tok("arrived", "arrive", "VBD", 0, "root")
                           .tok(".", ".", ".", 3, "punct")
                           .sent()
                           .tok("Dr", "Dr", "NNP", 6, "compound")
                           .tok("Kim", "Kim", "NNP", 7, "nsubj")
                           .tok("spoke", "speak", "VBD", 0, "root")
                           .tok("first", "first", "RB", 7, "advmod")
                           .tok(".", ".", ".", 7, "punct")
                           .mention(4, 1, 2)
                           .mention(4, 5, 6)
                           .build();
  InduceResult result = induce_reference_semantic(g, aux, default_eligibility());
  REQUIRE(result.signals.size() == 1);
  CHECK(result.signals[0].type.combined() == "semantic:repetition");
  CHECK(result.signals[0].tokens == std::vector<int>{1, 2, 5, 6});
}

TEST_CASE("tense sequences over joint-sequence land in the review channel only") {
  DocumentGraph g = GraphBuilder()
                        .edu(1, "I started an hour ago")
                        .edu(2, "now I rest")
                        .multinuc(3)
                        .multi(1, 3, "joint-sequence")
                        .multi(2, 3, "joint-sequence")
                        .build();
  AuxAnnotations aux = AuxBuilder()
                           .tok("I", "I", "PRP", 2, "nsubj")
                           .tok("started", "start", "VBD", 0, "root")
                           .tok("an", "a", "DT", 4, "det")
                           .tok("hour", "hour", "NN", 5, "obl")
                           .tok("ago", "ago", "RB", 2, "advmod")
                           .sent()
                           .tok("now", "now", "RB", 8, "advmod")
                           .tok("I", "I", "PRP", 8, "nsubj")
                           .tok("rest", "rest", "VBP", 0, "root")
                           .build();
  InduceResult result = induce_syntactic_morphological(g, aux, default_eligibility());
  CHECK(result.signals.empty());
  REQUIRE(result.review.size() == 1);
  CHECK(result.review[0].find("tense sequence") != std::string::npos);
}

TEST_CASE("missing layers raise errors naming the skipped rule families") {
  DocumentGraph g = GraphBuilder()
                        .edu(1, "a b")
                        .edu(2, "c d")
                        .span(3)
                        .nuc(1, 3)
                        .sat(2, 3, "elaboration-additional")
                        .build();
  AuxAnnotations bare;
  for (int i = 1; i <= 4; ++i)
    bare.tokens.push_back({i, g.tokens[i - 1].form, g.tokens[i - 1].form, "_", 0, "_"});
  bare.sentences = {{1, 4}};
  CHECK_THROWS_WITH_AS(induce_syntactic_morphological(g, bare, default_eligibility()),
                       doctest::Contains("dependency layer missing"), Error);
  CHECK_THROWS_WITH_AS(induce_reference_semantic(g, bare, default_eligibility()),
                       doctest::Contains("coreference layer missing"), Error);
}

TEST_CASE("aux token forms must align with the document") {
  DocumentGraph g = GraphBuilder().edu(1, "hello world").build();
  AuxAnnotations aux = AuxBuilder().tok("hello", "hello", "UH", 0, "root").build();
  CHECK_THROWS_AS(induce_graphical(g, aux, default_eligibility()), Error);
}

TEST_CASE("induction is idempotent under merge_signals") {
  DocumentGraph g = GraphBuilder()
                        .edu(1, "They outlined a plan")
                        .edu(2, "to win")
                        .span(3)
                        .nuc(1, 3)
                        .sat(2, 3, "purpose-attribute")
                        .build();
  AuxAnnotations aux = AuxBuilder()
                           .tok("They", "they", "PRP", 2, "nsubj")
                           .tok("outlined", "outline", "VBD", 0, "root")
                           .tok("a", "a", "DT", 4, "det")
                           .tok("plan", "plan", "NN", 2, "obj")
                           .tok("to", "to", "TO", 6, "mark")
                           .tok("win", "win", "VB", 4, "acl")
                           .build();
  InduceResult first = induce_syntactic_morphological(g, aux, default_eligibility());
  DocumentGraph merged = merge_signals(g, first.signals);
  REQUIRE(validate(merged).valid());
  InduceResult second = induce_syntactic_morphological(merged, aux, default_eligibility());
  DocumentGraph again = merge_signals(merged, second.signals);
  CHECK(again.signals == merged.signals);
}

TEST_CASE("ingesting external signals deduplicates and validates references") {
  DocumentGraph g = GraphBuilder("DOC_a")
                        .edu(1, "it was funny")
                        .edu(2, "so they laughed")
                        .span(3)
                        .nuc(1, 3)
                        .sat(2, 3, "causal-result")
                        .build();
  ExternalSignal chain;
  chain.doc_id = "DOC_a";
  chain.edge = SignalEdgeRef::primary(2);
  chain.type = {SignalMajor::Semantic, "lexical-chain"};
  chain.tokens = {3, 6};
  chain.line = 1;

  DocumentGraph merged = ingest_external_signals(g, {chain});
  CHECK(merged.signals.size() == 1);
  // Re-listing the same signal adds nothing.
  DocumentGraph again = ingest_external_signals(merged, {chain});
  CHECK(again.signals.size() == 1);
  // An empty list leaves the graph unchanged.
  CHECK(ingest_external_signals(g, {}).signals.empty());

  ExternalSignal dangling;
  dangling.doc_id = "DOC_a";
  dangling.edge = SignalEdgeRef::secondary(12, 99);
  dangling.type = {SignalMajor::Semantic, "lexical-chain"};
  dangling.line = 7;
  CHECK_THROWS_WITH_AS(ingest_external_signals(g, {dangling}), doctest::Contains("line 7"),
                       Error);
}

TEST_CASE("removing the coreference layer removes exactly the coref-based families") {
  DocumentGraph g = GraphBuilder()
                        .edu(1, "They met Kim .")
                        .edu(2, "She was thrilled .")
                        .span(3)
                        .nuc(1, 3)
                        .sat(2, 3, "elaboration-additional")
                        .build();
  AuxAnnotations with_coref = AuxBuilder()
                                  .tok("They", "they", "PRP", 2, "nsubj")
                                  .tok("met", "meet", "VBD", 0, "root")
                                  .tok("Kim", "Kim", "NNP", 2, "obj")
                                  .tok(".", ".", ".", 2, "punct")
                                  .sent()
                                  .tok("She", "she", "PRP", 7, "nsubj")
                                  .tok("was", "be", "VBD", 7, "cop")
                                  .tok("thrilled", "thrilled", "JJ", 0, "root")
                                  .tok(".", ".", ".", 7, "punct")
                                  .mention(1, 3, 3)
                                  .mention(1, 5, 5)
                                  .build();
  AuxAnnotations without_coref = with_coref;
  without_coref.mentions.clear();
  without_coref.has_coref = false;

  auto run_all = [&](const AuxAnnotations& aux) {
    std::vector<Signal> all;
    auto append = [&](InduceResult r) {
      all.insert(all.end(), r.signals.begin(), r.signals.end());
    };
    append(induce_graphical(g, aux, default_eligibility()));
    append(induce_syntactic_morphological(g, aux, default_eligibility()));
    if (aux.has_coref) append(induce_reference_semantic(g, aux, default_eligibility()));
    append(induce_lexical(g, aux, default_eligibility(), default_indicative_lexicon()));
    std::sort(all.begin(), all.end());
    return all;
  };
  std::vector<Signal> full = run_all(with_coref);
  std::vector<Signal> reduced = run_all(without_coref);
  std::vector<Signal> difference;
  std::set_difference(full.begin(), full.end(), reduced.begin(), reduced.end(),
                      std::back_inserter(difference));
  CHECK(full.size() == reduced.size() + difference.size());
  for (const auto& s : difference) {
    bool coref_family = s.type.major == SignalMajor::Reference ||
                        (s.type.major == SignalMajor::Semantic &&
                         (s.type.subtype == "repetition" || s.type.subtype == "attribution-source"));
    CHECK(coref_family);
  }
  CHECK(!difference.empty());
}

TEST_CASE("attribution sources resolve through conjoined predicates") {
  // The attribution predicate "said" is a bare conjunct inside its own EDU;
  // the subject hangs off the first verb, so resolution climbs the conj
  // link into the neighboring unit.
  DocumentGraph g = GraphBuilder()
                        .edu(1, "Kim smiled")
                        .edu(2, "and said")
                        .edu(3, "the plan would work")
                        .span(4)
                        .span(5)
                        .nuc(3, 4)
                        .sat(2, 4, "attribution-positive")
                        .nuc(4, 5)
                        .sat(1, 5, "context-background")
                        .build();
  REQUIRE(validate(g).valid());
  AuxAnnotations aux = AuxBuilder()
                           .tok("Kim", "Kim", "NNP", 2, "nsubj")
                           .tok("smiled", "smile", "VBD", 0, "root")
                           .tok("and", "and", "CC", 4, "cc")
                           .tok("said", "say", "VBD", 2, "conj")
                           .tok("the", "the", "DT", 6, "det")
                           .tok("plan", "plan", "NN", 8, "nsubj")
                           .tok("would", "would", "MD", 8, "aux")
                           .tok("work", "work", "VB", 4, "ccomp")
                           .coref()
                           .build();
  InduceResult result = induce_reference_semantic(g, aux, default_eligibility());
  REQUIRE(result.signals.size() == 1);
  CHECK(result.signals[0].type.combined() == "semantic:attribution-source");
  CHECK(result.signals[0].tokens == std::vector<int>{1});
}
