#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "erst/model.hpp"

namespace erst {

struct AuxToken {
  int index = 0;  // 1-based, document-wide
  std::string form;
  std::string lemma;
  std::string pos;  // PTB-style tag
  int head = 0;     // document-wide token index, 0 = sentence root
  std::string deprel;
};

struct Mention {
  int chain = 0;
  int start = 0;  // token span, inclusive
  int end = 0;
  std::string entity;
};

/// Supplied auxiliary annotation layers. Token indices align with the
/// document's tokens; dependencies are trees per sentence.
struct AuxAnnotations {
  std::vector<AuxToken> tokens;
  std::vector<std::pair<int, int>> sentences;  // token ranges
  std::vector<Mention> mentions;
  bool has_coref = false;

  bool has_dependencies() const {
    for (const auto& t : tokens)
      if (t.head != 0 || (!t.deprel.empty() && t.deprel != "_")) return true;
    return false;
  }
};

/// Gate deciding which relations may receive which induced signal type.
/// The entry "*" admits every relation; coarse classes match by prefix.
struct EligibilityTable {
  std::map<std::pair<SignalMajor, std::string>, std::set<std::string>> eligible;

  bool allows(const SignalType& type, const std::string& relation) const;
};

EligibilityTable default_eligibility();

/// (lemma, PTB tag) -> relation labels or coarse classes it indicates.
struct IndicativeLexicon {
  std::map<std::pair<std::string, std::string>, std::set<std::string>> items;
};

IndicativeLexicon default_indicative_lexicon();

// Numerical same-count signals require matching numerals against
// enumerations and are not induced automatically; parallel syntactic
// constructions likewise arrive only via ingest_external_signals.
struct InduceResult {
  std::vector<Signal> signals;
  std::vector<std::string> review;  // candidates requiring manual verification
};

/// Punctuation-based signals: question marks on topic relations, paired
/// parentheses or quotes enclosing a satellite, colon/dash/semicolon at the
/// satellite-nucleus boundary. Layout signals need layout metadata, which
/// the token format does not carry, so they are never induced.
InduceResult induce_graphical(const DocumentGraph& graph, const AuxAnnotations& aux,
                              const EligibilityTable& eligibility);

/// Dependency-based rules: adnominal (relative/infinitival) clauses,
/// reported speech, imperative and conditional mood, past perfect tense,
/// subject-auxiliary inversion. Tense sequences over joint-sequence go to
/// the review channel only. Throws when the dependency layer is missing.
InduceResult induce_syntactic_morphological(const DocumentGraph& graph,
                                            const AuxAnnotations& aux,
                                            const EligibilityTable& eligibility);

/// Coreference-based rules: personal/demonstrative reference across a
/// relation, repetition with matching head lemmas, and attribution sources
/// from the subject of the attribution predicate (unresolvable sources
/// become review items). Throws when the coreference layer is missing.
InduceResult induce_reference_semantic(const DocumentGraph& graph, const AuxAnnotations& aux,
                                       const EligibilityTable& eligibility);

/// Indicative-word signals: tokens in a relation's child span whose
/// (lemma, tag) pair the lexicon associates with that relation.
InduceResult induce_lexical(const DocumentGraph& graph, const AuxAnnotations& aux,
                            const EligibilityTable& eligibility,
                            const IndicativeLexicon& lexicon);

/// Appends signals, dropping exact (edge, type, tokens) duplicates.
DocumentGraph merge_signals(const DocumentGraph& graph, const std::vector<Signal>& signals);

struct ExternalSignal {
  std::string doc_id;
  SignalEdgeRef edge;
  SignalType type;
  std::vector<int> tokens;
  int line = 0;
};

/// Merges externally produced signals (manual annotation, mined lexical
/// chains) into the graph. Dangling edge references are rejected with their
/// line numbers; the merged graph is revalidated.
DocumentGraph ingest_external_signals(const DocumentGraph& graph,
                                      const std::vector<ExternalSignal>& signals);

}  // namespace erst
