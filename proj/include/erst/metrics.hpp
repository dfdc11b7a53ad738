#pragma once

#include <map>
#include <string>
#include <vector>

#include "erst/model.hpp"
#include "erst/treeops.hpp"

namespace erst {

/// Zero-denominator convention used throughout: empty vs empty scores 1.0,
/// empty vs non-empty scores 0.0.
double ratio_with_convention(long long numerator, long long denominator, long long other_side);

struct ParsevalCounts {
  long long gold_decisions = 0;
  long long pred_decisions = 0;
  long long matched_span = 0;
  long long matched_nuclearity = 0;
  long long matched_relation = 0;
  long long matched_full = 0;
};

struct ParsevalScores {
  double S = 0, N = 0, R = 0, F = 0;
  ParsevalCounts counts;
};

struct SignalCounts {
  long long gold_signals = 0;
  long long pred_signals = 0;
  long long matched_signals = 0;
  long long gold_tokens = 0;
  long long pred_tokens = 0;
  long long matched_tokens = 0;
};

struct Prf {
  double precision = 0, recall = 0, f1 = 0;
};

struct SignalScores {
  Prf overall;
  std::map<SignalMajor, Prf> by_type;
  SignalCounts counts;
  std::map<SignalMajor, SignalCounts> counts_by_type;
};

/// Parseval precision metrics over binarized decision sequences: S matches
/// on the unordered span pair, N adds nuclearity, R adds the label, F all
/// three. Throws when the EDU segmentations have different sizes.
ParsevalScores parseval(const DecisionSequence& gold, const DecisionSequence& pred);

/// Same matching logic for secondary-edge records; the nuclearity slot
/// compares direction.
ParsevalScores parseval_secondary(const std::vector<SecondaryDecision>& gold,
                                  const std::vector<SecondaryDecision>& pred);

/// Unanchored signal precision/recall: signals are grouped by the pair of
/// endpoint yields of their edge plus the signal label; per group the
/// overlap is min(|gold group|, |pred group|).
SignalScores signal_prf(const DocumentGraph& gold, const DocumentGraph& pred);

/// Anchored variant: per group, gold and predicted signals are paired by a
/// maximum-weight assignment over token overlaps; numerators count
/// overlapping tokens, denominators total anchored tokens per side.
SignalScores signal_token_prf(const DocumentGraph& gold, const DocumentGraph& pred);

struct ScoreOptions {
  bool exclude_same_unit = false;  // drop same-unit decisions from Parseval
  int jobs = 1;                    // corpus-level parallelism
};

struct ScoreReport {
  ParsevalScores primary;
  ParsevalScores secondary;
  SignalScores unanchored;
  SignalScores anchored;
};

/// Scores one gold/predicted document pair: binarizes both, runs primary
/// and secondary Parseval plus both signal metrics. Throws when the token
/// sequences or EDU segmentations differ.
ScoreReport score_pair(const DocumentGraph& gold, const DocumentGraph& pred,
                       const ScoreOptions& options = {});

struct CorpusScore {
  ScoreReport micro;                                   // pooled counts
  std::vector<std::pair<std::string, double>> macro;   // mean of per-document ratios
  std::vector<std::pair<std::string, ScoreReport>> per_doc;
  std::vector<std::string> warnings;
};

/// Pairs documents by id, warns about missing/extra/unscorable ones and
/// scores the intersection.
CorpusScore score_corpus(const std::vector<DocumentGraph>& gold,
                         const std::vector<DocumentGraph>& pred,
                         const ScoreOptions& options = {});

/// Headline metrics under their stable field names (primary.S, ...,
/// signals.anchored.W_P, ...).
std::vector<std::pair<std::string, double>> flatten_scores(const ScoreReport& report);

/// Machine-readable key/value serialization (stable field names, counts
/// included) and the human-readable table.
std::string format_report_kv(const ScoreReport& report);
std::string format_corpus_kv(const CorpusScore& score, bool per_doc);
std::string format_report_table(const ScoreReport& report, bool per_type);
std::string format_corpus_table(const CorpusScore& score, bool per_doc, bool per_type);

}  // namespace erst
