#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "erst/model.hpp"

namespace erst {

struct StatsOptions {
  /// same-unit is a pseudo-relation; it is excluded from relation totals
  /// unless this is set.
  bool include_same_unit = false;
  /// Overrides for genre extraction (doc id prefix -> genre).
  std::map<std::string, std::string> genre_overrides;
};

/// Genre from the document-id prefix convention ("GUM_news_x" -> "news").
std::string genre_of(const std::string& doc_id,
                     const std::map<std::string, std::string>& overrides = {});

enum class StatsGroupBy { None, Genre, Document };

struct MarkingRow {
  std::string group;
  long long dms = 0;
  long long orphans = 0;
  long long dms_plus_orphans = 0;
  long long relations = 0;  // n-ary attachments + secondary edges
  double markers_per_rel = 0;
  long long secedges = 0;
  double pct_secedge = 0;  // percentage
};

/// DM / orphan / secondary-edge tallies per group, mirroring the corpus
/// overview tables. Relations count one per satellite attachment plus one
/// per multinuclear child beyond the first, with secondary edges included.
std::vector<MarkingRow> relation_marking_stats(const std::vector<DocumentGraph>& corpus,
                                               StatsGroupBy group_by,
                                               const StatsOptions& options = {});

enum class SignalDistBy { CoarseClass, Genre };

struct SignalDistRow {
  std::string group;
  long long relations = 0;
  std::map<SignalMajor, double> fraction;  // share of instances with >= 1 signal of the type
  double any = 0;                          // share with any signal at all
};

std::vector<SignalDistRow> signal_distribution(const std::vector<DocumentGraph>& corpus,
                                               SignalDistBy by, const StatsOptions& options = {});

enum class MarkerKind { Dm, Lexical };

struct MarkerRow {
  std::string item;
  long long frequency = 0;
};

/// Most frequent DM or lexical indicative-word surfaces anchored to
/// relations of a coarse class; ties break alphabetically.
std::vector<MarkerRow> top_markers(const std::vector<DocumentGraph>& corpus,
                                   const std::string& coarse, MarkerKind kind, std::size_t n,
                                   const StatsOptions& options = {});

struct SecondaryRow {
  std::string relation;
  long long primary = 0;
  long long secondary = 0;
  double pct_secondary = 0;  // percentage of the total
};

/// Primary/secondary counts per fine-grained relation, filtered to
/// relations with more than `threshold` secondary instances.
std::vector<SecondaryRow> secondary_proportions(const std::vector<DocumentGraph>& corpus,
                                                long long threshold = 5,
                                                const StatsOptions& options = {});

struct ExtractQuery {
  std::string relation;               // fine label or coarse class; empty = all
  std::optional<SignalMajor> signal_major;
  std::string signal_subtype;         // with signal_major; empty = any subtype
  std::string surface;                // required anchored token text (folded)
  bool attribution_bundle = false;    // collect source/predicate token spans
};

struct ExtractRecord {
  std::string doc_id;
  std::string relation;
  bool secondary = false;
  std::vector<NodeId> child_yield;   // satellite/source EDU ids
  std::vector<NodeId> parent_yield;  // nucleus-side/target EDU ids
  std::vector<Signal> signals;       // all signals on the instance
  std::vector<int> source_tokens;    // attribution bundle
  std::vector<int> predicate_tokens;
};

/// Every relation instance matching the conjunctive filter, with its
/// signals and scopes.
std::vector<ExtractRecord> extract(const std::vector<DocumentGraph>& corpus,
                                   const ExtractQuery& query, const StatsOptions& options = {});

std::string format_marking_tsv(const std::vector<MarkingRow>& rows);
std::string format_marking_table(const std::vector<MarkingRow>& rows);
std::string format_signal_dist_tsv(const std::vector<SignalDistRow>& rows);
std::string format_signal_dist_table(const std::vector<SignalDistRow>& rows);
std::string format_markers_tsv(const std::vector<MarkerRow>& rows);
std::string format_secondary_tsv(const std::vector<SecondaryRow>& rows);
std::string format_secondary_table(const std::vector<SecondaryRow>& rows);
std::string format_extract_tsv(const std::vector<ExtractRecord>& records);

}  // namespace erst
