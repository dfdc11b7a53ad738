#pragma once

#include <map>
#include <string>
#include <vector>

#include "erst/align.hpp"
#include "erst/induce.hpp"
#include "erst/model.hpp"
#include "erst/validate.hpp"

namespace erst {

class ParseError : public Error {
 public:
  ParseError(const std::string& file, int line, const std::string& message)
      : Error(file + ":" + std::to_string(line) + ": " + message), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Reads one document file, rejecting malformed XML, unknown labels,
/// dangling ids and out-of-range signal anchors with line context, then
/// validates the graph fully.
DocumentGraph read_document(const std::string& path);
DocumentGraph read_document_string(const std::string& content, const std::string& name);

/// Parses without cross-reference checks or validation, so that the
/// validator can report violations of structurally broken documents.
DocumentGraph read_document_lenient(const std::string& path);
DocumentGraph read_document_lenient_string(const std::string& content, const std::string& name);

/// Canonical serialization: fixed element and attribute order, UTF-8, LF
/// line endings; byte-identical for equal graphs. Refuses graphs with
/// structural validation errors under the given policy.
std::string write_document_string(const DocumentGraph& graph,
                                  const ValidationPolicy& policy = {});
void write_document(const DocumentGraph& graph, const std::string& path,
                    const ValidationPolicy& policy = {});

// Sidecar formats (tab-separated, one record per line, '#' comments):
//   lexicon:     surface [TAB DISCONT] [TAB CASED]   (discontinuous surfaces
//                use " ... " between the two parts)
//   map:         surface TAB label-or-class[,label-or-class...]
//                (discontinuous surfaces keyed by the parts joined with a space)
//   eligibility: major:subtype TAB label-or-class[,...] or *
//   indicative:  lemma TAB tag TAB label-or-class[,...]
//   aux tokens:  "# doc = ID" header per document, then
//                index TAB form TAB lemma TAB tag TAB head TAB deprel,
//                blank line = sentence break
//   coref:       docid TAB chain TAB start TAB end [TAB entity]
//   signals:     docid TAB edge TAB major TAB subtype TAB tokens(comma-sep)
DMLexicon read_dm_lexicon(const std::string& path);
DMRelationMap read_dm_relation_map(const std::string& path);
EligibilityTable read_eligibility(const std::string& path);
IndicativeLexicon read_indicative_lexicon(const std::string& path);

/// Keyed by doc id; a file without doc headers parses under the empty key.
std::map<std::string, AuxAnnotations> read_aux(const std::string& path);
std::map<std::string, std::vector<Mention>> read_coref(const std::string& path);
std::vector<ExternalSignal> read_signal_list(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

/// "12" -> primary edge ref; "12-99" -> secondary (handles negative ids).
SignalEdgeRef parse_edge_ref(const std::string& text, const std::string& file, int line);
std::string format_edge_ref(const SignalEdgeRef& edge);

}  // namespace erst
