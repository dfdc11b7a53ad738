#pragma once

#include <map>
#include <string>

#include "erst/model.hpp"
#include "erst/validate.hpp"

namespace erst {

struct RenderOptions {
  bool highlight_signals = true;
  int width = 0;  // scale the drawing to this width when > 0
  /// Fill color per signal major type; defaults follow the usual palette
  /// (dm red, orphan blue, syntactic cyan, semantic green, ...).
  std::map<SignalMajor, std::string> palette;
  ValidationPolicy policy;
};

/// Deterministic static SVG: EDU boxes in text order, the primary tree
/// above them with relation labels and per-relation signal-count badges,
/// secondary edges as distinct arcs below, signal-anchored tokens colored
/// by major type. Invalid graphs are refused.
std::string render_svg(const DocumentGraph& graph, const RenderOptions& options = {});

/// Indented outline, one line per node (id, kind, relation, yield, signal
/// summary), with secondary edges appended; stable for diffing.
std::string render_text(const DocumentGraph& graph, const RenderOptions& options = {});

}  // namespace erst
