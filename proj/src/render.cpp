#include "erst/render.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace erst {

namespace {

std::map<SignalMajor, std::string> default_palette() {
  return {
      {SignalMajor::Dm, "#c62828"},            // red
      {SignalMajor::Orphan, "#1565c0"},        // blue
      {SignalMajor::Syntactic, "#00838f"},     // cyan
      {SignalMajor::Semantic, "#2e7d32"},      // green
      {SignalMajor::Lexical, "#b8860b"},       // yellow
      {SignalMajor::Graphical, "#cfb53b"},     // pale yellow
      {SignalMajor::Reference, "#616161"},     // gray
      {SignalMajor::Morphological, "#8d6e63"}, // tan
      {SignalMajor::Numerical, "#ad1457"},     // pink
  };
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '&')
      out += "&amp;";
    else if (c == '<')
      out += "&lt;";
    else if (c == '>')
      out += "&gt;";
    else if (c == '"')
      out += "&quot;";
    else
      out += c;
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

struct Layout {
  const DocumentGraph& g;
  GraphIndex idx;
  std::map<NodeId, int> depth;       // EDUs at 0
  std::vector<double> edu_left;      // box geometry per EDU position
  std::vector<double> edu_width;
  int max_depth = 0;

  static constexpr double kCharWidth = 7.2;
  static constexpr double kBoxPad = 8.0;
  static constexpr double kGap = 14.0;
  static constexpr double kLevel = 58.0;
  static constexpr double kBoxHeight = 40.0;
  static constexpr double kTopMargin = 26.0;
  static constexpr double kSecondaryLane = 46.0;

  explicit Layout(const DocumentGraph& graph) : g(graph), idx(GraphIndex::build(graph)) {
    for (const auto& node : g.nodes) node_depth(node.id);
    for (const auto& node : g.nodes) max_depth = std::max(max_depth, depth[node.id]);
    double x = kGap;
    for (const auto& edu : g.edus) {
      double w = 2 * kBoxPad;
      for (int t = edu.first_token; t <= edu.last_token; ++t)
        w += (g.tokens[t - 1].form.size() + 1) * kCharWidth;
      w = std::max(w, 48.0);
      edu_left.push_back(x);
      edu_width.push_back(w);
      x += w + kGap;
    }
  }

  int node_depth(NodeId id) {
    auto it = depth.find(id);
    if (it != depth.end()) return it->second;
    depth[id] = 0;  // breaks cycles; invalid graphs are rejected upstream
    int d = 0;
    for (const Attachment* att : idx.children_of(id))
      d = std::max(d, node_depth(att->child) + 1);
    depth[id] = d;
    return d;
  }

  double total_width() const {
    return edu_left.empty() ? 2 * kGap : edu_left.back() + edu_width.back() + kGap;
  }
  double edu_top() const { return kTopMargin + max_depth * kLevel; }
  double total_height() const { return edu_top() + kBoxHeight + kSecondaryLane + kGap; }

  double center_x(NodeId id) const {
    const auto& ys = idx.yield_positions(id);
    if (ys.empty()) return kGap;
    double left = edu_left[ys.front()];
    double right = edu_left[ys.back()] + edu_width[ys.back()];
    return (left + right) / 2.0;
  }
  double top_y(NodeId id) const { return edu_top() - depth.at(id) * kLevel; }
};

}  // namespace

std::string render_svg(const DocumentGraph& graph, const RenderOptions& options) {
  require_valid(graph, "render_svg", options.policy);
  Layout layout(graph);
  std::map<SignalMajor, std::string> palette = default_palette();
  for (const auto& [major, color] : options.palette) palette[major] = color;

  // Token -> highlight color (first signal in canonical order wins) and
  // signal counts per edge for the badges.
  std::map<int, std::string> token_color;
  std::map<NodeId, int> primary_signal_count;
  std::map<std::pair<NodeId, NodeId>, int> secondary_signal_count;
  std::vector<Signal> ordered_signals = graph.signals;
  std::sort(ordered_signals.begin(), ordered_signals.end());
  for (const auto& signal : ordered_signals) {
    if (signal.edge.is_secondary)
      ++secondary_signal_count[{signal.edge.source, signal.edge.target}];
    else
      ++primary_signal_count[signal.edge.child];
    if (options.highlight_signals)
      for (int t : signal.tokens)
        token_color.emplace(t, palette[signal.type.major]);
  }

  std::ostringstream os;
  double width = layout.total_width();
  double height = layout.total_height();
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
     << (options.width > 0 ? std::to_string(options.width) : num(width)) << "\" height=\""
     << num(options.width > 0 ? height * options.width / width : height) << "\" viewBox=\"0 0 "
     << num(width) << " " << num(height) << "\" font-family=\"Helvetica, Arial, sans-serif\">\n";
  os << "  <defs>\n"
     << "    <marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"9\" refY=\"5\" markerWidth=\"7\" "
        "markerHeight=\"7\" orient=\"auto-start-reverse\">\n"
     << "      <path d=\"M 0 0 L 10 5 L 0 10 z\" fill=\"#444444\"/>\n"
     << "    </marker>\n"
     << "    <marker id=\"arrow-sec\" viewBox=\"0 0 10 10\" refX=\"9\" refY=\"5\" "
        "markerWidth=\"7\" markerHeight=\"7\" orient=\"auto-start-reverse\">\n"
     << "      <path d=\"M 0 0 L 10 5 L 0 10 z\" fill=\"#1565c0\"/>\n"
     << "    </marker>\n"
     << "  </defs>\n";

  // EDU boxes with token text.
  for (std::size_t pos = 0; pos < graph.edus.size(); ++pos) {
    const Edu& edu = graph.edus[pos];
    double x = layout.edu_left[pos];
    double y = layout.edu_top();
    os << "  <rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\""
       << num(layout.edu_width[pos]) << "\" height=\"" << num(Layout::kBoxHeight)
       << "\" fill=\"#fefef6\" stroke=\"#777777\"/>\n";
    os << "  <text x=\"" << num(x + Layout::kBoxPad) << "\" y=\"" << num(y + 17)
       << "\" font-size=\"12\">";
    for (int t = edu.first_token; t <= edu.last_token; ++t) {
      auto it = token_color.find(t);
      if (t > edu.first_token) os << " ";
      if (it != token_color.end())
        os << "<tspan fill=\"" << it->second << "\" font-weight=\"bold\">"
           << xml_escape(graph.tokens[t - 1].form) << "</tspan>";
      else
        os << xml_escape(graph.tokens[t - 1].form);
    }
    os << "</text>\n";
    os << "  <text x=\"" << num(x + Layout::kBoxPad) << "\" y=\"" << num(y + 33)
       << "\" font-size=\"10\" fill=\"#999999\">" << edu.id << "</text>\n";
  }

  auto badge = [&](double x, double y, int count) {
    if (count <= 0) return;
    os << "  <circle cx=\"" << num(x) << "\" cy=\"" << num(y)
       << "\" r=\"7\" fill=\"#ffffff\" stroke=\"#888888\"/>\n";
    os << "  <text x=\"" << num(x) << "\" y=\"" << num(y + 3.5)
       << "\" font-size=\"9\" text-anchor=\"middle\" fill=\"#333333\">" << count << "</text>\n";
  };

  // Primary tree: span bars, nucleus drops, satellite arrows, multinuc fans.
  std::vector<Node> nodes = graph.nodes;
  std::sort(nodes.begin(), nodes.end(), [](const Node& a, const Node& b) { return a.id < b.id; });
  for (const auto& node : nodes) {
    const auto& ys = layout.idx.yield_positions(node.id);
    if (ys.empty() || layout.idx.is_edu(node.id)) continue;
    double y = layout.top_y(node.id);
    double left = layout.edu_left[ys.front()] + 4;
    double right = layout.edu_left[ys.back()] + layout.edu_width[ys.back()] - 4;
    os << "  <line x1=\"" << num(left) << "\" y1=\"" << num(y) << "\" x2=\"" << num(right)
       << "\" y2=\"" << num(y) << "\" stroke=\"#555555\"/>\n";
  }
  std::vector<Attachment> attachments = graph.attachments;
  std::sort(attachments.begin(), attachments.end(),
            [](const Attachment& a, const Attachment& b) { return a.child < b.child; });
  for (const auto& att : attachments) {
    double cx = layout.center_x(att.child);
    double cy = layout.top_y(att.child);
    double px = layout.center_x(att.parent);
    double py = layout.top_y(att.parent);
    if (att.role == NuclearityRole::Nucleus) {
      os << "  <line x1=\"" << num(cx) << "\" y1=\"" << num(py) << "\" x2=\"" << num(cx)
         << "\" y2=\"" << num(cy) << "\" stroke=\"#555555\"/>\n";
      continue;
    }
    if (att.role == NuclearityRole::MultinucChild) {
      os << "  <line x1=\"" << num(px) << "\" y1=\"" << num(py) << "\" x2=\"" << num(cx)
         << "\" y2=\"" << num(cy) << "\" stroke=\"#555555\"/>\n";
      double mx = (px + cx) / 2, my = (py + cy) / 2;
      os << "  <text x=\"" << num(mx) << "\" y=\"" << num(my - 4)
         << "\" font-size=\"10\" text-anchor=\"middle\" fill=\"#333333\">"
         << xml_escape(att.relation.value_or("")) << "</text>\n";
      badge(mx + 4 + 3.0 * att.relation.value_or("").size(), my - 8,
            primary_signal_count.count(att.child) ? primary_signal_count[att.child] : 0);
      continue;
    }
    // Satellite: curved arrow toward the nucleus line under the parent bar.
    double apex_y = py + 10;
    os << "  <path d=\"M " << num(cx) << " " << num(cy) << " Q " << num((cx + px) / 2) << " "
       << num(apex_y) << " " << num(px) << " " << num(py + 4)
       << "\" fill=\"none\" stroke=\"#444444\" marker-end=\"url(#arrow)\"/>\n";
    double mx = (cx + px) / 2, my = (cy + apex_y) / 2;
    os << "  <text x=\"" << num(mx) << "\" y=\"" << num(my - 4)
       << "\" font-size=\"10\" font-style=\"italic\" text-anchor=\"middle\" fill=\"#333333\">"
       << xml_escape(att.relation.value_or("")) << "</text>\n";
    badge(mx + 4 + 3.0 * att.relation.value_or("").size(), my - 8,
          primary_signal_count.count(att.child) ? primary_signal_count[att.child] : 0);
  }

  // Secondary edges: dashed blue arcs in a lane below the EDU boxes.
  std::vector<SecondaryEdge> secondary = graph.secondary;
  std::sort(secondary.begin(), secondary.end(),
            [](const SecondaryEdge& a, const SecondaryEdge& b) {
              return std::tuple(a.source, a.target, a.relation) <
                     std::tuple(b.source, b.target, b.relation);
            });
  double lane = layout.edu_top() + Layout::kBoxHeight;
  int slot = 0;
  for (const auto& edge : secondary) {
    double sx = layout.center_x(edge.source);
    double tx = layout.center_x(edge.target);
    double dip = lane + 18 + 10 * (slot % 3);
    os << "  <path d=\"M " << num(sx) << " " << num(lane) << " Q " << num((sx + tx) / 2) << " "
       << num(dip + 14) << " " << num(tx) << " " << num(lane)
       << "\" fill=\"none\" stroke=\"#1565c0\" stroke-dasharray=\"5,3\" "
          "marker-end=\"url(#arrow-sec)\"/>\n";
    os << "  <text x=\"" << num((sx + tx) / 2) << "\" y=\"" << num(dip + 10)
       << "\" font-size=\"10\" text-anchor=\"middle\" fill=\"#1565c0\">"
       << xml_escape(edge.relation) << "</text>\n";
    badge((sx + tx) / 2 + 4 + 3.0 * edge.relation.size(), dip + 6,
          secondary_signal_count.count({edge.source, edge.target})
              ? secondary_signal_count[{edge.source, edge.target}]
              : 0);
    ++slot;
  }
  os << "</svg>\n";
  return os.str();
}

namespace {

void outline_node(const DocumentGraph& g, const GraphIndex& idx,
                  const std::map<NodeId, int>& primary_signal_count, NodeId id, int indent,
                  std::ostringstream& os) {
  const Node& node = idx.node(id);
  const auto& ys = idx.yield_positions(id);
  os << std::string(indent * 2, ' ') << id << ' ';
  switch (node.kind) {
    case NodeKind::Edu: os << "edu"; break;
    case NodeKind::Span: os << "span"; break;
    case NodeKind::Multinuc: os << "multinuc"; break;
  }
  const Attachment* att = idx.attachment_of(id);
  os << ' ' << (att && att->relation ? *att->relation : (att ? "span" : "root"));
  if (!ys.empty()) {
    os << ' ' << g.edus[ys.front()].id;
    if (ys.size() > 1) os << '-' << g.edus[ys.back()].id;
  }
  auto count = primary_signal_count.find(id);
  if (count != primary_signal_count.end()) os << " sig:" << count->second;
  os << '\n';
  std::vector<const Attachment*> children = idx.children_of(id);
  std::sort(children.begin(), children.end(), [&](const Attachment* a, const Attachment* b) {
    return idx.yield_span(a->child).first < idx.yield_span(b->child).first;
  });
  for (const Attachment* child : children)
    outline_node(g, idx, primary_signal_count, child->child, indent + 1, os);
}

}  // namespace

std::string render_text(const DocumentGraph& graph, const RenderOptions& options) {
  require_valid(graph, "render_text", options.policy);
  GraphIndex idx = GraphIndex::build(graph);
  std::map<NodeId, int> primary_signal_count;
  std::map<std::pair<NodeId, NodeId>, int> secondary_signal_count;
  for (const auto& signal : graph.signals) {
    if (signal.edge.is_secondary)
      ++secondary_signal_count[{signal.edge.source, signal.edge.target}];
    else
      ++primary_signal_count[signal.edge.child];
  }
  std::ostringstream os;
  if (!graph.nodes.empty())
    outline_node(graph, idx, primary_signal_count, idx.root(), 0, os);
  std::vector<SecondaryEdge> secondary = graph.secondary;
  std::sort(secondary.begin(), secondary.end(),
            [](const SecondaryEdge& a, const SecondaryEdge& b) {
              return std::tuple(a.source, a.target, a.relation) <
                     std::tuple(b.source, b.target, b.relation);
            });
  for (const auto& edge : secondary) {
    os << "secedge " << edge.source << "->" << edge.target << ' ' << edge.relation;
    auto count = secondary_signal_count.find({edge.source, edge.target});
    if (count != secondary_signal_count.end()) os << " sig:" << count->second;
    os << '\n';
  }
  return os.str();
}

}  // namespace erst
