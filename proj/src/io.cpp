#include "erst/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "erst/validate.hpp"

namespace erst {

namespace {

// ---------------------------------------------------------------------------
// Minimal strict XML subset: elements, attributes, text, comments, the
// standard prolog. No namespaces, CDATA or DOCTYPE. Line numbers throughout.

struct XmlAttr {
  std::string name;
  std::string value;
  int line = 0;
};

struct XmlElement {
  std::string name;
  std::vector<XmlAttr> attrs;
  std::vector<XmlElement> children;
  std::string text;
  int line = 0;

  const XmlAttr* find(const std::string& attr) const {
    for (const auto& a : attrs)
      if (a.name == attr) return &a;
    return nullptr;
  }
  std::string attr_or(const std::string& attr, const std::string& fallback) const {
    const XmlAttr* a = find(attr);
    return a ? a->value : fallback;
  }
};

class XmlParser {
 public:
  XmlParser(const std::string& content, std::string file)
      : s_(content), file_(std::move(file)) {}

  XmlElement parse() {
    skip_prolog();
    XmlElement root = parse_element();
    skip_ws();
    if (pos_ != s_.size()) fail("trailing content after the root element");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(file_, line_, message);
  }
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  char get() {
    if (pos_ >= s_.size()) fail("unexpected end of file");
    char c = s_[pos_++];
    if (c == '\n') ++line_;
    return c;
  }
  bool consume(const char* literal) {
    std::size_t n = std::char_traits<char>::length(literal);
    if (s_.compare(pos_, n, literal) != 0) return false;
    for (std::size_t i = 0; i < n; ++i) get();
    return true;
  }
  void skip_ws() {
    while (pos_ < s_.size() && (peek() == ' ' || peek() == '\t' || peek() == '\n' ||
                                peek() == '\r'))
      get();
  }
  void skip_prolog() {
    skip_ws();
    if (consume("<?xml")) {
      while (!consume("?>")) get();
    }
    skip_ws();
    while (consume("<!--")) {
      while (!consume("-->")) get();
      skip_ws();
    }
  }

  std::string parse_name() {
    std::string name;
    while (pos_ < s_.size()) {
      char c = peek();
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == ':' ||
          c == '.')
        name += get();
      else
        break;
    }
    if (name.empty()) fail("expected a name");
    return name;
  }

  std::string decode_entities(const std::string& raw, int line) const {
    std::string out;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] != '&') {
        out += raw[i];
        continue;
      }
      std::size_t semi = raw.find(';', i);
      if (semi == std::string::npos) throw ParseError(file_, line, "unterminated entity");
      std::string entity = raw.substr(i + 1, semi - i - 1);
      if (entity == "amp")
        out += '&';
      else if (entity == "lt")
        out += '<';
      else if (entity == "gt")
        out += '>';
      else if (entity == "quot")
        out += '"';
      else if (entity == "apos")
        out += '\'';
      else if (!entity.empty() && entity[0] == '#') {
        int code = 0;
        bool hex = entity.size() > 1 && (entity[1] == 'x' || entity[1] == 'X');
        auto digits = entity.substr(hex ? 2 : 1);
        auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), code,
                                       hex ? 16 : 10);
        if (ec != std::errc() || p != digits.data() + digits.size() || code <= 0)
          throw ParseError(file_, line, "bad character reference '&" + entity + ";'");
        // UTF-8 encode.
        if (code < 0x80) {
          out += static_cast<char>(code);
        } else if (code < 0x800) {
          out += static_cast<char>(0xC0 | (code >> 6));
          out += static_cast<char>(0x80 | (code & 0x3F));
        } else if (code < 0x10000) {
          out += static_cast<char>(0xE0 | (code >> 12));
          out += static_cast<char>(0x80 | ((code >> 6) & 0x3F));
          out += static_cast<char>(0x80 | (code & 0x3F));
        } else {
          out += static_cast<char>(0xF0 | (code >> 18));
          out += static_cast<char>(0x80 | ((code >> 12) & 0x3F));
          out += static_cast<char>(0x80 | ((code >> 6) & 0x3F));
          out += static_cast<char>(0x80 | (code & 0x3F));
        }
      } else {
        throw ParseError(file_, line, "unknown entity '&" + entity + ";'");
      }
      i = semi;
    }
    return out;
  }

  XmlElement parse_element() {
    skip_ws();
    if (peek() != '<') fail("expected an element");
    int start_line = line_;
    get();
    XmlElement el;
    el.line = start_line;
    el.name = parse_name();
    while (true) {
      skip_ws();
      if (consume("/>")) return el;
      if (consume(">")) break;
      XmlAttr attr;
      attr.line = line_;
      attr.name = parse_name();
      skip_ws();
      if (!consume("=")) fail("expected '=' after attribute name");
      skip_ws();
      char quote = get();
      if (quote != '"' && quote != '\'') fail("expected a quoted attribute value");
      std::string raw;
      while (peek() != quote) raw += get();
      get();
      attr.value = decode_entities(raw, attr.line);
      el.attrs.push_back(std::move(attr));
    }
    // Content: text and child elements until the closing tag.
    std::string raw_text;
    while (true) {
      if (pos_ >= s_.size()) fail("unterminated element '" + el.name + "'");
      if (peek() == '<') {
        if (consume("<!--")) {
          while (!consume("-->")) get();
          continue;
        }
        if (s_.compare(pos_, 2, "</") == 0) {
          consume("</");
          std::string closing = parse_name();
          if (closing != el.name)
            fail("mismatched closing tag '" + closing + "' for '" + el.name + "'");
          skip_ws();
          if (!consume(">")) fail("malformed closing tag");
          break;
        }
        el.children.push_back(parse_element());
        continue;
      }
      raw_text += get();
    }
    el.text = decode_entities(raw_text, start_line);
    return el;
  }

  const std::string& s_;
  std::string file_;
  std::size_t pos_ = 0;
  int line_ = 1;
};

std::string escape_text(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '&')
      out += "&amp;";
    else if (c == '<')
      out += "&lt;";
    else if (c == '>')
      out += "&gt;";
    else
      out += c;
  }
  return out;
}

std::string escape_attr(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '&')
      out += "&amp;";
    else if (c == '<')
      out += "&lt;";
    else if (c == '"')
      out += "&quot;";
    else
      out += c;
  }
  return out;
}

int parse_int(const std::string& text, const std::string& file, int line,
              const std::string& what) {
  int value = 0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || p != text.data() + text.size())
    throw ParseError(file, line, what + " '" + text + "' is not an integer");
  return value;
}

std::vector<std::string> split_ws(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  std::string word;
  while (is >> word) out.push_back(word);
  return out;
}

std::string path_stem(const std::string& path) {
  std::size_t slash = path.find_last_of("/\\");
  std::string name = slash == std::string::npos ? path : path.substr(slash + 1);
  std::size_t dot = name.find_last_of('.');
  return dot == std::string::npos ? name : name.substr(0, dot);
}

DocumentGraph build_document(const XmlElement& root, const std::string& file,
                             const std::string& fallback_id, bool strict) {
  if (root.name != "erst")
    throw ParseError(file, root.line, "root element is '" + root.name + "', expected 'erst'");
  if (strict && !root.find("version"))
    throw ParseError(file, root.line, "missing format version attribute");

  DocumentGraph g;
  g.doc_id = root.attr_or("doc", fallback_id);

  const XmlElement* header = nullptr;
  const XmlElement* body = nullptr;
  for (const auto& child : root.children) {
    if (child.name == "header") header = &child;
    if (child.name == "body") body = &child;
  }
  if (!header) throw ParseError(file, root.line, "missing <header>");
  if (!body) throw ParseError(file, root.line, "missing <body>");

  for (const auto& section : header->children) {
    if (section.name == "relations") {
      for (const auto& rel : section.children) {
        if (rel.name != "rel") throw ParseError(file, rel.line, "expected <rel>");
        std::string kind = rel.attr_or("kind", "");
        if (kind != "satellite" && kind != "multinuclear")
          throw ParseError(file, rel.line, "relation kind must be satellite or multinuclear");
        g.inventory.push_back({rel.attr_or("name", ""),
                               kind == "satellite" ? RelationKind::Satellite
                                                   : RelationKind::Multinuclear});
        if (g.inventory.back().name.empty())
          throw ParseError(file, rel.line, "relation declaration lacks a name");
      }
    } else if (section.name == "signal-types") {
      for (const auto& sig : section.children) {
        if (sig.name != "sig") throw ParseError(file, sig.line, "expected <sig>");
        auto major = signal_major_from_string(sig.attr_or("major", ""));
        if (!major)
          throw ParseError(file, sig.line,
                           "unknown signal major type '" + sig.attr_or("major", "") + "'");
        g.signal_vocabulary.push_back({*major, sig.attr_or("subtype", "")});
      }
    }
  }

  struct RawSegment {
    NodeId id;
    const XmlElement* el;
  };
  std::vector<RawSegment> segments;
  std::map<NodeId, int> declared;  // id -> line

  auto parse_attachment = [&](const XmlElement& el, NodeId id) {
    const XmlAttr* parent = el.find("parent");
    std::string relname = el.attr_or("relname", "");
    if (!parent) {
      if (!relname.empty() && strict)
        throw ParseError(file, el.line, "element without a parent cannot carry a relname");
      return;
    }
    if (relname.empty())
      throw ParseError(file, el.line, "element with a parent needs a relname");
    Attachment att;
    att.child = id;
    att.parent = parse_int(parent->value, file, parent->line, "parent id");
    if (relname == "span") {
      att.role = NuclearityRole::Nucleus;
    } else {
      const RelationLabel* rel = nullptr;
      for (const auto& r : g.inventory)
        if (r.name == relname) rel = &r;
      if (!rel && strict)
        throw ParseError(file, el.line, "relname '" + relname + "' is not declared");
      att.relation = relname;
      att.role = rel && rel->kind == RelationKind::Multinuclear ? NuclearityRole::MultinucChild
                                                                : NuclearityRole::Satellite;
    }
    g.attachments.push_back(std::move(att));
  };

  for (const auto& el : body->children) {
    if (el.name == "segment" || el.name == "group") {
      const XmlAttr* id_attr = el.find("id");
      if (!id_attr) throw ParseError(file, el.line, "element lacks an id");
      NodeId id = parse_int(id_attr->value, file, id_attr->line, "id");
      if (declared.count(id) && strict)
        throw ParseError(file, el.line, "id " + std::to_string(id) + " declared twice (first at line " +
                                            std::to_string(declared[id]) + ")");
      declared.emplace(id, el.line);
      if (el.name == "segment") {
        segments.push_back({id, &el});
      } else {
        std::string kind = el.attr_or("kind", "");
        if (kind != "span" && kind != "multinuc")
          throw ParseError(file, el.line, "group kind must be span or multinuc");
        g.nodes.push_back({id, kind == "span" ? NodeKind::Span : NodeKind::Multinuc});
        parse_attachment(el, id);
      }
    } else if (el.name == "secedge") {
      SecondaryEdge edge;
      const XmlAttr* src = el.find("source");
      const XmlAttr* tgt = el.find("target");
      if (!src || !tgt) throw ParseError(file, el.line, "secedge needs source and target");
      edge.source = parse_int(src->value, file, src->line, "source id");
      edge.target = parse_int(tgt->value, file, tgt->line, "target id");
      edge.relation = el.attr_or("relname", "");
      if (edge.relation.empty()) throw ParseError(file, el.line, "secedge lacks a relname");
      if (strict && !el.attr_or("id", "").empty()) {
        std::string canon = std::to_string(edge.source) + "-" + std::to_string(edge.target);
        if (el.attr_or("id", "") != canon)
          throw ParseError(file, el.line, "secedge id '" + el.attr_or("id", "") +
                                              "' does not match '" + canon + "'");
      }
      g.secondary.push_back(std::move(edge));
    } else if (el.name == "signal") {
      const XmlAttr* edge = el.find("edge");
      if (!edge) throw ParseError(file, el.line, "signal lacks an edge reference");
      Signal signal;
      signal.edge = parse_edge_ref(edge->value, file, edge->line);
      auto major = signal_major_from_string(el.attr_or("major", ""));
      if (!major)
        throw ParseError(file, el.line,
                         "unknown signal major type '" + el.attr_or("major", "") + "'");
      signal.type = {*major, el.attr_or("subtype", "")};
      std::string tokens = el.attr_or("tokens", "");
      std::size_t start = 0;
      while (start < tokens.size()) {
        std::size_t comma = tokens.find(',', start);
        std::string item = tokens.substr(start, comma == std::string::npos ? std::string::npos
                                                                           : comma - start);
        if (!item.empty())
          signal.tokens.push_back(parse_int(item, file, el.line, "signal token"));
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
      std::sort(signal.tokens.begin(), signal.tokens.end());
      signal.tokens.erase(std::unique(signal.tokens.begin(), signal.tokens.end()),
                          signal.tokens.end());
      g.signals.push_back(std::move(signal));
    } else {
      throw ParseError(file, el.line, "unexpected element <" + el.name + "> in <body>");
    }
  }

  // Tokens from segment text, in segment-id order.
  std::sort(segments.begin(), segments.end(),
            [](const RawSegment& a, const RawSegment& b) { return a.id < b.id; });
  for (const auto& seg : segments) {
    std::vector<std::string> forms = split_ws(seg.el->text);
    if (forms.empty())
      throw ParseError(file, seg.el->line,
                       "segment " + std::to_string(seg.id) + " has no tokens");
    Edu edu;
    edu.id = seg.id;
    edu.first_token = static_cast<int>(g.tokens.size()) + 1;
    for (auto& form : forms) {
      g.tokens.push_back({static_cast<int>(g.tokens.size()) + 1, std::move(form)});
    }
    edu.last_token = static_cast<int>(g.tokens.size());
    g.edus.push_back(edu);
    g.nodes.push_back({seg.id, NodeKind::Edu});
    parse_attachment(*seg.el, seg.id);
  }
  std::sort(g.nodes.begin(), g.nodes.end(), [](const Node& a, const Node& b) {
    return a.id < b.id;
  });

  if (strict) {
    // Reference checks with line context before full validation.
    auto known = [&](NodeId id) { return declared.count(id) != 0; };
    for (const auto& el : body->children) {
      if (el.name == "segment" || el.name == "group") {
        const XmlAttr* parent = el.find("parent");
        if (parent && !known(parse_int(parent->value, file, parent->line, "parent id")))
          throw ParseError(file, el.line,
                           "parent id " + parent->value + " is not a declared node");
      } else if (el.name == "secedge") {
        for (const char* key : {"source", "target"}) {
          const XmlAttr* attr = el.find(key);
          if (attr && !known(parse_int(attr->value, file, attr->line, key)))
            throw ParseError(file, el.line, std::string(key) + " id " + attr->value +
                                                " is not a declared node");
        }
      } else if (el.name == "signal") {
        const XmlAttr* edge = el.find("edge");
        SignalEdgeRef ref = parse_edge_ref(edge->value, file, edge->line);
        if (ref.is_secondary) {
          bool found = false;
          for (const auto& e : g.secondary)
            if (e.source == ref.source && e.target == ref.target) found = true;
          if (!found)
            throw ParseError(file, el.line,
                             "signal references missing secondary edge '" + edge->value + "'");
        } else if (!known(ref.child)) {
          throw ParseError(file, el.line,
                           "signal references undeclared node " + std::to_string(ref.child));
        }
      }
    }
    for (const auto& signal : g.signals)
      for (int t : signal.tokens)
        if (t < 1 || t > static_cast<int>(g.tokens.size()))
          throw ParseError(file, root.line,
                           "signal anchors token " + std::to_string(t) +
                               " outside the document (document has " +
                               std::to_string(g.tokens.size()) + " tokens)");
  }
  return g;
}

}  // namespace

SignalEdgeRef parse_edge_ref(const std::string& text, const std::string& file, int line) {
  // Either a single node id or "source-target"; ids may be negative, so the
  // separator is any '-' splitting the string into two parseable ints.
  auto try_int = [](const std::string& s, int& out) {
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && p == s.data() + s.size() && !s.empty();
  };
  int whole = 0;
  if (try_int(text, whole)) return SignalEdgeRef::primary(whole);
  for (std::size_t i = 1; i + 1 < text.size(); ++i) {
    if (text[i] != '-') continue;
    int a = 0, b = 0;
    if (try_int(text.substr(0, i), a) && try_int(text.substr(i + 1), b))
      return SignalEdgeRef::secondary(a, b);
  }
  throw ParseError(file, line, "edge reference '" + text + "' is not a node id or source-target");
}

std::string format_edge_ref(const SignalEdgeRef& edge) {
  if (!edge.is_secondary) return std::to_string(edge.child);
  return std::to_string(edge.source) + "-" + std::to_string(edge.target);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << content;
}

DocumentGraph read_document_string(const std::string& content, const std::string& name) {
  XmlParser parser(content, name);
  DocumentGraph g = build_document(parser.parse(), name, path_stem(name), true);
  ValidationReport report = validate(g);
  if (!report.valid()) throw InvalidGraphError("'" + name + "' is not a valid document", report);
  return g;
}

DocumentGraph read_document(const std::string& path) {
  return read_document_string(read_file(path), path);
}

DocumentGraph read_document_lenient_string(const std::string& content, const std::string& name) {
  XmlParser parser(content, name);
  return build_document(parser.parse(), name, path_stem(name), false);
}

DocumentGraph read_document_lenient(const std::string& path) {
  return read_document_lenient_string(read_file(path), path);
}

std::string write_document_string(const DocumentGraph& graph, const ValidationPolicy& policy) {
  ValidationReport report = validate(graph, policy);
  if (!report.valid())
    throw InvalidGraphError("refusing to write invalid document '" + graph.doc_id + "'", report);

  DocumentGraph g = graph;  // canonical ordering below
  std::sort(g.inventory.begin(), g.inventory.end(),
            [](const RelationLabel& a, const RelationLabel& b) { return a.name < b.name; });
  std::sort(g.signal_vocabulary.begin(), g.signal_vocabulary.end());
  std::sort(g.edus.begin(), g.edus.end(), [](const Edu& a, const Edu& b) { return a.id < b.id; });
  std::sort(g.secondary.begin(), g.secondary.end(),
            [](const SecondaryEdge& a, const SecondaryEdge& b) {
              return std::tuple(a.source, a.target, a.relation) <
                     std::tuple(b.source, b.target, b.relation);
            });
  std::sort(g.signals.begin(), g.signals.end());

  GraphIndex idx = GraphIndex::build(graph);
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<erst version=\"1.0\" doc=\"" << escape_attr(g.doc_id) << "\">\n";
  os << "  <header>\n    <relations>\n";
  for (const auto& rel : g.inventory)
    os << "      <rel name=\"" << escape_attr(rel.name) << "\" kind=\""
       << (rel.kind == RelationKind::Satellite ? "satellite" : "multinuclear") << "\"/>\n";
  os << "    </relations>\n    <signal-types>\n";
  for (const auto& type : g.signal_vocabulary)
    os << "      <sig major=\"" << to_string(type.major) << "\" subtype=\""
       << escape_attr(type.subtype) << "\"/>\n";
  os << "    </signal-types>\n  </header>\n  <body>\n";

  auto attachment_attrs = [&](NodeId id) {
    std::string out;
    if (const Attachment* att = idx.attachment_of(id)) {
      out += " parent=\"" + std::to_string(att->parent) + "\"";
      out += " relname=\"" + escape_attr(att->relation.value_or("span")) + "\"";
    }
    return out;
  };

  for (const auto& edu : g.edus) {
    os << "    <segment id=\"" << edu.id << "\"" << attachment_attrs(edu.id) << ">";
    for (int t = edu.first_token; t <= edu.last_token; ++t) {
      if (t > edu.first_token) os << ' ';
      os << escape_text(g.tokens[t - 1].form);
    }
    os << "</segment>\n";
  }
  std::vector<Node> groups;
  for (const auto& node : g.nodes)
    if (node.kind != NodeKind::Edu) groups.push_back(node);
  std::sort(groups.begin(), groups.end(), [](const Node& a, const Node& b) { return a.id < b.id; });
  for (const auto& node : groups)
    os << "    <group id=\"" << node.id << "\" kind=\""
       << (node.kind == NodeKind::Span ? "span" : "multinuc") << "\""
       << attachment_attrs(node.id) << "/>\n";
  for (const auto& edge : g.secondary)
    os << "    <secedge id=\"" << edge.source << "-" << edge.target << "\" source=\""
       << edge.source << "\" target=\"" << edge.target << "\" relname=\""
       << escape_attr(edge.relation) << "\"/>\n";
  for (const auto& signal : g.signals) {
    os << "    <signal edge=\"" << format_edge_ref(signal.edge) << "\" major=\""
       << to_string(signal.type.major) << "\" subtype=\"" << escape_attr(signal.type.subtype)
       << "\" tokens=\"";
    for (std::size_t i = 0; i < signal.tokens.size(); ++i) {
      if (i) os << ',';
      os << signal.tokens[i];
    }
    os << "\"/>\n";
  }
  os << "  </body>\n</erst>\n";
  return os.str();
}

void write_document(const DocumentGraph& graph, const std::string& path,
                    const ValidationPolicy& policy) {
  write_file(path, write_document_string(graph, policy));
}

// ---------------------------------------------------------------------------
// Sidecar files.

namespace {

struct Line {
  int number = 0;
  std::string text;
};

std::vector<Line> data_lines(const std::string& content, bool keep_blank = false,
                             bool keep_comments = false) {
  std::vector<Line> out;
  std::istringstream is(content);
  std::string text;
  int number = 0;
  while (std::getline(is, text)) {
    ++number;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    bool blank = text.find_first_not_of(" \t") == std::string::npos;
    bool comment = !blank && text[text.find_first_not_of(" \t")] == '#';
    if ((blank && !keep_blank) || (comment && !keep_comments)) continue;
    out.push_back({number, text});
  }
  return out;
}

std::vector<std::string> split_tab(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = text.find('\t', start);
    out.push_back(text.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return out;
}

std::set<std::string> split_commas(const std::string& text) {
  std::set<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    std::string item =
        text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    while (!item.empty() && item.front() == ' ') item.erase(item.begin());
    while (!item.empty() && item.back() == ' ') item.pop_back();
    if (!item.empty()) out.insert(item);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string lower(const std::string& s) {
  std::string out = s;
  for (char& c : out)
    if (c >= 'A' && c <= 'Z') c += 'a' - 'A';
  return out;
}

}  // namespace

DMLexicon read_dm_lexicon(const std::string& path) {
  DMLexicon lexicon;
  std::set<std::string> seen;
  for (const Line& line : data_lines(read_file(path))) {
    auto fields = split_tab(line.text);
    DMLexiconEntry entry;
    std::string surface = fields[0];
    for (std::size_t i = 1; i < fields.size(); ++i) {
      if (fields[i] == "DISCONT")
        entry.discontinuous = true;
      else if (fields[i] == "CASED")
        entry.case_sensitive = true;
      else if (!fields[i].empty())
        throw ParseError(path, line.number, "unknown lexicon flag '" + fields[i] + "'");
    }
    if (entry.discontinuous) {
      std::size_t sep = surface.find(" ... ");
      if (sep == std::string::npos)
        throw ParseError(path, line.number,
                         "DISCONT entry must separate its parts with ' ... '");
      std::string first = surface.substr(0, sep);
      std::string second = surface.substr(sep + 5);
      entry.part1 = split_ws(entry.case_sensitive ? first : lower(first));
      entry.part2 = split_ws(entry.case_sensitive ? second : lower(second));
      entry.surface = first + " " + second;
      if (entry.part1.empty() || entry.part2.empty())
        throw ParseError(path, line.number, "DISCONT entry has an empty part");
    } else {
      entry.part1 = split_ws(entry.case_sensitive ? surface : lower(surface));
      entry.surface = surface;
      if (entry.part1.empty()) throw ParseError(path, line.number, "empty lexicon surface");
    }
    if (!seen.insert(lower(entry.surface) + (entry.discontinuous ? "\tD" : "")).second)
      throw ParseError(path, line.number, "duplicate lexicon surface '" + entry.surface + "'");
    lexicon.entries.push_back(std::move(entry));
  }
  return lexicon;
}

DMRelationMap read_dm_relation_map(const std::string& path) {
  DMRelationMap map;
  for (const Line& line : data_lines(read_file(path))) {
    auto fields = split_tab(line.text);
    if (fields.size() < 2)
      throw ParseError(path, line.number, "expected: surface TAB labels");
    auto labels = split_commas(fields[1]);
    if (labels.empty()) throw ParseError(path, line.number, "no relation labels given");
    map.classes[lower(fields[0])].insert(labels.begin(), labels.end());
  }
  return map;
}

EligibilityTable read_eligibility(const std::string& path) {
  EligibilityTable table;
  for (const Line& line : data_lines(read_file(path))) {
    auto fields = split_tab(line.text);
    if (fields.size() < 2)
      throw ParseError(path, line.number, "expected: major:subtype TAB labels");
    std::size_t colon = fields[0].find(':');
    if (colon == std::string::npos)
      throw ParseError(path, line.number, "signal type must be major:subtype");
    auto major = signal_major_from_string(fields[0].substr(0, colon));
    if (!major)
      throw ParseError(path, line.number,
                       "unknown signal major '" + fields[0].substr(0, colon) + "'");
    table.eligible[{*major, fields[0].substr(colon + 1)}] = split_commas(fields[1]);
  }
  return table;
}

IndicativeLexicon read_indicative_lexicon(const std::string& path) {
  IndicativeLexicon lexicon;
  for (const Line& line : data_lines(read_file(path))) {
    auto fields = split_tab(line.text);
    if (fields.size() < 3)
      throw ParseError(path, line.number, "expected: lemma TAB tag TAB labels");
    auto labels = split_commas(fields[2]);
    if (labels.empty()) throw ParseError(path, line.number, "no relation labels given");
    lexicon.items[{lower(fields[0]), fields[1]}].insert(labels.begin(), labels.end());
  }
  return lexicon;
}

std::map<std::string, AuxAnnotations> read_aux(const std::string& path) {
  std::map<std::string, AuxAnnotations> out;
  std::string current;
  AuxAnnotations* aux = &out[current];
  int sentence_start = 0;

  auto close_sentence = [&](int last) {
    if (sentence_start > 0 && last >= sentence_start)
      aux->sentences.emplace_back(sentence_start, last);
    sentence_start = 0;
  };

  for (const Line& line : data_lines(read_file(path), /*keep_blank=*/true,
                                     /*keep_comments=*/true)) {
    std::string trimmed = line.text;
    std::size_t first = trimmed.find_first_not_of(" \t");
    if (first == std::string::npos) {
      close_sentence(static_cast<int>(aux->tokens.size()));
      continue;
    }
    if (trimmed[first] == '#') {
      std::size_t eq = trimmed.find('=');
      if (trimmed.find("doc") != std::string::npos && eq != std::string::npos) {
        close_sentence(static_cast<int>(aux->tokens.size()));
        std::string id = trimmed.substr(eq + 1);
        while (!id.empty() && id.front() == ' ') id.erase(id.begin());
        while (!id.empty() && id.back() == ' ') id.pop_back();
        current = id;
        aux = &out[current];
        sentence_start = 0;
      }
      continue;
    }
    auto fields = split_tab(line.text);
    if (fields.size() < 6)
      throw ParseError(path, line.number,
                       "expected: index TAB form TAB lemma TAB tag TAB head TAB deprel");
    AuxToken token;
    token.index = parse_int(fields[0], path, line.number, "token index");
    token.form = fields[1];
    token.lemma = fields[2];
    token.pos = fields[3];
    token.head = parse_int(fields[4], path, line.number, "head index");
    token.deprel = fields[5];
    if (token.index != static_cast<int>(aux->tokens.size()) + 1)
      throw ParseError(path, line.number,
                       "token index " + fields[0] + " is out of sequence (expected " +
                           std::to_string(aux->tokens.size() + 1) + ")");
    if (sentence_start == 0) sentence_start = token.index;
    aux->tokens.push_back(std::move(token));
  }
  close_sentence(aux ? static_cast<int>(aux->tokens.size()) : 0);

  if (out.count("") && out[""].tokens.empty() && out.size() > 1) out.erase("");

  // Per-sentence dependency sanity: heads stay inside the sentence and form
  // a tree.
  for (auto& [id, annotations] : out) {
    for (std::size_t s = 0; s < annotations.sentences.size(); ++s) {
      auto [first, last] = annotations.sentences[s];
      for (int t = first; t <= last; ++t) {
        int head = annotations.tokens[t - 1].head;
        if (head != 0 && (head < first || head > last))
          throw ParseError(path, 0,
                           "sentence " + std::to_string(s + 1) + " of document '" + id +
                               "': head of token " + std::to_string(t) +
                               " leaves the sentence");
      }
      for (int t = first; t <= last; ++t) {
        int cur = t, steps = 0;
        while (cur != 0 && steps <= last - first + 1) {
          cur = annotations.tokens[cur - 1].head;
          ++steps;
        }
        if (cur != 0)
          throw ParseError(path, 0,
                           "sentence " + std::to_string(s + 1) + " of document '" + id +
                               "': dependency cycle involving token " + std::to_string(t));
      }
    }
  }
  return out;
}

std::map<std::string, std::vector<Mention>> read_coref(const std::string& path) {
  std::map<std::string, std::vector<Mention>> out;
  for (const Line& line : data_lines(read_file(path))) {
    auto fields = split_tab(line.text);
    if (fields.size() < 4)
      throw ParseError(path, line.number, "expected: docid TAB chain TAB start TAB end");
    Mention m;
    m.chain = parse_int(fields[1], path, line.number, "chain id");
    m.start = parse_int(fields[2], path, line.number, "span start");
    m.end = parse_int(fields[3], path, line.number, "span end");
    if (fields.size() > 4) m.entity = fields[4];
    if (m.start > m.end || m.start < 1)
      throw ParseError(path, line.number, "bad mention span");
    out[fields[0]].push_back(m);
  }
  return out;
}

std::vector<ExternalSignal> read_signal_list(const std::string& path) {
  std::vector<ExternalSignal> out;
  for (const Line& line : data_lines(read_file(path))) {
    auto fields = split_tab(line.text);
    if (fields.size() < 4)
      throw ParseError(path, line.number,
                       "expected: docid TAB edge TAB major TAB subtype [TAB tokens]");
    ExternalSignal ext;
    ext.doc_id = fields[0];
    ext.edge = parse_edge_ref(fields[1], path, line.number);
    auto major = signal_major_from_string(fields[2]);
    if (!major) throw ParseError(path, line.number, "unknown signal major '" + fields[2] + "'");
    ext.type = {*major, fields[3]};
    if (fields.size() > 4)
      for (const auto& item : split_commas(fields[4]))
        ext.tokens.push_back(parse_int(item, path, line.number, "token index"));
    std::sort(ext.tokens.begin(), ext.tokens.end());
    ext.line = line.number;
    out.push_back(std::move(ext));
  }
  return out;
}

}  // namespace erst
