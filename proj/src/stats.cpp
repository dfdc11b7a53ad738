#include "erst/stats.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace erst {

std::string genre_of(const std::string& doc_id,
                     const std::map<std::string, std::string>& overrides) {
  auto it = overrides.find(doc_id);
  if (it != overrides.end()) return it->second;
  std::size_t first = doc_id.find('_');
  if (first == std::string::npos) return doc_id;
  std::size_t second = doc_id.find('_', first + 1);
  if (second == std::string::npos) return doc_id.substr(first + 1);
  return doc_id.substr(first + 1, second - first - 1);
}

namespace {

struct Instance {
  bool secondary = false;
  std::string relation;
  NodeId child = 0;               // attachment child or edge source
  NodeId other = 0;               // attachment parent or edge target
  std::vector<const Signal*> signals;
};

struct DocInstances {
  const DocumentGraph* doc = nullptr;
  GraphIndex idx;
  std::vector<Instance> instances;
};

// Relation instances counted the n-ary way: one per satellite attachment,
// one per multinuclear child beyond the first (text order), one per
// secondary edge. Signals on a first multinuc child count toward the
// node's first counted instance.
DocInstances collect_instances(const DocumentGraph& doc, const StatsOptions& options) {
  DocInstances out{&doc, GraphIndex::build(doc), {}};
  const GraphIndex& idx = out.idx;

  std::map<NodeId, std::vector<const Attachment*>> multinucs;
  for (const auto& att : doc.attachments)
    if (att.role == NuclearityRole::MultinucChild && att.relation && idx.has_node(att.parent))
      multinucs[att.parent].push_back(&att);
  for (auto& [parent, children] : multinucs)
    std::sort(children.begin(), children.end(), [&](const Attachment* a, const Attachment* b) {
      return idx.yield_span(a->child).first < idx.yield_span(b->child).first;
    });

  std::map<NodeId, std::size_t> instance_of_child;  // attachment child -> instance index
  auto counted = [&](const std::string& relation) {
    return options.include_same_unit || relation != "same-unit";
  };

  for (const auto& att : doc.attachments) {
    if (!att.relation || att.role != NuclearityRole::Satellite) continue;
    if (!counted(*att.relation)) continue;
    instance_of_child[att.child] = out.instances.size();
    out.instances.push_back({false, *att.relation, att.child, att.parent, {}});
  }
  for (const auto& [parent, children] : multinucs) {
    for (std::size_t i = 1; i < children.size(); ++i) {
      if (!counted(*children[i]->relation)) continue;
      instance_of_child[children[i]->child] = out.instances.size();
      out.instances.push_back(
          {false, *children[i]->relation, children[i]->child, parent, {}});
    }
    // The uncounted first child maps to the node's first counted instance.
    if (children.size() > 1 && counted(*children[1]->relation))
      instance_of_child[children[0]->child] = instance_of_child[children[1]->child];
  }
  std::map<std::pair<NodeId, NodeId>, std::size_t> instance_of_edge;
  for (const auto& edge : doc.secondary) {
    if (!counted(edge.relation)) continue;
    instance_of_edge[{edge.source, edge.target}] = out.instances.size();
    out.instances.push_back({true, edge.relation, edge.source, edge.target, {}});
  }

  for (const auto& signal : doc.signals) {
    if (signal.edge.is_secondary) {
      auto it = instance_of_edge.find({signal.edge.source, signal.edge.target});
      if (it != instance_of_edge.end()) out.instances[it->second].signals.push_back(&signal);
    } else {
      auto it = instance_of_child.find(signal.edge.child);
      if (it != instance_of_child.end()) out.instances[it->second].signals.push_back(&signal);
    }
  }
  return out;
}

long long count_major(const DocumentGraph& doc, SignalMajor major) {
  long long n = 0;
  for (const auto& s : doc.signals) n += s.type.major == major;
  return n;
}

std::string lower(const std::string& s) {
  std::string out = s;
  for (char& c : out)
    if (c >= 'A' && c <= 'Z') c += 'a' - 'A';
  return out;
}

std::string anchored_surface(const DocumentGraph& doc, const Signal& signal) {
  std::string out;
  for (std::size_t i = 0; i < signal.tokens.size(); ++i) {
    int t = signal.tokens[i];
    if (t < 1 || t > static_cast<int>(doc.tokens.size())) continue;
    if (!out.empty()) out += ' ';
    out += lower(doc.tokens[t - 1].form);
  }
  return out;
}

}  // namespace

std::vector<MarkingRow> relation_marking_stats(const std::vector<DocumentGraph>& corpus,
                                               StatsGroupBy group_by,
                                               const StatsOptions& options) {
  std::map<std::string, MarkingRow> rows;
  auto group_name = [&](const DocumentGraph& doc) -> std::string {
    switch (group_by) {
      case StatsGroupBy::Genre: return genre_of(doc.doc_id, options.genre_overrides);
      case StatsGroupBy::Document: return doc.doc_id;
      case StatsGroupBy::None: return "all";
    }
    return "all";
  };
  for (const auto& doc : corpus) {
    DocInstances inst = collect_instances(doc, options);
    MarkingRow& row = rows[group_name(doc)];
    row.dms += count_major(doc, SignalMajor::Dm);
    row.orphans += count_major(doc, SignalMajor::Orphan);
    row.relations += static_cast<long long>(inst.instances.size());
    for (const auto& i : inst.instances) row.secedges += i.secondary;
  }
  std::vector<MarkingRow> out;
  for (auto& [name, row] : rows) {
    row.group = name;
    row.dms_plus_orphans = row.dms + row.orphans;
    row.markers_per_rel =
        row.relations ? static_cast<double>(row.dms_plus_orphans) / row.relations : 0.0;
    row.pct_secedge = row.relations ? 100.0 * row.secedges / row.relations : 0.0;
    out.push_back(row);
  }
  return out;
}

std::vector<SignalDistRow> signal_distribution(const std::vector<DocumentGraph>& corpus,
                                               SignalDistBy by, const StatsOptions& options) {
  struct Acc {
    long long relations = 0;
    std::map<SignalMajor, long long> with_type;
    long long with_any = 0;
  };
  std::map<std::string, Acc> groups;
  for (const auto& doc : corpus) {
    DocInstances inst = collect_instances(doc, options);
    for (const auto& i : inst.instances) {
      std::string key = by == SignalDistBy::Genre ? genre_of(doc.doc_id, options.genre_overrides)
                                                  : coarse_class(i.relation);
      Acc& acc = groups[key];
      ++acc.relations;
      std::set<SignalMajor> majors;
      for (const Signal* s : i.signals) majors.insert(s->type.major);
      for (SignalMajor m : majors) ++acc.with_type[m];
      acc.with_any += !i.signals.empty();
    }
  }
  std::vector<SignalDistRow> out;
  for (auto& [name, acc] : groups) {
    if (acc.relations == 0) continue;  // empty groups are omitted
    SignalDistRow row;
    row.group = name;
    row.relations = acc.relations;
    for (const auto& [major, n] : acc.with_type)
      row.fraction[major] = static_cast<double>(n) / acc.relations;
    row.any = static_cast<double>(acc.with_any) / acc.relations;
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<MarkerRow> top_markers(const std::vector<DocumentGraph>& corpus,
                                   const std::string& coarse, MarkerKind kind, std::size_t n,
                                   const StatsOptions& options) {
  std::map<std::string, long long> freq;
  for (const auto& doc : corpus) {
    DocInstances inst = collect_instances(doc, options);
    for (const auto& i : inst.instances) {
      if (coarse_class(i.relation) != coarse) continue;
      for (const Signal* s : i.signals) {
        bool wanted = kind == MarkerKind::Dm
                          ? (s->type.major == SignalMajor::Dm || s->type.major == SignalMajor::Orphan)
                          : (s->type.major == SignalMajor::Lexical &&
                             s->type.subtype == "indicative-word");
        if (!wanted) continue;
        std::string item = anchored_surface(doc, *s);
        if (!item.empty()) ++freq[item];
      }
    }
  }
  std::vector<MarkerRow> out;
  for (const auto& [item, count] : freq) out.push_back({item, count});
  std::sort(out.begin(), out.end(), [](const MarkerRow& a, const MarkerRow& b) {
    return std::tuple(-a.frequency, a.item) < std::tuple(-b.frequency, b.item);
  });
  if (out.size() > n) out.resize(n);
  return out;
}

std::vector<SecondaryRow> secondary_proportions(const std::vector<DocumentGraph>& corpus,
                                                long long threshold,
                                                const StatsOptions& options) {
  std::map<std::string, SecondaryRow> rows;
  for (const auto& doc : corpus) {
    DocInstances inst = collect_instances(doc, options);
    for (const auto& i : inst.instances) {
      SecondaryRow& row = rows[i.relation];
      if (i.secondary)
        ++row.secondary;
      else
        ++row.primary;
    }
  }
  std::vector<SecondaryRow> out;
  for (auto& [name, row] : rows) {
    if (row.secondary <= threshold) continue;
    row.relation = name;
    long long total = row.primary + row.secondary;
    row.pct_secondary = total ? 100.0 * row.secondary / total : 0.0;
    out.push_back(row);
  }
  std::sort(out.begin(), out.end(), [](const SecondaryRow& a, const SecondaryRow& b) {
    return std::tuple(-a.pct_secondary, a.relation) < std::tuple(-b.pct_secondary, b.relation);
  });
  return out;
}

std::vector<ExtractRecord> extract(const std::vector<DocumentGraph>& corpus,
                                   const ExtractQuery& query, const StatsOptions& options) {
  std::vector<ExtractRecord> out;
  std::string folded_surface = lower(query.surface);
  for (const auto& doc : corpus) {
    DocInstances inst = collect_instances(doc, options);
    for (const auto& i : inst.instances) {
      if (!query.relation.empty() && i.relation != query.relation &&
          coarse_class(i.relation) != query.relation)
        continue;
      bool signal_filtered = query.signal_major.has_value() || !folded_surface.empty();
      if (signal_filtered) {
        bool hit = false;
        for (const Signal* s : i.signals) {
          if (query.signal_major && s->type.major != *query.signal_major) continue;
          if (query.signal_major && !query.signal_subtype.empty() &&
              s->type.subtype != query.signal_subtype)
            continue;
          if (!folded_surface.empty() && anchored_surface(doc, *s) != folded_surface) continue;
          hit = true;
          break;
        }
        if (!hit) continue;
      }

      ExtractRecord record;
      record.doc_id = doc.doc_id;
      record.relation = i.relation;
      record.secondary = i.secondary;
      for (int pos : inst.idx.yield_positions(i.child))
        record.child_yield.push_back(doc.edus[pos].id);
      if (i.secondary) {
        for (int pos : inst.idx.yield_positions(i.other))
          record.parent_yield.push_back(doc.edus[pos].id);
      } else {
        // Nucleus scope: the parent's yield minus the child's.
        std::set<int> child_pos(inst.idx.yield_positions(i.child).begin(),
                                inst.idx.yield_positions(i.child).end());
        for (int pos : inst.idx.yield_positions(i.other))
          if (!child_pos.count(pos)) record.parent_yield.push_back(doc.edus[pos].id);
      }
      for (const Signal* s : i.signals) record.signals.push_back(*s);
      if (query.attribution_bundle) {
        for (const Signal* s : i.signals) {
          if (s->type.major == SignalMajor::Semantic && s->type.subtype == "attribution-source")
            record.source_tokens.insert(record.source_tokens.end(), s->tokens.begin(),
                                        s->tokens.end());
          bool predicate = (s->type.major == SignalMajor::Syntactic &&
                            s->type.subtype == "reported-speech") ||
                           (s->type.major == SignalMajor::Lexical &&
                            s->type.subtype == "indicative-word");
          if (predicate)
            record.predicate_tokens.insert(record.predicate_tokens.end(), s->tokens.begin(),
                                           s->tokens.end());
        }
        std::sort(record.source_tokens.begin(), record.source_tokens.end());
        std::sort(record.predicate_tokens.begin(), record.predicate_tokens.end());
      }
      out.push_back(std::move(record));
    }
  }
  return out;
}

namespace {

std::string join_ids(const std::vector<NodeId>& ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(ids[i]);
  }
  return out;
}

std::string join_ints(const std::vector<int>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(xs[i]);
  }
  return out;
}

}  // namespace

std::string format_marking_tsv(const std::vector<MarkingRow>& rows) {
  std::ostringstream os;
  os << "# relations = satellite attachments + multinuclear children beyond the first"
        " + secondary edges\n";
  os << "group\tdms\torphans\tdms+orphans\trelations\tmarkers_per_rel\tsecedges\t%secedge\n";
  for (const auto& r : rows) {
    char buf[64];
    os << r.group << '\t' << r.dms << '\t' << r.orphans << '\t' << r.dms_plus_orphans << '\t'
       << r.relations << '\t';
    std::snprintf(buf, sizeof buf, "%.3f", r.markers_per_rel);
    os << buf << '\t' << r.secedges << '\t';
    std::snprintf(buf, sizeof buf, "%.2f%%", r.pct_secedge);
    os << buf << '\n';
  }
  return os.str();
}

std::string format_marking_table(const std::vector<MarkingRow>& rows) {
  std::ostringstream os;
  char buf[200];
  std::snprintf(buf, sizeof buf, "%-20s %8s %8s %12s %10s %8s %9s %9s\n", "group", "dms",
                "orphans", "dms+orphans", "relations", "mk/rel", "secedges", "%secedge");
  os << buf;
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%-20s %8lld %8lld %12lld %10lld %8.3f %9lld %8.2f%%\n",
                  r.group.c_str(), r.dms, r.orphans, r.dms_plus_orphans, r.relations,
                  r.markers_per_rel, r.secedges, r.pct_secedge);
    os << buf;
  }
  return os.str();
}

namespace {

const SignalMajor kAllMajors[] = {
    SignalMajor::Dm,        SignalMajor::Orphan,        SignalMajor::Graphical,
    SignalMajor::Lexical,   SignalMajor::Morphological, SignalMajor::Numerical,
    SignalMajor::Reference, SignalMajor::Semantic,      SignalMajor::Syntactic,
};

}

std::string format_signal_dist_tsv(const std::vector<SignalDistRow>& rows) {
  std::ostringstream os;
  os << "group\trelations";
  for (SignalMajor m : kAllMajors) os << '\t' << to_string(m);
  os << "\tany\n";
  for (const auto& r : rows) {
    os << r.group << '\t' << r.relations;
    char buf[32];
    for (SignalMajor m : kAllMajors) {
      auto it = r.fraction.find(m);
      std::snprintf(buf, sizeof buf, "%.4f", it == r.fraction.end() ? 0.0 : it->second);
      os << '\t' << buf;
    }
    std::snprintf(buf, sizeof buf, "%.4f", r.any);
    os << '\t' << buf << '\n';
  }
  return os.str();
}

std::string format_signal_dist_table(const std::vector<SignalDistRow>& rows) {
  std::ostringstream os;
  char buf[320];
  std::snprintf(buf, sizeof buf, "%-16s %9s", "group", "relations");
  os << buf;
  for (SignalMajor m : kAllMajors) {
    std::snprintf(buf, sizeof buf, " %6.6s", to_string(m));
    os << buf;
  }
  os << "    any\n";
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%-16s %9lld", r.group.c_str(), r.relations);
    os << buf;
    for (SignalMajor m : kAllMajors) {
      auto it = r.fraction.find(m);
      std::snprintf(buf, sizeof buf, " %6.3f", it == r.fraction.end() ? 0.0 : it->second);
      os << buf;
    }
    std::snprintf(buf, sizeof buf, " %6.3f\n", r.any);
    os << buf;
  }
  return os.str();
}

std::string format_markers_tsv(const std::vector<MarkerRow>& rows) {
  std::ostringstream os;
  os << "item\tfrequency\n";
  for (const auto& r : rows) os << r.item << '\t' << r.frequency << '\n';
  return os.str();
}

std::string format_secondary_tsv(const std::vector<SecondaryRow>& rows) {
  std::ostringstream os;
  os << "# primary = n-ary attachment instances; %secondary = secondary / total\n";
  os << "relation\tprimary\tsecondary\ttotal\t%secondary\n";
  for (const auto& r : rows) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f%%", r.pct_secondary);
    os << r.relation << '\t' << r.primary << '\t' << r.secondary << '\t'
       << (r.primary + r.secondary) << '\t' << buf << '\n';
  }
  return os.str();
}

std::string format_secondary_table(const std::vector<SecondaryRow>& rows) {
  std::ostringstream os;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-26s %9s %10s %8s %11s\n", "relation", "primary", "secondary",
                "total", "%secondary");
  os << buf;
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%-26s %9lld %10lld %8lld %10.1f%%\n", r.relation.c_str(),
                  r.primary, r.secondary, r.primary + r.secondary, r.pct_secondary);
    os << buf;
  }
  return os.str();
}

std::string format_extract_tsv(const std::vector<ExtractRecord>& records) {
  std::ostringstream os;
  os << "doc\trelation\tkind\tchild_yield\tother_yield\tsignals\tsource_tokens\tpredicate_tokens\n";
  for (const auto& r : records) {
    os << r.doc_id << '\t' << r.relation << '\t' << (r.secondary ? "secondary" : "primary")
       << '\t' << join_ids(r.child_yield) << '\t' << join_ids(r.parent_yield) << '\t';
    for (std::size_t i = 0; i < r.signals.size(); ++i) {
      if (i) os << ' ';
      os << r.signals[i].type.combined() << "@" << join_ints(r.signals[i].tokens);
    }
    os << '\t' << join_ints(r.source_tokens) << '\t' << join_ints(r.predicate_tokens) << '\n';
  }
  return os.str();
}

}  // namespace erst
