#include "reknos/super_relations.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "reknos/text.hpp"

namespace reknos {

namespace {

std::string prefix_label(const std::string& label, int levels) {
    std::size_t pos = 0;
    int seen = 0;
    while (pos < label.size()) {
        if (label[pos] == '.') {
            ++seen;
            if (seen == levels) return label.substr(0, pos);
        }
        ++pos;
    }
    return label;  // fewer segments than requested, maps to itself
}

// relation label -> super label, one entry per relation in g
std::vector<std::string> hierarchical_mapping(const Graph& g, const HierarchicalPrefix& h) {
    if (h.levels < 1) throw ConfigError("prefix levels must be at least 1");
    std::vector<std::string> mapping(g.relation_count());
    for (RelationId r = 0; r < g.relation_count(); ++r) {
        mapping[r] = prefix_label(g.relation_label(r), h.levels);
    }
    return mapping;
}

std::vector<std::string> explicit_mapping(const Graph& g, const ExplicitMapping& m,
                                          std::vector<std::string>* warnings) {
    std::ifstream in(m.path);
    if (!in) throw LoadError("cannot open " + m.path);

    std::map<std::string, std::string> file_map;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        if (trim(line).empty()) continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
            throw LoadError("line " + std::to_string(lineno) + ": expected 2 fields");
        }
        std::string rel = trim(line.substr(0, tab));
        std::string super = trim(line.substr(tab + 1));
        if (rel.empty() || super.empty()) {
            throw LoadError("line " + std::to_string(lineno) + ": empty field");
        }
        if (!file_map.emplace(rel, super).second) {
            throw LoadError("line " + std::to_string(lineno) + ": relation mapped twice: " + rel);
        }
    }

    std::vector<std::string> mapping(g.relation_count());
    std::size_t used = 0;
    for (RelationId r = 0; r < g.relation_count(); ++r) {
        const std::string& label = g.relation_label(r);
        auto it = file_map.find(label);
        if (it != file_map.end()) {
            mapping[r] = it->second;
            ++used;
        } else {
            mapping[r] = label;
        }
    }
    if (warnings && used < file_map.size()) {
        for (const auto& [rel, super] : file_map) {
            if (!g.relation(rel)) {
                warnings->push_back("mapping names unknown relation: " + rel);
            }
        }
    }
    return mapping;
}

std::vector<std::string> clustered_mapping(const Graph& g, const LabelClustering& c) {
    if (c.threshold <= 0.0 || c.threshold > 1.0) {
        throw ConfigError("clustering threshold must lie in (0, 1]");
    }

    struct Cluster {
        std::set<std::string> centroid;
        std::vector<RelationId> members;
    };

    // Relation ids are already in sorted label order, which fixes the greedy
    // pass independent of input file ordering.
    std::vector<Cluster> clusters;
    std::vector<std::size_t> assignment(g.relation_count());
    for (RelationId r = 0; r < g.relation_count(); ++r) {
        auto tokens = token_set(tokenize_label(g.relation_label(r)));
        std::size_t found = clusters.size();
        for (std::size_t i = 0; i < clusters.size(); ++i) {
            if (jaccard(tokens, clusters[i].centroid) >= c.threshold) {
                found = i;
                break;
            }
        }
        if (found == clusters.size()) {
            clusters.push_back(Cluster{std::move(tokens), {r}});
        } else {
            clusters[found].centroid.insert(tokens.begin(), tokens.end());
            clusters[found].members.push_back(r);
        }
        assignment[r] = found;
    }

    // Cluster label: the most frequent token-sequence prefix over members,
    // ties resolved toward the lexicographically smallest joined form.
    std::vector<std::string> labels(clusters.size());
    std::set<std::string> taken;
    for (std::size_t i = 0; i < clusters.size(); ++i) {
        std::map<std::string, int> freq;
        for (RelationId r : clusters[i].members) {
            auto seq = tokenize_label(g.relation_label(r));
            std::string joined;
            for (const auto& tok : seq) {
                if (!joined.empty()) joined += '.';
                joined += tok;
                ++freq[joined];
            }
        }
        std::string best;
        int best_count = 0;
        for (const auto& [prefix, count] : freq) {
            if (count > best_count) {
                best = prefix;
                best_count = count;
            }
        }
        if (best.empty()) best = g.relation_label(clusters[i].members.front());
        std::string label = best;
        for (int suffix = 2; !taken.insert(label).second; ++suffix) {
            label = best + "#" + std::to_string(suffix);
        }
        labels[i] = label;
    }

    std::vector<std::string> mapping(g.relation_count());
    for (RelationId r = 0; r < g.relation_count(); ++r) {
        mapping[r] = labels[assignment[r]];
    }
    return mapping;
}

void install(Graph& g, const std::vector<std::string>& rel_to_super_label) {
    std::vector<std::string> supers = rel_to_super_label;
    sort_unique(supers);
    std::map<std::string, SuperRelationId> ids;
    for (std::size_t i = 0; i < supers.size(); ++i) {
        ids.emplace(supers[i], static_cast<SuperRelationId>(i));
    }
    std::vector<SuperRelationId> rel_to_super(rel_to_super_label.size());
    for (std::size_t r = 0; r < rel_to_super_label.size(); ++r) {
        rel_to_super[r] = ids.at(rel_to_super_label[r]);
    }
    g.set_super_mapping(std::move(supers), std::move(rel_to_super));
}

}  // namespace

GroupingStrategy parse_strategy(const std::string& text) {
    auto colon = text.find(':');
    std::string kind = colon == std::string::npos ? text : text.substr(0, colon);
    std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
    if (kind == "hier") {
        HierarchicalPrefix h;
        if (!arg.empty()) {
            try {
                h.levels = std::stoi(arg);
            } catch (const std::exception&) {
                throw ConfigError("bad strategy argument: " + text);
            }
        }
        return h;
    }
    if (kind == "cluster") {
        LabelClustering c;
        if (!arg.empty()) {
            try {
                c.threshold = std::stod(arg);
            } catch (const std::exception&) {
                throw ConfigError("bad strategy argument: " + text);
            }
        }
        return c;
    }
    if (kind == "file") {
        if (arg.empty()) throw ConfigError("file strategy needs a path: " + text);
        return ExplicitMapping{arg};
    }
    throw ConfigError("unknown strategy: " + text);
}

std::string strategy_name(const GroupingStrategy& strategy) {
    if (const auto* h = std::get_if<HierarchicalPrefix>(&strategy)) {
        return "hier:" + std::to_string(h->levels);
    }
    if (const auto* c = std::get_if<LabelClustering>(&strategy)) {
        std::ostringstream s;
        s << "cluster:" << c->threshold;
        return s.str();
    }
    return "file:" + std::get<ExplicitMapping>(strategy).path;
}

void derive_super_relations(Graph& g, const GroupingStrategy& strategy,
                            std::vector<std::string>* warnings) {
    std::vector<std::string> mapping;
    if (const auto* h = std::get_if<HierarchicalPrefix>(&strategy)) {
        mapping = hierarchical_mapping(g, *h);
    } else if (const auto* e = std::get_if<ExplicitMapping>(&strategy)) {
        mapping = explicit_mapping(g, *e, warnings);
    } else {
        mapping = clustered_mapping(g, std::get<LabelClustering>(strategy));
    }
    install(g, mapping);
}

std::vector<SuperRelationId> super_relations_at(const Graph& g,
                                                std::span<const EntityId> frontier,
                                                bool include_inverse) {
    std::vector<SuperRelationId> found;
    for (EntityId e : frontier) {
        for (TripleId t : g.out_ids(e)) found.push_back(g.super_of(g.triple(t).rel));
        if (include_inverse) {
            for (TripleId t : g.in_ids(e)) found.push_back(g.super_of(g.triple(t).rel));
        }
    }
    sort_unique(found);
    return found;
}

namespace {

bool has_edge_via(const Graph& g, EntityId e, SuperRelationId s, bool include_inverse) {
    for (TripleId t : g.out_ids(e)) {
        if (g.super_of(g.triple(t).rel) == s) return true;
    }
    if (include_inverse) {
        for (TripleId t : g.in_ids(e)) {
            if (g.super_of(g.triple(t).rel) == s) return true;
        }
    }
    return false;
}

bool connects_from(const Graph& g, EntityId e1, SuperRelationId first, SuperRelationId second,
                   bool include_inverse) {
    for (TripleId t : g.out_ids(e1)) {
        if (g.super_of(g.triple(t).rel) != first) continue;
        if (has_edge_via(g, g.triple(t).tail, second, include_inverse)) return true;
    }
    if (include_inverse) {
        for (TripleId t : g.in_ids(e1)) {
            if (g.super_of(g.triple(t).rel) != first) continue;
            if (has_edge_via(g, g.triple(t).head, second, include_inverse)) return true;
        }
    }
    return false;
}

}  // namespace

bool connects(const Graph& g, SuperRelationId first, SuperRelationId second,
              bool include_inverse) {
    g.super_label(first);
    g.super_label(second);
    for (EntityId e = 0; e < g.entity_count(); ++e) {
        if (connects_from(g, e, first, second, include_inverse)) return true;
    }
    return false;
}

bool connects_anchored(const Graph& g, SuperRelationId first, SuperRelationId second,
                       std::span<const EntityId> anchor, bool include_inverse) {
    g.super_label(first);
    g.super_label(second);
    for (EntityId e : anchor) {
        if (connects_from(g, e, first, second, include_inverse)) return true;
    }
    return false;
}

}  // namespace reknos
