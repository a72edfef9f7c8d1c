#include "reknos/graph.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace reknos {

namespace {

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

std::vector<std::array<std::string, 3>> parse_tsv(std::istream& in) {
    std::vector<std::array<std::string, 3>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = strip_cr(std::move(line));
        if (line.empty()) continue;
        std::array<std::string, 3> row;
        std::size_t field = 0;
        std::size_t start = 0;
        for (std::size_t i = 0; i <= line.size(); ++i) {
            if (i == line.size() || line[i] == '\t') {
                if (field >= 3) {
                    throw LoadError("line " + std::to_string(lineno) + ": expected 3 fields");
                }
                row[field++] = line.substr(start, i - start);
                start = i + 1;
            }
        }
        if (field != 3) {
            throw LoadError("line " + std::to_string(lineno) + ": expected 3 fields");
        }
        for (const auto& f : row) {
            if (f.empty()) {
                throw LoadError("line " + std::to_string(lineno) + ": empty field");
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<std::array<std::string, 3>> parse_ntriples(std::istream& in) {
    std::vector<std::array<std::string, 3>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = strip_cr(std::move(line));
        std::size_t pos = 0;
        auto skip_ws = [&] {
            while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
        };
        skip_ws();
        if (pos == line.size()) continue;
        if (line[pos] == '#') continue;

        std::array<std::string, 3> row;
        for (std::size_t term = 0; term < 3; ++term) {
            skip_ws();
            if (pos >= line.size() || line[pos] != '<') {
                if (pos < line.size() && line[pos] == '"') {
                    throw LoadError("line " + std::to_string(lineno) +
                                    ": literal terms are not supported");
                }
                throw LoadError("line " + std::to_string(lineno) +
                                ": expected <subject> <predicate> <object> .");
            }
            std::size_t close = line.find('>', pos + 1);
            if (close == std::string::npos) {
                throw LoadError("line " + std::to_string(lineno) + ": unterminated IRI");
            }
            row[term] = line.substr(pos + 1, close - pos - 1);
            if (row[term].empty()) {
                throw LoadError("line " + std::to_string(lineno) + ": empty IRI");
            }
            pos = close + 1;
        }
        skip_ws();
        if (pos >= line.size() || line[pos] != '.') {
            throw LoadError("line " + std::to_string(lineno) +
                            ": expected <subject> <predicate> <object> .");
        }
        ++pos;
        skip_ws();
        if (pos != line.size()) {
            throw LoadError("line " + std::to_string(lineno) + ": trailing content");
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

Graph Graph::build(std::vector<std::array<std::string, 3>> rows) {
    Graph g;

    std::vector<std::string> ents;
    std::vector<std::string> rels;
    ents.reserve(rows.size() * 2);
    rels.reserve(rows.size());
    for (const auto& row : rows) {
        ents.push_back(row[0]);
        ents.push_back(row[2]);
        rels.push_back(row[1]);
    }
    sort_unique(ents);
    sort_unique(rels);

    g.entity_labels_ = std::move(ents);
    g.relation_labels_ = std::move(rels);
    for (std::size_t i = 0; i < g.entity_labels_.size(); ++i) {
        g.entity_ids_.emplace(g.entity_labels_[i], static_cast<EntityId>(i));
    }
    for (std::size_t i = 0; i < g.relation_labels_.size(); ++i) {
        g.relation_ids_.emplace(g.relation_labels_[i], static_cast<RelationId>(i));
    }

    g.triples_.reserve(rows.size());
    for (const auto& row : rows) {
        g.triples_.push_back(Triple{g.entity_ids_.at(row[0]), g.relation_ids_.at(row[1]),
                                    g.entity_ids_.at(row[2])});
    }
    std::sort(g.triples_.begin(), g.triples_.end(), [](const Triple& a, const Triple& b) {
        if (a.head != b.head) return a.head < b.head;
        if (a.rel != b.rel) return a.rel < b.rel;
        return a.tail < b.tail;
    });
    g.triples_.erase(std::unique(g.triples_.begin(), g.triples_.end()), g.triples_.end());

    g.out_.resize(g.entity_labels_.size());
    g.in_.resize(g.entity_labels_.size());
    for (TripleId t = 0; t < g.triples_.size(); ++t) {
        g.out_[g.triples_[t].head].push_back(t);
        g.in_[g.triples_[t].tail].push_back(t);
    }
    // out_ is already (rel, tail)-sorted because triples_ is; in_ needs its
    // own (rel, head) order.
    for (auto& ids : g.in_) {
        std::sort(ids.begin(), ids.end(), [&g](TripleId a, TripleId b) {
            const Triple& ta = g.triples_[a];
            const Triple& tb = g.triples_[b];
            if (ta.rel != tb.rel) return ta.rel < tb.rel;
            return ta.head < tb.head;
        });
    }
    return g;
}

Graph Graph::load(std::istream& in, Format fmt) {
    return build(fmt == Format::Tsv ? parse_tsv(in) : parse_ntriples(in));
}

Graph Graph::load_file(const std::string& path, Format fmt) {
    std::ifstream in(path);
    if (!in) throw LoadError("cannot open " + path);
    return load(in, fmt);
}

Graph Graph::from_tsv(std::string_view text) {
    std::istringstream in{std::string(text)};
    return load(in, Format::Tsv);
}

std::optional<EntityId> Graph::entity(std::string_view label) const {
    auto it = entity_ids_.find(std::string(label));
    if (it == entity_ids_.end()) return std::nullopt;
    return it->second;
}

std::optional<RelationId> Graph::relation(std::string_view label) const {
    auto it = relation_ids_.find(std::string(label));
    if (it == relation_ids_.end()) return std::nullopt;
    return it->second;
}

std::optional<SuperRelationId> Graph::super_relation(std::string_view label) const {
    auto it = super_ids_.find(std::string(label));
    if (it == super_ids_.end()) return std::nullopt;
    return it->second;
}

const std::string& Graph::entity_label(EntityId e) const {
    if (e >= entity_labels_.size()) throw Error("unknown entity id " + std::to_string(e));
    return entity_labels_[e];
}

const std::string& Graph::relation_label(RelationId r) const {
    if (r >= relation_labels_.size()) throw Error("unknown relation id " + std::to_string(r));
    return relation_labels_[r];
}

const std::string& Graph::super_label(SuperRelationId s) const {
    if (s >= super_labels_.size()) throw Error("unknown super-relation id " + std::to_string(s));
    return super_labels_[s];
}

const Triple& Graph::triple(TripleId t) const {
    if (t >= triples_.size()) throw Error("unknown triple id " + std::to_string(t));
    return triples_[t];
}

std::span<const TripleId> Graph::out_ids(EntityId e) const {
    if (e >= out_.size()) throw Error("unknown entity id " + std::to_string(e));
    return out_[e];
}

std::span<const TripleId> Graph::in_ids(EntityId e) const {
    if (e >= in_.size()) throw Error("unknown entity id " + std::to_string(e));
    return in_[e];
}

std::vector<Edge> Graph::out_edges(EntityId e, bool include_inverse) const {
    if (e >= out_.size()) throw Error("unknown entity id " + std::to_string(e));
    std::vector<Edge> edges;
    edges.reserve(out_[e].size() + (include_inverse ? in_[e].size() : 0));
    for (TripleId t : out_[e]) {
        edges.push_back(Edge{triples_[t].rel, triples_[t].tail, t, Direction::Forward});
    }
    if (include_inverse) {
        for (TripleId t : in_[e]) {
            edges.push_back(Edge{triples_[t].rel, triples_[t].head, t, Direction::Inverse});
        }
        std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
            if (a.rel != b.rel) return a.rel < b.rel;
            if (a.neighbor != b.neighbor) return a.neighbor < b.neighbor;
            return a.dir < b.dir;
        });
    }
    return edges;
}

NeighborHop Graph::neighbors_via(std::span<const EntityId> frontier,
                                 std::span<const RelationId> rels,
                                 bool include_inverse) const {
    std::vector<char> wanted(relation_labels_.size(), 0);
    for (RelationId r : rels) {
        if (r >= wanted.size()) throw Error("unknown relation id " + std::to_string(r));
        wanted[r] = 1;
    }
    NeighborHop hop;
    for (EntityId e : frontier) {
        if (e >= out_.size()) throw Error("unknown entity id " + std::to_string(e));
        for (TripleId t : out_[e]) {
            if (wanted[triples_[t].rel]) {
                hop.frontier.push_back(triples_[t].tail);
                hop.touched.push_back(t);
            }
        }
        if (include_inverse) {
            for (TripleId t : in_[e]) {
                if (wanted[triples_[t].rel]) {
                    hop.frontier.push_back(triples_[t].head);
                    hop.touched.push_back(t);
                }
            }
        }
    }
    sort_unique(hop.frontier);
    sort_unique(hop.touched);
    return hop;
}

SuperRelationId Graph::super_of(RelationId r) const {
    if (r >= relation_labels_.size()) throw Error("unknown relation id " + std::to_string(r));
    if (rel_to_super_.size() != relation_labels_.size()) {
        throw Error("super-relation mapping not derived");
    }
    return rel_to_super_[r];
}

std::span<const RelationId> Graph::members(SuperRelationId s) const {
    if (s >= super_members_.size()) throw Error("unknown super-relation id " + std::to_string(s));
    return super_members_[s];
}

void Graph::set_super_mapping(std::vector<std::string> super_labels,
                              std::vector<SuperRelationId> rel_to_super) {
    if (rel_to_super.size() != relation_labels_.size()) {
        throw Error("mapping does not cover every relation");
    }
    if (!std::is_sorted(super_labels.begin(), super_labels.end()) ||
        std::adjacent_find(super_labels.begin(), super_labels.end()) != super_labels.end()) {
        throw Error("super-relation labels must be sorted and unique");
    }
    super_labels_ = std::move(super_labels);
    super_ids_.clear();
    for (std::size_t i = 0; i < super_labels_.size(); ++i) {
        super_ids_.emplace(super_labels_[i], static_cast<SuperRelationId>(i));
    }
    rel_to_super_ = std::move(rel_to_super);
    super_members_.assign(super_labels_.size(), {});
    for (RelationId r = 0; r < rel_to_super_.size(); ++r) {
        if (rel_to_super_[r] >= super_labels_.size()) {
            throw Error("mapping references an unknown super-relation");
        }
        super_members_[rel_to_super_[r]].push_back(r);
    }
    for (auto& m : super_members_) {
        if (m.empty()) throw Error("super-relation with no member relations");
    }
}

void Graph::write_canonical_tsv(std::ostream& out) const {
    for (const Triple& t : triples_) {
        out << entity_labels_[t.head] << '\t' << relation_labels_[t.rel] << '\t'
            << entity_labels_[t.tail] << '\n';
    }
}

}  // namespace reknos
