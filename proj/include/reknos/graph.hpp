#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "reknos/errors.hpp"

namespace reknos {

using EntityId = std::uint32_t;
using RelationId = std::uint32_t;
using SuperRelationId = std::uint32_t;
using TripleId = std::uint32_t;

inline constexpr std::uint32_t kNoSuper = 0xffffffffu;

enum class Direction : std::uint8_t { Forward, Inverse };

// One stored fact. An inverse-direction traversal reuses the TripleId of the
// forward fact, so a fact counts once in search-space accounting no matter
// how it was reached.
struct Triple {
    EntityId head;
    RelationId rel;
    EntityId tail;

    friend bool operator==(const Triple&, const Triple&) = default;
};

struct Edge {
    RelationId rel;
    EntityId neighbor;
    TripleId fact;
    Direction dir;
};

struct NeighborHop {
    std::vector<EntityId> frontier;  // sorted, unique
    std::vector<TripleId> touched;   // sorted, unique
};

// In-memory triple store with entity/relation interning and both adjacency
// directions indexed. Immutable once loaded, except for the super-relation
// mapping which a grouping strategy installs afterwards.
//
//   labels <-> ids     ids are assigned in sorted label order, so comparing
//                      ids compares labels; every "by label" ordering in the
//                      engine is plain id order.
//   out_[e], in_[e]    triple ids, sorted by (relation, neighbor)
//   rel_to_super_      total once a mapping is installed
class Graph {
public:
    enum class Format { Tsv, NTriples };

    // Parses either tab-separated `head<TAB>relation<TAB>tail` rows or the
    // `<s> <p> <o> .` N-Triples subset. Duplicate rows collapse to one fact.
    // Malformed rows raise LoadError naming the 1-based line.
    static Graph load(std::istream& in, Format fmt);
    static Graph load_file(const std::string& path, Format fmt);
    static Graph from_tsv(std::string_view text);

    std::size_t entity_count() const { return entity_labels_.size(); }
    std::size_t relation_count() const { return relation_labels_.size(); }
    std::size_t triple_count() const { return triples_.size(); }
    std::size_t super_count() const { return super_labels_.size(); }

    std::optional<EntityId> entity(std::string_view label) const;
    std::optional<RelationId> relation(std::string_view label) const;
    std::optional<SuperRelationId> super_relation(std::string_view label) const;

    const std::string& entity_label(EntityId e) const;
    const std::string& relation_label(RelationId r) const;
    const std::string& super_label(SuperRelationId s) const;

    const Triple& triple(TripleId t) const;
    std::span<const TripleId> out_ids(EntityId e) const;
    std::span<const TripleId> in_ids(EntityId e) const;

    // Edges leaving e, sorted by (relation label, neighbor label); with
    // include_inverse the incoming facts appear too, tagged Inverse and
    // ordered into the same sequence.
    std::vector<Edge> out_edges(EntityId e, bool include_inverse = false) const;

    // One traversal step: every entity reachable from the frontier through
    // one of the given relations, plus the set of facts crossed.
    NeighborHop neighbors_via(std::span<const EntityId> frontier,
                              std::span<const RelationId> rels,
                              bool include_inverse = false) const;

    bool has_super_mapping() const { return !super_labels_.empty() || relation_count() == 0; }
    SuperRelationId super_of(RelationId r) const;
    std::span<const RelationId> members(SuperRelationId s) const;

    // Installs a relation -> super-relation mapping. Labels must be sorted
    // and unique, the mapping total. Replaces any previous mapping.
    void set_super_mapping(std::vector<std::string> super_labels,
                           std::vector<SuperRelationId> rel_to_super);

    // Sorted `head<TAB>relation<TAB>tail` rows; loading them reproduces an
    // identical graph. This is the snapshot format the CLI emits.
    void write_canonical_tsv(std::ostream& out) const;

private:
    std::vector<std::string> entity_labels_;
    std::vector<std::string> relation_labels_;
    std::vector<std::string> super_labels_;
    std::unordered_map<std::string, EntityId> entity_ids_;
    std::unordered_map<std::string, RelationId> relation_ids_;
    std::unordered_map<std::string, SuperRelationId> super_ids_;

    std::vector<Triple> triples_;              // sorted by (head, rel, tail)
    std::vector<std::vector<TripleId>> out_;   // per head, ascending triple id
    std::vector<std::vector<TripleId>> in_;    // per tail, sorted by (rel, head)

    std::vector<SuperRelationId> rel_to_super_;
    std::vector<std::vector<RelationId>> super_members_;

    static Graph build(std::vector<std::array<std::string, 3>> rows);
};

// Sorted-vector set helpers shared across the engine.
template <typename T>
void sort_unique(std::vector<T>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

template <typename T>
void merge_into(std::vector<T>& dst, const std::vector<T>& src) {
    dst.insert(dst.end(), src.begin(), src.end());
    sort_unique(dst);
}

}  // namespace reknos
