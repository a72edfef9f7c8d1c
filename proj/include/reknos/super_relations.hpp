#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "reknos/graph.hpp"

namespace reknos {

// Groups concrete relations into named super-relations. Three ways to build
// the grouping:
//
//   HierarchicalPrefix  keep the first `levels` dot-separated label segments;
//                       labels with that many segments or fewer map to
//                       themselves.
//   ExplicitMapping     `relation<TAB>super_relation` rows from a file,
//                       '#' starts a comment; relations absent from the file
//                       map to themselves.
//   LabelClustering     greedy token-set clustering of relation labels.
struct HierarchicalPrefix {
    int levels = 2;
};

struct ExplicitMapping {
    std::string path;
};

struct LabelClustering {
    double threshold = 0.5;
};

using GroupingStrategy = std::variant<HierarchicalPrefix, ExplicitMapping, LabelClustering>;

GroupingStrategy parse_strategy(const std::string& text);
std::string strategy_name(const GroupingStrategy& strategy);

// Derives the mapping and installs it on the graph, replacing any previous
// one. Unknown relations named by an explicit mapping file are reported
// through `warnings` when given and otherwise ignored.
void derive_super_relations(Graph& g, const GroupingStrategy& strategy,
                            std::vector<std::string>* warnings = nullptr);

// Super-relations with at least one edge leaving the frontier (or touching
// it, when include_inverse). Sorted by label.
std::vector<SuperRelationId> super_relations_at(const Graph& g,
                                                std::span<const EntityId> frontier,
                                                bool include_inverse = false);

// Whether some two-hop walk e1 -r1-> e2 -r2-> e3 exists with r1 a member of
// `first` and r2 a member of `second`. The anchored form requires e1 to lie
// in the anchor set.
bool connects(const Graph& g, SuperRelationId first, SuperRelationId second,
              bool include_inverse = false);
bool connects_anchored(const Graph& g, SuperRelationId first, SuperRelationId second,
                       std::span<const EntityId> anchor, bool include_inverse = false);

}  // namespace reknos
