#pragma once
// Deterministic graph and dataset generators for tests, benchmarks, and the
// `gen` subcommand. Everything is emitted as TSV/JSONL text so the ordinary
// loaders stay the single parsing path.

#include <cstdint>
#include <string>
#include <vector>

#include "reknos/eval.hpp"

namespace reknos {

// Layered graph: `roots` entities at level 0, then `depth` layers of
// `entities_per_level` nodes. The relations of layer l form `supers`
// families ("L{l}.s{j}") of `members` concrete relations each, and every
// node carries one outgoing edge per relation of the next layer, so any
// frontier sees the full relation fan-out and no walk can dead-end before
// the last layer. The seed only varies which target each edge hits.
// disjoint_roots gives each root a private copy of the layers, keeping
// walks from different roots on disjoint entities.
struct BranchingSpec {
    int depth = 3;
    int supers = 3;
    int members = 3;
    int roots = 1;
    int entities_per_level = 0;  // 0: one per (super, member) pair
    bool disjoint_roots = false;
    std::uint64_t seed = 0;
};

std::string branching_graph_tsv(const BranchingSpec& spec);

// The level-0 entity labels, i.e. the topic entities to start runs from.
std::vector<std::string> branching_graph_roots(const BranchingSpec& spec);

// Random graph for property tests. Relation labels have three segments so
// prefix grouping is non-trivial; the triple count stays in
// [max_triples/2, max_triples] before deduplication.
std::string random_graph_tsv(std::uint64_t seed, std::size_t max_triples);

// Dataset of chain questions over one shared graph. Question i follows a
// private chain of depth 1 + (i mod 3) from its topic entity to a sink
// answer entity, so a run that reaches the chain's end surfaces exactly
// the gold answer.
struct ChainQA {
    std::string triples_tsv;
    std::vector<QAItem> items;
};

ChainQA chain_qa(std::size_t count);

// One graph + question pair built to miss retrieval for the given reason
// under a step bound of 3, for exercising the non-retrieval classifier.
struct FailureFixture {
    std::string triples_tsv;
    QAItem item;
    FailureClass expected;
};

FailureFixture failure_fixture(FailureClass mode, std::uint64_t seed);

}  // namespace reknos
