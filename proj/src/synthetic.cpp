#include "reknos/synthetic.hpp"

#include <random>
#include <sstream>

#include "reknos/errors.hpp"

namespace reknos {

namespace {

void check_positive(int value, const char* name) {
    if (value < 1) throw ConfigError(std::string(name) + " must be at least 1");
}

std::string layer_relation(int level, int super, int member) {
    return "L" + std::to_string(level) + ".s" + std::to_string(super) + ".m" +
           std::to_string(member);
}

}  // namespace

std::string branching_graph_tsv(const BranchingSpec& spec) {
    check_positive(spec.depth, "depth");
    check_positive(spec.supers, "supers");
    check_positive(spec.members, "members");
    check_positive(spec.roots, "roots");
    int per_level = spec.entities_per_level > 0 ? spec.entities_per_level
                                                : spec.supers * spec.members;

    std::mt19937_64 rng(spec.seed);
    std::uniform_int_distribution<int> pick(0, per_level - 1);
    std::ostringstream out;

    auto node = [&](int level, int copy, int index) {
        std::string label = "n" + std::to_string(level) + "_";
        if (spec.disjoint_roots && level > 0) label += "r" + std::to_string(copy) + "_";
        return label + std::to_string(index);
    };

    int copies = spec.disjoint_roots ? spec.roots : 1;
    for (int c = 0; c < copies; ++c) {
        std::vector<std::string> prev;
        if (spec.disjoint_roots) {
            prev.push_back(node(0, c, c));
        } else {
            for (int r = 0; r < spec.roots; ++r) prev.push_back(node(0, c, r));
        }
        for (int l = 1; l <= spec.depth; ++l) {
            std::vector<std::string> cur;
            cur.reserve(per_level);
            for (int i = 0; i < per_level; ++i) cur.push_back(node(l, c, i));
            for (const auto& u : prev) {
                for (int j = 0; j < spec.supers; ++j) {
                    for (int k = 0; k < spec.members; ++k) {
                        out << u << '\t' << layer_relation(l, j, k) << '\t'
                            << cur[pick(rng)] << '\n';
                    }
                }
            }
            prev = std::move(cur);
        }
    }
    return out.str();
}

std::vector<std::string> branching_graph_roots(const BranchingSpec& spec) {
    check_positive(spec.roots, "roots");
    std::vector<std::string> roots;
    for (int r = 0; r < spec.roots; ++r) roots.push_back("n0_" + std::to_string(r));
    return roots;
}

std::string random_graph_tsv(std::uint64_t seed, std::size_t max_triples) {
    if (max_triples < 4) throw ConfigError("max_triples must be at least 4");
    std::mt19937_64 rng(seed);

    auto between = [&](std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
    };

    std::size_t entities = between(4, 24);
    std::size_t relations = between(3, 10);
    std::size_t triples = between(max_triples / 2, max_triples);

    std::vector<std::string> rel_labels;
    for (std::size_t i = 0; i < relations; ++i) {
        rel_labels.push_back("g" + std::to_string(i % 3) + ".h" + std::to_string((i / 3) % 3) +
                             ".r" + std::to_string(i));
    }

    std::ostringstream out;
    for (std::size_t t = 0; t < triples; ++t) {
        out << "v" << between(0, entities - 1) << '\t' << rel_labels[between(0, relations - 1)]
            << '\t' << "v" << between(0, entities - 1) << '\n';
    }
    return out.str();
}

ChainQA chain_qa(std::size_t count) {
    ChainQA qa;
    std::ostringstream tsv;
    for (std::size_t i = 0; i < count; ++i) {
        std::size_t depth = 1 + i % 3;
        std::string tag = "query" + std::to_string(i);
        std::string subject = tag + "_subject";
        std::string gold = tag + "_answer";

        std::string prev = subject;
        for (std::size_t l = 1; l <= depth; ++l) {
            std::string next = l == depth ? gold : tag + "_hop" + std::to_string(l);
            tsv << prev << '\t' << "chain.step" << l << ".r0" << '\t' << next << '\n';
            prev = next;
        }

        QAItem item;
        item.id = "chain" + std::to_string(i);
        item.question = "which answer does " + tag + " subject lead to";
        item.topic_entities = {subject};
        item.answers = {gold};
        qa.items.push_back(std::move(item));
    }
    qa.triples_tsv = tsv.str();
    return qa;
}

FailureFixture failure_fixture(FailureClass mode, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::string tag = "case" + std::to_string(seed);
    std::string start = tag + "_start";
    std::string gold = tag + "_goal";

    FailureFixture fx;
    fx.expected = mode;
    fx.item.id = failure_class_name(mode) + std::to_string(seed);
    fx.item.question = "where does " + tag + " start end up";
    fx.item.topic_entities = {start};
    fx.item.answers = {gold};

    std::ostringstream tsv;
    auto chain = [&](const std::string& from, const std::string& to, std::size_t hops,
                     const std::string& family) {
        std::string prev = from;
        for (std::size_t l = 1; l <= hops; ++l) {
            std::string next = l == hops ? to : tag + "_" + family + std::to_string(l);
            tsv << prev << '\t' << family << ".seg" << l << ".r0" << '\t' << next << '\n';
            prev = next;
        }
    };

    // a short side branch that never reaches the goal
    chain(start, tag + "_decoy_end", 2, "decoy");

    switch (mode) {
        case FailureClass::DepthLimit:
            // goal sits one to three hops past the step bound
            chain(start, gold, 4 + rng() % 3, "far");
            break;
        case FailureClass::Misdirection:
            // goal is in range, but four branches named after the question's own
            // words ("end up") outscore the quiet one, so a width-3 selection
            // drops the only path that reaches the goal
            chain(start, gold, 1 + rng() % 3, "near");
            for (int k = 0; k < 4; ++k) {
                std::string lure = tag + "_lure" + std::to_string(k);
                tsv << start << "\tend.up" << k << ".step1\t" << lure << '\n';
                tsv << lure << "\tend.up" << k << ".step2\t" << lure << "_end\n";
            }
            break;
        case FailureClass::PathAbsence:
            if (seed % 2 == 0) {
                // goal exists but only in a component the start cannot reach
                chain(tag + "_island", gold, 1, "apart");
            } else {
                // goal label absent from the graph altogether
                fx.item.answers = {tag + "_goal_unwritten"};
            }
            break;
    }

    fx.triples_tsv = tsv.str();
    return fx;
}

}  // namespace reknos
