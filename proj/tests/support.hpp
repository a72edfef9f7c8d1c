#pragma once
// Shared fixtures, scripted oracles, and independent reference
// implementations for the test suite. The reference code here deliberately
// avoids the library's adjacency indexes and traversal helpers: it scans the
// raw triple list, so agreement with the engine is meaningful.

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "reknos/beam.hpp"
#include "reknos/eval.hpp"
#include "reknos/graph.hpp"
#include "reknos/reasoner.hpp"
#include "reknos/super_relations.hpp"
#include "reknos/synthetic.hpp"

namespace testsupport {

// e1 -a.x.p-> e2, e1 -a.x.q-> e3, e2 -b.y.r-> e4, e3 -b.y.s-> e5,
// e2 -c.z.t-> e6. Prefix grouping: a.x = {a.x.p, a.x.q}, b.y = {b.y.r,
// b.y.s}, c.z = {c.z.t}.
inline constexpr const char* kKgaTsv =
    "e1\ta.x.p\te2\n"
    "e1\ta.x.q\te3\n"
    "e2\tb.y.r\te4\n"
    "e3\tb.y.s\te5\n"
    "e2\tc.z.t\te6\n";

inline reknos::Graph kga() {
    reknos::Graph g = reknos::Graph::from_tsv(kKgaTsv);
    reknos::derive_super_relations(g, reknos::HierarchicalPrefix{2});
    return g;
}

inline reknos::EntityId entity(const reknos::Graph& g, const std::string& label) {
    auto id = g.entity(label);
    if (!id) throw std::runtime_error("fixture label missing: " + label);
    return *id;
}

inline reknos::SuperRelationId super(const reknos::Graph& g, const std::string& label) {
    auto id = g.super_relation(label);
    if (!id) throw std::runtime_error("fixture super missing: " + label);
    return *id;
}

inline std::vector<std::string> entity_labels(const reknos::Graph& g,
                                              const std::vector<reknos::EntityId>& ids) {
    std::vector<std::string> out;
    for (auto e : ids) out.push_back(g.entity_label(e));
    return out;
}

// Scores every candidate the same, never stops early, counts each role.
class ForcedContinueOracle : public reknos::Oracle {
public:
    std::vector<double> score(const std::string&, const std::vector<std::string>&,
                              const std::vector<std::string>& candidates,
                              int* = nullptr) override {
        ++score_calls;
        return std::vector<double>(candidates.size(), 0.7);
    }
    reknos::Decision decide(const std::string&, const std::vector<std::string>&,
                            const std::vector<std::string>&, int* = nullptr) override {
        ++decide_calls;
        return reknos::Decision::Continue;
    }
    std::vector<std::string> answer(const std::string&, const std::vector<std::string>&,
                                    const std::vector<std::string>& entity_labels,
                                    int* = nullptr) override {
        ++answer_calls;
        return entity_labels;
    }
    bool concurrency_safe() const override { return true; }

    int score_calls = 0;
    int decide_calls = 0;
    int answer_calls = 0;
};

// Continue for the first `continues` decide calls, Answer afterwards.
class AnswerAfterOracle : public ForcedContinueOracle {
public:
    explicit AnswerAfterOracle(int continues) : continues_(continues) {}
    reknos::Decision decide(const std::string& q, const std::vector<std::string>& p,
                            const std::vector<std::string>& e, int* r = nullptr) override {
        ForcedContinueOracle::decide(q, p, e, r);
        return decide_calls > continues_ ? reknos::Decision::Answer
                                         : reknos::Decision::Continue;
    }

private:
    int continues_;
};

// Reference extraction: sequential join computed by scanning the raw triple
// list, no adjacency indexes involved.
inline std::vector<reknos::EntityId> brute_force_extract(
    const reknos::Graph& g, const std::vector<reknos::SuperRelationId>& hops,
    const std::vector<reknos::EntityId>& topics, bool include_inverse = false) {
    std::set<reknos::EntityId> cur(topics.begin(), topics.end());
    for (auto hop : hops) {
        std::set<reknos::EntityId> next;
        for (reknos::TripleId t = 0; t < g.triple_count(); ++t) {
            const reknos::Triple& tr = g.triple(t);
            if (g.super_of(tr.rel) != hop) continue;
            if (cur.count(tr.head)) next.insert(tr.tail);
            if (include_inverse && cur.count(tr.tail)) next.insert(tr.head);
        }
        cur = std::move(next);
    }
    return {cur.begin(), cur.end()};
}

// Reference BFS distance from any topic to any gold entity, scanning raw
// triples per step.
inline int brute_force_distance(const reknos::Graph& g,
                                const std::vector<reknos::EntityId>& topics,
                                const std::set<reknos::EntityId>& goals,
                                bool include_inverse = false) {
    std::set<reknos::EntityId> seen(topics.begin(), topics.end());
    std::set<reknos::EntityId> frontier = seen;
    int depth = 0;
    while (!frontier.empty()) {
        for (auto e : frontier) {
            if (goals.count(e)) return depth;
        }
        std::set<reknos::EntityId> next;
        for (reknos::TripleId t = 0; t < g.triple_count(); ++t) {
            const reknos::Triple& tr = g.triple(t);
            if (frontier.count(tr.head) && !seen.count(tr.tail)) next.insert(tr.tail);
            if (include_inverse && frontier.count(tr.tail) && !seen.count(tr.head)) {
                next.insert(tr.head);
            }
        }
        seen.insert(next.begin(), next.end());
        frontier = std::move(next);
        ++depth;
    }
    return -1;
}

inline reknos::Graph random_graph(std::uint64_t seed, std::size_t max_triples) {
    reknos::Graph g = reknos::Graph::from_tsv(reknos::random_graph_tsv(seed, max_triples));
    reknos::derive_super_relations(g, reknos::HierarchicalPrefix{2});
    return g;
}

// Builds a SearchPath the way the engine would, but with random scores and a
// random depth, using only public operations. Returns nothing when the
// sampled topics have no outgoing edges at all.
inline std::optional<reknos::SearchPath> random_search_path(const reknos::Graph& g,
                                                            std::mt19937_64& rng,
                                                            const reknos::ReasonerConfig& cfg) {
    if (g.entity_count() == 0) return std::nullopt;
    std::uniform_int_distribution<reknos::EntityId> pick_entity(
        0, static_cast<reknos::EntityId>(g.entity_count() - 1));
    std::uniform_real_distribution<double> pick_score(0.0, 1.0);

    reknos::SearchPath path;
    int topic_count = 1 + static_cast<int>(rng() % 2);
    std::set<reknos::EntityId> topics;
    for (int i = 0; i < topic_count; ++i) topics.insert(pick_entity(rng));
    path.topics.assign(topics.begin(), topics.end());

    int depth = 1 + static_cast<int>(rng() % 3);
    std::vector<reknos::EntityId> frontier = path.topics;
    for (int level = 1; level <= depth; ++level) {
        auto candidates = reknos::candidate_step(g, path, cfg);
        if (candidates.empty()) break;
        std::vector<double> raw;
        raw.reserve(candidates.size());
        for (std::size_t i = 0; i < candidates.size(); ++i) raw.push_back(pick_score(rng));
        reknos::ScoredLevel lvl = reknos::select_level(candidates, raw, cfg.width, level);

        std::vector<reknos::RelationId> rels;
        for (const auto& entry : lvl.entries) {
            auto members = g.members(entry.super);
            rels.insert(rels.end(), members.begin(), members.end());
        }
        auto hop = g.neighbors_via(frontier, rels, cfg.include_inverse);
        lvl.frontier_after = hop.frontier;
        frontier = lvl.frontier_after;
        path.levels.push_back(std::move(lvl));
    }
    if (path.levels.empty()) return std::nullopt;
    return path;
}

// Self-deleting temporary directory.
class TempDir {
public:
    TempDir() {
        std::string templ =
            (std::filesystem::temp_directory_path() / "reknos_test_XXXXXX").string();
        if (::mkdtemp(templ.data()) == nullptr) {
            throw std::runtime_error("mkdtemp failed");
        }
        path_ = templ;
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    std::filesystem::path path_;
};

inline std::string read_file(const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (f == nullptr) throw std::runtime_error("cannot open " + path);
    std::string content;
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof(buf), f)) > 0) content.append(buf, n);
    std::fclose(f);
    return content;
}

inline void write_file(const std::string& path, const std::string& content) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (f == nullptr) throw std::runtime_error("cannot write " + path);
    std::fwrite(content.data(), 1, content.size(), f);
    std::fclose(f);
}

struct CliResult {
    int exit_code = -1;
    std::string output;  // stdout and stderr interleaved
};

// Runs the built binary with the given argument string.
inline CliResult run_cli(const std::string& args) {
    std::string cmd = std::string(REKNOS_CLI_PATH) + " " + args + " 2>&1";
    std::FILE* pipe = ::popen(cmd.c_str(), "r");
    if (pipe == nullptr) throw std::runtime_error("popen failed");
    CliResult result;
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof(buf), pipe)) > 0) result.output.append(buf, n);
    int status = ::pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

inline std::string golden_path(const std::string& name) {
    return std::string(REKNOS_TEST_DATA_DIR) + "/" + name;
}

}  // namespace testsupport
