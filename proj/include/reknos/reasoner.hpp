#pragma once

#include <optional>
#include <string>
#include <vector>

#include "reknos/graph.hpp"
#include "reknos/oracle.hpp"
#include "reknos/super_relations.hpp"

namespace reknos {

struct ReasonerConfig {
    int width = 3;          // N: super-relations kept per level
    int max_steps = 3;      // L: reasoning depth bound
    int top_k = 0;          // K: paths kept per level; 0 means "same as width"
    int entity_cap = 50;    // most extracted entities surfaced to the oracle
    bool include_inverse = false;
    bool anchored = true;   // restrict connectivity to the reachable frontier

    int resolved_top_k() const { return top_k > 0 ? top_k : width; }
    void validate() const;
};

struct ScoredEntry {
    SuperRelationId super;
    double raw;
    double norm;
};

// One selected level: at most `width` entries, normalized scores summing to
// one, sorted by norm descending with ties by label. frontier_after is the
// entity set reachable from the previous frontier through any member
// relation of any entry.
struct ScoredLevel {
    int level = 0;  // 1-based
    std::vector<ScoredEntry> entries;
    std::vector<EntityId> frontier_after;
};

struct SearchPath {
    std::vector<EntityId> topics;
    std::vector<ScoredLevel> levels;
};

// One hop sequence through the levels, one super-relation per level. The
// score is the sum of the hops' normalized scores.
struct SuperPath {
    std::vector<SuperRelationId> hops;
    double score = 0.0;
};

struct Extraction {
    std::vector<EntityId> entities;  // sorted by label, capped
    std::vector<TripleId> touched;
    std::size_t total = 0;           // entity count before the cap
    bool truncated = false;
};

struct WalkStep {
    EntityId from;
    RelationId rel;
    EntityId to;
    TripleId fact;
};

struct LevelTrace {
    int level = 0;
    std::vector<std::string> candidates;
    std::vector<double> raw_scores;   // aligned with candidates
    std::vector<std::string> selected;
    std::vector<double> norm_scores;  // aligned with selected
    bool scored_by_oracle = false;
    std::string decision;             // "continue" or "answer"
};

struct ReasoningTrace {
    int scorer_calls = 0;
    int decision_calls = 0;
    int answer_calls = 0;
    int retries = 0;
    int steps_used = 0;
    bool dead_end = false;
    bool truncated_entities = false;
    std::vector<TripleId> triples_touched;  // sorted, unique
    std::vector<LevelTrace> per_level;

    int total_calls() const { return scorer_calls + decision_calls + answer_calls; }
};

// Path extractions are keyed by hop labels so the same record shape serves
// both engines: super-relation labels here, concrete relation labels for the
// beam baseline.
struct PathExtraction {
    std::vector<std::string> hops;
    double score = 0.0;
    std::vector<std::string> entities;  // labels, sorted
    bool truncated = false;
};

struct ReasoningOutcome {
    std::vector<std::string> answer;
    std::vector<PathExtraction> extracted;  // accumulated over levels, sorted by hops
    ReasoningTrace trace;
    bool retrieved = false;
};

// Raised when the oracle fails for good mid-run; keeps the work done so far.
class RunAborted : public Error {
public:
    RunAborted(const std::string& msg, ReasoningTrace trace)
        : Error(msg), trace_(std::move(trace)) {}
    const ReasoningTrace& partial_trace() const { return trace_; }

private:
    ReasoningTrace trace_;
};

// Candidate super-relations for the next level. For the first level these
// are the super-relations incident to the topic entities; afterwards, the
// ones incident to the current frontier (anchored) or globally connected
// from some selected super-relation (unanchored).
std::vector<SuperRelationId> candidate_step(const Graph& g, const SearchPath& path,
                                            const ReasonerConfig& cfg);

// Keeps the top `width` candidates by (score desc, label asc) and normalizes
// the kept raw scores to sum to one; an all-zero selection normalizes to
// uniform. Raw scores are clamped to [0, 1] first.
ScoredLevel select_level(std::vector<SuperRelationId> candidates, std::vector<double> raw_scores,
                         int width, int level);

// Every hop sequence drawing one entry per level whose consecutive hops are
// connected, scored by summed normalized scores and sorted by (score desc,
// hop labels asc). Under anchored semantics only sequences whose sequential
// join from the topics is non-empty survive, which is what guarantees the
// extraction step below always has something to return.
std::vector<SuperPath> enumerate_paths(const Graph& g, const SearchPath& path,
                                       const ReasonerConfig& cfg);

std::vector<SuperPath> select_top_k(std::vector<SuperPath> paths, int k);

// Sequential frontier join along the hop sequence, starting at the topics.
Extraction extract_entities(const Graph& g, const SuperPath& path,
                            std::span<const EntityId> topics, const ReasonerConfig& cfg);

// One concrete walk grounding the hop sequence, if any exists. Steps pick
// the smallest labels, so the witness is deterministic.
std::optional<std::vector<WalkStep>> witness_walk(const Graph& g, const SuperPath& path,
                                                  std::span<const EntityId> topics,
                                                  const ReasonerConfig& cfg);

// Runs the full loop: per level, gather candidates, score them (one scorer
// call only when candidates outnumber the width), select, enumerate and rank
// paths, extract entities, then ask the oracle whether to stop. The final
// level always ends with an answer call; a dead end answers from whatever
// was extracted before it.
ReasoningOutcome run(const Graph& g, const std::string& question,
                     const std::vector<std::string>& topic_labels, const ReasonerConfig& cfg,
                     Oracle& oracle);

std::string format_path(const Graph& g, const SuperPath& path);

}  // namespace reknos
