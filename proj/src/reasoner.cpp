#include "reknos/reasoner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <sstream>

#include "reknos/text.hpp"

namespace reknos {

void ReasonerConfig::validate() const {
    if (width < 1) throw ConfigError("width must be at least 1");
    if (max_steps < 1) throw ConfigError("max steps must be at least 1");
    if (top_k < 0) throw ConfigError("top-k must not be negative");
    if (entity_cap < 1) throw ConfigError("entity cap must be at least 1");
}

namespace {

std::span<const EntityId> frontier_before(const SearchPath& path, std::size_t level_index) {
    // level_index is 0-based; the frontier feeding level 0 is the topic set
    if (level_index == 0) return path.topics;
    return path.levels[level_index - 1].frontier_after;
}

std::vector<RelationId> member_union(const Graph& g, const std::vector<ScoredEntry>& entries) {
    std::vector<RelationId> rels;
    for (const auto& e : entries) {
        auto m = g.members(e.super);
        rels.insert(rels.end(), m.begin(), m.end());
    }
    sort_unique(rels);
    return rels;
}

std::vector<EntityId> join_frontier(const Graph& g, const SuperPath& path,
                                    std::span<const EntityId> topics, bool include_inverse,
                                    std::vector<TripleId>* touched) {
    std::vector<EntityId> frontier(topics.begin(), topics.end());
    for (SuperRelationId hop : path.hops) {
        auto m = g.members(hop);
        NeighborHop next = g.neighbors_via(frontier, m, include_inverse);
        if (touched) merge_into(*touched, next.touched);
        frontier = std::move(next.frontier);
        if (frontier.empty()) break;
    }
    return frontier;
}

}  // namespace

std::vector<SuperRelationId> candidate_step(const Graph& g, const SearchPath& path,
                                            const ReasonerConfig& cfg) {
    if (path.levels.empty()) {
        return super_relations_at(g, path.topics, cfg.include_inverse);
    }
    if (cfg.anchored) {
        return super_relations_at(g, path.levels.back().frontier_after, cfg.include_inverse);
    }
    std::vector<SuperRelationId> out;
    for (const auto& entry : path.levels.back().entries) {
        for (SuperRelationId s = 0; s < g.super_count(); ++s) {
            if (connects(g, entry.super, s, cfg.include_inverse)) out.push_back(s);
        }
    }
    sort_unique(out);
    return out;
}

ScoredLevel select_level(std::vector<SuperRelationId> candidates, std::vector<double> raw_scores,
                         int width, int level) {
    if (candidates.size() != raw_scores.size()) {
        throw Error("one score per candidate required");
    }
    if (width < 1) throw ConfigError("width must be at least 1");

    for (double& s : raw_scores) s = std::clamp(s, 0.0, 1.0);

    std::vector<std::size_t> order(candidates.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (raw_scores[a] != raw_scores[b]) return raw_scores[a] > raw_scores[b];
        return candidates[a] < candidates[b];  // id order is label order
    });

    std::size_t keep = std::min<std::size_t>(static_cast<std::size_t>(width), order.size());
    ScoredLevel out;
    out.level = level;
    out.entries.reserve(keep);
    double sum = 0.0;
    for (std::size_t i = 0; i < keep; ++i) {
        const std::size_t idx = order[i];
        out.entries.push_back(ScoredEntry{candidates[idx], raw_scores[idx], 0.0});
        sum += raw_scores[idx];
    }
    for (auto& e : out.entries) {
        e.norm = sum > 0.0 ? e.raw / sum : 1.0 / static_cast<double>(out.entries.size());
    }
    return out;
}

std::vector<SuperPath> enumerate_paths(const Graph& g, const SearchPath& path,
                                       const ReasonerConfig& cfg) {
    if (path.levels.empty()) return {};

    // Pairwise connectivity between consecutive levels. Anchored checks run
    // from the frontier feeding the earlier level, so they admit exactly the
    // pairs some grounded walk can realize from there.
    const std::size_t depth = path.levels.size();

    struct Partial {
        std::vector<SuperRelationId> hops;
        double score;
    };
    std::vector<Partial> partials;
    for (const auto& entry : path.levels[0].entries) {
        partials.push_back(Partial{{entry.super}, entry.norm});
    }
    for (std::size_t lvl = 1; lvl < depth; ++lvl) {
        auto anchor = frontier_before(path, lvl - 1);
        std::vector<Partial> extended;
        for (const auto& prev : partials) {
            for (const auto& entry : path.levels[lvl].entries) {
                bool linked = cfg.anchored
                                  ? connects_anchored(g, prev.hops.back(), entry.super, anchor,
                                                      cfg.include_inverse)
                                  : connects(g, prev.hops.back(), entry.super,
                                             cfg.include_inverse);
                if (!linked) continue;
                Partial next = prev;
                next.hops.push_back(entry.super);
                next.score += entry.norm;
                extended.push_back(std::move(next));
            }
        }
        partials = std::move(extended);
        if (partials.empty()) break;
    }

    std::vector<SuperPath> out;
    for (auto& p : partials) {
        if (p.hops.size() != depth) continue;
        SuperPath sp{std::move(p.hops), p.score};
        if (cfg.anchored) {
            // pairwise checks admit sequences whose segments are severally
            // groundable; keep only those groundable end to end
            if (join_frontier(g, sp, path.topics, cfg.include_inverse, nullptr).empty()) {
                continue;
            }
        }
        out.push_back(std::move(sp));
    }
    std::sort(out.begin(), out.end(), [](const SuperPath& a, const SuperPath& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.hops < b.hops;
    });
    return out;
}

std::vector<SuperPath> select_top_k(std::vector<SuperPath> paths, int k) {
    if (k < 1) throw ConfigError("top-k must be at least 1");
    if (paths.size() > static_cast<std::size_t>(k)) paths.resize(static_cast<std::size_t>(k));
    return paths;
}

Extraction extract_entities(const Graph& g, const SuperPath& path,
                            std::span<const EntityId> topics, const ReasonerConfig& cfg) {
    Extraction ex;
    std::vector<EntityId> frontier =
        join_frontier(g, path, topics, cfg.include_inverse, &ex.touched);
    ex.total = frontier.size();
    if (frontier.size() > static_cast<std::size_t>(cfg.entity_cap)) {
        frontier.resize(static_cast<std::size_t>(cfg.entity_cap));
        ex.truncated = true;
    }
    ex.entities = std::move(frontier);
    return ex;
}

std::optional<std::vector<WalkStep>> witness_walk(const Graph& g, const SuperPath& path,
                                                  std::span<const EntityId> topics,
                                                  const ReasonerConfig& cfg) {
    // Frontiers per hop, then walk back from the smallest final entity.
    std::vector<std::vector<EntityId>> frontiers;
    frontiers.emplace_back(topics.begin(), topics.end());
    for (SuperRelationId hop : path.hops) {
        NeighborHop next =
            g.neighbors_via(frontiers.back(), g.members(hop), cfg.include_inverse);
        if (next.frontier.empty()) return std::nullopt;
        frontiers.push_back(std::move(next.frontier));
    }

    std::vector<WalkStep> steps(path.hops.size());
    EntityId target = frontiers.back().front();
    for (std::size_t i = path.hops.size(); i-- > 0;) {
        SuperRelationId hop = path.hops[i];
        bool found = false;
        for (EntityId from : frontiers[i]) {
            auto edges = g.out_edges(from, cfg.include_inverse);
            for (const Edge& e : edges) {
                if (e.neighbor == target && g.super_of(e.rel) == hop) {
                    steps[i] = WalkStep{from, e.rel, target, e.fact};
                    target = from;
                    found = true;
                    break;
                }
            }
            if (found) break;
        }
        if (!found) return std::nullopt;
    }
    return steps;
}

namespace {

void run_levels(const Graph& g, const std::string& question,
                const std::vector<std::string>& topic_labels,
                const std::vector<EntityId>& topics, const ReasonerConfig& cfg, Oracle& oracle,
                ReasoningOutcome& outcome) {
    ReasoningTrace& trace = outcome.trace;
    SearchPath path;
    path.topics = topics;

    std::map<std::vector<std::string>, PathExtraction> accumulated;
    std::vector<std::string> surfaced;   // entity labels offered to the oracle
    std::vector<std::string> summaries;  // path summaries alongside them
    bool answered = false;

    const int k = cfg.resolved_top_k();
    for (int level = 1; level <= cfg.max_steps; ++level) {
        std::vector<SuperRelationId> candidates = candidate_step(g, path, cfg);
        if (candidates.empty()) {
            trace.dead_end = true;
            break;
        }

        std::vector<std::string> candidate_labels;
        candidate_labels.reserve(candidates.size());
        for (SuperRelationId s : candidates) candidate_labels.push_back(g.super_label(s));

        // Scoring is only worth a call when there is something to discard.
        std::vector<double> raw;
        bool scored = false;
        if (candidates.size() > static_cast<std::size_t>(cfg.width)) {
            raw = oracle.score(question, topic_labels, candidate_labels, &trace.retries);
            ++trace.scorer_calls;
            scored = true;
            if (raw.size() != candidates.size()) {
                throw Error("oracle returned " + std::to_string(raw.size()) + " scores for " +
                            std::to_string(candidates.size()) + " candidates");
            }
            for (double& s : raw) s = std::clamp(s, 0.0, 1.0);
        } else {
            raw.assign(candidates.size(), 1.0);
        }

        ScoredLevel selected = select_level(candidates, raw, cfg.width, level);
        NeighborHop hop = g.neighbors_via(frontier_before(path, path.levels.size()),
                                          member_union(g, selected.entries),
                                          cfg.include_inverse);
        selected.frontier_after = std::move(hop.frontier);
        merge_into(trace.triples_touched, hop.touched);
        path.levels.push_back(std::move(selected));

        LevelTrace lt;
        lt.level = level;
        lt.candidates = candidate_labels;
        lt.raw_scores = raw;
        lt.scored_by_oracle = scored;
        for (const auto& e : path.levels.back().entries) {
            lt.selected.push_back(g.super_label(e.super));
            lt.norm_scores.push_back(e.norm);
        }

        std::vector<SuperPath> ranked = select_top_k(enumerate_paths(g, path, cfg), k);

        std::vector<EntityId> surfaced_ids;
        summaries.clear();
        for (const SuperPath& p : ranked) {
            Extraction ex = extract_entities(g, p, path.topics, cfg);
            merge_into(trace.triples_touched, ex.touched);
            if (ex.truncated) trace.truncated_entities = true;
            merge_into(surfaced_ids, ex.entities);

            PathExtraction pe;
            pe.score = p.score;
            for (SuperRelationId h : p.hops) pe.hops.push_back(g.super_label(h));
            for (EntityId e : ex.entities) pe.entities.push_back(g.entity_label(e));
            pe.truncated = ex.truncated;
            accumulated[pe.hops] = pe;
            summaries.push_back(format_path(g, p));
        }
        if (surfaced_ids.size() > static_cast<std::size_t>(cfg.entity_cap)) {
            surfaced_ids.resize(static_cast<std::size_t>(cfg.entity_cap));
            trace.truncated_entities = true;
        }
        surfaced.clear();
        for (EntityId e : surfaced_ids) surfaced.push_back(g.entity_label(e));

        trace.steps_used = level;
        Decision d = oracle.decide(question, summaries, surfaced, &trace.retries);
        ++trace.decision_calls;
        lt.decision = d == Decision::Answer ? "answer" : "continue";
        trace.per_level.push_back(std::move(lt));

        // The final level answers regardless of what the decision said.
        if (d == Decision::Answer || level == cfg.max_steps) {
            outcome.answer = oracle.answer(question, summaries, surfaced, &trace.retries);
            ++trace.answer_calls;
            answered = true;
            break;
        }
    }

    if (!answered) {
        // dead end; answer from whatever the last completed level extracted
        outcome.answer = oracle.answer(question, summaries, surfaced, &trace.retries);
        ++trace.answer_calls;
    }

    for (auto& [hops, pe] : accumulated) outcome.extracted.push_back(std::move(pe));
}

}  // namespace

std::string format_path(const Graph& g, const SuperPath& path) {
    std::ostringstream s;
    for (std::size_t i = 0; i < path.hops.size(); ++i) {
        if (i) s << " -> ";
        s << g.super_label(path.hops[i]);
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", path.score);
    s << " (score " << buf << ")";
    return s.str();
}

ReasoningOutcome run(const Graph& g, const std::string& question,
                     const std::vector<std::string>& topic_labels, const ReasonerConfig& cfg,
                     Oracle& oracle) {
    cfg.validate();
    if (!g.has_super_mapping()) throw ConfigError("super-relation mapping not derived");

    std::vector<EntityId> topics;
    std::vector<std::string> missing;
    for (const auto& label : topic_labels) {
        if (auto id = g.entity(label)) {
            topics.push_back(*id);
        } else {
            missing.push_back(label);
        }
    }
    if (!missing.empty()) {
        if (missing.size() == 1) throw Error("unknown topic entity: " + missing.front());
        throw Error("unknown topic entities: " + join(missing, ", "));
    }
    if (topics.empty()) throw Error("no topic entities given");
    sort_unique(topics);

    ReasoningOutcome outcome;
    try {
        run_levels(g, question, topic_labels, topics, cfg, oracle, outcome);
    } catch (const TransportError& e) {
        throw RunAborted(e.what(), outcome.trace);
    }
    for (const auto& pe : outcome.extracted) {
        if (!pe.entities.empty()) {
            outcome.retrieved = true;
            break;
        }
    }
    return outcome;
}

}  // namespace reknos
