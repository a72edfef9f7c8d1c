#include "reknos/beam.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

#include "reknos/text.hpp"

namespace reknos {

namespace {

struct Beam {
    std::vector<RelationId> rels;
    EntityId entity;
    double score = 0.0;
};

std::vector<std::string> beam_hop_labels(const Graph& g, const Beam& b) {
    std::vector<std::string> hops;
    hops.reserve(b.rels.size());
    for (RelationId r : b.rels) hops.push_back(g.relation_label(r));
    return hops;
}

std::string beam_summary(const Graph& g, const Beam& b) {
    std::ostringstream s;
    for (std::size_t i = 0; i < b.rels.size(); ++i) {
        if (i) s << " -> ";
        s << g.relation_label(b.rels[i]);
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", b.score);
    s << " (score " << buf << ")";
    return s.str();
}

std::vector<std::string> surfaced_labels(const Graph& g, const std::vector<Beam>& beams,
                                         int entity_cap, bool* truncated) {
    std::vector<EntityId> ids;
    for (const Beam& b : beams) ids.push_back(b.entity);
    sort_unique(ids);
    if (ids.size() > static_cast<std::size_t>(entity_cap)) {
        ids.resize(static_cast<std::size_t>(entity_cap));
        if (truncated) *truncated = true;
    }
    std::vector<std::string> labels;
    labels.reserve(ids.size());
    for (EntityId e : ids) labels.push_back(g.entity_label(e));
    return labels;
}

std::vector<std::string> summaries_of(const Graph& g, const std::vector<Beam>& beams) {
    std::vector<std::string> out;
    out.reserve(beams.size());
    for (const Beam& b : beams) out.push_back(beam_summary(g, b));
    return out;
}

void run_beam_levels(const Graph& g, const std::string& question,
                     const std::vector<std::string>& topic_labels,
                     const std::vector<EntityId>& topics, const ReasonerConfig& cfg,
                     Oracle& oracle, ReasoningOutcome& outcome) {
    ReasoningTrace& trace = outcome.trace;
    const std::size_t width = static_cast<std::size_t>(cfg.width);

    std::vector<Beam> beams;
    for (EntityId t : topics) beams.push_back(Beam{{}, t, 0.0});
    if (beams.size() > width) beams.resize(width);

    std::map<std::vector<std::string>, PathExtraction> accumulated;
    std::vector<std::string> surfaced;
    std::vector<std::string> summaries;
    bool answered = false;

    for (int level = 1; level <= cfg.max_steps; ++level) {
        std::vector<Beam> children;
        LevelTrace lt;
        lt.level = level;

        for (const Beam& b : beams) {
            auto edges = g.out_edges(b.entity, cfg.include_inverse);
            if (edges.empty()) continue;

            std::vector<RelationId> rels;
            for (const Edge& e : edges) rels.push_back(e.rel);
            sort_unique(rels);
            std::vector<std::string> rel_labels;
            rel_labels.reserve(rels.size());
            for (RelationId r : rels) rel_labels.push_back(g.relation_label(r));

            auto scores =
                oracle.score(question, topic_labels, rel_labels, &trace.retries);
            ++trace.scorer_calls;
            if (scores.size() != rels.size()) {
                throw Error("oracle returned " + std::to_string(scores.size()) +
                            " scores for " + std::to_string(rels.size()) + " candidates");
            }
            for (double& s : scores) s = std::clamp(s, 0.0, 1.0);

            std::size_t best = 0;
            for (std::size_t i = 1; i < rels.size(); ++i) {
                if (scores[i] > scores[best]) best = i;  // ties keep the smaller label
            }
            lt.candidates.insert(lt.candidates.end(), rel_labels.begin(), rel_labels.end());
            lt.selected.push_back(rel_labels[best]);

            for (const Edge& e : edges) {
                if (e.rel != rels[best]) continue;
                Beam child;
                child.rels = b.rels;
                child.rels.push_back(e.rel);
                child.entity = e.neighbor;
                child.score = b.score + scores[best];
                children.push_back(std::move(child));
                trace.triples_touched.push_back(e.fact);
            }
        }
        sort_unique(trace.triples_touched);
        sort_unique(lt.candidates);
        sort_unique(lt.selected);

        if (children.empty()) {
            trace.dead_end = true;
            break;
        }

        std::sort(children.begin(), children.end(), [&g](const Beam& a, const Beam& b) {
            if (a.score != b.score) return a.score > b.score;
            auto la = beam_hop_labels(g, a);
            auto lb = beam_hop_labels(g, b);
            if (la != lb) return la < lb;
            return a.entity < b.entity;
        });
        if (children.size() > width) children.resize(width);
        beams = std::move(children);

        for (const Beam& b : beams) {
            auto hops = beam_hop_labels(g, b);
            PathExtraction& pe = accumulated[hops];
            if (pe.hops.empty()) {
                pe.hops = std::move(hops);
                pe.score = b.score;
            }
            // beams sharing a relation path land in one record
            merge_into(pe.entities, {g.entity_label(b.entity)});
        }

        bool cap_hit = false;
        surfaced = surfaced_labels(g, beams, cfg.entity_cap, &cap_hit);
        if (cap_hit) trace.truncated_entities = true;
        summaries = summaries_of(g, beams);

        trace.steps_used = level;
        bool wants_answer = false;
        for (const Beam& b : beams) {
            Decision d = oracle.decide(question, {beam_summary(g, b)},
                                       {g.entity_label(b.entity)}, &trace.retries);
            ++trace.decision_calls;
            if (d == Decision::Answer) wants_answer = true;
        }
        lt.decision = wants_answer ? "answer" : "continue";
        trace.per_level.push_back(std::move(lt));

        if (wants_answer || level == cfg.max_steps) {
            outcome.answer = oracle.answer(question, summaries, surfaced, &trace.retries);
            ++trace.answer_calls;
            answered = true;
            break;
        }
    }

    if (!answered) {
        outcome.answer = oracle.answer(question, summaries, surfaced, &trace.retries);
        ++trace.answer_calls;
    }

    for (auto& [hops, pe] : accumulated) outcome.extracted.push_back(std::move(pe));
}

}  // namespace

ReasoningOutcome run_beam(const Graph& g, const std::string& question,
                          const std::vector<std::string>& topic_labels,
                          const ReasonerConfig& cfg, Oracle& oracle) {
    cfg.validate();

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
        run_beam_levels(g, question, topic_labels, topics, cfg, oracle, outcome);
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
