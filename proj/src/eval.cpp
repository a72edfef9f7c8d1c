#include "reknos/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <deque>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "reknos/beam.hpp"
#include "reknos/text.hpp"

namespace reknos {

namespace {

using nlohmann::json;

std::vector<std::string> string_array(const json& j, const char* field, std::size_t row) {
    const auto& value = j.at(field);
    if (!value.is_array()) {
        throw LoadError("row " + std::to_string(row) + ": field " + field +
                        " must be an array of strings");
    }
    std::vector<std::string> out;
    for (const auto& elem : value) {
        if (!elem.is_string()) {
            throw LoadError("row " + std::to_string(row) + ": field " + field +
                            " must be an array of strings");
        }
        out.push_back(elem.get<std::string>());
    }
    return out;
}

std::set<std::string> normalized_set(const std::vector<std::string>& values) {
    std::set<std::string> out;
    for (const auto& v : values) {
        std::string n = normalize_answer(v);
        if (!n.empty()) out.insert(std::move(n));
    }
    return out;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

std::string csv_field(const std::string& value) {
    if (value.find_first_of(",\"\n") == std::string::npos) return value;
    std::string quoted = "\"";
    for (char c : value) {
        if (c == '"') quoted += "\"\"";
        else quoted.push_back(c);
    }
    quoted += '"';
    return quoted;
}

}  // namespace

std::vector<QAItem> load_dataset(std::istream& in) {
    std::vector<QAItem> items;
    std::set<std::string> ids;
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;

        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            throw LoadError("row " + std::to_string(row) + ": not a JSON object");
        }
        for (const char* field : {"id", "question", "topic_entities", "answers"}) {
            if (!j.contains(field)) {
                throw LoadError("row " + std::to_string(row) + ": missing field " + field);
            }
        }
        if (!j.at("id").is_string() || !j.at("question").is_string()) {
            throw LoadError("row " + std::to_string(row) +
                            ": id and question must be strings");
        }

        QAItem item;
        item.id = j.at("id").get<std::string>();
        item.question = j.at("question").get<std::string>();
        item.topic_entities = string_array(j, "topic_entities", row);
        item.answers = string_array(j, "answers", row);

        if (item.id.empty()) {
            throw LoadError("row " + std::to_string(row) + ": empty id");
        }
        if (item.topic_entities.empty()) {
            throw LoadError("row " + std::to_string(row) + ": topic_entities must be non-empty");
        }
        if (item.answers.empty()) {
            throw LoadError("row " + std::to_string(row) + ": answers must be non-empty");
        }
        if (!ids.insert(item.id).second) {
            throw LoadError("duplicate item id: " + item.id);
        }
        items.push_back(std::move(item));
    }
    return items;
}

std::vector<QAItem> load_dataset_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw LoadError("cannot open " + path);
    return load_dataset(in);
}

void write_dataset(std::ostream& out, const std::vector<QAItem>& items) {
    for (const auto& item : items) {
        out << json{{"id", item.id},
                    {"question", item.question},
                    {"topic_entities", item.topic_entities},
                    {"answers", item.answers}}
                   .dump()
            << '\n';
    }
}

int hits_at_1(const std::vector<std::string>& predicted, const std::vector<std::string>& gold) {
    if (predicted.empty()) return 0;
    std::string top = normalize_answer(predicted.front());
    if (top.empty()) return 0;
    auto gold_set = normalized_set(gold);
    return gold_set.count(top) ? 1 : 0;
}

double set_f1(const std::vector<std::string>& predicted, const std::vector<std::string>& gold) {
    auto p = normalized_set(predicted);
    auto q = normalized_set(gold);
    if (p.empty() && q.empty()) return 1.0;
    if (p.empty() || q.empty()) return 0.0;
    std::size_t inter = 0;
    for (const auto& v : p)
        if (q.count(v)) ++inter;
    if (inter == 0) return 0.0;
    double precision = static_cast<double>(inter) / static_cast<double>(p.size());
    double recall = static_cast<double>(inter) / static_cast<double>(q.size());
    return 2.0 * precision * recall / (precision + recall);
}

bool retrieval_flag(const ReasoningOutcome& outcome, const std::vector<std::string>& gold) {
    auto gold_set = normalized_set(gold);
    for (const auto& pe : outcome.extracted) {
        for (const auto& label : pe.entities) {
            if (gold_set.count(normalize_answer(label))) return true;
        }
    }
    return false;
}

std::string failure_class_name(FailureClass c) {
    switch (c) {
        case FailureClass::Misdirection: return "misdirection";
        case FailureClass::DepthLimit: return "depth_limit";
        case FailureClass::PathAbsence: return "path_absence";
    }
    return "unknown";
}

Classification classify_non_retrieval(const Graph& g, const QAItem& item, int max_steps,
                                      bool include_inverse) {
    // gold entities, matched through the same normalization as retrieval
    auto gold_set = normalized_set(item.answers);
    std::vector<EntityId> gold_ids;
    for (EntityId e = 0; e < g.entity_count(); ++e) {
        if (gold_set.count(normalize_answer(g.entity_label(e)))) gold_ids.push_back(e);
    }
    if (gold_ids.empty()) {
        return {FailureClass::PathAbsence, "gold answer not in the graph vocabulary"};
    }

    std::vector<EntityId> start;
    for (const auto& label : item.topic_entities) {
        if (auto id = g.entity(label)) start.push_back(*id);
    }
    if (start.empty()) {
        return {FailureClass::PathAbsence, "no topic entity resolves in the graph"};
    }

    // BFS depth of the nearest gold entity over concrete relations
    std::vector<int> depth(g.entity_count(), -1);
    std::deque<EntityId> queue;
    for (EntityId e : start) {
        depth[e] = 0;
        queue.push_back(e);
    }
    std::set<EntityId> gold_lookup(gold_ids.begin(), gold_ids.end());
    int best = -1;
    while (!queue.empty()) {
        EntityId e = queue.front();
        queue.pop_front();
        if (gold_lookup.count(e)) {
            best = depth[e];
            break;  // BFS order: first hit is nearest
        }
        for (TripleId t : g.out_ids(e)) {
            EntityId next = g.triple(t).tail;
            if (depth[next] < 0) {
                depth[next] = depth[e] + 1;
                queue.push_back(next);
            }
        }
        if (include_inverse) {
            for (TripleId t : g.in_ids(e)) {
                EntityId next = g.triple(t).head;
                if (depth[next] < 0) {
                    depth[next] = depth[e] + 1;
                    queue.push_back(next);
                }
            }
        }
    }

    if (best < 0) {
        return {FailureClass::PathAbsence, "gold answer unreachable from the topics"};
    }
    if (best > max_steps) {
        return {FailureClass::DepthLimit,
                "nearest gold answer lies " + std::to_string(best) + " hops out"};
    }
    return {FailureClass::Misdirection,
            "gold answer reachable in " + std::to_string(best) + " hops via an unselected path"};
}

std::string engine_name(EngineKind k) {
    return k == EngineKind::Reknos ? "reknos" : "beam";
}

BatchResult run_batch(const Graph& g, const std::vector<QAItem>& items,
                      const BatchOptions& options, Oracle& oracle) {
    options.cfg.validate();
    if (options.parallelism < 1) throw ConfigError("parallelism must be at least 1");

    std::vector<const QAItem*> ordered;
    ordered.reserve(items.size());
    for (const auto& item : items) ordered.push_back(&item);
    std::sort(ordered.begin(), ordered.end(),
              [](const QAItem* a, const QAItem* b) { return a->id < b->id; });

    std::vector<ItemRecord> records(ordered.size());
    int workers = options.parallelism;
    if (!oracle.concurrency_safe()) workers = 1;
    if (static_cast<std::size_t>(workers) > ordered.size()) {
        workers = static_cast<int>(std::max<std::size_t>(ordered.size(), 1));
    }

    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= ordered.size()) break;
            const QAItem& item = *ordered[i];
            ItemRecord rec;
            rec.id = item.id;
            rec.engine = options.engine;
            try {
                rec.outcome = options.engine == EngineKind::Reknos
                                  ? run(g, item.question, item.topic_entities, options.cfg,
                                        oracle)
                                  : run_beam(g, item.question, item.topic_entities,
                                             options.cfg, oracle);
                const ReasoningTrace& trace = rec.outcome.trace;
                rec.calls = trace.total_calls();
                rec.retries = trace.retries;
                rec.search_space = trace.triples_touched.size();
                rec.steps_used = trace.steps_used;
                rec.hits1 = hits_at_1(rec.outcome.answer, item.answers);
                rec.f1 = set_f1(rec.outcome.answer, item.answers);
                rec.retrieved = retrieval_flag(rec.outcome, item.answers);
                if (!rec.retrieved) {
                    rec.failure_class = failure_class_name(
                        classify_non_retrieval(g, item, options.cfg.max_steps,
                                               options.cfg.include_inverse)
                            .cls);
                }
            } catch (const RunAborted& e) {
                rec.failed = true;
                rec.error = e.what();
                rec.calls = e.partial_trace().total_calls();
                rec.retries = e.partial_trace().retries;
                rec.search_space = e.partial_trace().triples_touched.size();
                rec.steps_used = e.partial_trace().steps_used;
            } catch (const Error& e) {
                rec.failed = true;
                rec.error = e.what();
            }
            records[i] = std::move(rec);
        }
    };

    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    BatchResult result;
    result.records = std::move(records);

    MetricsReport& report = result.report;
    report.items = result.records.size();
    std::size_t ok = 0;
    std::size_t misses = 0;
    std::map<std::string, std::size_t> miss_counts;
    for (const auto& rec : result.records) {
        if (rec.failed) {
            ++report.failed_items;
            continue;
        }
        ++ok;
        report.hits_at_1 += rec.hits1;
        report.f1 += rec.f1;
        report.retrieval_rate += rec.retrieved ? 1.0 : 0.0;
        report.avg_calls += rec.calls;
        report.avg_retries += rec.retries;
        report.avg_search_space += static_cast<double>(rec.search_space);
        if (!rec.retrieved) {
            ++misses;
            ++miss_counts[rec.failure_class];
        }

        if (options.engine == EngineKind::Reknos &&
            rec.calls > 2 * rec.steps_used + 1) {
            throw Error("call budget exceeded on item " + rec.id);
        }
    }
    if (ok > 0) {
        report.hits_at_1 /= static_cast<double>(ok);
        report.f1 /= static_cast<double>(ok);
        report.retrieval_rate /= static_cast<double>(ok);
        report.avg_calls /= static_cast<double>(ok);
        report.avg_retries /= static_cast<double>(ok);
        report.avg_search_space /= static_cast<double>(ok);
    }
    for (const char* name : {"misdirection", "depth_limit", "path_absence"}) {
        double fraction = 0.0;
        if (misses > 0 && miss_counts.count(name)) {
            fraction = static_cast<double>(miss_counts[name]) / static_cast<double>(misses);
        }
        report.failure_breakdown[name] = fraction;
    }

    if (options.engine == EngineKind::Reknos && ok > 0 &&
        report.avg_calls > 2.0 * options.cfg.max_steps + 1.0) {
        throw Error("average call budget exceeded");
    }
    return result;
}

void write_results_csv(std::ostream& out, const std::vector<ItemRecord>& records) {
    out << "id,engine,hits1,f1,retrieved,failure_class,calls,retries,search_space,"
           "steps_used,answer_top1\n";
    for (const auto& rec : records) {
        std::string top1 = rec.outcome.answer.empty() ? "" : rec.outcome.answer.front();
        out << csv_field(rec.id) << ',' << engine_name(rec.engine) << ',' << rec.hits1 << ','
            << format_double(rec.f1) << ',' << (rec.retrieved ? 1 : 0) << ','
            << rec.failure_class << ',' << rec.calls << ',' << rec.retries << ','
            << rec.search_space << ',' << rec.steps_used << ',' << csv_field(top1) << '\n';
    }
}

namespace {

json outcome_json(const ReasoningOutcome& outcome) {
    json extracted = json::array();
    for (const auto& pe : outcome.extracted) {
        extracted.push_back({{"path", pe.hops},
                             {"score", pe.score},
                             {"entities", pe.entities},
                             {"truncated", pe.truncated}});
    }
    json levels = json::array();
    for (const auto& lt : outcome.trace.per_level) {
        levels.push_back({{"level", lt.level},
                          {"candidates", lt.candidates},
                          {"raw_scores", lt.raw_scores},
                          {"selected", lt.selected},
                          {"norm_scores", lt.norm_scores},
                          {"scored_by_oracle", lt.scored_by_oracle},
                          {"decision", lt.decision}});
    }
    return {{"answer", outcome.answer},
            {"retrieved", outcome.retrieved},
            {"extracted", extracted},
            {"trace",
             {{"scorer_calls", outcome.trace.scorer_calls},
              {"decision_calls", outcome.trace.decision_calls},
              {"answer_calls", outcome.trace.answer_calls},
              {"retries", outcome.trace.retries},
              {"steps_used", outcome.trace.steps_used},
              {"dead_end", outcome.trace.dead_end},
              {"truncated_entities", outcome.trace.truncated_entities},
              {"search_space", outcome.trace.triples_touched.size()},
              {"per_level", levels}}}};
}

}  // namespace

std::string results_json(const std::vector<ItemRecord>& records, const MetricsReport& rep) {
    json items = json::array();
    for (const auto& rec : records) {
        json entry = {{"id", rec.id},
                      {"engine", engine_name(rec.engine)},
                      {"failed", rec.failed},
                      {"hits1", rec.hits1},
                      {"f1", rec.f1},
                      {"retrieved", rec.retrieved},
                      {"failure_class", rec.failure_class},
                      {"calls", rec.calls},
                      {"retries", rec.retries},
                      {"search_space", rec.search_space},
                      {"steps_used", rec.steps_used}};
        if (rec.failed) {
            entry["error"] = rec.error;
        } else {
            entry["outcome"] = outcome_json(rec.outcome);
        }
        items.push_back(std::move(entry));
    }

    json report = {{"items", rep.items},
                   {"failed_items", rep.failed_items},
                   {"hits_at_1", rep.hits_at_1},
                   {"f1", rep.f1},
                   {"retrieval_rate", rep.retrieval_rate},
                   {"avg_calls", rep.avg_calls},
                   {"avg_retries", rep.avg_retries},
                   {"avg_search_space", rep.avg_search_space},
                   {"failure_breakdown", rep.failure_breakdown}};

    return json{{"items", items}, {"report", report}}.dump(2) + "\n";
}

std::string outcome_to_json(const ReasoningOutcome& outcome) {
    return outcome_json(outcome).dump(2) + "\n";
}

std::string render_report(const MetricsReport& report) {
    std::ostringstream out;
    out << "items: " << report.items << " (failed: " << report.failed_items << ")\n";
    out << "hits@1: " << format_double(report.hits_at_1) << "\n";
    out << "f1: " << format_double(report.f1) << "\n";
    out << "retrieval_rate: " << format_double(report.retrieval_rate) << "\n";
    out << "avg_calls: " << format_double(report.avg_calls) << "\n";
    out << "avg_retries: " << format_double(report.avg_retries) << "\n";
    out << "avg_search_space: " << format_double(report.avg_search_space) << "\n";
    out << "failure_breakdown:";
    for (const auto& [name, fraction] : report.failure_breakdown) {
        out << " " << name << "=" << format_double(fraction);
    }
    out << "\n";
    return out.str();
}

std::string render_comparison(const MetricsReport& reknos, const MetricsReport& beam) {
    std::ostringstream out;
    auto row = [&](const char* label, double a, double b) {
        char buf[160];
        std::snprintf(buf, sizeof(buf), "%-18s %14.6f %14.6f\n", label, a, b);
        out << buf;
    };
    char head[160];
    std::snprintf(head, sizeof(head), "%-18s %14s %14s\n", "metric", "reknos", "beam");
    out << head;
    row("hits@1", reknos.hits_at_1, beam.hits_at_1);
    row("f1", reknos.f1, beam.f1);
    row("retrieval_rate", reknos.retrieval_rate, beam.retrieval_rate);
    row("avg_calls", reknos.avg_calls, beam.avg_calls);
    row("avg_retries", reknos.avg_retries, beam.avg_retries);
    row("avg_search_space", reknos.avg_search_space, beam.avg_search_space);
    return out.str();
}

}  // namespace reknos
