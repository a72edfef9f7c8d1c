#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "reknos/graph.hpp"
#include "reknos/reasoner.hpp"

namespace reknos {

struct QAItem {
    std::string id;
    std::string question;
    std::vector<std::string> topic_entities;
    std::vector<std::string> answers;  // gold aliases
};

// JSONL, one object per line with fields id, question, topic_entities,
// answers. Schema violations name the 1-based row; duplicate ids are
// rejected.
std::vector<QAItem> load_dataset(std::istream& in);
std::vector<QAItem> load_dataset_file(const std::string& path);
void write_dataset(std::ostream& out, const std::vector<QAItem>& items);

// 1 when the first predicted answer matches any gold alias after
// normalization (lowercase, squeeze whitespace, strip surrounding
// punctuation and a leading article).
int hits_at_1(const std::vector<std::string>& predicted, const std::vector<std::string>& gold);

// F1 over normalized answer sets; two empty sets count as a perfect match.
double set_f1(const std::vector<std::string>& predicted, const std::vector<std::string>& gold);

// Whether any gold alias appears among the entities the engine pulled out
// of the graph. This judges retrieval, not the final answer text.
bool retrieval_flag(const ReasoningOutcome& outcome, const std::vector<std::string>& gold);

enum class FailureClass { Misdirection, DepthLimit, PathAbsence };

std::string failure_class_name(FailureClass c);

struct Classification {
    FailureClass cls;
    std::string note;
};

// Why retrieval missed: the gold answer was reachable within the step bound
// but down an unselected branch (Misdirection), only reachable beyond it
// (DepthLimit), or not connected to the topics at all (PathAbsence). Runs a
// BFS over concrete relations, so the verdict does not depend on which
// engine produced the outcome.
Classification classify_non_retrieval(const Graph& g, const QAItem& item, int max_steps,
                                      bool include_inverse = false);

enum class EngineKind { Reknos, Beam };

std::string engine_name(EngineKind k);

struct ItemRecord {
    std::string id;
    EngineKind engine = EngineKind::Reknos;
    bool failed = false;       // oracle gave up mid-run
    std::string error;
    int hits1 = 0;
    double f1 = 0.0;
    bool retrieved = false;
    std::string failure_class;  // empty when retrieved or failed
    int calls = 0;
    int retries = 0;
    std::size_t search_space = 0;  // distinct facts touched
    int steps_used = 0;
    ReasoningOutcome outcome;
};

struct MetricsReport {
    std::size_t items = 0;
    std::size_t failed_items = 0;
    double hits_at_1 = 0.0;
    double f1 = 0.0;
    double retrieval_rate = 0.0;
    double avg_calls = 0.0;    // retries not included
    double avg_retries = 0.0;
    double avg_search_space = 0.0;
    std::map<std::string, double> failure_breakdown;  // fractions over misses
};

struct BatchOptions {
    EngineKind engine = EngineKind::Reknos;
    ReasonerConfig cfg;
    int parallelism = 1;
};

struct BatchResult {
    std::vector<ItemRecord> records;  // ordered by item id
    MetricsReport report;
};

// Runs every item, in parallel when asked, and aggregates. A failing oracle
// marks its item failed rather than aborting the batch. Results are keyed
// and ordered by item id, so the output does not depend on scheduling.
BatchResult run_batch(const Graph& g, const std::vector<QAItem>& items,
                      const BatchOptions& options, Oracle& oracle);

void write_results_csv(std::ostream& out, const std::vector<ItemRecord>& records);
std::string results_json(const std::vector<ItemRecord>& records, const MetricsReport& report);
std::string outcome_to_json(const ReasoningOutcome& outcome);
std::string render_report(const MetricsReport& report);
std::string render_comparison(const MetricsReport& reknos, const MetricsReport& beam);

}  // namespace reknos
