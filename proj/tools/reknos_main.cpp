// Command-line front end: ingest, derive-super, answer, eval, compare,
// classify-failures, and gen, all over the library in src/.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "reknos/beam.hpp"
#include "reknos/errors.hpp"
#include "reknos/eval.hpp"
#include "reknos/graph.hpp"
#include "reknos/lexical_oracle.hpp"
#include "reknos/llm_oracle.hpp"
#include "reknos/reasoner.hpp"
#include "reknos/super_relations.hpp"
#include "reknos/synthetic.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace reknos;

namespace {

// Config files are JSON objects mapping long option names (without dashes)
// to values; values given on the command line win. The file is applied from
// inside the subcommand callback, after parsing, so required I/O options
// still have to come from flags.
void apply_config_file(CLI::App* cmd, const std::string& path) {
    if (path.empty()) return;
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        throw ConfigError("config file is not a JSON object");
    }
    for (const auto& [key, value] : j.items()) {
        CLI::Option* opt = cmd->get_option_no_throw("--" + key);
        if (opt == nullptr) throw ConfigError("config file sets unknown option: " + key);
        if (opt->count() > 0) continue;  // explicit flags win
        auto feed = [&](const json& v) {
            opt->add_result(v.is_string() ? v.get<std::string>() : v.dump());
        };
        if (value.is_array()) {
            for (const auto& v : value) feed(v);
        } else {
            feed(value);
        }
        opt->run_callback();
    }
}

void add_config_option(CLI::App* cmd, std::string& slot) {
    cmd->add_option("--config", slot, "JSON config file; explicit flags override it");
}

struct EngineFlags {
    ReasonerConfig cfg;
    bool unanchored = false;
    std::string strategy = "hier:2";
};

void add_engine_flags(CLI::App* cmd, EngineFlags& ef) {
    cmd->add_option("-N,--width", ef.cfg.width, "super-relations kept per level")
        ->capture_default_str();
    cmd->add_option("-L,--max-steps", ef.cfg.max_steps, "reasoning depth limit")
        ->capture_default_str();
    cmd->add_option("-K,--top-k", ef.cfg.top_k, "paths kept per level (0: same as width)")
        ->capture_default_str();
    cmd->add_option("--entity-cap", ef.cfg.entity_cap,
                    "most extracted entities surfaced to the oracle")
        ->capture_default_str();
    cmd->add_flag("--include-inverse", ef.cfg.include_inverse,
                  "traverse edges in both directions");
    cmd->add_flag("--unanchored", ef.unanchored,
                  "judge connectivity globally instead of from the frontier");
    cmd->add_option("--strategy", ef.strategy,
                    "grouping: hier:<levels> | cluster:<threshold> | file:<mapping.tsv>")
        ->capture_default_str();
}

ReasonerConfig resolved_cfg(const EngineFlags& ef) {
    ReasonerConfig cfg = ef.cfg;
    cfg.anchored = !ef.unanchored;
    cfg.validate();
    return cfg;
}

struct ScorerFlags {
    std::string scorer = "lexical";
    LlmOracleConfig llm;
    CLI::Option* select_count_opt = nullptr;
};

void add_scorer_flags(CLI::App* cmd, ScorerFlags& sf) {
    cmd->add_option("--scorer", sf.scorer, "lexical | llm")
        ->capture_default_str()
        ->check(CLI::IsMember({"lexical", "llm"}));
    cmd->add_option("--endpoint", sf.llm.endpoint,
                    "chat completion URL (required with --scorer llm)");
    cmd->add_option("--model", sf.llm.model, "model name sent with each request");
    cmd->add_option("--temperature", sf.llm.temperature, "sampling temperature")
        ->capture_default_str();
    cmd->add_option("--retry-budget", sf.llm.retry_budget,
                    "extra attempts after a failed call")
        ->capture_default_str();
    cmd->add_option("--few-shot", sf.llm.few_shot_count,
                    "demonstrations in the scoring prompt (1 or 3)")
        ->capture_default_str();
    cmd->add_flag("--rubric", sf.llm.rubric_mode, "append the score-band rubric");
    cmd->add_option("--api-key-env", sf.llm.api_key_env,
                    "environment variable holding the bearer token");
    sf.select_count_opt =
        cmd->add_option("--select-count", sf.llm.select_count,
                        "relations the prompt asks for (default: width)")
            ->capture_default_str();
    cmd->add_option("--timeout", sf.llm.timeout_seconds, "HTTP timeout in seconds")
        ->capture_default_str();
    cmd->add_option("--max-in-flight", sf.llm.max_in_flight,
                    "concurrent requests allowed")
        ->capture_default_str();
}

std::unique_ptr<Oracle> build_oracle(const ScorerFlags& sf, int width) {
    if (sf.scorer == "lexical") return std::make_unique<LexicalOracle>();
    LlmOracleConfig cfg = sf.llm;
    if (cfg.endpoint.empty()) {
        throw CLI::ValidationError("--endpoint is required with --scorer llm");
    }
    if (sf.select_count_opt == nullptr || sf.select_count_opt->count() == 0) {
        cfg.select_count = width;
    }
    cfg.validate();
    return std::make_unique<LlmOracle>(cfg);
}

Graph load_graph(const std::string& path, const std::string& strategy,
                 std::vector<std::string>* warnings = nullptr) {
    Graph g = Graph::load_file(path, Graph::Format::Tsv);
    derive_super_relations(g, parse_strategy(strategy), warnings);
    return g;
}

void write_text_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << content;
}

json engine_config_json(const EngineFlags& ef, const ReasonerConfig& cfg) {
    return {{"strategy", ef.strategy},
            {"width", cfg.width},
            {"max_steps", cfg.max_steps},
            {"top_k", cfg.resolved_top_k()},
            {"entity_cap", cfg.entity_cap},
            {"include_inverse", cfg.include_inverse},
            {"anchored", cfg.anchored}};
}

json scorer_config_json(const ScorerFlags& sf, int width) {
    json j{{"scorer", sf.scorer}};
    if (sf.scorer == "llm") {
        int select = sf.select_count_opt && sf.select_count_opt->count() > 0
                         ? sf.llm.select_count
                         : width;
        j["llm"] = {{"endpoint", sf.llm.endpoint},
                    {"model", sf.llm.model},
                    {"temperature", sf.llm.temperature},
                    {"retry_budget", sf.llm.retry_budget},
                    {"few_shot", sf.llm.few_shot_count},
                    {"rubric", sf.llm.rubric_mode},
                    {"api_key_env", sf.llm.api_key_env},
                    {"select_count", select},
                    {"timeout", sf.llm.timeout_seconds},
                    {"max_in_flight", sf.llm.max_in_flight}};
    }
    return j;
}

void write_run_outputs(const fs::path& dir, const json& config, const std::string& csv,
                       const std::string& results, const std::string& report) {
    fs::create_directories(dir);
    write_text_file(dir / "config.json", config.dump(2) + "\n");
    write_text_file(dir / "results.csv", csv);
    write_text_file(dir / "results.json", results);
    write_text_file(dir / "report.txt", report);
}

// --- subcommand state blocks, kept alive by shared_ptr in the callbacks ---

struct IngestArgs {
    std::string triples;
    std::string format = "tsv";
    std::string out;
    std::string config;
};

struct DeriveArgs {
    std::string graph;
    std::string strategy = "hier:2";
    std::string out;
    std::string config;
};

struct AnswerArgs {
    std::string graph;
    std::string question;
    std::vector<std::string> topics;
    EngineFlags engine;
    ScorerFlags scorer;
    std::string config;
};

struct EvalArgs {
    std::string graph;
    std::string dataset;
    std::string engine = "reknos";
    std::string out;
    int parallelism = 1;
    EngineFlags flags;
    ScorerFlags scorer;
    std::string config;
};

struct CompareArgs {
    std::string graph;
    std::string dataset;
    std::string out;
    int parallelism = 1;
    EngineFlags flags;
    ScorerFlags scorer;
    std::string config;
};

struct ClassifyArgs {
    std::string graph;
    std::string dataset;
    std::string results;
    int max_steps = 3;
    bool include_inverse = false;
    std::string config;
};

void run_ingest(const IngestArgs& a) {
    auto fmt = a.format == "nt" ? Graph::Format::NTriples : Graph::Format::Tsv;
    Graph g = Graph::load_file(a.triples, fmt);
    std::ostringstream snapshot;
    g.write_canonical_tsv(snapshot);
    write_text_file(a.out, snapshot.str());
    std::cout << "entities " << g.entity_count() << ", relations " << g.relation_count()
              << ", facts " << g.triple_count() << " -> " << a.out << "\n";
}

void run_derive(const DeriveArgs& a) {
    std::vector<std::string> warnings;
    Graph g = load_graph(a.graph, a.strategy, &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";

    std::ostringstream mapping;
    for (RelationId r = 0; r < g.relation_count(); ++r) {
        mapping << g.relation_label(r) << '\t' << g.super_label(g.super_of(r)) << '\n';
    }
    if (a.out.empty()) {
        std::cout << mapping.str();
    } else {
        write_text_file(a.out, mapping.str());
        std::cout << g.relation_count() << " relations -> " << g.super_count()
                  << " super-relations (" << a.out << ")\n";
    }
}

void run_answer(const AnswerArgs& a) {
    Graph g = load_graph(a.graph, a.engine.strategy);
    ReasonerConfig cfg = resolved_cfg(a.engine);
    auto oracle = build_oracle(a.scorer, cfg.width);
    ReasoningOutcome outcome = run(g, a.question, a.topics, cfg, *oracle);

    json out = json::parse(outcome_to_json(outcome));
    out["steps_used"] = outcome.trace.steps_used;
    out["calls"] = outcome.trace.total_calls();
    std::cout << out.dump(2) << "\n";
}

void run_eval(const EvalArgs& a) {
    Graph g = load_graph(a.graph, a.flags.strategy);
    auto items = load_dataset_file(a.dataset);
    ReasonerConfig cfg = resolved_cfg(a.flags);
    auto oracle = build_oracle(a.scorer, cfg.width);

    BatchOptions options;
    options.engine = a.engine == "beam" ? EngineKind::Beam : EngineKind::Reknos;
    options.cfg = cfg;
    options.parallelism = a.parallelism;
    BatchResult result = run_batch(g, items, options, *oracle);

    json config = {{"command", "eval"},   {"graph", a.graph},
                   {"dataset", a.dataset}, {"out", a.out},
                   {"engine", a.engine},   {"parallelism", a.parallelism},
                   {"reasoner", engine_config_json(a.flags, cfg)},
                   {"scoring", scorer_config_json(a.scorer, cfg.width)}};
    std::ostringstream csv;
    write_results_csv(csv, result.records);
    std::string report = render_report(result.report);
    write_run_outputs(a.out, config, csv.str(), results_json(result.records, result.report),
                      report);
    std::cout << report;
    if (result.report.failed_items > 0) {
        throw Error(std::to_string(result.report.failed_items) + " items failed");
    }
}

void run_compare(const CompareArgs& a) {
    Graph g = load_graph(a.graph, a.flags.strategy);
    auto items = load_dataset_file(a.dataset);
    ReasonerConfig cfg = resolved_cfg(a.flags);
    auto oracle = build_oracle(a.scorer, cfg.width);

    BatchOptions options;
    options.cfg = cfg;
    options.parallelism = a.parallelism;
    options.engine = EngineKind::Reknos;
    BatchResult primary = run_batch(g, items, options, *oracle);
    options.engine = EngineKind::Beam;
    BatchResult baseline = run_batch(g, items, options, *oracle);

    std::vector<ItemRecord> merged;
    merged.reserve(primary.records.size() + baseline.records.size());
    for (const auto& r : primary.records) merged.push_back(r);
    for (const auto& r : baseline.records) merged.push_back(r);
    std::sort(merged.begin(), merged.end(), [](const ItemRecord& x, const ItemRecord& y) {
        if (x.id != y.id) return x.id < y.id;
        return engine_name(x.engine) < engine_name(y.engine);
    });

    json config = {{"command", "compare"}, {"graph", a.graph},
                   {"dataset", a.dataset},  {"out", a.out},
                   {"parallelism", a.parallelism},
                   {"reasoner", engine_config_json(a.flags, cfg)},
                   {"scoring", scorer_config_json(a.scorer, cfg.width)}};
    std::ostringstream csv;
    write_results_csv(csv, merged);
    json results = {
        {"reknos", json::parse(results_json(primary.records, primary.report))},
        {"beam", json::parse(results_json(baseline.records, baseline.report))}};
    std::string report = render_comparison(primary.report, baseline.report);
    write_run_outputs(a.out, config, csv.str(), results.dump(2) + "\n", report);
    std::cout << report;
    std::size_t failed = primary.report.failed_items + baseline.report.failed_items;
    if (failed > 0) throw Error(std::to_string(failed) + " items failed");
}

void run_classify(const ClassifyArgs& a) {
    Graph g = Graph::load_file(a.graph, Graph::Format::Tsv);
    auto items = load_dataset_file(a.dataset);
    std::map<std::string, const QAItem*> by_id;
    for (const auto& item : items) by_id[item.id] = &item;

    fs::path results_path = fs::path(a.results) / "results.json";
    std::ifstream in(results_path);
    if (!in) throw LoadError("cannot open " + results_path.string());
    json results = json::parse(in, nullptr, false);
    if (results.is_discarded()) throw LoadError("results.json is not valid JSON");

    // eval layout has items at the top level; compare layout nests one
    // results object per engine
    std::vector<json> batches;
    if (results.contains("items")) {
        batches.push_back(results);
    } else {
        for (const char* key : {"reknos", "beam"}) {
            if (results.contains(key)) batches.push_back(results.at(key));
        }
    }
    if (batches.empty()) throw LoadError("results.json has no item records");

    std::map<std::string, std::size_t> counts;
    std::ostringstream detail;
    std::size_t misses = 0;
    for (const auto& batch : batches) {
        for (const auto& rec : batch.at("items")) {
            if (rec.at("failed").get<bool>() || rec.at("retrieved").get<bool>()) continue;
            const std::string id = rec.at("id").get<std::string>();
            auto found = by_id.find(id);
            if (found == by_id.end()) throw LoadError("results name unknown item: " + id);
            Classification c =
                classify_non_retrieval(g, *found->second, a.max_steps, a.include_inverse);
            ++counts[failure_class_name(c.cls)];
            ++misses;
            detail << id << '\t' << rec.at("engine").get<std::string>() << '\t'
                   << failure_class_name(c.cls) << '\t' << c.note << '\n';
        }
    }

    std::ostringstream out;
    out << "non-retrieved records: " << misses << "\n";
    for (const char* name : {"misdirection", "depth_limit", "path_absence"}) {
        std::size_t n = counts.count(name) ? counts[name] : 0;
        double fraction = misses > 0 ? static_cast<double>(n) / static_cast<double>(misses)
                                     : 0.0;
        char line[96];
        std::snprintf(line, sizeof(line), "%-13s %6zu  %8.6f\n", name, n, fraction);
        out << line;
    }
    if (misses > 0) out << "\n" << detail.str();

    json config = {{"command", "classify-failures"},
                   {"graph", a.graph},
                   {"dataset", a.dataset},
                   {"results", a.results},
                   {"max_steps", a.max_steps},
                   {"include_inverse", a.include_inverse}};
    write_text_file(fs::path(a.results) / "classify_config.json", config.dump(2) + "\n");
    write_text_file(fs::path(a.results) / "classify_report.txt", out.str());
    std::cout << out.str();
}

void add_gen_commands(CLI::App* gen) {
    gen->require_subcommand(1);

    auto write_gen = [](const std::string& dir, const json& config,
                        const std::string& graph_tsv, const std::vector<QAItem>* items) {
        fs::create_directories(dir);
        write_text_file(fs::path(dir) / "config.json", config.dump(2) + "\n");
        write_text_file(fs::path(dir) / "graph.tsv", graph_tsv);
        if (items != nullptr) {
            std::ofstream out(fs::path(dir) / "dataset.jsonl", std::ios::binary);
            if (!out) throw Error("cannot write dataset.jsonl");
            write_dataset(out, *items);
        }
        std::cout << "wrote " << dir << "\n";
    };

    {
        auto st = std::make_shared<std::tuple<std::uint64_t, std::size_t, std::string>>(
            0, 500, "");
        auto* cmd = gen->add_subcommand("random", "random graph for property testing");
        cmd->add_option("--seed", std::get<0>(*st), "RNG seed")->capture_default_str();
        cmd->add_option("--max-triples", std::get<1>(*st), "upper bound on emitted rows")
            ->capture_default_str();
        cmd->add_option("--out", std::get<2>(*st), "output directory")->required();
        cmd->callback([st, write_gen] {
            auto& [seed, max_triples, out] = *st;
            json config = {{"command", "gen random"},
                           {"seed", seed},
                           {"max_triples", max_triples},
                           {"out", out}};
            write_gen(out, config, random_graph_tsv(seed, max_triples), nullptr);
        });
    }
    {
        struct BranchingArgs {
            BranchingSpec spec;
            std::string out;
        };
        auto st = std::make_shared<BranchingArgs>();
        auto* cmd = gen->add_subcommand("branching",
                                        "layered graph with a fixed relation fan-out");
        cmd->add_option("--depth", st->spec.depth, "layers of relations")
            ->capture_default_str();
        cmd->add_option("--supers", st->spec.supers, "relation families per layer")
            ->capture_default_str();
        cmd->add_option("--members", st->spec.members, "relations per family")
            ->capture_default_str();
        cmd->add_option("--roots", st->spec.roots, "level-0 entities")->capture_default_str();
        cmd->add_option("--per-level", st->spec.entities_per_level,
                        "entities per layer (0: supers*members)")
            ->capture_default_str();
        cmd->add_flag("--disjoint-roots", st->spec.disjoint_roots,
                      "give each root a private copy of the layers");
        cmd->add_option("--seed", st->spec.seed, "RNG seed for edge targets")
            ->capture_default_str();
        cmd->add_option("--out", st->out, "output directory")->required();
        cmd->callback([st, write_gen] {
            json config = {{"command", "gen branching"},
                           {"depth", st->spec.depth},
                           {"supers", st->spec.supers},
                           {"members", st->spec.members},
                           {"roots", st->spec.roots},
                           {"per_level", st->spec.entities_per_level},
                           {"disjoint_roots", st->spec.disjoint_roots},
                           {"seed", st->spec.seed},
                           {"out", st->out}};
            write_gen(st->out, config, branching_graph_tsv(st->spec), nullptr);
        });
    }
    {
        auto st = std::make_shared<std::pair<std::size_t, std::string>>(50, "");
        auto* cmd = gen->add_subcommand("chain-qa", "chain-question dataset plus its graph");
        cmd->add_option("--count", st->first, "questions to generate")->capture_default_str();
        cmd->add_option("--out", st->second, "output directory")->required();
        cmd->callback([st, write_gen] {
            ChainQA qa = chain_qa(st->first);
            json config = {{"command", "gen chain-qa"},
                           {"count", st->first},
                           {"out", st->second}};
            write_gen(st->second, config, qa.triples_tsv, &qa.items);
        });
    }
    {
        struct FailureArgs {
            std::string mode = "misdirection";
            std::uint64_t seed = 0;
            std::string out;
        };
        auto st = std::make_shared<FailureArgs>();
        auto* cmd = gen->add_subcommand("failure",
                                        "graph and question that miss retrieval on purpose");
        cmd->add_option("--mode", st->mode, "misdirection | depth_limit | path_absence")
            ->capture_default_str()
            ->check(CLI::IsMember({"misdirection", "depth_limit", "path_absence"}));
        cmd->add_option("--seed", st->seed, "RNG seed")->capture_default_str();
        cmd->add_option("--out", st->out, "output directory")->required();
        cmd->callback([st, write_gen] {
            FailureClass mode = st->mode == "misdirection" ? FailureClass::Misdirection
                                : st->mode == "depth_limit" ? FailureClass::DepthLimit
                                                            : FailureClass::PathAbsence;
            FailureFixture fx = failure_fixture(mode, st->seed);
            std::vector<QAItem> items{fx.item};
            json config = {{"command", "gen failure"},
                           {"mode", st->mode},
                           {"seed", st->seed},
                           {"out", st->out}};
            write_gen(st->out, config, fx.triples_tsv, &items);
            std::cout << "expected class: " << failure_class_name(fx.expected) << "\n";
        });
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"super-relation reasoning over knowledge graphs"};
    app.require_subcommand(1);

    {
        auto st = std::make_shared<IngestArgs>();
        auto* cmd = app.add_subcommand("ingest", "load triples, write the canonical snapshot");
        cmd->add_option("--triples", st->triples, "input triple file")->required();
        cmd->add_option("--format", st->format, "tsv | nt")
            ->capture_default_str()
            ->check(CLI::IsMember({"tsv", "nt"}));
        cmd->add_option("--out", st->out, "snapshot destination (canonical TSV)")->required();
        add_config_option(cmd, st->config);
        cmd->callback([st, cmd] {
            apply_config_file(cmd, st->config);
            run_ingest(*st);
        });
    }
    {
        auto st = std::make_shared<DeriveArgs>();
        auto* cmd = app.add_subcommand("derive-super",
                                       "derive and emit the relation grouping");
        cmd->add_option("--graph", st->graph, "graph snapshot (TSV)")->required();
        cmd->add_option("--strategy", st->strategy,
                        "hier:<levels> | cluster:<threshold> | file:<mapping.tsv>")
            ->capture_default_str();
        cmd->add_option("--out", st->out, "mapping destination (default: stdout)");
        add_config_option(cmd, st->config);
        cmd->callback([st, cmd] {
            apply_config_file(cmd, st->config);
            run_derive(*st);
        });
    }
    {
        auto st = std::make_shared<AnswerArgs>();
        auto* cmd = app.add_subcommand("answer", "answer one question, trace to stdout");
        cmd->add_option("--graph", st->graph, "graph snapshot (TSV)")->required();
        cmd->add_option("--question", st->question, "natural-language question")->required();
        cmd->add_option("--topic", st->topics, "topic entity (repeatable)")->required();
        add_engine_flags(cmd, st->engine);
        add_scorer_flags(cmd, st->scorer);
        add_config_option(cmd, st->config);
        cmd->callback([st, cmd] {
            apply_config_file(cmd, st->config);
            run_answer(*st);
        });
    }
    {
        auto st = std::make_shared<EvalArgs>();
        auto* cmd = app.add_subcommand("eval", "run a dataset through one engine");
        cmd->add_option("--graph", st->graph, "graph snapshot (TSV)")->required();
        cmd->add_option("--dataset", st->dataset, "questions (JSONL)")->required();
        cmd->add_option("--engine", st->engine, "reknos | beam")
            ->capture_default_str()
            ->check(CLI::IsMember({"reknos", "beam"}));
        cmd->add_option("--out", st->out, "output directory")->required();
        cmd->add_option("--parallelism", st->parallelism, "worker threads")
            ->capture_default_str();
        add_engine_flags(cmd, st->flags);
        add_scorer_flags(cmd, st->scorer);
        add_config_option(cmd, st->config);
        cmd->callback([st, cmd] {
            apply_config_file(cmd, st->config);
            run_eval(*st);
        });
    }
    {
        auto st = std::make_shared<CompareArgs>();
        auto* cmd = app.add_subcommand("compare", "run both engines, report side by side");
        cmd->add_option("--graph", st->graph, "graph snapshot (TSV)")->required();
        cmd->add_option("--dataset", st->dataset, "questions (JSONL)")->required();
        cmd->add_option("--out", st->out, "output directory")->required();
        cmd->add_option("--parallelism", st->parallelism, "worker threads")
            ->capture_default_str();
        add_engine_flags(cmd, st->flags);
        add_scorer_flags(cmd, st->scorer);
        add_config_option(cmd, st->config);
        cmd->callback([st, cmd] {
            apply_config_file(cmd, st->config);
            run_compare(*st);
        });
    }
    {
        auto st = std::make_shared<ClassifyArgs>();
        auto* cmd = app.add_subcommand("classify-failures",
                                       "explain the non-retrieved records of a past run");
        cmd->add_option("--graph", st->graph, "graph snapshot (TSV)")->required();
        cmd->add_option("--dataset", st->dataset, "questions (JSONL)")->required();
        cmd->add_option("--results", st->results, "directory written by eval or compare")
            ->required();
        cmd->add_option("-L,--max-steps", st->max_steps, "depth bound used by the run")
            ->capture_default_str();
        cmd->add_flag("--include-inverse", st->include_inverse,
                      "classify with both edge directions");
        add_config_option(cmd, st->config);
        cmd->callback([st, cmd] {
            apply_config_file(cmd, st->config);
            run_classify(*st);
        });
    }
    add_gen_commands(app.add_subcommand("gen", "write synthetic graphs and datasets"));

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
