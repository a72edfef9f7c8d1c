#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <sstream>

#include "json.hpp"

#include "support.hpp"

using namespace reknos;
using namespace testsupport;

namespace {

const char* kDataset = R"({"id":"q1","question":"e4","topic_entities":["e1"],"answers":["e4"]}
{"id":"q2","question":"e2","topic_entities":["e1"],"answers":["e2","e3"]}
{"id":"q3","question":"zzz unmatched","topic_entities":["e2"],"answers":["e1"]}
)";

const char* kDatasetCsv =
    "id,engine,hits1,f1,retrieved,failure_class,calls,retries,search_space,"
    "steps_used,answer_top1\n"
    "q1,reknos,1,0.500000,1,,3,0,5,2,e4\n"
    "q2,reknos,1,1.000000,1,,2,0,2,1,e2\n"
    "q3,reknos,0,0.000000,0,path_absence,2,0,2,1,e4\n";

// Writes the shared fixture graph and returns its path.
std::string graph_file(const TempDir& dir) {
    std::string path = dir.file("graph.tsv");
    write_file(path, kKgaTsv);
    return path;
}

}  // namespace

TEST_CASE("usage problems and domain errors exit distinctly") {
    CliResult help = run_cli("--help");
    CHECK(help.exit_code == 0);
    CHECK(help.output.find("ingest") != std::string::npos);
    CHECK(help.output.find("classify-failures") != std::string::npos);
    CHECK(run_cli("eval --help").exit_code == 0);

    CHECK(run_cli("").exit_code == 2);             // a subcommand is required
    CHECK(run_cli("frobnicate").exit_code == 2);   // unknown subcommand
    CHECK(run_cli("answer --graph g").exit_code == 2);  // missing required options
    CHECK(run_cli("eval --graph g --dataset d").exit_code == 2);
    CHECK(run_cli("gen").exit_code == 2);

    CliResult missing = run_cli("ingest --triples /no/such/file.tsv --out /tmp/x");
    CHECK(missing.exit_code == 1);
    CHECK(missing.output.find("/no/such/file.tsv") != std::string::npos);
}

TEST_CASE("ingest writes the canonical snapshot") {
    TempDir dir;
    std::string graph = graph_file(dir);
    std::string snapshot = dir.file("snapshot.tsv");

    CliResult res = run_cli("ingest --triples " + graph + " --out " + snapshot);
    CHECK(res.exit_code == 0);
    CHECK(res.output.find("entities 6, relations 5, facts 5") != std::string::npos);

    std::ostringstream expected;
    Graph::from_tsv(kKgaTsv).write_canonical_tsv(expected);
    CHECK(read_file(snapshot) == expected.str());
}

TEST_CASE("derive-super emits a grouping that reloads as a file strategy") {
    TempDir dir;
    std::string graph = graph_file(dir);

    CliResult stdout_run = run_cli("derive-super --graph " + graph);
    CHECK(stdout_run.exit_code == 0);
    CHECK(stdout_run.output.find("a.x.p\ta.x\n") != std::string::npos);
    CHECK(stdout_run.output.find("c.z.t\tc.z\n") != std::string::npos);

    std::string mapping = dir.file("mapping.tsv");
    CliResult file_run = run_cli("derive-super --graph " + graph + " --out " + mapping);
    CHECK(file_run.exit_code == 0);
    CHECK(file_run.output.find("5 relations -> 3 super-relations") != std::string::npos);

    CliResult reload = run_cli("derive-super --graph " + graph + " --strategy file:" + mapping);
    CHECK(reload.exit_code == 0);
    CHECK(reload.output == read_file(mapping));

    CHECK(run_cli("derive-super --graph " + graph + " --strategy cluster:0.5").exit_code == 0);
    CHECK(run_cli("derive-super --graph " + graph + " --strategy bogus").exit_code == 2);
}

TEST_CASE("answer prints one machine-readable outcome") {
    TempDir dir;
    std::string graph = graph_file(dir);

    CliResult res = run_cli("answer --graph " + graph + " --question e4 --topic e1");
    REQUIRE(res.exit_code == 0);
    auto out = nlohmann::json::parse(res.output);
    CHECK(out["answer"][0] == "e4");
    CHECK(out["steps_used"] == 2);
    CHECK(out["calls"] == 3);
    CHECK(out["retrieved"] == true);
    CHECK(out["trace"]["per_level"].size() == 2);

    CliResult bad_topic =
        run_cli("answer --graph " + graph + " --question e4 --topic zz");
    CHECK(bad_topic.exit_code == 1);
    CHECK(bad_topic.output.find("unknown topic entity: zz") != std::string::npos);

    CHECK(run_cli("answer --graph " + graph + " --question e4 --topic e1 --width 0")
              .exit_code == 2);
}

TEST_CASE("config files feed defaults that explicit flags override") {
    TempDir dir;
    std::string graph = graph_file(dir);
    std::string cfg = dir.file("run.json");
    write_file(cfg, "{\"max-steps\": 1, \"width\": 2}\n");

    CliResult limited = run_cli("answer --graph " + graph +
                                " --question e4 --topic e1 --config " + cfg);
    REQUIRE(limited.exit_code == 0);
    CHECK(nlohmann::json::parse(limited.output)["steps_used"] == 1);

    CliResult overridden = run_cli("answer --graph " + graph +
                                   " --question e4 --topic e1 --config " + cfg + " -L 2");
    REQUIRE(overridden.exit_code == 0);
    CHECK(nlohmann::json::parse(overridden.output)["steps_used"] == 2);

    std::string broken = dir.file("broken.json");
    write_file(broken, "[1, 2]\n");
    CHECK(run_cli("answer --graph " + graph + " --question e4 --topic e1 --config " + broken)
              .exit_code == 2);
}

TEST_CASE("eval writes a complete run directory") {
    TempDir dir;
    std::string graph = graph_file(dir);
    std::string dataset = dir.file("dataset.jsonl");
    write_file(dataset, kDataset);
    std::string out = dir.file("run");

    CliResult res = run_cli("eval --graph " + graph + " --dataset " + dataset + " --out " + out);
    CHECK(res.exit_code == 0);
    CHECK(res.output.find("items: 3 (failed: 0)") != std::string::npos);
    CHECK(res.output.find("hits@1: 0.666667") != std::string::npos);

    auto config = nlohmann::json::parse(read_file(out + "/config.json"));
    CHECK(config["command"] == "eval");
    CHECK(config["engine"] == "reknos");
    CHECK(config["reasoner"]["width"] == 3);
    CHECK(config["reasoner"]["anchored"] == true);
    CHECK(config["scoring"]["scorer"] == "lexical");

    CHECK(read_file(out + "/results.csv") == kDatasetCsv);
    auto results = nlohmann::json::parse(read_file(out + "/results.json"));
    CHECK(results["report"]["items"] == 3);
    CHECK(read_file(out + "/report.txt").find("retrieval_rate:") != std::string::npos);

    std::string beam_out = dir.file("beam_run");
    CliResult beam = run_cli("eval --engine beam --graph " + graph + " --dataset " + dataset +
                             " --out " + beam_out);
    CHECK(beam.exit_code == 0);
    CHECK(read_file(beam_out + "/results.csv").find("q1,beam,") != std::string::npos);
}

TEST_CASE("eval reports item failures through the exit code") {
    TempDir dir;
    std::string graph = graph_file(dir);
    std::string dataset = dir.file("dataset.jsonl");
    write_file(dataset,
               R"({"id":"bad","question":"q","topic_entities":["ghost"],"answers":["e4"]})"
               "\n");
    std::string out = dir.file("run");

    CliResult res = run_cli("eval --graph " + graph + " --dataset " + dataset + " --out " + out);
    CHECK(res.exit_code == 1);
    CHECK(res.output.find("1 items failed") != std::string::npos);

    // outputs land on disk before the failure is raised
    auto results = nlohmann::json::parse(read_file(out + "/results.json"));
    CHECK(results["items"][0]["failed"] == true);
    CHECK(results["items"][0]["error"] == "unknown topic entity: ghost");
}

TEST_CASE("compare runs both engines over one dataset") {
    TempDir dir;
    std::string graph = graph_file(dir);
    std::string dataset = dir.file("dataset.jsonl");
    write_file(dataset, kDataset);
    std::string out = dir.file("cmp");

    CliResult res =
        run_cli("compare --graph " + graph + " --dataset " + dataset + " --out " + out);
    CHECK(res.exit_code == 0);
    CHECK(res.output.find("metric") != std::string::npos);
    CHECK(res.output.find("avg_calls") != std::string::npos);

    std::string csv = read_file(out + "/results.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);  // header + 3 ids x 2 engines
    CHECK(csv.find("q1,beam,") < csv.find("q1,reknos,"));
    CHECK(csv.find("q1,reknos,") < csv.find("q2,beam,"));

    auto results = nlohmann::json::parse(read_file(out + "/results.json"));
    CHECK(results.contains("reknos"));
    CHECK(results.contains("beam"));
    CHECK(results["reknos"]["report"]["items"] == 3);
}

TEST_CASE("classify-failures explains the misses of a past run") {
    TempDir dir;
    std::string graph = graph_file(dir);
    std::string dataset = dir.file("dataset.jsonl");
    write_file(dataset, kDataset);
    std::string out = dir.file("run");
    REQUIRE(run_cli("eval --graph " + graph + " --dataset " + dataset + " --out " + out)
                .exit_code == 0);

    CliResult res = run_cli("classify-failures --graph " + graph + " --dataset " + dataset +
                            " --results " + out);
    CHECK(res.exit_code == 0);
    CHECK(res.output.find("non-retrieved records: 1") != std::string::npos);
    CHECK(res.output.find("q3\treknos\tpath_absence\t"
                          "gold answer unreachable from the topics") != std::string::npos);

    auto config = nlohmann::json::parse(read_file(out + "/classify_config.json"));
    CHECK(config["command"] == "classify-failures");
    CHECK(config["max_steps"] == 3);
    CHECK(read_file(out + "/classify_report.txt") == res.output);

    CliResult absent = run_cli("classify-failures --graph " + graph + " --dataset " + dataset +
                               " --results " + dir.file("nowhere"));
    CHECK(absent.exit_code == 1);
    CHECK(absent.output.find("cannot open") != std::string::npos);
}

TEST_CASE("classify-failures reads comparison layouts too") {
    TempDir dir;
    std::string graph = graph_file(dir);
    std::string dataset = dir.file("dataset.jsonl");
    write_file(dataset, kDataset);
    std::string out = dir.file("cmp");
    REQUIRE(run_cli("compare --graph " + graph + " --dataset " + dataset + " --out " + out)
                .exit_code == 0);

    CliResult res = run_cli("classify-failures --graph " + graph + " --dataset " + dataset +
                            " --results " + out);
    CHECK(res.exit_code == 0);
    // q3 misses under both engines
    CHECK(res.output.find("non-retrieved records: 2") != std::string::npos);
    CHECK(res.output.find("q3\tbeam\t") != std::string::npos);
    CHECK(res.output.find("q3\treknos\t") != std::string::npos);
}

TEST_CASE("generated fixtures drive the full pipeline") {
    TempDir dir;

    SUBCASE("chain questions evaluate perfectly") {
        std::string gen = dir.file("chain");
        CliResult g = run_cli("gen chain-qa --count 4 --out " + gen);
        CHECK(g.exit_code == 0);
        CHECK(g.output.find("wrote " + gen) != std::string::npos);

        CliResult e = run_cli("eval --graph " + gen + "/graph.tsv --dataset " + gen +
                              "/dataset.jsonl --out " + dir.file("chain_run"));
        CHECK(e.exit_code == 0);
        CHECK(e.output.find("hits@1: 1.000000") != std::string::npos);
        CHECK(e.output.find("retrieval_rate: 1.000000") != std::string::npos);
    }

    SUBCASE("failure fixtures classify as promised") {
        std::string gen = dir.file("fail");
        CliResult g = run_cli("gen failure --mode depth_limit --seed 2 --out " + gen);
        CHECK(g.exit_code == 0);
        CHECK(g.output.find("expected class: depth_limit") != std::string::npos);

        std::string run = dir.file("fail_run");
        CHECK(run_cli("eval --graph " + gen + "/graph.tsv --dataset " + gen +
                      "/dataset.jsonl --out " + run)
                  .exit_code == 0);
        CliResult c = run_cli("classify-failures --graph " + gen + "/graph.tsv --dataset " +
                              gen + "/dataset.jsonl --results " + run);
        CHECK(c.exit_code == 0);
        CHECK(c.output.find("non-retrieved records: 1") != std::string::npos);
        CHECK(c.output.find("depth_limit") != std::string::npos);
        CHECK(c.output.find("hops out") != std::string::npos);
    }

    SUBCASE("random and branching graphs ingest cleanly") {
        std::string rnd = dir.file("rnd");
        CHECK(run_cli("gen random --seed 7 --max-triples 100 --out " + rnd).exit_code == 0);
        CHECK(run_cli("ingest --triples " + rnd + "/graph.tsv --out " + dir.file("snap.tsv"))
                  .exit_code == 0);

        std::string br = dir.file("br");
        CHECK(run_cli("gen branching --depth 2 --roots 2 --out " + br).exit_code == 0);
        CHECK(read_file(br + "/graph.tsv").find("L1.s0.m0") != std::string::npos);
        CHECK(read_file(br + "/graph.tsv").find("L2.s2.m2") != std::string::npos);
    }
}
