#include "reknos/llm_oracle.hpp"

#include <algorithm>
#include <cctype>
#include <condition_variable>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <sstream>

#include "httplib.h"
#include "json.hpp"

#include "reknos/errors.hpp"
#include "reknos/text.hpp"

namespace reknos {

class InFlightGate {
public:
    explicit InFlightGate(int slots) : slots_(slots) {}

    void acquire() {
        std::unique_lock<std::mutex> lock(mutex_);
        ready_.wait(lock, [this] { return slots_ > 0; });
        --slots_;
    }

    void release() {
        {
            std::lock_guard<std::mutex> lock(mutex_);
            ++slots_;
        }
        ready_.notify_one();
    }

private:
    std::mutex mutex_;
    std::condition_variable ready_;
    int slots_;
};

namespace {

struct GateHold {
    explicit GateHold(InFlightGate& gate) : gate_(gate) { gate_.acquire(); }
    ~GateHold() { gate_.release(); }
    GateHold(const GateHold&) = delete;
    GateHold& operator=(const GateHold&) = delete;

private:
    InFlightGate& gate_;
};

}  // namespace

namespace {

const char* kNumberWords[] = {"zero", "one", "two",   "three", "four", "five",
                              "six",  "seven", "eight", "nine",  "ten"};

std::string count_word(int n) {
    if (n >= 0 && n <= 10) return kNumberWords[n];
    return std::to_string(n);
}

// Shipped demonstrations for the scoring prompt. The single-shot
// configuration uses the first one.
const char* kScoreDemos[] = {
    "Question: What types of television programs did the creator of The Twilight Zone produce?\n"
    "Topic Entity: The Twilight Zone\n"
    "Candidate Relations: tv.program.creator, tv.program.genre, tv.program.country_of_origin\n"
    "Selected:\n"
    "tv.program.creator | 0.9\n"
    "tv.program.genre | 0.6\n"
    "tv.program.country_of_origin | 0.1\n",

    "Question: Which country does the capital city of the region lie in?\n"
    "Topic Entity: Lombardy\n"
    "Candidate Relations: location.region.capital, location.region.population, "
    "location.region.timezone\n"
    "Selected:\n"
    "location.region.capital | 0.9\n"
    "location.region.timezone | 0.2\n"
    "location.region.population | 0.1\n",

    "Question: Who directed the film that won the award?\n"
    "Topic Entity: Palme d'Or\n"
    "Candidate Relations: award.award.winning_film, film.film.director, film.film.runtime\n"
    "Selected:\n"
    "award.award.winning_film | 0.8\n"
    "film.film.director | 0.8\n"
    "film.film.runtime | 0.1\n",
};

const char* kRubric =
    "Score bands:\n"
    "[0.8 – 1.0]: Highly Relevant. The relation directly addresses the question.\n"
    "[0.6 – 0.8]: Strongly Related. The relation is likely on the answer path.\n"
    "[0.4 – 0.6]: Moderately Related. The relation gives useful context.\n"
    "[0.2 – 0.4]: Weakly Related. The relation is unlikely to help.\n"
    "[0.0 – 0.2]: Irrelevant. The relation has no bearing on the question.\n";

std::string render_labels(const std::vector<std::string>& labels) {
    if (labels.empty()) return "(none)";
    return join(labels, ", ");
}

// First decimal found in the segment, if any.
bool parse_score_token(const std::string& segment, double* out) {
    for (std::size_t i = 0; i < segment.size(); ++i) {
        char c = segment[i];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '+') {
            const char* start = segment.c_str() + i;
            char* end = nullptr;
            double v = std::strtod(start, &end);
            if (end != start) {
                *out = v;
                return true;
            }
        }
    }
    return false;
}

struct ParsedUrl {
    std::string base;  // scheme://host[:port]
    std::string path;
};

ParsedUrl split_endpoint(const std::string& endpoint) {
    auto scheme_end = endpoint.find("://");
    if (scheme_end == std::string::npos) {
        throw ConfigError("endpoint must include a scheme: " + endpoint);
    }
    auto path_start = endpoint.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {endpoint, "/"};
    return {endpoint.substr(0, path_start), endpoint.substr(path_start)};
}

std::string bearer_token(const LlmOracleConfig& cfg) {
    if (cfg.api_key_env.empty()) return "";
    const char* value = std::getenv(cfg.api_key_env.c_str());
    if (value == nullptr || *value == '\0') {
        throw ConfigError("environment variable " + cfg.api_key_env + " is not set");
    }
    return value;
}

// Single round-trip; TransportError on anything short of a usable response.
std::string post_once(const LlmOracleConfig& cfg, const std::string& body) {
    std::string token = bearer_token(cfg);
    ParsedUrl url = split_endpoint(cfg.endpoint);

    httplib::Client client(url.base);
    client.set_connection_timeout(cfg.timeout_seconds, 0);
    client.set_read_timeout(cfg.timeout_seconds, 0);
    client.set_write_timeout(cfg.timeout_seconds, 0);

    httplib::Headers headers;
    if (!token.empty()) headers.emplace("Authorization", "Bearer " + token);

    auto res = client.Post(url.path, headers, body, "application/json");
    if (!res) {
        throw TransportError("request to " + cfg.endpoint + " failed: " +
                             httplib::to_string(res.error()));
    }
    if (res->status < 200 || res->status >= 300) {
        std::string snippet = res->body.substr(0, 200);
        throw TransportError("endpoint returned status " + std::to_string(res->status) +
                                 (snippet.empty() ? "" : ": " + snippet),
                             res->status);
    }

    nlohmann::json parsed = nlohmann::json::parse(res->body, nullptr, false);
    if (parsed.is_discarded()) throw TransportError("response body is not JSON");
    try {
        return parsed.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception&) {
        throw TransportError("response lacks choices[0].message.content");
    }
}

}  // namespace

void LlmOracleConfig::validate() const {
    if (endpoint.empty()) throw ConfigError("llm endpoint is required");
    if (model.empty()) throw ConfigError("llm model is required");
    if (few_shot_count != 1 && few_shot_count != 3) {
        throw ConfigError("few-shot count must be 1 or 3");
    }
    if (retry_budget < 0) throw ConfigError("retry budget must not be negative");
    if (select_count < 1) throw ConfigError("select count must be at least 1");
    if (timeout_seconds < 1) throw ConfigError("timeout must be at least 1 second");
    if (max_in_flight < 1) throw ConfigError("max in-flight requests must be at least 1");
}

std::string build_score_prompt(const std::string& question,
                               const std::vector<std::string>& topic_labels,
                               const std::vector<std::string>& candidates,
                               const LlmOracleConfig& cfg) {
    std::ostringstream p;
    p << "You need to select " << count_word(cfg.select_count)
      << " relations from the following candidate relations, which are the most helpful for "
         "answering the question.\n";
    p << "Question: " << question << "\n";
    p << "Topic Entity: " << render_labels(topic_labels) << "\n";
    p << "Candidate Relations: " << render_labels(candidates) << "\n";
    p << "Reply with the relations you selected from these candidate relations:\n";

    for (int i = 0; i < cfg.few_shot_count; ++i) {
        p << "\nExample:\n" << kScoreDemos[i];
    }
    if (cfg.rubric_mode) {
        p << "\n" << kRubric;
    }
    p << "\nUse one line per selected relation, formatted as <relation> | <score>, where the "
         "score is a decimal between 0 and 1.\n";
    return p.str();
}

std::vector<double> parse_score_response(const std::string& text,
                                         const std::vector<std::string>& candidates) {
    std::vector<double> scores(candidates.size(), 0.0);
    std::vector<char> seen(candidates.size(), 0);

    std::vector<std::string> lowered;
    lowered.reserve(candidates.size());
    for (const auto& c : candidates) lowered.push_back(to_lower(trim(c)));

    bool any = false;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        auto pipe = line.find('|');
        std::string label_part = to_lower(trim(pipe == std::string::npos
                                                    ? line
                                                    : line.substr(0, pipe)));
        if (label_part.empty()) continue;
        auto it = std::find(lowered.begin(), lowered.end(), label_part);
        if (it == lowered.end()) continue;  // invented labels fall out here
        std::size_t idx = static_cast<std::size_t>(it - lowered.begin());
        if (seen[idx]) continue;  // first mention wins
        seen[idx] = 1;
        any = true;

        double value = 0.5;  // mentioned without a usable score
        if (pipe != std::string::npos) {
            double parsed = 0.0;
            if (parse_score_token(line.substr(pipe + 1), &parsed)) value = parsed;
        }
        scores[idx] = std::clamp(value, 0.0, 1.0);
    }
    if (!any) throw ParseFailure("response names no candidate relation");
    return scores;
}

std::string build_request_body(const LlmOracleConfig& cfg,
                               const std::vector<ChatMessage>& messages) {
    nlohmann::json body;
    body["model"] = cfg.model;
    body["temperature"] = cfg.temperature;
    body["messages"] = nlohmann::json::array();
    for (const auto& [role, content] : messages) {
        body["messages"].push_back({{"role", role}, {"content", content}});
    }
    return body.dump();
}

std::string llm_call(const LlmOracleConfig& cfg, const std::vector<ChatMessage>& messages,
                     int* retries) {
    cfg.validate();
    std::string body = build_request_body(cfg, messages);
    for (int attempt = 0;; ++attempt) {
        try {
            return post_once(cfg, body);
        } catch (const TransportError&) {
            if (attempt >= cfg.retry_budget) throw;
            if (retries) ++*retries;
        }
    }
}

std::string build_decide_prompt(const std::string& question,
                                const std::vector<std::string>& path_summaries,
                                const std::vector<std::string>& entity_labels) {
    std::ostringstream p;
    p << "Decide whether the retrieved entities are sufficient to answer the question.\n";
    p << "Question: " << question << "\n";
    p << "Reasoning Paths: " << render_labels(path_summaries) << "\n";
    p << "Retrieved Entities: " << render_labels(entity_labels) << "\n";
    p << "Reply with exactly one word: Answer if they are sufficient, Continue otherwise.\n";
    return p.str();
}

std::string build_answer_prompt(const std::string& question,
                                const std::vector<std::string>& path_summaries,
                                const std::vector<std::string>& entity_labels) {
    std::ostringstream p;
    p << "Answer the question using the reasoning paths and the retrieved entities.\n";
    p << "Question: " << question << "\n";
    p << "Reasoning Paths: " << render_labels(path_summaries) << "\n";
    p << "Retrieved Entities: " << render_labels(entity_labels) << "\n";
    p << "Reply with the answer entities only, one per line, best answer first.\n";
    return p.str();
}

Decision parse_decide_response(const std::string& text) {
    std::string lowered = to_lower(text);
    // first standalone occurrence of either keyword decides
    for (std::size_t i = 0; i < lowered.size(); ++i) {
        auto word_at = [&](const char* word, std::size_t len) {
            if (lowered.compare(i, len, word) != 0) return false;
            bool left_ok = i == 0 || !std::isalpha(static_cast<unsigned char>(lowered[i - 1]));
            std::size_t after = i + len;
            bool right_ok = after >= lowered.size() ||
                            !std::isalpha(static_cast<unsigned char>(lowered[after]));
            return left_ok && right_ok;
        };
        if (word_at("answer", 6)) return Decision::Answer;
        if (word_at("continue", 8)) return Decision::Continue;
    }
    return Decision::Continue;
}

std::vector<std::string> parse_answer_response(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        std::string item = trim(line);
        // strip list bullets and "1." / "1)" numbering
        if (!item.empty() && (item[0] == '-' || item[0] == '*')) {
            item = trim(item.substr(1));
        } else {
            std::size_t d = 0;
            while (d < item.size() && std::isdigit(static_cast<unsigned char>(item[d]))) ++d;
            if (d > 0 && d < item.size() && (item[d] == '.' || item[d] == ')')) {
                item = trim(item.substr(d + 1));
            }
        }
        if (item.empty()) continue;
        if (std::find(out.begin(), out.end(), item) == out.end()) out.push_back(item);
    }
    return out;
}

LlmOracle::LlmOracle(LlmOracleConfig cfg)
    : cfg_(std::move(cfg)), gate_(std::make_shared<InFlightGate>(cfg_.max_in_flight)) {
    cfg_.validate();
}

std::string LlmOracle::gated_call(const std::vector<ChatMessage>& messages, int* retries) {
    GateHold hold(*gate_);
    return llm_call(cfg_, messages, retries);
}

std::vector<double> LlmOracle::score(const std::string& question,
                                     const std::vector<std::string>& topic_labels,
                                     const std::vector<std::string>& candidates,
                                     int* retries) {
    std::string prompt = build_score_prompt(question, topic_labels, candidates, cfg_);
    std::string body = build_request_body(cfg_, {{"user", prompt}});

    // Transport failures and unusable responses share the retry budget;
    // transport gives up with an error, a bad response degrades to uniform.
    for (int attempt = 0;; ++attempt) {
        std::string content;
        try {
            GateHold hold(*gate_);
            content = post_once(cfg_, body);
        } catch (const TransportError&) {
            if (attempt >= cfg_.retry_budget) throw;
            if (retries) ++*retries;
            continue;
        }
        try {
            return parse_score_response(content, candidates);
        } catch (const ParseFailure&) {
            if (attempt >= cfg_.retry_budget) {
                std::cerr << "warning: scorer response unusable after retry; "
                             "scoring candidates uniformly\n";
                return std::vector<double>(candidates.size(), 0.5);
            }
            if (retries) ++*retries;
        }
    }
}

Decision LlmOracle::decide(const std::string& question,
                           const std::vector<std::string>& path_summaries,
                           const std::vector<std::string>& entity_labels, int* retries) {
    std::string prompt = build_decide_prompt(question, path_summaries, entity_labels);
    return parse_decide_response(gated_call({{"user", prompt}}, retries));
}

std::vector<std::string> LlmOracle::answer(const std::string& question,
                                           const std::vector<std::string>& path_summaries,
                                           const std::vector<std::string>& entity_labels,
                                           int* retries) {
    std::string prompt = build_answer_prompt(question, path_summaries, entity_labels);
    return parse_answer_response(gated_call({{"user", prompt}}, retries));
}

}  // namespace reknos
