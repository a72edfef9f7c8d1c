#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "reknos/oracle.hpp"

namespace reknos {

struct LlmOracleConfig {
    std::string endpoint;       // e.g. http://localhost:8080/v1/chat/completions
    std::string model;
    double temperature = 0.0;
    int retry_budget = 1;       // extra attempts after the first
    int few_shot_count = 3;     // 1 or 3 shipped demonstrations
    bool rubric_mode = false;   // append the score-band rubric
    std::string api_key_env;    // env var holding the bearer token; empty = no auth
    int select_count = 3;       // how many relations the prompt asks for
    int timeout_seconds = 60;
    int max_in_flight = 4;

    void validate() const;
};

using ChatMessage = std::pair<std::string, std::string>;  // role, content

// Scoring prompt: selection instruction with the count spelled out, the
// question/topic/candidate slots, then demonstrations, the optional rubric,
// and the line format the parser expects. Empty topic lists render "(none)".
std::string build_score_prompt(const std::string& question,
                               const std::vector<std::string>& topic_labels,
                               const std::vector<std::string>& candidates,
                               const LlmOracleConfig& cfg);

// Pulls `label | score` lines out of a response. Labels match candidates
// case-insensitively after trimming; anything else in the response is
// ignored, so invented relations never reach the pipeline. A candidate
// mentioned without a usable score gets 0.5, unmentioned ones 0.0, and
// everything clamps to [0, 1]. A response naming no candidate at all raises
// ParseFailure.
std::vector<double> parse_score_response(const std::string& text,
                                         const std::vector<std::string>& candidates);

// One chat completion round-trip, retrying transport failures up to the
// retry budget. Returns the first choice's message content.
std::string llm_call(const LlmOracleConfig& cfg, const std::vector<ChatMessage>& messages,
                     int* retries = nullptr);

std::string build_request_body(const LlmOracleConfig& cfg,
                               const std::vector<ChatMessage>& messages);

class LlmOracle : public Oracle {
public:
    explicit LlmOracle(LlmOracleConfig cfg);

    std::vector<double> score(const std::string& question,
                              const std::vector<std::string>& topic_labels,
                              const std::vector<std::string>& candidates,
                              int* retries = nullptr) override;

    Decision decide(const std::string& question,
                    const std::vector<std::string>& path_summaries,
                    const std::vector<std::string>& entity_labels,
                    int* retries = nullptr) override;

    std::vector<std::string> answer(const std::string& question,
                                    const std::vector<std::string>& path_summaries,
                                    const std::vector<std::string>& entity_labels,
                                    int* retries = nullptr) override;

    bool concurrency_safe() const override { return true; }

    const LlmOracleConfig& config() const { return cfg_; }

private:
    std::string gated_call(const std::vector<ChatMessage>& messages, int* retries);

    LlmOracleConfig cfg_;
    std::shared_ptr<class InFlightGate> gate_;  // bounds concurrent requests
};

std::string build_decide_prompt(const std::string& question,
                                const std::vector<std::string>& path_summaries,
                                const std::vector<std::string>& entity_labels);
std::string build_answer_prompt(const std::string& question,
                                const std::vector<std::string>& path_summaries,
                                const std::vector<std::string>& entity_labels);
Decision parse_decide_response(const std::string& text);
std::vector<std::string> parse_answer_response(const std::string& text);

}  // namespace reknos
