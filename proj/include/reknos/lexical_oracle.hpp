#pragma once

#include "reknos/oracle.hpp"

namespace reknos {

// Jaccard similarity between the question's token set (stopwords removed)
// and the label's token set.
double lexical_score(const std::string& question, const std::string& label);

// Answer once the best-scoring entity clears the threshold.
Decision lexical_decide(const std::string& question,
                        const std::vector<std::string>& entity_labels,
                        double threshold = 0.5);

// Entities ranked score-descending, ties by label ascending.
std::vector<std::string> lexical_answer(const std::string& question,
                                        const std::vector<std::string>& entity_labels);

// Deterministic stand-in for a language model. Pure: identical inputs give
// identical outputs on every platform, which keeps traces reproducible.
class LexicalOracle : public Oracle {
public:
    explicit LexicalOracle(double decide_threshold = 0.5) : threshold_(decide_threshold) {}

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

private:
    double threshold_;
};

}  // namespace reknos
