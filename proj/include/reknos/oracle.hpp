#pragma once

#include <string>
#include <vector>

namespace reknos {

enum class Decision { Continue, Answer };

// Scoring, stop/continue decisions, and final answers. The engine is
// agnostic to where these come from; implementations range from the pure
// lexical stand-in to a remote chat endpoint.
//
// score() returns exactly one value per candidate, each in [0, 1]. Methods
// add any internal retries they performed into *retries when it is given.
// concurrency_safe() tells the batch runner whether one instance may be
// shared across worker threads.
class Oracle {
public:
    virtual ~Oracle() = default;

    virtual std::vector<double> score(const std::string& question,
                                      const std::vector<std::string>& topic_labels,
                                      const std::vector<std::string>& candidates,
                                      int* retries = nullptr) = 0;

    virtual Decision decide(const std::string& question,
                            const std::vector<std::string>& path_summaries,
                            const std::vector<std::string>& entity_labels,
                            int* retries = nullptr) = 0;

    virtual std::vector<std::string> answer(const std::string& question,
                                            const std::vector<std::string>& path_summaries,
                                            const std::vector<std::string>& entity_labels,
                                            int* retries = nullptr) = 0;

    virtual bool concurrency_safe() const { return false; }
};

}  // namespace reknos
