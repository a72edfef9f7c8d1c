#include "reknos/lexical_oracle.hpp"

#include <algorithm>

#include "reknos/text.hpp"

namespace reknos {

namespace {

std::set<std::string> question_tokens(const std::string& question) {
    std::set<std::string> out;
    for (auto& tok : tokenize_lexical(question)) {
        if (!is_stopword(tok)) out.insert(std::move(tok));
    }
    return out;
}

}  // namespace

double lexical_score(const std::string& question, const std::string& label) {
    return jaccard(question_tokens(question), token_set(tokenize_lexical(label)));
}

Decision lexical_decide(const std::string& question,
                        const std::vector<std::string>& entity_labels,
                        double threshold) {
    auto q = question_tokens(question);
    for (const auto& label : entity_labels) {
        if (jaccard(q, token_set(tokenize_lexical(label))) >= threshold) {
            return Decision::Answer;
        }
    }
    return Decision::Continue;
}

std::vector<std::string> lexical_answer(const std::string& question,
                                        const std::vector<std::string>& entity_labels) {
    auto q = question_tokens(question);
    std::vector<std::pair<double, std::string>> ranked;
    ranked.reserve(entity_labels.size());
    for (const auto& label : entity_labels) {
        ranked.emplace_back(jaccard(q, token_set(tokenize_lexical(label))), label);
    }
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    std::vector<std::string> out;
    out.reserve(ranked.size());
    for (auto& [score, label] : ranked) out.push_back(std::move(label));
    return out;
}

std::vector<double> LexicalOracle::score(const std::string& question,
                                         const std::vector<std::string>&,
                                         const std::vector<std::string>& candidates,
                                         int*) {
    auto q = question_tokens(question);
    std::vector<double> out;
    out.reserve(candidates.size());
    for (const auto& label : candidates) {
        out.push_back(jaccard(q, token_set(tokenize_lexical(label))));
    }
    return out;
}

Decision LexicalOracle::decide(const std::string& question, const std::vector<std::string>&,
                               const std::vector<std::string>& entity_labels, int*) {
    return lexical_decide(question, entity_labels, threshold_);
}

std::vector<std::string> LexicalOracle::answer(const std::string& question,
                                               const std::vector<std::string>&,
                                               const std::vector<std::string>& entity_labels,
                                               int*) {
    return lexical_answer(question, entity_labels);
}

}  // namespace reknos
