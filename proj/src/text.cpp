#include "reknos/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace reknos {

namespace {

bool is_sep_lexical(char c) {
    return c == '.' || c == '_' || c == '-' || std::isspace(static_cast<unsigned char>(c));
}

bool is_sep_label(char c) {
    return c == '.' || c == '_' || c == '-' || c == '/';
}

const std::set<std::string>& stopwords() {
    static const std::set<std::string> words = {
        "a",    "an",   "and",  "are",  "as",    "at",    "be",   "been", "by",
        "did",  "do",   "does", "for",  "from",  "how",   "in",   "is",   "it",
        "its",  "of",   "on",   "or",   "that",  "the",   "these", "this", "those",
        "to",   "was",  "were", "what", "when",  "where", "which", "who",  "whom",
        "whose", "why",  "with",
    };
    return words;
}

}  // namespace

std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> tokenize_lexical(std::string_view text) {
    std::vector<std::string> tokens;
    std::string cur;
    for (char c : text) {
        if (is_sep_lexical(c)) {
            if (!cur.empty()) tokens.push_back(to_lower(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) tokens.push_back(to_lower(cur));
    return tokens;
}

std::vector<std::string> tokenize_label(std::string_view label) {
    std::vector<std::string> tokens;
    std::string cur;
    auto flush = [&] {
        if (!cur.empty()) tokens.push_back(to_lower(cur));
        cur.clear();
    };
    char prev = '\0';
    for (char c : label) {
        if (is_sep_label(c)) {
            flush();
        } else {
            bool case_boundary = std::islower(static_cast<unsigned char>(prev)) &&
                                 std::isupper(static_cast<unsigned char>(c));
            if (case_boundary) flush();
            cur.push_back(c);
        }
        prev = c;
    }
    flush();
    return tokens;
}

std::set<std::string> token_set(const std::vector<std::string>& tokens) {
    return std::set<std::string>(tokens.begin(), tokens.end());
}

bool is_stopword(const std::string& token) { return stopwords().count(token) > 0; }

double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
    if (a.empty() && b.empty()) return 0.0;
    std::size_t inter = 0;
    for (const auto& t : a)
        if (b.count(t)) ++inter;
    std::size_t uni = a.size() + b.size() - inter;
    if (uni == 0) return 0.0;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

std::string normalize_answer(std::string_view s) {
    std::string lowered = to_lower(s);

    // collapse whitespace runs into single spaces, trimming ends
    std::string collapsed;
    bool in_space = true;
    for (char c : lowered) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (!in_space) collapsed.push_back(' ');
            in_space = true;
        } else {
            collapsed.push_back(c);
            in_space = false;
        }
    }
    while (!collapsed.empty() && collapsed.back() == ' ') collapsed.pop_back();

    // strip surrounding punctuation
    std::size_t b = 0;
    std::size_t e = collapsed.size();
    auto is_punct = [](char c) {
        return std::ispunct(static_cast<unsigned char>(c)) != 0;
    };
    while (b < e && is_punct(collapsed[b])) ++b;
    while (e > b && is_punct(collapsed[e - 1])) --e;
    std::string core = collapsed.substr(b, e - b);

    for (std::string_view article : {"a ", "an ", "the "}) {
        if (core.size() > article.size() && core.compare(0, article.size(), article) == 0) {
            core = core.substr(article.size());
            break;
        }
    }
    return trim(core);
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

}  // namespace reknos
