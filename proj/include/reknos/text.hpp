#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace reknos {

std::string to_lower(std::string_view s);
std::string trim(std::string_view s);

// Splits on whitespace and the separators '.', '_', '-'. Lowercases.
// Used by the lexical oracle for questions and labels.
std::vector<std::string> tokenize_lexical(std::string_view text);

// Splits on '.', '_', '-', '/' and lowercase-to-uppercase boundaries.
// Keeps token order; used when clustering relation labels.
std::vector<std::string> tokenize_label(std::string_view label);

std::set<std::string> token_set(const std::vector<std::string>& tokens);

bool is_stopword(const std::string& token);

// Jaccard similarity of two token sets, 0.0 when both are empty.
double jaccard(const std::set<std::string>& a, const std::set<std::string>& b);

// Answer-string normalization used by the metrics: lowercase, trim,
// collapse runs of whitespace, strip surrounding punctuation, drop one
// leading article (a/an/the).
std::string normalize_answer(std::string_view s);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

}  // namespace reknos
