#pragma once

#include "reknos/reasoner.hpp"

namespace reknos {

// Beam search over concrete relations, the agent-style baseline the
// super-relation engine is compared against. One beam holds one relation
// path ending at one entity. Per level every beam spends a scorer call on
// its outgoing relations and follows the best one; the pool is then pruned
// to `width` beams and each surviving beam spends a decision call. Worst
// case that is 2*L*N scoring/decision calls plus the final answer call,
// where the primary engine needs at most 2*L + 1 total.
ReasoningOutcome run_beam(const Graph& g, const std::string& question,
                          const std::vector<std::string>& topic_labels,
                          const ReasonerConfig& cfg, Oracle& oracle);

}  // namespace reknos
