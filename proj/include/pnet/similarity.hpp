#pragma once

// Agreement between two attack paths: structure (Jaccard over containers
// and links), order (normalized longest common subsequence of route steps)
// and technique choice (label match rate over the LCS alignment).

#include "pnet/planner.hpp"

#include <utility>
#include <vector>

namespace pnet {

struct SimilarityConfig {
    double alpha = 0.5;  // weight of sequence vs technique similarity
    double tau = 0.0;    // structural prefilter threshold; 0 disables
};

struct SimilarityReport {
    double node_jaccard = 0.0;
    double link_jaccard = 0.0;
    double structural = 0.0;  // (node_jaccard + link_jaccard) / 2
    double sequence_sim = 0.0;
    double technique_sim = 0.0;
    double overall = 0.0;
    bool prefiltered = false;  // detailed comparison skipped (structural < tau)
};

// Jaccard over containers touched (start, origins, dests) and links
// traversed. Two empty sets compare as 1.0.
std::pair<double, double> node_link_jaccard(const AttackPath& p1, const AttackPath& p2);

// |LCS| / max(|p1|, |p2|); steps match on (origin, link, dest) ignoring the
// rule. Two empty paths compare as 1.0.
double sequence_similarity(const AttackPath& p1, const AttackPath& p2);

// Fraction of LCS-aligned step pairs whose rules carry the same technique
// label, maximized over optimal alignments. No alignment -> 0.0; two empty
// paths -> 1.0. Without a ruleset, rule ids stand in for technique labels.
double technique_similarity(const AttackPath& p1, const AttackPath& p2,
                            const RuleSet* ruleset = nullptr);

SimilarityReport compare_paths(const AttackPath& p1, const AttackPath& p2,
                               const SimilarityConfig& config, const RuleSet* ruleset = nullptr);

struct TraceReport {
    std::vector<SimilarityReport> reports;
    double mean_overall = 0.0;
};

// Element-wise compare_paths plus the arithmetic mean of overall scores.
// Empty input throws ConfigError.
TraceReport compare_traces(const std::vector<std::pair<AttackPath, AttackPath>>& pairs,
                           const SimilarityConfig& config, const RuleSet* ruleset = nullptr);

}  // namespace pnet
