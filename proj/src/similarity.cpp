#include "pnet/similarity.hpp"

#include "pnet/error.hpp"

#include <algorithm>
#include <set>

namespace pnet {

namespace {

double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
    if (a.empty() && b.empty()) return 1.0;
    std::size_t inter = 0;
    for (const auto& x : a) inter += b.count(x);
    std::size_t uni = a.size() + b.size() - inter;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

bool route_equal(const AttackStep& a, const AttackStep& b) {
    return a.origin == b.origin && a.link == b.link && a.dest == b.dest;
}

std::string technique_of(const AttackStep& step, const RuleSet* ruleset) {
    if (ruleset) {
        if (const Rule* rule = ruleset->find(step.rule)) return rule->technique;
    }
    return step.rule;
}

struct LcsCell {
    int length = 0;
    int technique_matches = 0;

    friend bool operator<(const LcsCell& a, const LcsCell& b) {
        if (a.length != b.length) return a.length < b.length;
        return a.technique_matches < b.technique_matches;
    }
};

// DP over both paths maximizing (LCS length, technique matches within the
// alignment) lexicographically. Symmetric in its arguments by construction.
LcsCell lcs_alignment(const AttackPath& p1, const AttackPath& p2, const RuleSet* ruleset) {
    const auto& a = p1.steps;
    const auto& b = p2.steps;
    std::vector<std::vector<LcsCell>> dp(a.size() + 1, std::vector<LcsCell>(b.size() + 1));
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            LcsCell best = std::max(dp[i - 1][j], dp[i][j - 1]);
            if (route_equal(a[i - 1], b[j - 1])) {
                LcsCell took = dp[i - 1][j - 1];
                took.length += 1;
                took.technique_matches +=
                    technique_of(a[i - 1], ruleset) == technique_of(b[j - 1], ruleset) ? 1 : 0;
                best = std::max(best, took);
            }
            dp[i][j] = best;
        }
    }
    return dp[a.size()][b.size()];
}

}  // namespace

std::pair<double, double> node_link_jaccard(const AttackPath& p1, const AttackPath& p2) {
    std::set<std::string> n1{p1.start};
    std::set<std::string> n2{p2.start};
    std::set<std::string> l1;
    std::set<std::string> l2;
    for (const auto& s : p1.steps) {
        n1.insert(s.origin);
        n1.insert(s.dest);
        l1.insert(s.link);
    }
    for (const auto& s : p2.steps) {
        n2.insert(s.origin);
        n2.insert(s.dest);
        l2.insert(s.link);
    }
    return {jaccard(n1, n2), jaccard(l1, l2)};
}

double sequence_similarity(const AttackPath& p1, const AttackPath& p2) {
    if (p1.steps.empty() && p2.steps.empty()) return 1.0;
    std::size_t longest = std::max(p1.steps.size(), p2.steps.size());
    return static_cast<double>(lcs_alignment(p1, p2, nullptr).length) /
           static_cast<double>(longest);
}

double technique_similarity(const AttackPath& p1, const AttackPath& p2, const RuleSet* ruleset) {
    if (p1.steps.empty() && p2.steps.empty()) return 1.0;
    LcsCell cell = lcs_alignment(p1, p2, ruleset);
    if (cell.length == 0) return 0.0;
    return static_cast<double>(cell.technique_matches) / static_cast<double>(cell.length);
}

SimilarityReport compare_paths(const AttackPath& p1, const AttackPath& p2,
                               const SimilarityConfig& config, const RuleSet* ruleset) {
    if (config.alpha < 0.0 || config.alpha > 1.0) throw ConfigError("alpha must lie in [0, 1]");
    if (config.tau < 0.0 || config.tau > 1.0) throw ConfigError("tau must lie in [0, 1]");
    SimilarityReport report;
    std::tie(report.node_jaccard, report.link_jaccard) = node_link_jaccard(p1, p2);
    report.structural = (report.node_jaccard + report.link_jaccard) / 2.0;
    if (report.structural < config.tau) {
        report.prefiltered = true;
        report.overall = report.structural;
        return report;
    }
    report.sequence_sim = sequence_similarity(p1, p2);
    report.technique_sim = technique_similarity(p1, p2, ruleset);
    report.overall =
        config.alpha * report.sequence_sim + (1.0 - config.alpha) * report.technique_sim;
    return report;
}

TraceReport compare_traces(const std::vector<std::pair<AttackPath, AttackPath>>& pairs,
                           const SimilarityConfig& config, const RuleSet* ruleset) {
    if (pairs.empty()) throw ConfigError("compare_traces requires at least one path pair");
    TraceReport trace;
    double sum = 0.0;
    for (const auto& [p1, p2] : pairs) {
        trace.reports.push_back(compare_paths(p1, p2, config, ruleset));
        sum += trace.reports.back().overall;
    }
    trace.mean_overall = sum / static_cast<double>(trace.reports.size());
    return trace;
}

}  // namespace pnet
