#pragma once

// Graphviz export of a network, optionally shaded by how often each
// container appears across a set of attack paths, with traversed links
// drawn bold.

#include "pnet/planner.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace pnet {

struct PathUsageOverlay {
    std::map<std::string, int> node_counts;  // paths the container appears in
    std::set<std::string> link_used;
    std::vector<std::vector<AttackStep>> per_path_steps;
};

PathUsageOverlay build_overlay(const std::vector<AttackPath>& paths);

// Deterministic DOT text. Overlay nodes are filled with one of four gray
// levels scaled by usage count; overlay entities must exist in the network
// (LookupError otherwise).
std::string export_dot(const Network& network, const PathUsageOverlay* overlay = nullptr);

}  // namespace pnet
