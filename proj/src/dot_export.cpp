#include "pnet/dot_export.hpp"

#include "pnet/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pnet {

PathUsageOverlay build_overlay(const std::vector<AttackPath>& paths) {
    PathUsageOverlay overlay;
    for (const auto& path : paths) {
        std::set<std::string> nodes{path.start};
        for (const auto& step : path.steps) {
            nodes.insert(step.origin);
            nodes.insert(step.dest);
            overlay.link_used.insert(step.link);
        }
        for (const auto& node : nodes) overlay.node_counts[node] += 1;
        overlay.per_path_steps.push_back(path.steps);
    }
    return overlay;
}

namespace {

// Four shading buckets scaled by the highest usage count; more paths
// through a node means a darker fill.
const char* fill_for(int count, int max_count) {
    int level = std::max(1, static_cast<int>(std::ceil(4.0 * count / max_count)));
    switch (level) {
        case 1: return "gray92";
        case 2: return "gray76";
        case 3: return "gray60";
        default: return "gray44";
    }
}

// Escapes quotes only; backslashes pass through so label escapes like \n
// keep their meaning.
std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '\\';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace

std::string export_dot(const Network& network, const PathUsageOverlay* overlay) {
    int max_count = 1;
    if (overlay) {
        for (const auto& [node, count] : overlay->node_counts) {
            if (!network.containers.count(node)) {
                throw LookupError("overlay references unknown container '" + node + "'");
            }
            max_count = std::max(max_count, count);
        }
        for (const auto& link : overlay->link_used) {
            if (!network.links.count(link)) {
                throw LookupError("overlay references unknown link '" + link + "'");
            }
        }
    }

    std::ostringstream out;
    out << "digraph network {\n";
    out << "  node [shape=box];\n";
    for (const auto& [id, container] : network.containers) {
        std::string label = container.label.empty() ? id : id + "\\n" + container.label;
        out << "  " << quote(id) << " [label=" << quote(label);
        if (overlay) {
            auto it = overlay->node_counts.find(id);
            if (it != overlay->node_counts.end()) {
                out << ", style=filled, fillcolor=" << fill_for(it->second, max_count);
            }
        }
        out << "];\n";
    }
    for (const auto& [id, link] : network.links) {
        out << "  " << quote(link.endpoint_a) << " -> " << quote(link.endpoint_b);
        out << " [label=" << quote(id);
        if (!link.directed) out << ", dir=none";
        if (overlay && overlay->link_used.count(id)) out << ", penwidth=3";
        out << "];\n";
    }
    out << "}\n";
    return out.str();
}

}  // namespace pnet
