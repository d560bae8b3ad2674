#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "themetrace/lineage.hpp"
#include "themetrace/themes.hpp"

namespace themetrace {

struct EvolutionEdge {
    ClusterId src;
    ClusterId dst;
    double weight = 0.0; // lineage strength L
    double iw = 0.0;
    double omega = 0.0;
};

struct GraphParams {
    double theta_abs = 0.10;
    int top_k = 1;
    double alpha = 0.5;
};

/// Temporally stratified DAG of theme clusters: every edge connects a
/// period-t cluster to a period-(t+1) cluster.
struct EvolutionGraph {
    std::vector<ThemeCluster> nodes; // all clusters across periods
    std::vector<EvolutionEdge> edges;
    GraphParams params;
    int period_count = 0;

    const ThemeCluster* node(const ClusterId& id) const;
};

enum class Pattern { continuation, split_source, merge_target, emergent, disappearing };

std::string pattern_name(Pattern p);

using PatternLabels = std::map<ClusterId, std::set<Pattern>>;

/// A maximal directed path through the evolution graph.
struct Pathway {
    std::vector<ClusterId> clusters;
    double strength = 1.0;       // product of edge weights (empty product = 1)
    int length = 1;              // periods spanned
    double cumulative_size = 0.0; // sum of fuzzy cardinalities
};

struct PathwayResult {
    std::vector<Pathway> pathways;
    bool truncated = false;
};

/// Dual-threshold admission: an edge (h, j) is admitted iff its strength is
/// positive and either L >= theta_abs or j ranks within the strongest top_k
/// targets of h (descending L, ties by ascending target ordinal).
std::vector<EvolutionEdge> admit_edges(const LineageMatrix& lm, double theta_abs, int top_k);

/// Assembles the layered graph from per-transition lineage matrices.
EvolutionGraph build_evolution_graph(const std::vector<PeriodPartition>& partitions,
                                     const std::vector<LineageMatrix>& lineages,
                                     const GraphParams& params);

/// Degree-based pattern classification. Emergent and disappearing labels
/// are suppressed at the first and last period respectively.
PatternLabels classify_patterns(const EvolutionGraph& g);

/// Enumerates all maximal directed paths by depth-first traversal, sorted
/// by descending strength, ties by descending cumulative size. When more
/// than `path_cap` maximal paths exist, falls back to one greedy
/// strongest-edge path per source and sets `truncated`.
PathwayResult extract_pathways(const EvolutionGraph& g, long path_cap = 100000);

} // namespace themetrace
