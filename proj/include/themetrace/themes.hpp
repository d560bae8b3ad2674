#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "themetrace/coword.hpp"

namespace themetrace {

/// Identifies a cluster as (period index, ordinal within period), 0-based.
struct ClusterId {
    int period = 0;
    int ordinal = 0;

    auto operator<=>(const ClusterId&) const = default;

    /// 1-based artifact form, e.g. "p1c2".
    std::string str() const;
};

enum class Quadrant { motor, basic, niche, emerging_or_declining };

std::string quadrant_name(Quadrant q);

/// A term community in one period, with its structural measures.
struct ThemeCluster {
    ClusterId id;
    std::vector<std::string> terms;         // sorted ascending
    std::map<std::string, double> pagerank; // within-cluster scores, sum ~ 1
    double pagerank_total = 0.0;
    double centrality = 0.0;
    double density = 0.0;
    std::string label;
    double fuzzy_size = 0.0;
    Quadrant quadrant = Quadrant::emerging_or_declining;

    bool contains(const std::string& term) const;
};

/// Clusters retained for one period plus the terms removed by filtering.
struct PeriodPartition {
    int period = 0;
    std::vector<ThemeCluster> clusters;
    std::set<std::string> dropped_terms;
};

/// Louvain community detection on the weighted network. Returns disjoint
/// term sets (each sorted) covering all nodes, ordered by smallest term.
/// Deterministic for a fixed seed: nodes are processed in lexicographic
/// order shuffled by `seed`, and aggregation repeats while modularity
/// improves by more than 1e-9. An empty network yields an empty list.
std::vector<std::vector<std::string>> detect_communities(const CowordNetwork& net,
                                                         double resolution,
                                                         std::uint64_t seed);

/// Modularity of a partition of the network's terms (resolution-scaled).
/// Exposed so callers can compare partitions; terms absent from a part
/// are not allowed.
double partition_modularity(const CowordNetwork& net,
                            const std::vector<std::vector<std::string>>& parts,
                            double resolution);

/// Drops communities whose cumulative term occurrence is below
/// min_cumulative_freq, recording their terms in dropped_terms. Retained
/// clusters get ordinals by descending cumulative occurrence, ties by
/// ascending smallest term.
PeriodPartition filter_clusters(int period,
                                const std::vector<std::vector<std::string>>& communities,
                                const std::vector<TermStats>& stats,
                                int min_cumulative_freq);

/// Weighted PageRank on the subgraph induced by `cluster`, with uniform
/// teleport over the cluster's terms and uniform redistribution of
/// dangling mass. Scores sum to 1 within `tol`.
std::map<std::string, double> cluster_pagerank(const CowordNetwork& net,
                                               const std::vector<std::string>& cluster,
                                               double damping = 0.85,
                                               double tol = 1e-10,
                                               int max_iterations = 1000);

/// Fills centrality (sum of weights of edges leaving the cluster), density
/// (100 * internal weight sum / cluster size) and label (top-PageRank term,
/// ties lexicographic) on every cluster. PageRank must be filled first.
void strategic_metrics(const CowordNetwork& net, PeriodPartition& partition);

enum class QuadrantOrigin { median, mean };

/// Assigns strategic-diagram quadrants per period, using the period's
/// median (or mean) centrality and density as axis origins. Values equal
/// to the origin classify as "high". Also writes cluster.quadrant.
std::map<ClusterId, Quadrant> strategic_coordinates(std::vector<PeriodPartition>& partitions,
                                                    QuadrantOrigin origin = QuadrantOrigin::median);

} // namespace themetrace
