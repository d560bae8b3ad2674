#include "themetrace/evolution.hpp"

#include <algorithm>
#include <functional>

#include "themetrace/errors.hpp"

namespace themetrace {

std::string pattern_name(Pattern p) {
    switch (p) {
        case Pattern::continuation: return "continuation";
        case Pattern::split_source: return "split-source";
        case Pattern::merge_target: return "merge-target";
        case Pattern::emergent: return "emergent";
        case Pattern::disappearing: return "disappearing";
    }
    return "continuation";
}

const ThemeCluster* EvolutionGraph::node(const ClusterId& id) const {
    for (const auto& n : nodes)
        if (n.id == id) return &n;
    return nullptr;
}

std::vector<EvolutionEdge> admit_edges(const LineageMatrix& lm, double theta_abs, int top_k) {
    if (!(theta_abs >= 0.0 && theta_abs <= 1.0))
        throw ValidationError("theta_abs must lie in [0, 1]");
    if (top_k < 1) throw ValidationError("top_k must be at least 1");

    std::vector<EvolutionEdge> edges;
    for (std::size_t h = 0; h < lm.rows(); ++h) {
        const auto& row = lm.L[h];

        // Rank strictly positive targets: descending strength, ties by
        // ascending target ordinal.
        std::vector<int> positive;
        for (std::size_t j = 0; j < row.size(); ++j)
            if (row[j] > 0.0) positive.push_back(static_cast<int>(j));
        std::sort(positive.begin(), positive.end(), [&row](int a, int b) {
            if (row[a] != row[b]) return row[a] > row[b];
            return a < b;
        });
        std::vector<int> rank(row.size(), 0);
        for (std::size_t r = 0; r < positive.size(); ++r)
            rank[positive[r]] = static_cast<int>(r) + 1;

        for (std::size_t j = 0; j < row.size(); ++j) {
            if (row[j] <= 0.0) continue;
            if (row[j] >= theta_abs || rank[j] <= top_k) {
                EvolutionEdge e;
                e.src = ClusterId{lm.source_period, static_cast<int>(h)};
                e.dst = ClusterId{lm.target_period, static_cast<int>(j)};
                e.weight = row[j];
                e.iw = lm.Iw[h][j];
                e.omega = lm.Omega[h][j];
                edges.push_back(e);
            }
        }
    }
    return edges;
}

EvolutionGraph build_evolution_graph(const std::vector<PeriodPartition>& partitions,
                                     const std::vector<LineageMatrix>& lineages,
                                     const GraphParams& params) {
    if (!partitions.empty() && lineages.size() + 1 != partitions.size())
        throw ValidationError("expected one lineage matrix per consecutive period pair");

    EvolutionGraph g;
    g.params = params;
    g.period_count = static_cast<int>(partitions.size());
    for (const auto& partition : partitions)
        for (const auto& cluster : partition.clusters) g.nodes.push_back(cluster);

    for (const auto& lm : lineages) {
        if (lm.source_period < 0 || lm.source_period + 1 >= g.period_count ||
            lm.target_period != lm.source_period + 1)
            throw ValidationError("lineage matrix periods are not consecutive");
        if (lm.rows() != partitions[lm.source_period].clusters.size() ||
            (lm.rows() > 0 && lm.cols() != partitions[lm.target_period].clusters.size()))
            throw ValidationError("lineage matrix shape does not match the partitions");
        auto admitted = admit_edges(lm, params.theta_abs, params.top_k);
        g.edges.insert(g.edges.end(), admitted.begin(), admitted.end());
    }

    std::sort(g.nodes.begin(), g.nodes.end(),
              [](const ThemeCluster& a, const ThemeCluster& b) { return a.id < b.id; });
    std::sort(g.edges.begin(), g.edges.end(), [](const EvolutionEdge& a, const EvolutionEdge& b) {
        if (!(a.src == b.src)) return a.src < b.src;
        return a.dst < b.dst;
    });
    return g;
}

PatternLabels classify_patterns(const EvolutionGraph& g) {
    std::map<ClusterId, int> in_degree, out_degree;
    for (const auto& n : g.nodes) {
        in_degree[n.id] = 0;
        out_degree[n.id] = 0;
    }
    for (const auto& e : g.edges) {
        ++out_degree[e.src];
        ++in_degree[e.dst];
    }

    PatternLabels labels;
    for (const auto& n : g.nodes) labels[n.id]; // every cluster gets an entry

    for (const auto& e : g.edges) {
        if (out_degree[e.src] == 1 && in_degree[e.dst] == 1) {
            labels[e.src].insert(Pattern::continuation);
            labels[e.dst].insert(Pattern::continuation);
        }
        if (out_degree[e.src] > 1) labels[e.src].insert(Pattern::split_source);
        if (in_degree[e.dst] > 1) labels[e.dst].insert(Pattern::merge_target);
    }

    const int last_period = g.period_count - 1;
    for (const auto& n : g.nodes) {
        if (n.id.period > 0 && in_degree[n.id] == 0) labels[n.id].insert(Pattern::emergent);
        if (n.id.period < last_period && out_degree[n.id] == 0)
            labels[n.id].insert(Pattern::disappearing);
    }
    return labels;
}

namespace {

struct PathContext {
    const EvolutionGraph& g;
    std::map<ClusterId, std::vector<const EvolutionEdge*>> out;
    std::map<ClusterId, double> size_of;
};

Pathway make_pathway(const PathContext& ctx, const std::vector<ClusterId>& clusters,
                     double strength) {
    Pathway p;
    p.clusters = clusters;
    p.strength = strength;
    p.length = static_cast<int>(clusters.size());
    for (const auto& id : clusters) {
        auto it = ctx.size_of.find(id);
        p.cumulative_size += it == ctx.size_of.end() ? 0.0 : it->second;
    }
    return p;
}

// Counts maximal paths with saturation at limit + 1.
long count_paths(const PathContext& ctx, long limit) {
    std::map<ClusterId, long> downstream;
    // Nodes sorted by id means later periods come later; walk in reverse so
    // children are resolved first.
    for (auto it = ctx.g.nodes.rbegin(); it != ctx.g.nodes.rend(); ++it) {
        const auto& edges = ctx.out.at(it->id);
        long c = 0;
        if (edges.empty()) {
            c = 1;
        } else {
            for (const EvolutionEdge* e : edges) {
                c += downstream.at(e->dst);
                if (c > limit) {
                    c = limit + 1;
                    break;
                }
            }
        }
        downstream[it->id] = c;
    }

    std::map<ClusterId, int> in_degree;
    for (const auto& n : ctx.g.nodes) in_degree[n.id] = 0;
    for (const auto& e : ctx.g.edges) ++in_degree[e.dst];

    long total = 0;
    for (const auto& n : ctx.g.nodes) {
        if (in_degree[n.id] != 0) continue;
        total += downstream[n.id];
        if (total > limit) return limit + 1;
    }
    return total;
}

} // namespace

PathwayResult extract_pathways(const EvolutionGraph& g, long path_cap) {
    if (path_cap < 1) throw ValidationError("path cap must be at least 1");

    PathContext ctx{g, {}, {}};
    for (const auto& n : g.nodes) {
        ctx.out[n.id];
        ctx.size_of[n.id] = n.fuzzy_size;
    }
    for (const auto& e : g.edges) ctx.out[e.src].push_back(&e);

    std::map<ClusterId, int> in_degree;
    for (const auto& n : g.nodes) in_degree[n.id] = 0;
    for (const auto& e : g.edges) ++in_degree[e.dst];

    std::vector<ClusterId> roots;
    for (const auto& n : g.nodes)
        if (in_degree[n.id] == 0) roots.push_back(n.id);

    PathwayResult result;
    if (count_paths(ctx, path_cap) > path_cap) {
        // Fallback: one greedy strongest-edge path per root.
        result.truncated = true;
        for (const auto& root : roots) {
            std::vector<ClusterId> clusters{root};
            double strength = 1.0;
            ClusterId at = root;
            while (!ctx.out.at(at).empty()) {
                const EvolutionEdge* best = nullptr;
                for (const EvolutionEdge* e : ctx.out.at(at))
                    if (!best || e->weight > best->weight) best = e; // ties: first (lowest ordinal)
                clusters.push_back(best->dst);
                strength *= best->weight;
                at = best->dst;
            }
            result.pathways.push_back(make_pathway(ctx, clusters, strength));
        }
    } else {
        std::vector<ClusterId> stack;
        std::function<void(const ClusterId&, double)> dfs = [&](const ClusterId& id,
                                                                double strength) {
            stack.push_back(id);
            const auto& edges = ctx.out.at(id);
            if (edges.empty()) {
                result.pathways.push_back(make_pathway(ctx, stack, strength));
            } else {
                for (const EvolutionEdge* e : edges) dfs(e->dst, strength * e->weight);
            }
            stack.pop_back();
        };
        for (const auto& root : roots) dfs(root, 1.0);
    }

    std::sort(result.pathways.begin(), result.pathways.end(),
              [](const Pathway& a, const Pathway& b) {
                  if (a.strength != b.strength) return a.strength > b.strength;
                  if (a.cumulative_size != b.cumulative_size)
                      return a.cumulative_size > b.cumulative_size;
                  return a.clusters < b.clusters;
              });
    return result;
}

} // namespace themetrace
