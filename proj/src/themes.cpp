#include "themetrace/themes.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <random>
#include <unordered_map>

#include "themetrace/errors.hpp"

namespace themetrace {

namespace {

// Working graph for community detection. Adjacency lists hold each
// undirected edge in both directions; an aggregated self-loop (c, c) is
// stored once and carries the full intra-community mass, so that
// strength[i] equals the matrix row sum and total_weight equals 2m.
struct LocalGraph {
    std::vector<std::vector<std::pair<int, double>>> adj;
    std::vector<double> strength;
    double total_weight = 0.0; // 2m

    int size() const { return static_cast<int>(adj.size()); }
};

double modularity(const LocalGraph& g, const std::vector<int>& n2c, double gamma) {
    if (g.total_weight <= 0.0) return 0.0;
    const double two_m = g.total_weight;
    std::unordered_map<int, double> intra, tot;
    for (int i = 0; i < g.size(); ++i) {
        tot[n2c[i]] += g.strength[i];
        for (const auto& [j, w] : g.adj[i])
            if (n2c[j] == n2c[i]) intra[n2c[i]] += w;
    }
    double q = 0.0;
    for (const auto& [c, in_w] : intra) q += in_w / two_m;
    for (const auto& [c, tot_w] : tot) q -= gamma * (tot_w / two_m) * (tot_w / two_m);
    return q;
}

// One level of local moving. Nodes are visited in `order`; a node moves
// only on a strictly positive modularity gain, scanning candidate
// communities in ascending id so ties resolve deterministically.
std::vector<int> local_move(const LocalGraph& g, const std::vector<int>& order, double gamma) {
    const int n = g.size();
    const double two_m = g.total_weight;
    std::vector<int> n2c(n);
    std::vector<double> comm_tot(n);
    for (int i = 0; i < n; ++i) {
        n2c[i] = i;
        comm_tot[i] = g.strength[i];
    }
    if (two_m <= 0.0) return n2c;

    bool moved = true;
    int sweeps = 0;
    while (moved && sweeps < 1000) {
        moved = false;
        ++sweeps;
        for (int node : order) {
            const int current = n2c[node];

            std::map<int, double> neighbor_weight; // community -> link weight from node
            neighbor_weight[current]; // candidate even without links
            for (const auto& [nbr, w] : g.adj[node])
                if (nbr != node) neighbor_weight[n2c[nbr]] += w;

            comm_tot[current] -= g.strength[node];

            int best = current;
            double best_gain = neighbor_weight[current] -
                               gamma * g.strength[node] * comm_tot[current] / two_m;
            for (const auto& [comm, w] : neighbor_weight) {
                if (comm == current) continue;
                const double gain = w - gamma * g.strength[node] * comm_tot[comm] / two_m;
                if (gain > best_gain) {
                    best_gain = gain;
                    best = comm;
                }
            }

            comm_tot[best] += g.strength[node];
            if (best != current) {
                n2c[node] = best;
                moved = true;
            }
        }
    }
    return n2c;
}

// Renumbers communities by first appearance; returns the community count.
int renumber(std::vector<int>& n2c) {
    std::unordered_map<int, int> remap;
    for (int& c : n2c) {
        auto [it, inserted] = remap.emplace(c, static_cast<int>(remap.size()));
        c = it->second;
    }
    return static_cast<int>(remap.size());
}

LocalGraph aggregate(const LocalGraph& g, const std::vector<int>& n2c, int n_comm) {
    std::vector<std::map<int, double>> merged(n_comm);
    for (int i = 0; i < g.size(); ++i)
        for (const auto& [j, w] : g.adj[i]) merged[n2c[i]][n2c[j]] += w;

    LocalGraph out;
    out.adj.resize(n_comm);
    out.strength.assign(n_comm, 0.0);
    for (int c = 0; c < n_comm; ++c) {
        for (const auto& [d, w] : merged[c]) {
            out.adj[c].emplace_back(d, w);
            out.strength[c] += w;
        }
        out.total_weight += out.strength[c];
    }
    return out;
}

LocalGraph build_local_graph(const CowordNetwork& net,
                             const std::vector<std::string>& nodes) {
    std::unordered_map<std::string, int> local;
    for (std::size_t i = 0; i < nodes.size(); ++i) local[nodes[i]] = static_cast<int>(i);

    LocalGraph g;
    g.adj.resize(nodes.size());
    g.strength.assign(nodes.size(), 0.0);
    for (const auto& [key, edge] : net.edges) {
        const int u = local.at(net.terms[key.first].term);
        const int v = local.at(net.terms[key.second].term);
        g.adj[u].emplace_back(v, edge.weight);
        g.adj[v].emplace_back(u, edge.weight);
        g.strength[u] += edge.weight;
        g.strength[v] += edge.weight;
    }
    for (double s : g.strength) g.total_weight += s;
    for (auto& list : g.adj) std::sort(list.begin(), list.end());
    return g;
}

std::vector<std::string> sorted_network_terms(const CowordNetwork& net) {
    std::vector<std::string> nodes;
    nodes.reserve(net.terms.size());
    for (const auto& ts : net.terms) nodes.push_back(ts.term);
    std::sort(nodes.begin(), nodes.end());
    return nodes;
}

void seeded_shuffle(std::vector<int>& v, std::uint64_t seed) {
    // std::shuffle's distribution is implementation-defined; this stays
    // reproducible across standard libraries.
    std::mt19937_64 gen(seed);
    for (std::size_t i = v.size(); i > 1; --i)
        std::swap(v[i - 1], v[gen() % i]);
}

} // namespace

std::string ClusterId::str() const {
    return "p" + std::to_string(period + 1) + "c" + std::to_string(ordinal + 1);
}

std::string quadrant_name(Quadrant q) {
    switch (q) {
        case Quadrant::motor: return "motor";
        case Quadrant::basic: return "basic";
        case Quadrant::niche: return "niche";
        case Quadrant::emerging_or_declining: return "emerging-or-declining";
    }
    return "emerging-or-declining";
}

bool ThemeCluster::contains(const std::string& term) const {
    return std::binary_search(terms.begin(), terms.end(), term);
}

std::vector<std::vector<std::string>> detect_communities(const CowordNetwork& net,
                                                         double resolution,
                                                         std::uint64_t seed) {
    if (net.empty()) return {};

    const std::vector<std::string> nodes = sorted_network_terms(net);
    LocalGraph graph = build_local_graph(net, nodes);
    const int n = graph.size();

    std::vector<int> membership(n);
    for (int i = 0; i < n; ++i) membership[i] = i;

    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    seeded_shuffle(order, seed);

    double level_q = modularity(graph, membership, resolution);
    while (true) {
        std::vector<int> n2c = local_move(graph, order, resolution);
        const int n_comm = renumber(n2c);
        for (int& c : membership) c = n2c[c];

        const double q = modularity(graph, n2c, resolution);
        if (q - level_q <= 1e-9 || n_comm == graph.size()) break;
        level_q = q;

        graph = aggregate(graph, n2c, n_comm);
        order.resize(n_comm);
        for (int i = 0; i < n_comm; ++i) order[i] = i;
    }

    std::map<int, std::vector<std::string>> groups;
    for (int i = 0; i < n; ++i) groups[membership[i]].push_back(nodes[i]);

    std::vector<std::vector<std::string>> communities;
    communities.reserve(groups.size());
    for (auto& [c, terms] : groups) {
        std::sort(terms.begin(), terms.end());
        communities.push_back(std::move(terms));
    }
    std::sort(communities.begin(), communities.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return communities;
}

double partition_modularity(const CowordNetwork& net,
                            const std::vector<std::vector<std::string>>& parts,
                            double resolution) {
    const std::vector<std::string> nodes = sorted_network_terms(net);
    std::unordered_map<std::string, int> local;
    for (std::size_t i = 0; i < nodes.size(); ++i) local[nodes[i]] = static_cast<int>(i);

    std::vector<int> n2c(nodes.size(), -1);
    for (std::size_t c = 0; c < parts.size(); ++c) {
        for (const auto& term : parts[c]) {
            auto it = local.find(term);
            if (it == local.end() || n2c[it->second] != -1)
                throw ValidationError("partition does not cover the network terms exactly");
            n2c[it->second] = static_cast<int>(c);
        }
    }
    for (int c : n2c)
        if (c == -1) throw ValidationError("partition does not cover the network terms exactly");

    return modularity(build_local_graph(net, nodes), n2c, resolution);
}

PeriodPartition filter_clusters(int period,
                                const std::vector<std::vector<std::string>>& communities,
                                const std::vector<TermStats>& stats,
                                int min_cumulative_freq) {
    std::unordered_map<std::string, int> occ;
    for (const auto& s : stats) occ[s.term] = s.occurrence;

    struct Candidate {
        std::vector<std::string> terms;
        long cumulative = 0;
    };
    std::vector<Candidate> retained;
    PeriodPartition out;
    out.period = period;

    for (const auto& community : communities) {
        Candidate c;
        c.terms = community;
        std::sort(c.terms.begin(), c.terms.end());
        for (const auto& t : c.terms) {
            auto it = occ.find(t);
            if (it != occ.end()) c.cumulative += it->second;
        }
        if (c.cumulative >= min_cumulative_freq) {
            retained.push_back(std::move(c));
        } else {
            out.dropped_terms.insert(c.terms.begin(), c.terms.end());
        }
    }

    std::sort(retained.begin(), retained.end(), [](const Candidate& a, const Candidate& b) {
        if (a.cumulative != b.cumulative) return a.cumulative > b.cumulative;
        return a.terms.front() < b.terms.front();
    });

    for (std::size_t h = 0; h < retained.size(); ++h) {
        ThemeCluster cluster;
        cluster.id = ClusterId{period, static_cast<int>(h)};
        cluster.terms = std::move(retained[h].terms);
        out.clusters.push_back(std::move(cluster));
    }
    return out;
}

std::map<std::string, double> cluster_pagerank(const CowordNetwork& net,
                                               const std::vector<std::string>& cluster,
                                               double damping, double tol,
                                               int max_iterations) {
    if (cluster.empty()) return {};
    if (damping <= 0.0 || damping >= 1.0)
        throw ValidationError("pagerank damping must lie in (0, 1)");

    std::vector<std::string> nodes = cluster;
    std::sort(nodes.begin(), nodes.end());
    const int n = static_cast<int>(nodes.size());

    std::vector<int> net_index(n);
    for (int i = 0; i < n; ++i) net_index[i] = net.index_of(nodes[i]);

    // Subgraph induced by the cluster's terms.
    std::vector<std::vector<std::pair<int, double>>> adj(n);
    std::vector<double> strength(n, 0.0);
    for (int i = 0; i < n; ++i) {
        if (net_index[i] < 0) continue;
        for (int j = i + 1; j < n; ++j) {
            if (net_index[j] < 0) continue;
            const CowordEdge* e = net.edge(net_index[i], net_index[j]);
            if (!e) continue;
            adj[i].emplace_back(j, e->weight);
            adj[j].emplace_back(i, e->weight);
            strength[i] += e->weight;
            strength[j] += e->weight;
        }
    }

    std::vector<double> x(n, 1.0 / n), next(n);
    for (int iter = 0; iter < max_iterations; ++iter) {
        double dangling = 0.0;
        for (int i = 0; i < n; ++i)
            if (strength[i] == 0.0) dangling += x[i];

        const double base = (1.0 - damping) / n + damping * dangling / n;
        for (int j = 0; j < n; ++j) {
            double in_mass = 0.0;
            for (const auto& [i, w] : adj[j]) in_mass += x[i] * w / strength[i];
            next[j] = base + damping * in_mass;
        }

        double diff = 0.0;
        for (int i = 0; i < n; ++i) diff += std::abs(next[i] - x[i]);
        x.swap(next);
        if (diff <= tol) break;
    }

    double sum = 0.0;
    for (double v : x) sum += v;
    std::map<std::string, double> scores;
    for (int i = 0; i < n; ++i) scores[nodes[i]] = x[i] / sum;
    return scores;
}

void strategic_metrics(const CowordNetwork& net, PeriodPartition& partition) {
    std::unordered_map<std::string, int> term_cluster; // term -> cluster position
    for (std::size_t h = 0; h < partition.clusters.size(); ++h)
        for (const auto& t : partition.clusters[h].terms)
            term_cluster[t] = static_cast<int>(h);

    std::vector<double> external(partition.clusters.size(), 0.0);
    std::vector<double> internal(partition.clusters.size(), 0.0);
    for (const auto& [key, edge] : net.edges) {
        auto it_i = term_cluster.find(net.terms[key.first].term);
        auto it_j = term_cluster.find(net.terms[key.second].term);
        const int ci = it_i == term_cluster.end() ? -1 : it_i->second;
        const int cj = it_j == term_cluster.end() ? -1 : it_j->second;
        if (ci >= 0 && ci == cj) {
            internal[ci] += edge.weight;
        } else {
            if (ci >= 0) external[ci] += edge.weight;
            if (cj >= 0) external[cj] += edge.weight;
        }
    }

    for (std::size_t h = 0; h < partition.clusters.size(); ++h) {
        ThemeCluster& cluster = partition.clusters[h];
        cluster.centrality = external[h];
        cluster.density = cluster.terms.empty()
                              ? 0.0
                              : 100.0 * internal[h] / static_cast<double>(cluster.terms.size());
        assert(!cluster.pagerank.empty());
        std::string best;
        double best_score = -1.0;
        for (const auto& [term, score] : cluster.pagerank) { // map order: ties stay lexicographic
            if (score > best_score) {
                best_score = score;
                best = term;
            }
        }
        cluster.label = best;
    }
}

namespace {

double split_point(std::vector<double> values, QuadrantOrigin origin) {
    if (values.empty()) return 0.0;
    if (origin == QuadrantOrigin::mean) {
        double s = 0.0;
        for (double v : values) s += v;
        return s / static_cast<double>(values.size());
    }
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

} // namespace

std::map<ClusterId, Quadrant> strategic_coordinates(std::vector<PeriodPartition>& partitions,
                                                    QuadrantOrigin origin) {
    std::map<ClusterId, Quadrant> labels;
    for (auto& partition : partitions) {
        std::vector<double> cs, ds;
        for (const auto& c : partition.clusters) {
            cs.push_back(c.centrality);
            ds.push_back(c.density);
        }
        const double c0 = split_point(cs, origin);
        const double d0 = split_point(ds, origin);
        for (auto& cluster : partition.clusters) {
            const bool high_c = cluster.centrality >= c0;
            const bool high_d = cluster.density >= d0;
            Quadrant q = high_c ? (high_d ? Quadrant::motor : Quadrant::basic)
                                : (high_d ? Quadrant::niche : Quadrant::emerging_or_declining);
            cluster.quadrant = q;
            labels[cluster.id] = q;
        }
    }
    return labels;
}

} // namespace themetrace
