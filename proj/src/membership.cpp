#include "themetrace/membership.hpp"

#include <algorithm>
#include <unordered_map>

#include "themetrace/errors.hpp"

namespace themetrace {

namespace {

double similarity_with_freq(const Document& doc, const ThemeCluster& cluster,
                            const std::unordered_map<std::string, int>& freq) {
    double s = 0.0;
    for (const auto& term : doc.terms) {
        auto pr = cluster.pagerank.find(term);
        if (pr == cluster.pagerank.end()) continue;
        auto f = freq.find(term);
        if (f == freq.end() || f->second <= 0) continue;
        s += pr->second / static_cast<double>(f->second);
    }
    return s;
}

std::unordered_map<std::string, int> freq_map(const std::vector<TermStats>& stats) {
    std::unordered_map<std::string, int> freq;
    freq.reserve(stats.size());
    for (const auto& s : stats) freq[s.term] = s.occurrence;
    return freq;
}

} // namespace

double similarity(const Document& doc, const ThemeCluster& cluster,
                  const std::vector<TermStats>& stats) {
    return similarity_with_freq(doc, cluster, freq_map(stats));
}

std::vector<double> normalize_row(const std::vector<double>& similarities) {
    std::vector<double> row(similarities.size());
    if (row.empty()) return row;
    double sum = 0.0;
    for (double s : similarities) sum += s;
    if (sum <= 0.0) {
        const double uniform = 1.0 / static_cast<double>(row.size());
        std::fill(row.begin(), row.end(), uniform);
        return row;
    }
    for (std::size_t i = 0; i < row.size(); ++i) row[i] = similarities[i] / sum;
    return row;
}

MembershipMatrix build_membership(const std::vector<const Document*>& docs,
                                  const PeriodPartition& partition,
                                  const std::vector<TermStats>& stats) {
    if (partition.clusters.empty())
        throw ValidationError("cannot build memberships: period has no clusters");

    MembershipMatrix m;
    m.period = partition.period;
    for (const auto& cluster : partition.clusters) m.cluster_ids.push_back(cluster.id);

    std::vector<const Document*> ordered = docs;
    std::sort(ordered.begin(), ordered.end(),
              [](const Document* a, const Document* b) { return a->id < b->id; });

    const auto freq = freq_map(stats);
    m.doc_ids.reserve(ordered.size());
    m.u.reserve(ordered.size());
    for (const Document* doc : ordered) {
        std::vector<double> sims(partition.clusters.size());
        for (std::size_t h = 0; h < partition.clusters.size(); ++h)
            sims[h] = similarity_with_freq(*doc, partition.clusters[h], freq);
        m.doc_ids.push_back(doc->id);
        m.u.push_back(normalize_row(sims));
    }
    return m;
}

std::map<ClusterId, double> fuzzy_sizes(const MembershipMatrix& m) {
    std::map<ClusterId, double> sizes;
    for (std::size_t h = 0; h < m.cluster_ids.size(); ++h) {
        double col = 0.0;
        for (const auto& row : m.u) col += row[h];
        sizes[m.cluster_ids[h]] = col;
    }
    return sizes;
}

} // namespace themetrace
