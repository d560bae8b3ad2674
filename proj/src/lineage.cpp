#include "themetrace/lineage.hpp"

#include <algorithm>
#include <cmath>

#include "themetrace/errors.hpp"

namespace themetrace {

namespace {

void check_alpha(double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw ValidationError("alpha must lie in [0, 1]");
}

} // namespace

std::vector<std::string> shared_terms(const ThemeCluster& src, const ThemeCluster& dst) {
    std::vector<std::string> shared;
    std::set_intersection(src.terms.begin(), src.terms.end(), dst.terms.begin(),
                          dst.terms.end(), std::back_inserter(shared));
    return shared;
}

double weighted_inclusion(const ThemeCluster& src, const ThemeCluster& dst) {
    if (src.pagerank_total <= 0.0) return 0.0;
    double carried = 0.0;
    for (const auto& term : shared_terms(src, dst)) {
        auto it = src.pagerank.find(term);
        if (it != src.pagerank.end()) carried += it->second;
    }
    return carried / src.pagerank_total;
}

double importance_index(const ThemeCluster& src, const ThemeCluster& dst) {
    if (src.pagerank_total <= 0.0 || dst.pagerank_total <= 0.0) return 0.0;
    double cross = 0.0;
    for (const auto& term : shared_terms(src, dst)) {
        auto s = src.pagerank.find(term);
        auto d = dst.pagerank.find(term);
        if (s != src.pagerank.end() && d != dst.pagerank.end())
            cross += s->second * d->second;
    }
    return std::sqrt(cross / (src.pagerank_total * dst.pagerank_total));
}

double lineage_strength(const ThemeCluster& src, const ThemeCluster& dst, double alpha) {
    check_alpha(alpha);
    return alpha * weighted_inclusion(src, dst) + (1.0 - alpha) * importance_index(src, dst);
}

LineageMatrix build_lineage_matrix(const PeriodPartition& src_partition,
                                   const PeriodPartition& dst_partition,
                                   double alpha) {
    check_alpha(alpha);
    LineageMatrix lm;
    lm.source_period = src_partition.period;
    lm.target_period = dst_partition.period;
    lm.alpha = alpha;

    const std::size_t rows = src_partition.clusters.size();
    const std::size_t cols = dst_partition.clusters.size();
    lm.L.assign(rows, std::vector<double>(cols, 0.0));
    lm.Iw.assign(rows, std::vector<double>(cols, 0.0));
    lm.Omega.assign(rows, std::vector<double>(cols, 0.0));
    lm.shared.assign(rows, std::vector<std::vector<std::string>>(cols));

    for (std::size_t i = 0; i < rows; ++i) {
        const ThemeCluster& src = src_partition.clusters[i];
        for (std::size_t j = 0; j < cols; ++j) {
            const ThemeCluster& dst = dst_partition.clusters[j];
            lm.shared[i][j] = shared_terms(src, dst);
            lm.Iw[i][j] = weighted_inclusion(src, dst);
            lm.Omega[i][j] = importance_index(src, dst);
            lm.L[i][j] = alpha * lm.Iw[i][j] + (1.0 - alpha) * lm.Omega[i][j];
        }
    }
    return lm;
}

LineageMatrix reblend(const LineageMatrix& lm, double alpha) {
    check_alpha(alpha);
    LineageMatrix out = lm;
    out.alpha = alpha;
    for (std::size_t i = 0; i < out.rows(); ++i)
        for (std::size_t j = 0; j < out.cols(); ++j)
            out.L[i][j] = alpha * out.Iw[i][j] + (1.0 - alpha) * out.Omega[i][j];
    return out;
}

double classical_inclusion(const std::set<std::string>& src,
                           const std::set<std::string>& dst) {
    if (src.empty() || dst.empty()) return 0.0;
    std::vector<std::string> shared;
    std::set_intersection(src.begin(), src.end(), dst.begin(), dst.end(),
                          std::back_inserter(shared));
    return static_cast<double>(shared.size()) /
           static_cast<double>(std::min(src.size(), dst.size()));
}

PeriodOverlap period_overlap(const std::set<std::string>& terms_t,
                             const std::set<std::string>& terms_t1) {
    std::vector<std::string> shared;
    std::set_intersection(terms_t.begin(), terms_t.end(), terms_t1.begin(),
                          terms_t1.end(), std::back_inserter(shared));
    PeriodOverlap o;
    o.shared = static_cast<int>(shared.size());
    const std::size_t uni = terms_t.size() + terms_t1.size() - shared.size();
    o.index = uni == 0 ? 0.0 : static_cast<double>(shared.size()) / static_cast<double>(uni);
    return o;
}

} // namespace themetrace
