#pragma once

#include <set>
#include <string>
#include <vector>

#include "themetrace/themes.hpp"

namespace themetrace {

/// All pairwise lineage evaluations between two consecutive periods.
/// L = alpha * Iw + (1 - alpha) * Omega, elementwise.
struct LineageMatrix {
    int source_period = 0;
    int target_period = 0;
    double alpha = 0.5;
    std::vector<std::vector<double>> L;     // n_t x n_{t+1}
    std::vector<std::vector<double>> Iw;
    std::vector<std::vector<double>> Omega;
    std::vector<std::vector<std::vector<std::string>>> shared; // shared terms per pair

    std::size_t rows() const { return L.size(); }
    std::size_t cols() const { return L.empty() ? 0 : L[0].size(); }
};

/// Terms common to both clusters.
std::vector<std::string> shared_terms(const ThemeCluster& src, const ThemeCluster& dst);

/// Directional retention: share of the source cluster's total PageRank
/// carried by terms that also appear in the target cluster. In [0, 1];
/// equals 1 exactly when src's terms are a subset of dst's.
double weighted_inclusion(const ThemeCluster& src, const ThemeCluster& dst);

/// Symmetric structural relevance of the shared terms:
/// sqrt(sum PR_src(k) * PR_dst(k) / (PR_tot(src) * PR_tot(dst))).
double importance_index(const ThemeCluster& src, const ThemeCluster& dst);

/// alpha-blend of weighted inclusion and importance. Throws ValidationError
/// when alpha is outside [0, 1].
double lineage_strength(const ThemeCluster& src, const ThemeCluster& dst, double alpha);

/// Evaluates every (source, target) cluster pair between two consecutive
/// periods. Either partition empty yields an empty matrix.
LineageMatrix build_lineage_matrix(const PeriodPartition& src_partition,
                                   const PeriodPartition& dst_partition,
                                   double alpha);

/// Re-blends an existing matrix at a different alpha (Iw/Omega unchanged).
LineageMatrix reblend(const LineageMatrix& lm, double alpha);

/// Classical inclusion index: |src n dst| / min(|src|, |dst|).
/// Returns 0 when either set is empty.
double classical_inclusion(const std::set<std::string>& src,
                           const std::set<std::string>& dst);

struct PeriodOverlap {
    int shared = 0;      // |intersection|
    double index = 0.0;  // |intersection| / |union|
};

/// Jaccard-style overlap between two periods' retained vocabularies.
PeriodOverlap period_overlap(const std::set<std::string>& terms_t,
                             const std::set<std::string>& terms_t1);

} // namespace themetrace
