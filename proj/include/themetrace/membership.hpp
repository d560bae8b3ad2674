#pragma once

#include <map>
#include <string>
#include <vector>

#include "themetrace/corpus.hpp"
#include "themetrace/themes.hpp"

namespace themetrace {

/// Row-stochastic document-to-cluster affiliation matrix for one period.
struct MembershipMatrix {
    int period = 0;
    std::vector<std::string> doc_ids;
    std::vector<ClusterId> cluster_ids;
    std::vector<std::vector<double>> u; // doc_ids.size() x cluster_ids.size()
};

/// Similarity of a document to a cluster: sum over shared terms of
/// PR_k / freq_k, where freq_k is the term's period document frequency.
/// Terms outside the retained vocabulary contribute 0.
double similarity(const Document& doc, const ThemeCluster& cluster,
                  const std::vector<TermStats>& stats);

/// Normalizes a similarity row into a membership distribution: each entry
/// divided by the row sum; all-zero rows become uniform 1/n.
std::vector<double> normalize_row(const std::vector<double>& similarities);

/// Builds the fuzzy membership matrix for one period's documents.
/// Throws ValidationError when the partition has no clusters.
MembershipMatrix build_membership(const std::vector<const Document*>& docs,
                                  const PeriodPartition& partition,
                                  const std::vector<TermStats>& stats);

/// Fuzzy cardinality of each cluster: column sums of the membership
/// matrix. Sizes sum to the period's document count.
std::map<ClusterId, double> fuzzy_sizes(const MembershipMatrix& m);

} // namespace themetrace
