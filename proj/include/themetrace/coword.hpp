#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "themetrace/corpus.hpp"

namespace themetrace {

/// Document frequency of a term within one period.
struct TermStats {
    std::string term;
    int occurrence = 0; // number of documents containing the term
};

struct CowordEdge {
    int cooccurrence = 0; // c_ij: documents containing both terms
    double weight = 0.0;  // c_ij / sqrt(c_ii * c_jj), in (0, 1]
};

/// Weighted term co-occurrence network for one period.
///
/// Terms are indexed by their position in `terms`; edges are stored once
/// with i < j and exist exactly for pairs with cooccurrence >= 1.
struct CowordNetwork {
    int period = 0;
    std::vector<TermStats> terms;
    std::map<std::pair<int, int>, CowordEdge> edges;

    bool empty() const { return terms.empty(); }
    int index_of(const std::string& term) const; // -1 if absent

    /// Edge between term indices (either order); nullptr if no edge.
    const CowordEdge* edge(int i, int j) const;
};

/// Per-period document frequencies, sorted by descending occurrence then
/// ascending term. A term is counted once per document.
std::vector<TermStats> count_terms(const Corpus& corpus, int period);

/// Keeps terms with occurrence >= min_occurrence; if more than max_terms
/// qualify, keeps the max_terms highest-occurrence terms, breaking ties at
/// the cutoff by ascending lexicographic term order.
std::vector<TermStats> filter_terms(const std::vector<TermStats>& stats,
                                    int min_occurrence, int max_terms);

/// Builds the association-index network over the retained terms.
CowordNetwork build_network(const Corpus& corpus, int period,
                            const std::vector<TermStats>& retained);

} // namespace themetrace
