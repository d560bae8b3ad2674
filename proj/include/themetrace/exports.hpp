#pragma once

#include <string>
#include <vector>

#include "themetrace/coword.hpp"
#include "themetrace/evolution.hpp"
#include "themetrace/lineage.hpp"
#include "themetrace/membership.hpp"
#include "themetrace/themes.hpp"

namespace themetrace {

/// Node list: "term<TAB>occurrence", one line per retained term.
std::string terms_tsv(const CowordNetwork& net);

/// Edge list: "term_i<TAB>term_j<TAB>c_ij<TAB>w_ij", sorted by term pair.
std::string network_tsv(const CowordNetwork& net);

/// Per-period strategic diagram: JSON array of cluster records with
/// centrality, density, fuzzy size, quadrant and top PageRank terms.
std::string strategic_json(const PeriodPartition& partition, const CowordNetwork& net,
                           int top_terms = 10);

/// Static SVG scatter of the strategic diagram (node radius scales with
/// fuzzy size, axis origins at the period split used for quadrants).
std::string strategic_svg(const PeriodPartition& partition, QuadrantOrigin origin);

/// Membership matrix as delimited text: doc_id then one column per cluster.
std::string membership_tsv(const MembershipMatrix& m);

/// Full lineage matrix as JSON with per-pair L, Iw, Omega and shared terms.
std::string lineage_json(const LineageMatrix& lm);

/// Vocabulary overlap between consecutive periods, with both the Jaccard
/// normalization and the share-of-earlier / min-cardinality variants.
std::string overlap_json(const std::vector<CowordNetwork>& networks);

/// GraphML with node attributes (period, label, fuzzy_size, centrality,
/// density, quadrant, patterns) and edge attributes (L, Iw, Omega).
std::string graphml(const EvolutionGraph& g, const PatternLabels& labels);

/// Sankey plot data: {nodes:[{id,period,label,size}], links:[{src,dst,value}]}.
std::string sankey_json(const EvolutionGraph& g);

/// Static SVG rendering of the evolution graph, periods on the horizontal
/// axis, clusters stacked by descending fuzzy size.
std::string sankey_svg(const EvolutionGraph& g);

/// Pathway report: rank, strength, length, cumulative size, trivial flag,
/// cluster chain. A truncated enumeration is flagged in a header comment.
std::string pathways_tsv(const PathwayResult& result);

} // namespace themetrace
