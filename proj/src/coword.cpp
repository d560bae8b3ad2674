#include "themetrace/coword.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace themetrace {

int CowordNetwork::index_of(const std::string& term) const {
    for (std::size_t i = 0; i < terms.size(); ++i)
        if (terms[i].term == term) return static_cast<int>(i);
    return -1;
}

const CowordEdge* CowordNetwork::edge(int i, int j) const {
    if (i == j) return nullptr;
    auto it = edges.find(i < j ? std::make_pair(i, j) : std::make_pair(j, i));
    return it == edges.end() ? nullptr : &it->second;
}

std::vector<TermStats> count_terms(const Corpus& corpus, int period) {
    std::unordered_map<std::string, int> counts;
    for (const Document* doc : corpus.docs_in_period(period))
        for (const auto& term : doc->terms) ++counts[term]; // terms is a set: once per doc

    std::vector<TermStats> stats;
    stats.reserve(counts.size());
    for (const auto& [term, n] : counts) stats.push_back(TermStats{term, n});
    std::sort(stats.begin(), stats.end(), [](const TermStats& a, const TermStats& b) {
        return a.occurrence != b.occurrence ? a.occurrence > b.occurrence : a.term < b.term;
    });
    return stats;
}

std::vector<TermStats> filter_terms(const std::vector<TermStats>& stats,
                                    int min_occurrence, int max_terms) {
    std::vector<TermStats> qualifying;
    for (const auto& s : stats)
        if (s.occurrence >= min_occurrence) qualifying.push_back(s);
    std::sort(qualifying.begin(), qualifying.end(), [](const TermStats& a, const TermStats& b) {
        return a.occurrence != b.occurrence ? a.occurrence > b.occurrence : a.term < b.term;
    });
    if (static_cast<int>(qualifying.size()) > max_terms) qualifying.resize(max_terms);
    return qualifying;
}

CowordNetwork build_network(const Corpus& corpus, int period,
                            const std::vector<TermStats>& retained) {
    CowordNetwork net;
    net.period = period;
    net.terms = retained;

    std::unordered_map<std::string, int> index;
    for (std::size_t i = 0; i < retained.size(); ++i)
        index[retained[i].term] = static_cast<int>(i);

    std::map<std::pair<int, int>, int> cooc;
    for (const Document* doc : corpus.docs_in_period(period)) {
        std::vector<int> present;
        for (const auto& term : doc->terms) {
            auto it = index.find(term);
            if (it != index.end()) present.push_back(it->second);
        }
        std::sort(present.begin(), present.end());
        for (std::size_t a = 0; a < present.size(); ++a)
            for (std::size_t b = a + 1; b < present.size(); ++b)
                ++cooc[{present[a], present[b]}];
    }

    for (const auto& [key, c_ij] : cooc) {
        const double c_ii = net.terms[key.first].occurrence;
        const double c_jj = net.terms[key.second].occurrence;
        net.edges[key] = CowordEdge{c_ij, c_ij / std::sqrt(c_ii * c_jj)};
    }
    return net;
}

} // namespace themetrace
