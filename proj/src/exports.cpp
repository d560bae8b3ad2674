#include "themetrace/exports.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "themetrace/format.hpp"

namespace themetrace {

namespace {

using nlohmann::json;

// All doubles are rounded to 12 significant digits before serialization so
// artifacts are byte-stable across runs and platforms.
double num(double v) { return round_sig(v); }

std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

} // namespace

std::string terms_tsv(const CowordNetwork& net) {
    std::ostringstream out;
    out << "term\toccurrence\n";
    for (const auto& ts : net.terms) out << ts.term << '\t' << ts.occurrence << '\n';
    return out.str();
}

std::string network_tsv(const CowordNetwork& net) {
    struct Row {
        std::string a, b;
        int c;
        double w;
    };
    std::vector<Row> rows;
    rows.reserve(net.edges.size());
    for (const auto& [key, edge] : net.edges) {
        std::string a = net.terms[key.first].term;
        std::string b = net.terms[key.second].term;
        if (b < a) std::swap(a, b);
        rows.push_back({a, b, edge.cooccurrence, edge.weight});
    }
    std::sort(rows.begin(), rows.end(), [](const Row& x, const Row& y) {
        return std::tie(x.a, x.b) < std::tie(y.a, y.b);
    });

    std::ostringstream out;
    out << "term_i\tterm_j\tc_ij\tw_ij\n";
    for (const auto& r : rows)
        out << r.a << '\t' << r.b << '\t' << r.c << '\t' << format_sig(r.w) << '\n';
    return out.str();
}

std::string strategic_json(const PeriodPartition& partition, const CowordNetwork& net,
                           int top_terms) {
    std::unordered_map<std::string, int> occ;
    for (const auto& ts : net.terms) occ[ts.term] = ts.occurrence;

    json arr = json::array();
    for (const auto& cluster : partition.clusters) {
        std::vector<std::pair<std::string, double>> ranked(cluster.pagerank.begin(),
                                                           cluster.pagerank.end());
        std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
            if (a.second != b.second) return a.second > b.second;
            return a.first < b.first;
        });
        if (static_cast<int>(ranked.size()) > top_terms) ranked.resize(top_terms);

        json top = json::array();
        for (const auto& [term, pr] : ranked) {
            auto it = occ.find(term);
            top.push_back({{"term", term},
                           {"pagerank", num(pr)},
                           {"occurrence", it == occ.end() ? 0 : it->second}});
        }
        arr.push_back({{"cluster_id", cluster.id.str()},
                       {"label", cluster.label},
                       {"centrality", num(cluster.centrality)},
                       {"density", num(cluster.density)},
                       {"fuzzy_size", num(cluster.fuzzy_size)},
                       {"quadrant", quadrant_name(cluster.quadrant)},
                       {"top_terms", top}});
    }
    return dump(arr);
}

namespace {

double axis_split(std::vector<double> values, QuadrantOrigin origin) {
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

std::string strategic_svg(const PeriodPartition& partition, QuadrantOrigin origin) {
    constexpr double W = 640.0, H = 640.0, M = 60.0;

    std::vector<double> cs, ds, sizes;
    for (const auto& c : partition.clusters) {
        cs.push_back(c.centrality);
        ds.push_back(c.density);
        sizes.push_back(c.fuzzy_size);
    }
    auto range = [](const std::vector<double>& v) {
        double lo = 0.0, hi = 1.0;
        if (!v.empty()) {
            lo = *std::min_element(v.begin(), v.end());
            hi = *std::max_element(v.begin(), v.end());
        }
        if (hi - lo < 1e-12) {
            lo -= 0.5;
            hi += 0.5;
        }
        const double pad = 0.08 * (hi - lo);
        return std::pair<double, double>{lo - pad, hi + pad};
    };
    const auto [cx_lo, cx_hi] = range(cs);
    const auto [dy_lo, dy_hi] = range(ds);
    const double size_hi = sizes.empty() ? 1.0 : std::max(1e-9, *std::max_element(sizes.begin(), sizes.end()));

    auto sx = [&](double c) { return M + (c - cx_lo) / (cx_hi - cx_lo) * (W - 2 * M); };
    auto sy = [&](double d) { return H - M - (d - dy_lo) / (dy_hi - dy_lo) * (H - 2 * M); };

    const double c0 = axis_split(cs, origin);
    const double d0 = axis_split(ds, origin);

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    svg << "  <rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    svg << "  <line x1=\"" << format_fixed(sx(c0)) << "\" y1=\"" << M << "\" x2=\""
        << format_fixed(sx(c0)) << "\" y2=\"" << H - M
        << "\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n";
    svg << "  <line x1=\"" << M << "\" y1=\"" << format_fixed(sy(d0)) << "\" x2=\"" << W - M
        << "\" y2=\"" << format_fixed(sy(d0))
        << "\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n";
    svg << "  <text x=\"" << W / 2 << "\" y=\"" << H - 18
        << "\" text-anchor=\"middle\" font-size=\"14\">centrality</text>\n";
    svg << "  <text x=\"18\" y=\"" << H / 2 << "\" text-anchor=\"middle\" font-size=\"14\" "
        << "transform=\"rotate(-90 18 " << H / 2 << ")\">density</text>\n";

    for (const auto& cluster : partition.clusters) {
        const double x = sx(cluster.centrality);
        const double y = sy(cluster.density);
        const double r = 6.0 + 18.0 * std::sqrt(std::max(0.0, cluster.fuzzy_size) / size_hi);
        svg << "  <circle cx=\"" << format_fixed(x) << "\" cy=\"" << format_fixed(y)
            << "\" r=\"" << format_fixed(r)
            << "\" fill=\"#4d79a7\" fill-opacity=\"0.45\" stroke=\"#2c4a6e\"/>\n";
        svg << "  <text x=\"" << format_fixed(x) << "\" y=\""
            << format_fixed(y - r - 4.0)
            << "\" text-anchor=\"middle\" font-size=\"11\">" << xml_escape(cluster.label)
            << " (" << cluster.id.str() << ")</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

std::string membership_tsv(const MembershipMatrix& m) {
    std::ostringstream out;
    out << "doc_id";
    for (const auto& id : m.cluster_ids) out << '\t' << id.str();
    out << '\n';
    for (std::size_t i = 0; i < m.doc_ids.size(); ++i) {
        out << m.doc_ids[i];
        for (double u : m.u[i]) out << '\t' << format_sig(u);
        out << '\n';
    }
    return out.str();
}

std::string lineage_json(const LineageMatrix& lm) {
    json entries = json::array();
    for (std::size_t i = 0; i < lm.rows(); ++i) {
        for (std::size_t j = 0; j < lm.cols(); ++j) {
            entries.push_back(
                {{"src", ClusterId{lm.source_period, static_cast<int>(i)}.str()},
                 {"dst", ClusterId{lm.target_period, static_cast<int>(j)}.str()},
                 {"L", num(lm.L[i][j])},
                 {"Iw", num(lm.Iw[i][j])},
                 {"Omega", num(lm.Omega[i][j])},
                 {"shared_terms", lm.shared[i][j]}});
        }
    }
    json j{{"source_period", lm.source_period + 1},
           {"target_period", lm.target_period + 1},
           {"alpha", num(lm.alpha)},
           {"entries", entries}};
    return dump(j);
}

std::string overlap_json(const std::vector<CowordNetwork>& networks) {
    json transitions = json::array();
    for (std::size_t t = 0; t + 1 < networks.size(); ++t) {
        std::set<std::string> a, b;
        for (const auto& ts : networks[t].terms) a.insert(ts.term);
        for (const auto& ts : networks[t + 1].terms) b.insert(ts.term);
        const PeriodOverlap o = period_overlap(a, b);
        const std::size_t uni = a.size() + b.size() - static_cast<std::size_t>(o.shared);
        transitions.push_back(
            {{"source_period", t + 1},
             {"target_period", t + 2},
             {"terms_source", a.size()},
             {"terms_target", b.size()},
             {"shared", o.shared},
             {"union", uni},
             {"jaccard", num(o.index)},
             {"share_of_earlier",
              num(a.empty() ? 0.0 : static_cast<double>(o.shared) / static_cast<double>(a.size()))},
             {"inclusion_min",
              num(a.empty() || b.empty()
                      ? 0.0
                      : static_cast<double>(o.shared) /
                            static_cast<double>(std::min(a.size(), b.size())))}});
    }
    return dump(json{{"transitions", transitions}});
}

std::string graphml(const EvolutionGraph& g, const PatternLabels& labels) {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n";
    const std::vector<std::array<std::string, 3>> node_keys{
        {"d_period", "period", "int"},       {"d_label", "label", "string"},
        {"d_size", "fuzzy_size", "double"},  {"d_centrality", "centrality", "double"},
        {"d_density", "density", "double"},  {"d_quadrant", "quadrant", "string"},
        {"d_patterns", "patterns", "string"}};
    for (const auto& k : node_keys)
        out << "  <key id=\"" << k[0] << "\" for=\"node\" attr.name=\"" << k[1]
            << "\" attr.type=\"" << k[2] << "\"/>\n";
    const std::vector<std::array<std::string, 3>> edge_keys{
        {"d_L", "L", "double"}, {"d_Iw", "Iw", "double"}, {"d_Omega", "Omega", "double"}};
    for (const auto& k : edge_keys)
        out << "  <key id=\"" << k[0] << "\" for=\"edge\" attr.name=\"" << k[1]
            << "\" attr.type=\"" << k[2] << "\"/>\n";

    out << "  <graph id=\"evolution\" edgedefault=\"directed\">\n";
    for (const auto& n : g.nodes) {
        std::string patterns;
        auto it = labels.find(n.id);
        if (it != labels.end()) {
            bool first = true;
            for (Pattern p : it->second) {
                if (!first) patterns += ",";
                patterns += pattern_name(p);
                first = false;
            }
        }
        out << "    <node id=\"" << n.id.str() << "\">\n";
        out << "      <data key=\"d_period\">" << n.id.period + 1 << "</data>\n";
        out << "      <data key=\"d_label\">" << xml_escape(n.label) << "</data>\n";
        out << "      <data key=\"d_size\">" << format_sig(n.fuzzy_size) << "</data>\n";
        out << "      <data key=\"d_centrality\">" << format_sig(n.centrality) << "</data>\n";
        out << "      <data key=\"d_density\">" << format_sig(n.density) << "</data>\n";
        out << "      <data key=\"d_quadrant\">" << quadrant_name(n.quadrant) << "</data>\n";
        out << "      <data key=\"d_patterns\">" << patterns << "</data>\n";
        out << "    </node>\n";
    }
    for (const auto& e : g.edges) {
        out << "    <edge source=\"" << e.src.str() << "\" target=\"" << e.dst.str()
            << "\">\n";
        out << "      <data key=\"d_L\">" << format_sig(e.weight) << "</data>\n";
        out << "      <data key=\"d_Iw\">" << format_sig(e.iw) << "</data>\n";
        out << "      <data key=\"d_Omega\">" << format_sig(e.omega) << "</data>\n";
        out << "    </edge>\n";
    }
    out << "  </graph>\n</graphml>\n";
    return out.str();
}

std::string sankey_json(const EvolutionGraph& g) {
    json nodes = json::array();
    for (const auto& n : g.nodes)
        nodes.push_back({{"id", n.id.str()},
                         {"period", n.id.period + 1},
                         {"label", n.label},
                         {"size", num(n.fuzzy_size)}});
    json links = json::array();
    for (const auto& e : g.edges)
        links.push_back({{"src", e.src.str()}, {"dst", e.dst.str()}, {"value", num(e.weight)}});
    return dump(json{{"nodes", nodes}, {"links", links}});
}

std::string sankey_svg(const EvolutionGraph& g) {
    constexpr double col_w = 150.0, node_w = 20.0, v_gap = 14.0, margin = 40.0;
    const int periods = std::max(1, g.period_count);

    // Stack clusters per period by descending fuzzy size (ties by ordinal).
    std::vector<std::vector<const ThemeCluster*>> columns(periods);
    for (const auto& n : g.nodes) columns[n.id.period].push_back(&n);
    for (auto& col : columns)
        std::sort(col.begin(), col.end(), [](const ThemeCluster* a, const ThemeCluster* b) {
            if (a->fuzzy_size != b->fuzzy_size) return a->fuzzy_size > b->fuzzy_size;
            return a->id < b->id;
        });

    double max_size = 1.0;
    for (const auto& n : g.nodes) max_size = std::max(max_size, n.fuzzy_size);
    auto node_h = [&](double size) { return 12.0 + 48.0 * std::max(0.0, size) / max_size; };

    struct Box {
        double x, y, h;
    };
    std::map<ClusterId, Box> boxes;
    double max_col_h = 0.0;
    for (int t = 0; t < periods; ++t) {
        double y = margin + 20.0;
        for (const ThemeCluster* c : columns[t]) {
            const double h = node_h(c->fuzzy_size);
            boxes[c->id] = Box{margin + t * col_w, y, h};
            y += h + v_gap;
        }
        max_col_h = std::max(max_col_h, y);
    }
    const double W = margin * 2 + (periods - 1) * col_w + node_w;
    const double H = max_col_h + margin;

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << format_fixed(W)
        << "\" height=\"" << format_fixed(H) << "\" viewBox=\"0 0 " << format_fixed(W) << " "
        << format_fixed(H) << "\">\n";
    svg << "  <rect width=\"" << format_fixed(W) << "\" height=\"" << format_fixed(H)
        << "\" fill=\"white\"/>\n";
    for (int t = 0; t < periods; ++t)
        svg << "  <text x=\"" << format_fixed(margin + t * col_w + node_w / 2)
            << "\" y=\"" << format_fixed(margin)
            << "\" text-anchor=\"middle\" font-size=\"13\">t" << t + 1 << "</text>\n";

    for (const auto& e : g.edges) {
        const Box& a = boxes.at(e.src);
        const Box& b = boxes.at(e.dst);
        const double x1 = a.x + node_w, y1 = a.y + a.h / 2;
        const double x2 = b.x, y2 = b.y + b.h / 2;
        const double mid = (x1 + x2) / 2;
        svg << "  <path d=\"M " << format_fixed(x1) << " " << format_fixed(y1) << " C "
            << format_fixed(mid) << " " << format_fixed(y1) << ", " << format_fixed(mid) << " "
            << format_fixed(y2) << ", " << format_fixed(x2) << " " << format_fixed(y2)
            << "\" fill=\"none\" stroke=\"#8aa4c8\" stroke-opacity=\"0.6\" stroke-width=\""
            << format_fixed(1.0 + 9.0 * std::min(1.0, std::max(0.0, e.weight))) << "\"/>\n";
    }
    for (const auto& [id, box] : boxes) {
        const ThemeCluster* c = g.node(id);
        svg << "  <rect x=\"" << format_fixed(box.x) << "\" y=\"" << format_fixed(box.y)
            << "\" width=\"" << node_w << "\" height=\"" << format_fixed(box.h)
            << "\" fill=\"#4d79a7\"/>\n";
        svg << "  <text x=\"" << format_fixed(box.x + node_w + 5)
            << "\" y=\"" << format_fixed(box.y + box.h / 2 + 4)
            << "\" font-size=\"11\">" << xml_escape(c ? c->label : id.str()) << " ("
            << id.str() << ")</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

std::string pathways_tsv(const PathwayResult& result) {
    std::ostringstream out;
    if (result.truncated)
        out << "# truncated: maximal-path count exceeded the cap; greedy strongest-edge "
               "pathways per root shown\n";
    out << "rank\tstrength\tlength\tcumulative_size\ttrivial\tclusters\n";
    int rank = 1;
    for (const auto& p : result.pathways) {
        std::string chain;
        for (std::size_t i = 0; i < p.clusters.size(); ++i) {
            if (i > 0) chain += "->";
            chain += p.clusters[i].str();
        }
        out << rank++ << '\t' << format_sig(p.strength) << '\t' << p.length << '\t'
            << format_sig(p.cumulative_size) << '\t'
            << (p.clusters.size() == 1 ? "true" : "false") << '\t' << chain << '\n';
    }
    return out.str();
}

} // namespace themetrace
