#include "themetrace/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "themetrace/errors.hpp"
#include "themetrace/format.hpp"

namespace themetrace {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

namespace {

InputFormat parse_format(const std::string& s) {
    if (s == "tabular") return InputFormat::tabular;
    if (s == "canonical_json") return InputFormat::canonical_json;
    throw ConfigError("unknown input format '" + s + "' (expected 'tabular' or 'canonical_json')");
}

KeywordField parse_field(const std::string& s) {
    if (s == "author_keywords") return KeywordField::author_keywords;
    if (s == "index_keywords") return KeywordField::index_keywords;
    throw ConfigError("unknown keyword field '" + s +
                      "' (expected 'author_keywords' or 'index_keywords')");
}

QuadrantOrigin parse_origin(const std::string& s) {
    if (s == "median") return QuadrantOrigin::median;
    if (s == "mean") return QuadrantOrigin::mean;
    throw ConfigError("unknown quadrant origin '" + s + "' (expected 'median' or 'mean')");
}

std::string format_label(InputFormat f) {
    return f == InputFormat::tabular ? "tabular" : "canonical_json";
}

std::string field_label(KeywordField f) {
    return f == KeywordField::author_keywords ? "author_keywords" : "index_keywords";
}

std::string origin_label(QuadrantOrigin o) {
    return o == QuadrantOrigin::median ? "median" : "mean";
}

} // namespace

RunConfig load_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");

    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config file '" + path.string() + "' is not valid JSON: " + e.what());
    }
    if (!j.is_object()) throw ConfigError("config root must be a JSON object");

    RunConfig c;
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "input") c.input = value.get<std::string>();
            else if (key == "format") c.format = parse_format(value.get<std::string>());
            else if (key == "field") c.field = parse_field(value.get<std::string>());
            else if (key == "synonyms") c.synonyms = value.get<std::string>();
            else if (key == "periods") {
                for (const auto& p : value) {
                    PeriodSpec spec;
                    spec.label = p.at("label").get<std::string>();
                    spec.start_year = p.at("start_year").get<int>();
                    spec.end_year = p.at("end_year").get<int>();
                    c.periods.push_back(spec);
                }
            } else if (key == "min_occurrence") c.min_occurrence = value.get<int>();
            else if (key == "max_terms") c.max_terms = value.get<int>();
            else if (key == "min_cumulative_freq") c.min_cumulative_freq = value.get<int>();
            else if (key == "resolution") c.resolution = value.get<double>();
            else if (key == "seed") c.seed = value.get<std::uint64_t>();
            else if (key == "damping") c.damping = value.get<double>();
            else if (key == "alpha") c.alpha = value.get<double>();
            else if (key == "theta_abs") c.theta_abs = value.get<double>();
            else if (key == "top_k") c.top_k = value.get<int>();
            else if (key == "quadrant_origin") c.quadrant_origin = parse_origin(value.get<std::string>());
            else if (key == "output_dir") c.output_dir = value.get<std::string>();
            else if (key == "columns") {
                for (const auto& [col, name] : value.items()) {
                    if (col == "id") c.columns.id = name.get<std::string>();
                    else if (col == "year") c.columns.year = name.get<std::string>();
                    else if (col == "author_keywords") c.columns.author_keywords = name.get<std::string>();
                    else if (col == "index_keywords") c.columns.index_keywords = name.get<std::string>();
                    else throw ConfigError("unknown columns key '" + col + "'");
                }
            } else if (key == "delimiter") {
                const std::string d = value.get<std::string>();
                if (d.size() != 1)
                    throw ConfigError("delimiter must be a single character");
                c.delimiter = d[0];
            } else if (key == "path_cap") c.path_cap = value.get<long>();
            else throw ConfigError("unknown config key '" + key + "'");
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed config value: ") + e.what());
    }
    return c;
}

void validate_config(const RunConfig& config) {
    if (config.input.empty()) throw ConfigError("input path is required");
    if (config.output_dir.empty()) throw ConfigError("output directory is required");
    try {
        validate_period_specs(config.periods);
    } catch (const ValidationError& e) {
        throw ConfigError(e.what());
    }
    if (config.min_occurrence < 1) throw ConfigError("min_occurrence must be at least 1");
    if (config.max_terms < 1) throw ConfigError("max_terms must be at least 1");
    if (config.min_cumulative_freq < 0)
        throw ConfigError("min_cumulative_freq must be non-negative");
    if (!(config.resolution > 0.0)) throw ConfigError("resolution must be positive");
    if (!(config.damping > 0.0 && config.damping < 1.0))
        throw ConfigError("damping must lie in (0, 1)");
    if (!(config.alpha >= 0.0 && config.alpha <= 1.0))
        throw ConfigError("alpha must lie in [0, 1]");
    if (!(config.theta_abs >= 0.0 && config.theta_abs <= 1.0))
        throw ConfigError("theta_abs must lie in [0, 1]");
    if (config.top_k < 1) throw ConfigError("top_k must be at least 1");
    if (config.path_cap < 1) throw ConfigError("path_cap must be at least 1");
}

// ---------------------------------------------------------------------------
// Detection stages
// ---------------------------------------------------------------------------

namespace {

template <typename Fn>
auto stage(const std::string& name, Fn&& fn) {
    try {
        return fn();
    } catch (const PipelineError&) {
        throw; // already wrapped by an inner stage
    } catch (const Error& e) {
        throw PipelineError(name, e.what());
    } catch (const std::exception& e) {
        throw PipelineError(name, std::string("unexpected error: ") + e.what());
    }
}

} // namespace

PipelineState compute_state(const RunConfig& config) {
    PipelineState state;
    state.config = config;

    state.corpus = stage("ingest", [&] {
        std::ifstream in(config.input, std::ios::binary);
        if (!in) throw ParseError("cannot open input file '" + config.input + "'");
        ParseOptions opts;
        opts.format = config.format;
        opts.field = config.field;
        opts.columns = config.columns;
        opts.delimiter = config.delimiter;
        return parse_corpus(in, opts);
    });

    if (!config.synonyms.empty()) {
        state.corpus = stage("harmonize", [&] {
            std::ifstream in(config.synonyms, std::ios::binary);
            if (!in) throw ParseError("cannot open synonym file '" + config.synonyms + "'");
            return harmonize(state.corpus, load_synonyms(in));
        });
    }

    state.corpus = stage("slice", [&] {
        Corpus sliced = slice_periods(state.corpus, config.periods);
        if (sliced.documents.empty())
            throw ValidationError("empty-corpus: no documents fall within the configured periods");
        return sliced;
    });

    const int period_count = static_cast<int>(config.periods.size());

    stage("network", [&] {
        for (int t = 0; t < period_count; ++t) {
            const auto stats = count_terms(state.corpus, t);
            const auto retained = filter_terms(stats, config.min_occurrence, config.max_terms);
            state.networks.push_back(build_network(state.corpus, t, retained));
        }
        return 0;
    });

    stage("detect", [&] {
        for (int t = 0; t < period_count; ++t) {
            const CowordNetwork& net = state.networks[t];
            const auto communities = detect_communities(net, config.resolution, config.seed);
            PeriodPartition partition =
                filter_clusters(t, communities, net.terms, config.min_cumulative_freq);
            for (auto& cluster : partition.clusters) {
                cluster.pagerank = cluster_pagerank(net, cluster.terms, config.damping);
                cluster.pagerank_total = 0.0;
                for (const auto& [term, score] : cluster.pagerank)
                    cluster.pagerank_total += score;
            }
            strategic_metrics(net, partition);
            state.partitions.push_back(std::move(partition));
        }
        strategic_coordinates(state.partitions, config.quadrant_origin);
        return 0;
    });

    stage("membership", [&] {
        for (int t = 0; t < period_count; ++t) {
            const PeriodPartition& partition = state.partitions[t];
            MembershipMatrix m;
            if (partition.clusters.empty()) {
                m.period = t; // no clusters detected: empty matrix, zero sizes
            } else {
                m = build_membership(state.corpus.docs_in_period(t), partition,
                                     state.networks[t].terms);
            }
            const auto sizes = fuzzy_sizes(m);
            for (auto& cluster : state.partitions[t].clusters) {
                auto it = sizes.find(cluster.id);
                cluster.fuzzy_size = it == sizes.end() ? 0.0 : it->second;
            }
            state.memberships.push_back(std::move(m));
        }
        return 0;
    });

    stage("lineage", [&] {
        for (int t = 0; t + 1 < period_count; ++t)
            state.lineages.push_back(
                build_lineage_matrix(state.partitions[t], state.partitions[t + 1], config.alpha));
        return 0;
    });

    return state;
}

// ---------------------------------------------------------------------------
// Cache serialization (full precision; doubles round-trip exactly)
// ---------------------------------------------------------------------------

namespace {

json corpus_to_json(const Corpus& corpus) {
    json docs = json::array();
    for (const auto& d : corpus.documents) {
        auto it = corpus.period_of.find(d.id);
        docs.push_back({{"id", d.id},
                        {"year", d.year},
                        {"terms", d.terms},
                        {"period", it == corpus.period_of.end() ? -1 : it->second}});
    }
    json periods = json::array();
    for (const auto& p : corpus.periods)
        periods.push_back(
            {{"label", p.label}, {"start_year", p.start_year}, {"end_year", p.end_year}});
    return {{"documents", docs},
            {"periods", periods},
            {"drops",
             {{"missing_id", corpus.drops.missing_id},
              {"missing_year", corpus.drops.missing_year},
              {"missing_terms", corpus.drops.missing_terms},
              {"outside_periods", corpus.drops.outside_periods}}}};
}

Corpus corpus_from_json(const json& j) {
    Corpus corpus;
    for (const auto& d : j.at("documents")) {
        Document doc;
        doc.id = d.at("id").get<std::string>();
        doc.year = d.at("year").get<int>();
        for (const auto& t : d.at("terms")) doc.terms.insert(t.get<std::string>());
        const int period = d.at("period").get<int>();
        if (period >= 0) corpus.period_of[doc.id] = period;
        corpus.documents.push_back(std::move(doc));
    }
    for (const auto& p : j.at("periods")) {
        PeriodSpec spec;
        spec.label = p.at("label").get<std::string>();
        spec.start_year = p.at("start_year").get<int>();
        spec.end_year = p.at("end_year").get<int>();
        corpus.periods.push_back(spec);
    }
    const json& drops = j.at("drops");
    corpus.drops.missing_id = drops.at("missing_id").get<std::size_t>();
    corpus.drops.missing_year = drops.at("missing_year").get<std::size_t>();
    corpus.drops.missing_terms = drops.at("missing_terms").get<std::size_t>();
    corpus.drops.outside_periods = drops.at("outside_periods").get<std::size_t>();
    return corpus;
}

json config_to_json(const RunConfig& c) {
    json periods = json::array();
    for (const auto& p : c.periods)
        periods.push_back(
            {{"label", p.label}, {"start_year", p.start_year}, {"end_year", p.end_year}});
    return {{"input", c.input},
            {"format", format_label(c.format)},
            {"field", field_label(c.field)},
            {"synonyms", c.synonyms},
            {"periods", periods},
            {"min_occurrence", c.min_occurrence},
            {"max_terms", c.max_terms},
            {"min_cumulative_freq", c.min_cumulative_freq},
            {"resolution", c.resolution},
            {"seed", c.seed},
            {"damping", c.damping},
            {"alpha", c.alpha},
            {"theta_abs", c.theta_abs},
            {"top_k", c.top_k},
            {"quadrant_origin", origin_label(c.quadrant_origin)},
            {"output_dir", c.output_dir},
            {"columns",
             {{"id", c.columns.id},
              {"year", c.columns.year},
              {"author_keywords", c.columns.author_keywords},
              {"index_keywords", c.columns.index_keywords}}},
            {"delimiter", std::string(1, c.delimiter)},
            {"path_cap", c.path_cap}};
}

RunConfig config_from_json(const json& j) {
    RunConfig c;
    c.input = j.at("input").get<std::string>();
    c.format = parse_format(j.at("format").get<std::string>());
    c.field = parse_field(j.at("field").get<std::string>());
    c.synonyms = j.at("synonyms").get<std::string>();
    for (const auto& p : j.at("periods")) {
        PeriodSpec spec;
        spec.label = p.at("label").get<std::string>();
        spec.start_year = p.at("start_year").get<int>();
        spec.end_year = p.at("end_year").get<int>();
        c.periods.push_back(spec);
    }
    c.min_occurrence = j.at("min_occurrence").get<int>();
    c.max_terms = j.at("max_terms").get<int>();
    c.min_cumulative_freq = j.at("min_cumulative_freq").get<int>();
    c.resolution = j.at("resolution").get<double>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.damping = j.at("damping").get<double>();
    c.alpha = j.at("alpha").get<double>();
    c.theta_abs = j.at("theta_abs").get<double>();
    c.top_k = j.at("top_k").get<int>();
    c.quadrant_origin = parse_origin(j.at("quadrant_origin").get<std::string>());
    c.output_dir = j.at("output_dir").get<std::string>();
    const json& cols = j.at("columns");
    c.columns.id = cols.at("id").get<std::string>();
    c.columns.year = cols.at("year").get<std::string>();
    c.columns.author_keywords = cols.at("author_keywords").get<std::string>();
    c.columns.index_keywords = cols.at("index_keywords").get<std::string>();
    c.delimiter = j.at("delimiter").get<std::string>().at(0);
    c.path_cap = j.at("path_cap").get<long>();
    return c;
}

Quadrant quadrant_from_name(const std::string& s) {
    if (s == "motor") return Quadrant::motor;
    if (s == "basic") return Quadrant::basic;
    if (s == "niche") return Quadrant::niche;
    return Quadrant::emerging_or_declining;
}

json state_to_json(const PipelineState& state) {
    json networks = json::array();
    for (const auto& net : state.networks) {
        json terms = json::array();
        for (const auto& ts : net.terms)
            terms.push_back({{"term", ts.term}, {"occurrence", ts.occurrence}});
        json edges = json::array();
        for (const auto& [key, e] : net.edges)
            edges.push_back({{"i", key.first},
                             {"j", key.second},
                             {"cooccurrence", e.cooccurrence},
                             {"weight", e.weight}});
        networks.push_back({{"period", net.period}, {"terms", terms}, {"edges", edges}});
    }

    json partitions = json::array();
    for (const auto& partition : state.partitions) {
        json clusters = json::array();
        for (const auto& c : partition.clusters)
            clusters.push_back({{"ordinal", c.id.ordinal},
                                {"terms", c.terms},
                                {"pagerank", c.pagerank},
                                {"pagerank_total", c.pagerank_total},
                                {"centrality", c.centrality},
                                {"density", c.density},
                                {"label", c.label},
                                {"fuzzy_size", c.fuzzy_size},
                                {"quadrant", quadrant_name(c.quadrant)}});
        partitions.push_back({{"period", partition.period},
                              {"clusters", clusters},
                              {"dropped_terms", partition.dropped_terms}});
    }

    json memberships = json::array();
    for (const auto& m : state.memberships) {
        json cluster_ordinals = json::array();
        for (const auto& id : m.cluster_ids) cluster_ordinals.push_back(id.ordinal);
        memberships.push_back({{"period", m.period},
                               {"doc_ids", m.doc_ids},
                               {"cluster_ordinals", cluster_ordinals},
                               {"u", m.u}});
    }

    json lineages = json::array();
    for (const auto& lm : state.lineages)
        lineages.push_back({{"source_period", lm.source_period},
                            {"target_period", lm.target_period},
                            {"alpha", lm.alpha},
                            {"L", lm.L},
                            {"Iw", lm.Iw},
                            {"Omega", lm.Omega},
                            {"shared", lm.shared}});

    return {{"config", config_to_json(state.config)},
            {"corpus", corpus_to_json(state.corpus)},
            {"networks", networks},
            {"partitions", partitions},
            {"memberships", memberships},
            {"lineages", lineages}};
}

PipelineState state_from_json(const json& j) {
    PipelineState state;
    state.config = config_from_json(j.at("config"));
    state.corpus = corpus_from_json(j.at("corpus"));

    for (const auto& n : j.at("networks")) {
        CowordNetwork net;
        net.period = n.at("period").get<int>();
        for (const auto& t : n.at("terms")) {
            TermStats ts;
            ts.term = t.at("term").get<std::string>();
            ts.occurrence = t.at("occurrence").get<int>();
            net.terms.push_back(std::move(ts));
        }
        for (const auto& e : n.at("edges")) {
            CowordEdge edge;
            edge.cooccurrence = e.at("cooccurrence").get<int>();
            edge.weight = e.at("weight").get<double>();
            net.edges[{e.at("i").get<int>(), e.at("j").get<int>()}] = edge;
        }
        state.networks.push_back(std::move(net));
    }

    for (const auto& p : j.at("partitions")) {
        PeriodPartition partition;
        partition.period = p.at("period").get<int>();
        for (const auto& c : p.at("clusters")) {
            ThemeCluster cluster;
            cluster.id = ClusterId{partition.period, c.at("ordinal").get<int>()};
            for (const auto& t : c.at("terms")) cluster.terms.push_back(t.get<std::string>());
            for (const auto& [term, score] : c.at("pagerank").items())
                cluster.pagerank[term] = score.get<double>();
            cluster.pagerank_total = c.at("pagerank_total").get<double>();
            cluster.centrality = c.at("centrality").get<double>();
            cluster.density = c.at("density").get<double>();
            cluster.label = c.at("label").get<std::string>();
            cluster.fuzzy_size = c.at("fuzzy_size").get<double>();
            cluster.quadrant = quadrant_from_name(c.at("quadrant").get<std::string>());
            partition.clusters.push_back(std::move(cluster));
        }
        for (const auto& t : p.at("dropped_terms"))
            partition.dropped_terms.insert(t.get<std::string>());
        state.partitions.push_back(std::move(partition));
    }

    for (const auto& m : j.at("memberships")) {
        MembershipMatrix matrix;
        matrix.period = m.at("period").get<int>();
        for (const auto& id : m.at("doc_ids")) matrix.doc_ids.push_back(id.get<std::string>());
        for (const auto& o : m.at("cluster_ordinals"))
            matrix.cluster_ids.push_back(ClusterId{matrix.period, o.get<int>()});
        for (const auto& row : m.at("u")) matrix.u.push_back(row.get<std::vector<double>>());
        state.memberships.push_back(std::move(matrix));
    }

    for (const auto& l : j.at("lineages")) {
        LineageMatrix lm;
        lm.source_period = l.at("source_period").get<int>();
        lm.target_period = l.at("target_period").get<int>();
        lm.alpha = l.at("alpha").get<double>();
        lm.L = l.at("L").get<std::vector<std::vector<double>>>();
        lm.Iw = l.at("Iw").get<std::vector<std::vector<double>>>();
        lm.Omega = l.at("Omega").get<std::vector<std::vector<double>>>();
        lm.shared = l.at("shared").get<std::vector<std::vector<std::vector<std::string>>>>();
        state.lineages.push_back(std::move(lm));
    }

    return state;
}

} // namespace

void save_cache(const PipelineState& state, const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw PipelineError("export", "cannot create cache directory '" + dir.string() + "'");
    const fs::path file = dir / "state.json";
    std::ofstream out(file, std::ios::binary);
    if (!out) throw PipelineError("export", "cannot write cache file '" + file.string() + "'");
    out << state_to_json(state).dump(2) << '\n';
    if (!out) throw PipelineError("export", "failed writing cache file '" + file.string() + "'");
}

PipelineState load_cache(const fs::path& dir) {
    const fs::path file = dir / "state.json";
    std::ifstream in(file, std::ios::binary);
    if (!in) throw ConfigError("cannot open cache file '" + file.string() + "'");
    json j;
    try {
        in >> j;
        return state_from_json(j);
    } catch (const json::exception& e) {
        throw ConfigError("cache file '" + file.string() + "' is corrupt: " + e.what());
    }
}

// ---------------------------------------------------------------------------
// Artifact emission
// ---------------------------------------------------------------------------

namespace {

/// Funnels all writes through one place so the manifest stays consistent
/// and partially written runs can be cleaned up on failure.
class ArtifactWriter {
public:
    explicit ArtifactWriter(fs::path base) : base_(std::move(base)) {}

    void write(const std::string& relative, const std::string& content,
               const std::string& kind) {
        const fs::path target = base_ / relative;
        std::error_code ec;
        fs::create_directories(target.parent_path(), ec);
        std::ofstream out(target, std::ios::binary);
        if (!out) throw PipelineError("export", "cannot write artifact '" + relative + "'");
        out << content;
        out.flush();
        if (!out) throw PipelineError("export", "failed writing artifact '" + relative + "'");
        written_.push_back(target);
        entries_.push_back(ArtifactEntry{relative, kind});
    }

    void remove_written() {
        for (const auto& path : written_) {
            std::error_code ec;
            fs::remove(path, ec);
        }
    }

    const std::vector<ArtifactEntry>& entries() const { return entries_; }

private:
    fs::path base_;
    std::vector<fs::path> written_;
    std::vector<ArtifactEntry> entries_;
};

json manifest_json(const PipelineState& state, const std::vector<ArtifactEntry>& entries,
                   bool truncated) {
    json artifacts = json::array();
    for (const auto& e : entries) artifacts.push_back({{"path", e.path}, {"kind", e.kind}});
    // The manifest itself is listed last, after this entry.
    artifacts.push_back({{"path", "manifest.json"}, {"kind", "manifest"}});

    json periods = json::array();
    for (std::size_t t = 0; t < state.config.periods.size(); ++t) {
        const auto& spec = state.config.periods[t];
        std::size_t doc_count = 0;
        for (const auto& [id, period] : state.corpus.period_of)
            if (period == static_cast<int>(t)) ++doc_count;
        periods.push_back({{"label", spec.label},
                           {"start_year", spec.start_year},
                           {"end_year", spec.end_year},
                           {"documents", doc_count},
                           {"terms", state.networks[t].terms.size()},
                           {"clusters", state.partitions[t].clusters.size()}});
    }

    return {{"parameters", config_to_json(state.config)},
            {"periods", periods},
            {"dropped_records",
             {{"missing_id", state.corpus.drops.missing_id},
              {"missing_year", state.corpus.drops.missing_year},
              {"missing_terms", state.corpus.drops.missing_terms},
              {"outside_periods", state.corpus.drops.outside_periods}}},
            {"truncated_pathways", truncated},
            {"artifacts", artifacts}};
}

} // namespace

RunResult export_artifacts(const PipelineState& state) {
    const fs::path out_dir = state.config.output_dir;

    EvolutionGraph graph;
    PatternLabels labels;
    PathwayResult pathways;
    stage("graph", [&] {
        GraphParams params;
        params.theta_abs = state.config.theta_abs;
        params.top_k = state.config.top_k;
        params.alpha = state.config.alpha;
        graph = build_evolution_graph(state.partitions, state.lineages, params);
        labels = classify_patterns(graph);
        pathways = extract_pathways(graph, state.config.path_cap);
        return 0;
    });

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec)
        throw PipelineError("export",
                            "cannot create output directory '" + out_dir.string() + "'");

    ArtifactWriter writer(out_dir);
    try {
        for (std::size_t t = 0; t < state.networks.size(); ++t) {
            const std::string dir = "periods/period-" + std::to_string(t + 1) + "/";
            writer.write(dir + "terms.tsv", terms_tsv(state.networks[t]), "term-stats");
            writer.write(dir + "network.tsv", network_tsv(state.networks[t]), "network");
            writer.write(dir + "strategic.json",
                         strategic_json(state.partitions[t], state.networks[t]),
                         "strategic-diagram");
            writer.write(dir + "strategic.svg",
                         strategic_svg(state.partitions[t], state.config.quadrant_origin),
                         "strategic-plot");
            writer.write(dir + "membership.tsv", membership_tsv(state.memberships[t]),
                         "membership");
        }
        for (const auto& lm : state.lineages) {
            const std::string dir = "transitions/transition-" +
                                    std::to_string(lm.source_period + 1) + "-" +
                                    std::to_string(lm.target_period + 1) + "/";
            writer.write(dir + "lineage.json", lineage_json(lm), "lineage-matrix");
        }
        writer.write("overlap.json", overlap_json(state.networks), "vocabulary-overlap");
        writer.write("evolution.graphml", graphml(graph, labels), "evolution-graph");
        writer.write("sankey.json", sankey_json(graph), "sankey-data");
        writer.write("sankey.svg", sankey_svg(graph), "sankey-plot");
        writer.write("pathways.tsv", pathways_tsv(pathways), "pathway-report");
        writer.write("cache/state.json", state_to_json(state).dump(2) + "\n", "cache");
        writer.write("manifest.json",
                     manifest_json(state, writer.entries(), pathways.truncated).dump(2) + "\n",
                     "manifest");
    } catch (...) {
        writer.remove_written();
        throw;
    }

    RunResult result;
    result.output_dir = out_dir;
    result.artifacts = writer.entries();
    result.truncated_pathways = pathways.truncated;
    return result;
}

RunResult run(const RunConfig& config) {
    validate_config(config);
    return export_artifacts(compute_state(config));
}

// ---------------------------------------------------------------------------
// Sensitivity sweep
// ---------------------------------------------------------------------------

namespace {

bool detection_config_equal(const RunConfig& a, const RunConfig& b) {
    auto periods_equal = [](const std::vector<PeriodSpec>& x, const std::vector<PeriodSpec>& y) {
        if (x.size() != y.size()) return false;
        for (std::size_t i = 0; i < x.size(); ++i)
            if (x[i].label != y[i].label || x[i].start_year != y[i].start_year ||
                x[i].end_year != y[i].end_year)
                return false;
        return true;
    };
    return a.input == b.input && a.format == b.format && a.field == b.field &&
           a.synonyms == b.synonyms && periods_equal(a.periods, b.periods) &&
           a.min_occurrence == b.min_occurrence && a.max_terms == b.max_terms &&
           a.min_cumulative_freq == b.min_cumulative_freq && a.resolution == b.resolution &&
           a.seed == b.seed && a.damping == b.damping;
}

std::set<std::pair<ClusterId, ClusterId>> edge_set(const std::vector<EvolutionEdge>& edges) {
    std::set<std::pair<ClusterId, ClusterId>> s;
    for (const auto& e : edges) s.insert({e.src, e.dst});
    return s;
}

} // namespace

SensitivityReport sensitivity(const RunConfig& config, const std::vector<double>& alphas) {
    validate_config(config);
    for (double a : alphas)
        if (!(a >= 0.0 && a <= 1.0)) throw ConfigError("alpha values must lie in [0, 1]");

    // Reuse cached detection results when they match this configuration.
    PipelineState state;
    bool from_cache = false;
    const fs::path cache_dir = fs::path(config.output_dir) / "cache";
    if (fs::exists(cache_dir / "state.json")) {
        try {
            PipelineState cached = load_cache(cache_dir);
            if (detection_config_equal(cached.config, config)) {
                state = std::move(cached);
                from_cache = true;
            }
        } catch (const Error&) {
            from_cache = false; // unreadable cache: recompute
        }
    }
    if (!from_cache) state = compute_state(config);

    std::vector<double> sweep = alphas;
    if (std::find(sweep.begin(), sweep.end(), config.alpha) == sweep.end())
        sweep.insert(sweep.begin(), config.alpha);

    SensitivityReport report;
    report.base_alpha = config.alpha;

    for (double a : sweep) {
        std::vector<LineageMatrix> blended;
        blended.reserve(state.lineages.size());
        for (const auto& lm : state.lineages) blended.push_back(reblend(lm, a));

        GraphParams params;
        params.theta_abs = config.theta_abs;
        params.top_k = config.top_k;
        params.alpha = a;
        EvolutionGraph g = build_evolution_graph(state.partitions, blended, params);

        SensitivityRun sr;
        sr.alpha = a;
        sr.edges = g.edges;
        sr.labels = classify_patterns(g);
        report.runs.push_back(std::move(sr));
    }

    // Backbone: edges admitted at every alpha.
    std::set<std::pair<ClusterId, ClusterId>> backbone = edge_set(report.runs.front().edges);
    for (std::size_t r = 1; r < report.runs.size(); ++r) {
        const auto current = edge_set(report.runs[r].edges);
        std::set<std::pair<ClusterId, ClusterId>> kept;
        std::set_intersection(backbone.begin(), backbone.end(), current.begin(), current.end(),
                              std::inserter(kept, kept.begin()));
        backbone = std::move(kept);
    }
    report.backbone.assign(backbone.begin(), backbone.end());

    const SensitivityRun* base = nullptr;
    for (const auto& r : report.runs)
        if (r.alpha == config.alpha) base = &r;
    report.backbone_changed = base != nullptr && backbone != edge_set(base->edges);
    for (std::size_t r = 1; r < report.runs.size() && !report.patterns_changed; ++r)
        report.patterns_changed = !(report.runs[r].labels == report.runs[0].labels);

    // Persist the report next to the run artifacts.
    std::error_code ec;
    fs::create_directories(config.output_dir, ec);
    if (ec)
        throw PipelineError("export", "cannot create output directory '" + config.output_dir + "'");
    const fs::path file = fs::path(config.output_dir) / "sensitivity.json";
    std::ofstream out(file, std::ios::binary);
    if (!out)
        throw PipelineError("export", "cannot write artifact 'sensitivity.json'");
    out << sensitivity_json(report);
    return report;
}

std::string sensitivity_json(const SensitivityReport& report) {
    json runs = json::array();
    for (const auto& r : report.runs) {
        json edges = json::array();
        for (const auto& e : r.edges)
            edges.push_back({{"src", e.src.str()},
                             {"dst", e.dst.str()},
                             {"weight", round_sig(e.weight)}});
        json patterns = json::object();
        for (const auto& [id, set] : r.labels) {
            json names = json::array();
            for (Pattern p : set) names.push_back(pattern_name(p));
            patterns[id.str()] = names;
        }
        runs.push_back(
            {{"alpha", round_sig(r.alpha)}, {"edges", edges}, {"patterns", patterns}});
    }
    json backbone = json::array();
    for (const auto& [src, dst] : report.backbone)
        backbone.push_back({{"src", src.str()}, {"dst", dst.str()}});

    json j{{"base_alpha", round_sig(report.base_alpha)},
           {"runs", runs},
           {"backbone", backbone},
           {"backbone_changed", report.backbone_changed},
           {"patterns_changed", report.patterns_changed}};
    return j.dump(2) + "\n";
}

} // namespace themetrace
