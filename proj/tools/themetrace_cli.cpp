// themetrace command-line interface.
//
// Verbs:
//   analyze      full pipeline run, emits every artifact plus a manifest
//   sensitivity  alpha sweep over cached (or freshly computed) detection results
//   export       re-emit all artifacts from a cached run
//   validate     config and input checks only (no artifacts written)

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "themetrace/errors.hpp"
#include "themetrace/pipeline.hpp"

namespace {

using themetrace::RunConfig;

struct CommonArgs {
    std::string config_file;
    std::string input;
    std::string format;
    std::string field;
    std::string synonyms;
    std::vector<std::string> periods;
    int min_occurrence = -1;
    int max_terms = -1;
    int min_cumulative_freq = -1;
    double resolution = -1.0;
    long long seed = -1;
    double damping = -1.0;
    double alpha = -1.0;
    double theta_abs = -1.0;
    int top_k = -1;
    std::string quadrant_origin;
    std::string output_dir;
    std::string id_column, year_column, author_keywords_column, index_keywords_column;
    std::string delimiter;
    long path_cap = -1;
};

void add_common_options(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("-c,--config", args.config_file, "JSON config file mirroring all flags");
    cmd->add_option("-i,--input", args.input, "input corpus file");
    cmd->add_option("--format", args.format, "input format: tabular or canonical_json");
    cmd->add_option("--field", args.field,
                    "keyword field: author_keywords or index_keywords");
    cmd->add_option("--synonyms", args.synonyms, "two-column synonym table (variant\\tcanonical)");
    cmd->add_option("--period", args.periods,
                    "period spec LABEL:START-END (repeatable, ascending, disjoint)");
    cmd->add_option("--min-occurrence", args.min_occurrence,
                    "minimum per-period document frequency for a term (default 5)");
    cmd->add_option("--max-terms", args.max_terms, "term cap per period (default 250)");
    cmd->add_option("--min-cumulative-freq", args.min_cumulative_freq,
                    "minimum cumulative occurrence to keep a cluster (default 10)");
    cmd->add_option("--resolution", args.resolution, "Louvain resolution (default 1.0)");
    cmd->add_option("--seed", args.seed, "community-detection shuffle seed (default 42)");
    cmd->add_option("--damping", args.damping, "PageRank damping factor (default 0.85)");
    cmd->add_option("--alpha", args.alpha, "lineage blend weight (default 0.5)");
    cmd->add_option("--theta-abs", args.theta_abs,
                    "absolute lineage admission threshold (default 0.10)");
    cmd->add_option("--top-k", args.top_k, "relative admission rank cutoff (default 1)");
    cmd->add_option("--quadrant-origin", args.quadrant_origin,
                    "strategic-diagram axis split: median or mean");
    cmd->add_option("-o,--output-dir", args.output_dir,
                    "artifact directory (default: $THEMETRACE_OUTPUT_DIR)");
    cmd->add_option("--id-column", args.id_column, "tabular id column name (default UT)");
    cmd->add_option("--year-column", args.year_column, "tabular year column name (default PY)");
    cmd->add_option("--author-keywords-column", args.author_keywords_column,
                    "tabular author-keyword column name (default DE)");
    cmd->add_option("--index-keywords-column", args.index_keywords_column,
                    "tabular index-keyword column name (default ID)");
    cmd->add_option("--delimiter", args.delimiter,
                    "tabular field delimiter, single character or 'tab'");
    cmd->add_option("--path-cap", args.path_cap,
                    "maximal-pathway enumeration cap (default 100000)");
}

themetrace::PeriodSpec parse_period_flag(const std::string& s) {
    const auto colon = s.find(':');
    const auto dash = s.rfind('-');
    if (colon == std::string::npos || dash == std::string::npos || dash <= colon + 1)
        throw themetrace::ConfigError("bad period spec '" + s + "' (expected LABEL:START-END)");
    themetrace::PeriodSpec spec;
    spec.label = s.substr(0, colon);
    try {
        spec.start_year = std::stoi(s.substr(colon + 1, dash - colon - 1));
        spec.end_year = std::stoi(s.substr(dash + 1));
    } catch (const std::exception&) {
        throw themetrace::ConfigError("bad period spec '" + s + "' (years must be integers)");
    }
    return spec;
}

// Layering: config-file values, overridden by flags, with the environment
// variable as the fallback output directory.
RunConfig resolve_config(const CommonArgs& args) {
    RunConfig config;
    if (!args.config_file.empty()) config = themetrace::load_config(args.config_file);

    if (!args.input.empty()) config.input = args.input;
    if (!args.format.empty())
        config.format = args.format == "tabular" ? themetrace::InputFormat::tabular
                        : args.format == "canonical_json"
                            ? themetrace::InputFormat::canonical_json
                            : throw themetrace::ConfigError("unknown input format '" +
                                                            args.format + "'");
    if (!args.field.empty())
        config.field = args.field == "author_keywords"
                           ? themetrace::KeywordField::author_keywords
                       : args.field == "index_keywords"
                           ? themetrace::KeywordField::index_keywords
                           : throw themetrace::ConfigError("unknown keyword field '" +
                                                           args.field + "'");
    if (!args.synonyms.empty()) config.synonyms = args.synonyms;
    if (!args.periods.empty()) {
        config.periods.clear();
        for (const auto& p : args.periods) config.periods.push_back(parse_period_flag(p));
    }
    if (args.min_occurrence >= 0) config.min_occurrence = args.min_occurrence;
    if (args.max_terms >= 0) config.max_terms = args.max_terms;
    if (args.min_cumulative_freq >= 0) config.min_cumulative_freq = args.min_cumulative_freq;
    if (args.resolution >= 0.0) config.resolution = args.resolution;
    if (args.seed >= 0) config.seed = static_cast<std::uint64_t>(args.seed);
    if (args.damping >= 0.0) config.damping = args.damping;
    if (args.alpha >= 0.0) config.alpha = args.alpha;
    if (args.theta_abs >= 0.0) config.theta_abs = args.theta_abs;
    if (args.top_k >= 0) config.top_k = args.top_k;
    if (!args.quadrant_origin.empty()) {
        if (args.quadrant_origin == "median")
            config.quadrant_origin = themetrace::QuadrantOrigin::median;
        else if (args.quadrant_origin == "mean")
            config.quadrant_origin = themetrace::QuadrantOrigin::mean;
        else
            throw themetrace::ConfigError("unknown quadrant origin '" + args.quadrant_origin +
                                          "'");
    }
    if (!args.output_dir.empty()) config.output_dir = args.output_dir;
    if (!args.id_column.empty()) config.columns.id = args.id_column;
    if (!args.year_column.empty()) config.columns.year = args.year_column;
    if (!args.author_keywords_column.empty())
        config.columns.author_keywords = args.author_keywords_column;
    if (!args.index_keywords_column.empty())
        config.columns.index_keywords = args.index_keywords_column;
    if (!args.delimiter.empty()) {
        if (args.delimiter == "tab" || args.delimiter == "\\t")
            config.delimiter = '\t';
        else if (args.delimiter.size() == 1)
            config.delimiter = args.delimiter[0];
        else
            throw themetrace::ConfigError("delimiter must be a single character or 'tab'");
    }
    if (args.path_cap >= 1) config.path_cap = args.path_cap;

    if (config.output_dir.empty()) {
        if (const char* env = std::getenv("THEMETRACE_OUTPUT_DIR")) config.output_dir = env;
    }
    return config;
}

int run_analyze(const CommonArgs& args) {
    const RunConfig config = resolve_config(args);
    const themetrace::RunResult result = themetrace::run(config);
    std::cout << "wrote " << result.artifacts.size() << " artifacts to "
              << result.output_dir.string() << "\n";
    if (result.truncated_pathways)
        std::cout << "note: pathway enumeration truncated (cap " << config.path_cap << ")\n";
    return 0;
}

int run_sensitivity(const CommonArgs& args, const std::vector<double>& alphas) {
    const RunConfig config = resolve_config(args);
    const themetrace::SensitivityReport report = themetrace::sensitivity(config, alphas);
    std::cout << "sensitivity over " << report.runs.size() << " alpha values: backbone "
              << report.backbone.size() << " edges, backbone_changed="
              << (report.backbone_changed ? "true" : "false") << ", patterns_changed="
              << (report.patterns_changed ? "true" : "false") << "\n";
    std::cout << "wrote sensitivity.json to " << config.output_dir << "\n";
    return 0;
}

int run_export(const std::string& from_dir, const std::string& output_override) {
    themetrace::PipelineState state =
        themetrace::load_cache(std::filesystem::path(from_dir) / "cache");
    if (!output_override.empty()) state.config.output_dir = output_override;
    const themetrace::RunResult result = themetrace::export_artifacts(state);
    std::cout << "re-emitted " << result.artifacts.size() << " artifacts to "
              << result.output_dir.string() << "\n";
    return 0;
}

int run_validate(const CommonArgs& args) {
    const RunConfig config = resolve_config(args);
    themetrace::validate_config(config);
    const themetrace::PipelineState state = themetrace::compute_state(config);

    std::cout << "config ok; " << state.corpus.documents.size() << " documents across "
              << config.periods.size() << " periods ("
              << state.corpus.drops.total() << " records dropped)\n";
    for (std::size_t t = 0; t < config.periods.size(); ++t) {
        std::cout << "  " << config.periods[t].label << " [" << config.periods[t].start_year
                  << "-" << config.periods[t].end_year
                  << "]: " << state.corpus.docs_in_period(static_cast<int>(t)).size()
                  << " documents, " << state.networks[t].terms.size() << " terms, "
                  << state.partitions[t].clusters.size() << " clusters\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"themetrace: temporal co-word analysis of bibliographic corpora"};
    app.require_subcommand(1);

    CommonArgs analyze_args, sensitivity_args, validate_args;
    std::vector<double> alphas;
    std::string export_from, export_to;

    CLI::App* analyze = app.add_subcommand("analyze", "run the full pipeline");
    add_common_options(analyze, analyze_args);

    CLI::App* sens = app.add_subcommand("sensitivity", "alpha sensitivity sweep");
    add_common_options(sens, sensitivity_args);
    sens->add_option("--alphas", alphas, "comma-separated alpha values to sweep")
        ->delimiter(',')
        ->required();

    CLI::App* exp = app.add_subcommand("export", "re-emit artifacts from a cached run");
    exp->add_option("--from", export_from, "directory containing cache/state.json")->required();
    exp->add_option("-o,--output-dir", export_to,
                    "write artifacts here instead of the cached output directory");

    CLI::App* validate = app.add_subcommand("validate", "check config and input only");
    add_common_options(validate, validate_args);

    CLI11_PARSE(app, argc, argv);

    try {
        if (analyze->parsed()) return run_analyze(analyze_args);
        if (sens->parsed()) return run_sensitivity(sensitivity_args, alphas);
        if (exp->parsed()) return run_export(export_from, export_to);
        if (validate->parsed()) return run_validate(validate_args);
    } catch (const themetrace::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
