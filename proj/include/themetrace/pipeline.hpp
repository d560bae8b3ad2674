#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "themetrace/corpus.hpp"
#include "themetrace/evolution.hpp"
#include "themetrace/exports.hpp"
#include "themetrace/lineage.hpp"
#include "themetrace/membership.hpp"

namespace themetrace {

/// Full parameter set for one analysis run. Defaults follow the standard
/// configuration: five-occurrence term threshold, 250 retained terms,
/// Louvain at resolution 1.0, alpha = 0.5 lineage blend.
struct RunConfig {
    std::string input;
    InputFormat format = InputFormat::canonical_json;
    KeywordField field = KeywordField::author_keywords;
    std::string synonyms; // optional synonym table path
    std::vector<PeriodSpec> periods;
    int min_occurrence = 5;
    int max_terms = 250;
    int min_cumulative_freq = 10;
    double resolution = 1.0;
    std::uint64_t seed = 42;
    double damping = 0.85;
    double alpha = 0.5;
    double theta_abs = 0.10;
    int top_k = 1;
    QuadrantOrigin quadrant_origin = QuadrantOrigin::median;
    std::string output_dir;
    TabularColumns columns;
    char delimiter = '\t';
    long path_cap = 100000;
};

/// Reads a JSON config file mirroring RunConfig.
RunConfig load_config(const std::filesystem::path& path);

/// Checks parameter ranges and period specs; throws ConfigError.
void validate_config(const RunConfig& config);

/// Everything computed by the detection stages; the emission stage and the
/// sensitivity sweep derive all artifacts from this state.
struct PipelineState {
    RunConfig config;
    Corpus corpus;
    std::vector<CowordNetwork> networks;       // one per period
    std::vector<PeriodPartition> partitions;   // one per period
    std::vector<MembershipMatrix> memberships; // one per period
    std::vector<LineageMatrix> lineages;       // one per transition
};

struct ArtifactEntry {
    std::string path; // relative to the output directory
    std::string kind;
};

struct RunResult {
    std::filesystem::path output_dir;
    std::vector<ArtifactEntry> artifacts;
    bool truncated_pathways = false;
};

/// Runs the detection stages (ingest through lineage) without writing
/// anything. Errors are wrapped in PipelineError with the stage name.
PipelineState compute_state(const RunConfig& config);

/// Full run: compute, cache the state, emit every artifact plus the
/// manifest. Partial artifacts are removed when a stage fails.
RunResult run(const RunConfig& config);

/// Re-emits all artifacts from a cached state (no recomputation of the
/// detection stages). Byte-identical to the original run's artifacts.
RunResult export_artifacts(const PipelineState& state);

void save_cache(const PipelineState& state, const std::filesystem::path& dir);
PipelineState load_cache(const std::filesystem::path& dir);

struct SensitivityRun {
    double alpha = 0.5;
    std::vector<EvolutionEdge> edges;
    PatternLabels labels;
};

struct SensitivityReport {
    double base_alpha = 0.5;
    std::vector<SensitivityRun> runs;
    std::vector<std::pair<ClusterId, ClusterId>> backbone; // edges present at every alpha
    bool backbone_changed = false; // backbone differs from the base edge set
    bool patterns_changed = false; // any cluster's labels differ across alphas
};

/// Re-runs the lineage blend and graph stages per alpha from cached (or
/// freshly computed) detection results and writes sensitivity.json.
SensitivityReport sensitivity(const RunConfig& config, const std::vector<double>& alphas);

std::string sensitivity_json(const SensitivityReport& report);

} // namespace themetrace
