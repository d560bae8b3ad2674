#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "themetrace/errors.hpp"
#include "themetrace/pipeline.hpp"

using namespace themetrace;
namespace fs = std::filesystem;

namespace {

RunConfig fixture_config(const std::string& out_dir) {
    RunConfig c;
    c.input = std::string(TEST_DATA_DIR) + "/tiny.json";
    c.format = InputFormat::canonical_json;
    c.periods = {{"P1", 2010, 2011}, {"P2", 2012, 2013}};
    c.min_occurrence = 2;
    c.max_terms = 50;
    c.min_cumulative_freq = 4;
    c.output_dir = out_dir;
    return c;
}

std::map<std::string, std::string> read_tree(const fs::path& root) {
    std::map<std::string, std::string> files;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (!entry.is_regular_file()) continue;
        std::ifstream in(entry.path(), std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        files[fs::relative(entry.path(), root).generic_string()] = buf.str();
    }
    return files;
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::current_path() / name) {
        fs::remove_all(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

} // namespace

TEST_CASE("load_config reads every field and rejects unknown keys") {
    TempDir tmp("tp_config");
    fs::create_directories(tmp.path);
    const fs::path file = tmp.path / "config.json";
    {
        std::ofstream out(file);
        out << R"({
          "input": "x.json",
          "format": "tabular",
          "field": "index_keywords",
          "synonyms": "syn.tsv",
          "periods": [{"label": "a", "start_year": 2000, "end_year": 2004}],
          "min_occurrence": 3,
          "max_terms": 99,
          "min_cumulative_freq": 7,
          "resolution": 1.5,
          "seed": 7,
          "damping": 0.9,
          "alpha": 0.25,
          "theta_abs": 0.2,
          "top_k": 2,
          "quadrant_origin": "mean",
          "output_dir": "out",
          "columns": {"id": "AN", "year": "YR", "author_keywords": "KW", "index_keywords": "KP"},
          "delimiter": ",",
          "path_cap": 500
        })";
    }
    const RunConfig c = load_config(file);
    CHECK(c.input == "x.json");
    CHECK(c.format == InputFormat::tabular);
    CHECK(c.field == KeywordField::index_keywords);
    CHECK(c.synonyms == "syn.tsv");
    REQUIRE(c.periods.size() == 1);
    CHECK(c.periods[0].label == "a");
    CHECK(c.min_occurrence == 3);
    CHECK(c.max_terms == 99);
    CHECK(c.min_cumulative_freq == 7);
    CHECK(c.resolution == 1.5);
    CHECK(c.seed == 7);
    CHECK(c.damping == 0.9);
    CHECK(c.alpha == 0.25);
    CHECK(c.theta_abs == 0.2);
    CHECK(c.top_k == 2);
    CHECK(c.quadrant_origin == QuadrantOrigin::mean);
    CHECK(c.output_dir == "out");
    CHECK(c.columns.id == "AN");
    CHECK(c.delimiter == ',');
    CHECK(c.path_cap == 500);

    {
        std::ofstream out(file);
        out << R"({"inptu": "typo.json"})";
    }
    CHECK_THROWS_AS(load_config(file), ConfigError);
    {
        std::ofstream out(file);
        out << "{broken";
    }
    CHECK_THROWS_AS(load_config(file), ConfigError);
    CHECK_THROWS_AS(load_config(tmp.path / "missing.json"), ConfigError);
}

TEST_CASE("validate_config rejects out-of-range parameters") {
    const RunConfig good = fixture_config("out");
    CHECK_NOTHROW(validate_config(good));

    auto expect_bad = [](RunConfig c) { CHECK_THROWS_AS(validate_config(c), ConfigError); };
    RunConfig c = good;
    c.input.clear();
    expect_bad(c);
    c = good;
    c.output_dir.clear();
    expect_bad(c);
    c = good;
    c.periods.clear();
    expect_bad(c);
    c = good;
    c.periods = {{"p1", 2000, 2005}, {"p2", 2003, 2008}}; // overlap
    expect_bad(c);
    c = good;
    c.min_occurrence = 0;
    expect_bad(c);
    c = good;
    c.damping = 1.0;
    expect_bad(c);
    c = good;
    c.alpha = 1.5;
    expect_bad(c);
    c = good;
    c.theta_abs = -0.2;
    expect_bad(c);
    c = good;
    c.top_k = 0;
    expect_bad(c);
    c = good;
    c.resolution = 0.0;
    expect_bad(c);
    c = good;
    c.path_cap = 0;
    expect_bad(c);
}

TEST_CASE("compute_state runs the detection stages on the fixture corpus") {
    const PipelineState state = compute_state(fixture_config("unused"));

    CHECK(state.corpus.documents.size() == 26);
    REQUIRE(state.networks.size() == 2);
    REQUIRE(state.partitions.size() == 2);
    REQUIRE(state.memberships.size() == 2);
    REQUIRE(state.lineages.size() == 1);

    // Each period: two 3-term themes; the junk terms fall below min_occurrence.
    for (int t = 0; t < 2; ++t) {
        CHECK(state.networks[t].terms.size() == 6);
        REQUIRE(state.partitions[t].clusters.size() == 2);
        for (const auto& cluster : state.partitions[t].clusters) {
            CHECK(cluster.terms.size() == 3);
            double sum = 0.0;
            for (const auto& [term, score] : cluster.pagerank) sum += score;
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
            CHECK_FALSE(cluster.label.empty());
            CHECK(cluster.fuzzy_size > 0.0);
        }
        CHECK(state.memberships[t].doc_ids.size() == 13);
    }

    // Fuzzy sizes conserve the period document count.
    for (int t = 0; t < 2; ++t) {
        double total = 0.0;
        for (const auto& cluster : state.partitions[t].clusters) total += cluster.fuzzy_size;
        CHECK(total == doctest::Approx(13.0).epsilon(1e-6));
    }

    // Both themes persist: the lineage matrix has a strong diagonal (in some
    // cluster order) and zero cross-theme entries.
    const LineageMatrix& lm = state.lineages[0];
    REQUIRE(lm.rows() == 2);
    REQUIRE(lm.cols() == 2);
    int strong = 0, zero = 0;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) {
            if (lm.L[i][j] > 0.5) ++strong;
            if (lm.L[i][j] == 0.0) ++zero;
        }
    CHECK(strong == 2);
    CHECK(zero == 2);
}

TEST_CASE("a period without documents flows through the whole pipeline") {
    TempDir tmp("tp_gap");
    RunConfig c = fixture_config(tmp.path.string());
    c.periods = {{"empty", 1990, 1995}, {"P", 2010, 2013}};
    const RunResult result = run(c);
    CHECK(result.artifacts.size() == 18);

    const PipelineState state = load_cache(tmp.path / "cache");
    CHECK(state.partitions[0].clusters.empty());
    CHECK(state.partitions[1].clusters.size() == 2);
    CHECK(state.lineages[0].rows() == 0);
}

TEST_CASE("configs whose periods contain no documents fail with empty-corpus") {
    RunConfig c = fixture_config("unused");
    c.periods = {{"far", 3000, 3001}};
    try {
        compute_state(c);
        FAIL("expected PipelineError");
    } catch (const PipelineError& e) {
        CHECK(e.stage() == "slice");
        CHECK(std::string(e.what()).find("empty-corpus") != std::string::npos);
    }
}

TEST_CASE("run emits the full artifact tree with a consistent manifest") {
    TempDir tmp("tp_run");
    const RunResult result = run(fixture_config(tmp.path.string()));

    CHECK(result.artifacts.size() == 18);
    CHECK_FALSE(result.truncated_pathways);

    std::map<std::string, int> kinds;
    for (const auto& e : result.artifacts) {
        ++kinds[e.kind];
        CHECK(fs::exists(tmp.path / e.path));
    }
    CHECK(kinds["strategic-diagram"] == 2);
    CHECK(kinds["lineage-matrix"] == 1);
    CHECK(kinds["evolution-graph"] == 1);
    CHECK(kinds["manifest"] == 1);
    CHECK(kinds["cache"] == 1);

    // The manifest lists every artifact incl. itself.
    std::ifstream in(tmp.path / "manifest.json");
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string manifest = buf.str();
    for (const auto& e : result.artifacts)
        CHECK(manifest.find("\"" + e.path + "\"") != std::string::npos);
    CHECK(manifest.find("\"min_occurrence\": 2") != std::string::npos);
}

TEST_CASE("two identical runs are byte-identical") {
    TempDir tmp("tp_detrm");
    const RunConfig config = fixture_config(tmp.path.string());
    run(config);
    const auto first = read_tree(tmp.path);
    run(config);
    const auto second = read_tree(tmp.path);
    REQUIRE(first.size() == second.size());
    for (const auto& [path, bytes] : first) {
        REQUIRE(second.count(path) == 1);
        CHECK_MESSAGE(second.at(path) == bytes, "artifact differs: ", path);
    }
}

TEST_CASE("export from cache reproduces the original run byte for byte") {
    TempDir tmp("tp_cache");
    const RunConfig config = fixture_config(tmp.path.string());
    run(config);
    const auto original = read_tree(tmp.path);

    const PipelineState state = load_cache(tmp.path / "cache");
    export_artifacts(state);
    const auto re_emitted = read_tree(tmp.path);

    REQUIRE(original.size() == re_emitted.size());
    for (const auto& [path, bytes] : original) {
        REQUIRE(re_emitted.count(path) == 1);
        CHECK_MESSAGE(re_emitted.at(path) == bytes, "artifact differs: ", path);
    }
}

TEST_CASE("a failing export removes the partial artifacts") {
    TempDir tmp("tp_cleanup");
    fs::create_directories(tmp.path / "sankey.json"); // blocks the file write
    try {
        run(fixture_config(tmp.path.string()));
        FAIL("expected PipelineError");
    } catch (const PipelineError& e) {
        CHECK(e.stage() == "export");
    }
    CHECK_FALSE(fs::exists(tmp.path / "periods/period-1/terms.tsv"));
    CHECK_FALSE(fs::exists(tmp.path / "manifest.json"));
    CHECK_FALSE(fs::exists(tmp.path / "cache/state.json"));
}

TEST_CASE("sensitivity at the base alpha alone reports no changes") {
    TempDir tmp("tp_sens1");
    const RunConfig config = fixture_config(tmp.path.string());
    const SensitivityReport report = sensitivity(config, {0.5});
    CHECK(report.base_alpha == 0.5);
    REQUIRE(report.runs.size() == 1);
    CHECK(report.runs[0].alpha == 0.5);
    CHECK(report.backbone.size() == report.runs[0].edges.size());
    CHECK_FALSE(report.backbone_changed);
    CHECK_FALSE(report.patterns_changed);
    CHECK(fs::exists(tmp.path / "sensitivity.json"));
}

TEST_CASE("sensitivity sweep across alphas keeps the fixture backbone") {
    TempDir tmp("tp_sens3");
    const RunConfig config = fixture_config(tmp.path.string());
    run(config); // populate the cache; the sweep reuses it
    const SensitivityReport report = sensitivity(config, {0.3, 0.5, 0.7});
    REQUIRE(report.runs.size() == 3);
    // Both themes continue with strong lineage at every alpha.
    CHECK(report.backbone.size() == 2);
    CHECK_FALSE(report.backbone_changed);
    CHECK_FALSE(report.patterns_changed);
}

TEST_CASE("sensitivity validates the alpha range") {
    RunConfig config = fixture_config("unused-out");
    CHECK_THROWS_AS(sensitivity(config, {0.5, 1.2}), ConfigError);
}
