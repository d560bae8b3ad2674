#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "themetrace/errors.hpp"
#include "themetrace/lineage.hpp"

using namespace themetrace;

namespace {

ThemeCluster make_cluster(int period, int ordinal,
                          const std::map<std::string, double>& pagerank) {
    ThemeCluster c;
    c.id = {period, ordinal};
    for (const auto& [term, score] : pagerank) c.terms.push_back(term);
    c.pagerank = pagerank;
    for (const auto& [term, score] : pagerank) c.pagerank_total += score;
    return c;
}

} // namespace

TEST_CASE("shared_terms intersects sorted term lists") {
    const ThemeCluster a = make_cluster(0, 0, {{"a", 1}, {"b", 1}, {"c", 1}});
    const ThemeCluster b = make_cluster(1, 0, {{"b", 1}, {"c", 1}, {"d", 1}});
    CHECK(shared_terms(a, b) == std::vector<std::string>{"b", "c"});
}

TEST_CASE("weighted inclusion carries the source's pagerank share") {
    const ThemeCluster src = make_cluster(0, 0, {{"a", 0.5}, {"b", 0.3}, {"c", 0.2}});
    const ThemeCluster dst = make_cluster(1, 0, {{"a", 0.6}, {"c", 0.2}, {"z", 0.2}});
    CHECK(weighted_inclusion(src, dst) == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("weighted inclusion is asymmetric: subset forward is exactly 1") {
    const ThemeCluster small = make_cluster(0, 0, {{"a", 0.6}, {"b", 0.4}});
    const ThemeCluster big =
        make_cluster(1, 0, {{"a", 0.3}, {"b", 0.3}, {"c", 0.4}});
    CHECK(weighted_inclusion(small, big) == 1.0);
    CHECK(weighted_inclusion(big, small) == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(weighted_inclusion(big, small) < 1.0);
}

TEST_CASE("importance index is symmetric with a hand-computed value") {
    const ThemeCluster a = make_cluster(0, 0, {{"a", 0.5}, {"b", 0.5}});
    const ThemeCluster b =
        make_cluster(1, 0, {{"a", 0.25}, {"b", 0.25}, {"c", 0.5}});
    // sqrt((0.5*0.25 + 0.5*0.25) / (1*1)) = 0.5
    CHECK(importance_index(a, b) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(importance_index(b, a) == doctest::Approx(importance_index(a, b)).epsilon(1e-15));
}

TEST_CASE("measures respect explicit totals, so unnormalized vectors are valid") {
    const ThemeCluster src = make_cluster(0, 0, {{"a", 5.0}, {"b", 3.0}, {"c", 2.0}});
    const ThemeCluster dst = make_cluster(1, 0, {{"a", 6.0}, {"c", 2.0}, {"z", 2.0}});
    // Same shape as the normalized fixture above, scaled by 10.
    CHECK(weighted_inclusion(src, dst) == doctest::Approx(0.7).epsilon(1e-12));
    const ThemeCluster nsrc = make_cluster(0, 0, {{"a", 0.5}, {"b", 0.3}, {"c", 0.2}});
    const ThemeCluster ndst = make_cluster(1, 0, {{"a", 0.6}, {"c", 0.2}, {"z", 0.2}});
    CHECK(importance_index(src, dst) ==
          doctest::Approx(importance_index(nsrc, ndst)).epsilon(1e-12));
}

TEST_CASE("lineage strength blends linearly and hits exact boundaries") {
    const ThemeCluster src = make_cluster(0, 0, {{"a", 0.5}, {"b", 0.5}});
    const ThemeCluster dst = make_cluster(1, 0, {{"a", 0.7}, {"c", 0.3}});
    const double iw = weighted_inclusion(src, dst);
    const double omega = importance_index(src, dst);

    CHECK(lineage_strength(src, dst, 1.0) == iw);    // exactly Omega-free
    CHECK(lineage_strength(src, dst, 0.0) == omega); // exactly Iw-free
    CHECK(lineage_strength(src, dst, 0.3) ==
          doctest::Approx(0.3 * iw + 0.7 * omega).epsilon(1e-15));

    CHECK_THROWS_AS(lineage_strength(src, dst, -0.1), ValidationError);
    CHECK_THROWS_AS(lineage_strength(src, dst, 1.1), ValidationError);
}

TEST_CASE("disjoint clusters have zero lineage") {
    const ThemeCluster a = make_cluster(0, 0, {{"a", 1.0}});
    const ThemeCluster b = make_cluster(1, 0, {{"b", 1.0}});
    CHECK(lineage_strength(a, b, 0.5) == 0.0);
}

TEST_CASE("build_lineage_matrix evaluates every pair; reblend matches a direct build") {
    PeriodPartition p0, p1;
    p0.period = 0;
    p1.period = 1;
    p0.clusters = {make_cluster(0, 0, {{"a", 0.6}, {"b", 0.4}}),
                   make_cluster(0, 1, {{"c", 1.0}})};
    p1.clusters = {make_cluster(1, 0, {{"a", 0.5}, {"c", 0.5}}),
                   make_cluster(1, 1, {{"b", 0.2}, {"d", 0.8}}),
                   make_cluster(1, 2, {{"e", 1.0}})};

    const LineageMatrix lm = build_lineage_matrix(p0, p1, 0.5);
    REQUIRE(lm.rows() == 2);
    REQUIRE(lm.cols() == 3);
    CHECK(lm.source_period == 0);
    CHECK(lm.target_period == 1);
    for (std::size_t i = 0; i < lm.rows(); ++i)
        for (std::size_t j = 0; j < lm.cols(); ++j) {
            const auto& src = p0.clusters[i];
            const auto& dst = p1.clusters[j];
            CHECK(lm.Iw[i][j] == doctest::Approx(weighted_inclusion(src, dst)).epsilon(1e-15));
            CHECK(lm.Omega[i][j] ==
                  doctest::Approx(importance_index(src, dst)).epsilon(1e-15));
            CHECK(lm.L[i][j] ==
                  doctest::Approx(lineage_strength(src, dst, 0.5)).epsilon(1e-15));
        }
    CHECK(lm.shared[0][0] == std::vector<std::string>{"a"});
    CHECK(lm.shared[1][2].empty());

    const LineageMatrix reblended = reblend(lm, 0.8);
    const LineageMatrix direct = build_lineage_matrix(p0, p1, 0.8);
    for (std::size_t i = 0; i < lm.rows(); ++i)
        for (std::size_t j = 0; j < lm.cols(); ++j)
            CHECK(reblended.L[i][j] == doctest::Approx(direct.L[i][j]).epsilon(1e-15));
    CHECK_THROWS_AS(reblend(lm, 2.0), ValidationError);
}

TEST_CASE("empty partitions produce empty matrices") {
    PeriodPartition p0, p1;
    p0.period = 0;
    p1.period = 1;
    p1.clusters = {make_cluster(1, 0, {{"a", 1.0}})};
    const LineageMatrix lm = build_lineage_matrix(p0, p1, 0.5);
    CHECK(lm.rows() == 0);
    CHECK(lm.cols() == 0);
}

TEST_CASE("classical inclusion normalizes by the smaller set") {
    CHECK(classical_inclusion({"a", "b"}, {"b", "c", "d"}) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(classical_inclusion({"a", "b"}, {"a", "b", "c"}) == 1.0);
    CHECK(classical_inclusion({"a"}, {"b"}) == 0.0);
    CHECK(classical_inclusion({}, {"a"}) == 0.0);
    CHECK(classical_inclusion({"a"}, {}) == 0.0);
}

TEST_CASE("period overlap reports the shared count and Jaccard index") {
    std::set<std::string> a, b;
    // |A| = 104, |B| = 154, |A n B| = 73 -> Jaccard 73/185.
    for (int i = 0; i < 104; ++i) a.insert("s" + std::to_string(i));
    for (int i = 31; i < 185; ++i) b.insert("s" + std::to_string(i));
    const PeriodOverlap o = period_overlap(a, b);
    CHECK(o.shared == 73);
    CHECK(o.index == doctest::Approx(73.0 / 185.0).epsilon(1e-12));
    // The min-normalized variant on the same sets is ~0.70.
    CHECK(classical_inclusion(a, b) == doctest::Approx(73.0 / 104.0).epsilon(1e-12));

    CHECK(period_overlap({}, {}).index == 0.0);
    CHECK(period_overlap({"x"}, {"x"}).index == 1.0);
}
