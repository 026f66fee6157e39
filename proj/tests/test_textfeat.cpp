#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "hostqual/errors.hpp"
#include "hostqual/textfeat.hpp"

using namespace hostqual;

TEST_CASE("tfidf weight formula") {
    CHECK(tfidf_weight(0, 10, 3) == 0.0);
    CHECK(tfidf_weight(5, 8, 8) == 0.0);  // log 1
    CHECK(tfidf_weight(2, 8, 2) == doctest::Approx(2.0 * std::log(4.0)).epsilon(1e-12));
    CHECK(std::abs(tfidf_weight(2, 8, 2) - 2.772588722239781) < 1e-12);
    CHECK_THROWS_AS(tfidf_weight(1, 8, 0), DataError);
    CHECK_THROWS_AS(tfidf_weight(1, 8, 9), DataError);
}

TEST_CASE("information gain hand examples") {
    // Term present everywhere tells us nothing.
    CHECK(information_gain({1, 1, 1, 1}, {0, 0, 1, 1}) == doctest::Approx(0.0).epsilon(1e-12));
    // Term present exactly in the two class-A hosts: one full bit.
    CHECK(information_gain({1, 1, 0, 0}, {0, 0, 1, 1}) == doctest::Approx(1.0).epsilon(1e-12));
    // One A and one B: conditionals are both 1 bit.
    CHECK(information_gain({1, 0, 1, 0}, {0, 0, 1, 1}) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK_THROWS_AS(information_gain({}, {}), DataError);
    CHECK_THROWS_AS(information_gain({1}, {0, 1}), DataError);
}

TEST_CASE("information gain bounds") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        size_t n = 2 + rng() % 30;
        std::vector<uint8_t> presence(n);
        std::vector<int> classes(n);
        for (size_t i = 0; i < n; ++i) {
            presence[i] = rng() % 2;
            classes[i] = static_cast<int>(rng() % 4);
        }
        double ig = information_gain(presence, classes);
        // H(C) recomputed here with its own arithmetic.
        std::map<int, int> hist;
        for (int c : classes) ++hist[c];
        double h = 0.0;
        for (auto& [c, count] : hist) {
            double p = double(count) / double(n);
            h -= p * std::log2(p);
        }
        CHECK(ig >= -1e-12);
        CHECK(ig <= h + 1e-12);
    }
}

namespace {

TermStats stats_from(const std::vector<TermTriple>& triples,
                     const std::vector<HostId>& hosts) {
    return build_term_stats(triples, hosts);
}

}  // namespace

TEST_CASE("term stats assembly") {
    std::vector<HostId> hosts{"a", "b", "c", "d"};
    auto stats = stats_from(
        {
            {"a", "apple", 2}, {"a", "pear", 1}, {"b", "apple", 1},
            {"c", "plum", 4}, {"a", "apple", 3},  // duplicate sums to 5
        },
        hosts);
    CHECK(stats.n_docs() == 4);
    CHECK(stats.terms == std::vector<std::string>{"apple", "pear", "plum"});
    auto row_a = std::lower_bound(stats.hosts.begin(), stats.hosts.end(), "a") -
                 stats.hosts.begin();
    CHECK(stats.frequency(row_a, 0) == 5);
    CHECK(stats.doc_freq[0] == 2);  // apple in a and b
    CHECK(stats.doc_freq[2] == 1);

    CHECK_THROWS_AS(stats_from({{"zz", "apple", 1}}, hosts), DataError);
}

TEST_CASE("doc frequency overrides") {
    std::vector<HostId> hosts{"a", "b", "c"};
    auto stats = stats_from({{"a", "x", 1}, {"b", "x", 1}, {"c", "y", 2}}, hosts);
    size_t unknown = apply_doc_freq_overrides(stats, {{"x", 3}, {"ghost", 1}});
    CHECK(unknown == 1);
    CHECK(stats.doc_freq[std::lower_bound(stats.terms.begin(), stats.terms.end(), "x") -
                         stats.terms.begin()] == 3);
    CHECK_THROWS_AS(apply_doc_freq_overrides(stats, {{"y", 9}}), DataError);
    CHECK_THROWS_AS(apply_doc_freq_overrides(stats, {{"y", 0}}), DataError);
}

TEST_CASE("top-k selection") {
    // Hosts a,b carry class 0; c,d carry class 1. Term "sep" separates
    // perfectly; "noise1"/"noise2" are uninformative.
    std::vector<HostId> hosts{"a", "b", "c", "d"};
    std::vector<TermTriple> triples{
        {"a", "sep", 3}, {"b", "sep", 1},
        {"a", "noise1", 1}, {"c", "noise1", 2},
        {"b", "noise2", 1}, {"d", "noise2", 1},
    };
    auto stats = stats_from(triples, hosts);
    std::vector<int> rows{0, 1, 2, 3};
    std::vector<int> classes{0, 0, 1, 1};

    auto top1 = select_top_k(stats, rows, classes, 1);
    REQUIRE(top1.size() == 1);
    CHECK(stats.terms[top1[0]] == "sep");

    // Exhaustive IG recomputation agrees on the winner.
    double best_ig = -1.0;
    size_t best_term = 0;
    for (size_t t = 0; t < stats.terms.size(); ++t) {
        std::vector<uint8_t> presence;
        for (int r : rows) {
            presence.push_back(stats.frequency(r, static_cast<int32_t>(t)) > 0);
        }
        double ig = information_gain(presence, classes);
        if (ig > best_ig) {
            best_ig = ig;
            best_term = t;
        }
    }
    CHECK(static_cast<int32_t>(best_term) == top1[0]);

    // k >= vocabulary: everything, in id order.
    auto all = select_top_k(stats, rows, classes, 100);
    CHECK(all == std::vector<int32_t>{0, 1, 2});

    // Identical presence patterns tie; the lower id wins.
    auto tie_stats = stats_from({{"a", "aa", 1}, {"b", "aa", 1}, {"a", "zz", 2}, {"b", "zz", 9}},
                                hosts);
    auto picked = select_top_k(tie_stats, rows, classes, 1);
    REQUIRE(picked.size() == 1);
    CHECK(tie_stats.terms[picked[0]] == "aa");
}

TEST_CASE("selection is independent of input order") {
    std::mt19937_64 rng(8);
    std::vector<HostId> hosts;
    for (int i = 0; i < 12; ++i) {
        hosts.push_back("h" + std::to_string(i));
    }
    std::vector<TermTriple> triples;
    for (int i = 0; i < 12; ++i) {
        for (int t = 0; t < 8; ++t) {
            if (rng() % 3 == 0) {
                triples.push_back({hosts[i], "t" + std::to_string(t),
                                   1 + static_cast<int64_t>(rng() % 4)});
            }
        }
    }
    std::vector<int> rows, classes;
    for (int i = 0; i < 12; ++i) {
        rows.push_back(i);
        classes.push_back(i % 3);
    }
    auto stats = stats_from(triples, hosts);
    auto reference = select_top_k(stats, rows, classes, 4);
    for (int trial = 0; trial < 5; ++trial) {
        for (size_t i = triples.size(); i > 1; --i) {
            std::swap(triples[i - 1], triples[rng() % i]);
        }
        auto shuffled_stats = stats_from(triples, hosts);
        CHECK(select_top_k(shuffled_stats, rows, classes, 4) == reference);
    }
}

TEST_CASE("tfidf matrix") {
    std::vector<HostId> hosts{"a", "b"};
    auto stats = stats_from({{"a", "x", 2}, {"a", "y", 1}, {"b", "y", 3}}, hosts);
    // y appears in every document: weight 0 everywhere.
    auto sparse = tfidf_matrix(stats, {0, 1});
    auto dense = to_feature_matrix(sparse);
    REQUIRE(dense.columns == std::vector<std::string>{"x", "y"});
    CHECK(dense.rows[0][0] == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-12));
    CHECK(dense.rows[0][1] == 0.0);
    CHECK(dense.rows[1][1] == 0.0);
    CHECK(dense.rows[1][0] == 0.0);

    // Restricting to selected terms caps the nonzero columns at k.
    auto only_x = to_feature_matrix(tfidf_matrix(stats, {0}));
    CHECK(only_x.width() == 1);
}
