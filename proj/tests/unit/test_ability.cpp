#include "ikt/ability.hpp"
#include "ikt/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace ikt::ability;

TEST_CASE("interval segmentation") {
    const auto v = segment_intervals(45, 20);
    REQUIRE(v.size() == 3);
    CHECK(v[0].end - v[0].begin == 20);
    CHECK(v[1].end - v[1].begin == 20);
    CHECK(v[2].end - v[2].begin == 5);
    CHECK(v[2].index == 3);
    CHECK(segment_intervals(20, 20).size() == 1);
    CHECK(segment_intervals(7, 20).size() == 1);
    CHECK(segment_intervals(0, 20).empty());
    CHECK(interval_of(0, 20) == 1);
    CHECK(interval_of(19, 20) == 1);
    CHECK(interval_of(20, 20) == 2);
    CHECK_THROWS(segment_intervals(10, 0));
}

TEST_CASE("performance vector") {
    const std::vector<Attempt> h{{0, 1}, {0, 1}, {0, 0}, {0, 1}, {2, 0}};
    const auto v = performance_vector(h, 3);
    REQUIRE(v.size() == 3);
    CHECK(v[0] == 0.75);
    CHECK(v[1] == 0.5);
    CHECK(v[2] == 0.0);

    PerformanceAccumulator acc(3);
    for (const auto& a : h) acc.add(a);
    CHECK(acc.vector() == v);
    CHECK(performance_vector({}, 4) == PerformanceVector(4, 0.5));
}

TEST_CASE("well separated blobs are recovered") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> noise(0.0, 0.01);
    const std::vector<std::vector<double>> centers{{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
    std::vector<PerformanceVector> pts;
    std::vector<std::size_t> truth;
    for (std::size_t i = 0; i < 300; ++i) {
        const auto c = i % 3;
        pts.push_back({centers[c][0] + noise(rng), centers[c][1] + noise(rng)});
        truth.push_back(c);
    }
    KMeansOptions opt;
    opt.k = 3;
    const auto model = train_clusters(pts, opt);
    REQUIRE(model.k() == 3);
    // Every blob maps to its own centroid.
    std::vector<std::size_t> label_of(3, 99);
    bool consistent = true;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto n = nearest_centroid(pts[i], model);
        if (label_of[truth[i]] == 99) label_of[truth[i]] = n;
        consistent = consistent && label_of[truth[i]] == n;
    }
    CHECK(consistent);
    CHECK(label_of[0] != label_of[1]);
    CHECK(label_of[1] != label_of[2]);
    CHECK(label_of[0] != label_of[2]);
}

TEST_CASE("single cluster of identical points") {
    const std::vector<PerformanceVector> pts(10, PerformanceVector{0.3, 0.6});
    KMeansOptions opt;
    opt.k = 1;
    const auto m = train_clusters(pts, opt);
    CHECK(m.centroids[0][0] == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(m.centroids[0][1] == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(within_cluster_ss(m, pts) < 1e-24);
}

TEST_CASE("clustering is deterministic in the seed") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<PerformanceVector> pts(200, PerformanceVector(6));
    for (auto& p : pts)
        for (auto& x : p) x = u(rng);
    KMeansOptions opt;
    opt.k = 5;
    opt.seed = 17;
    const auto a = train_clusters(pts, opt);
    const auto b = train_clusters(pts, opt);
    CHECK(format_centroids(a) == format_centroids(b));
    CHECK(a.centroids == b.centroids);
}

TEST_CASE("too few vectors") {
    const std::vector<PerformanceVector> pts(3, PerformanceVector{0.1});
    KMeansOptions opt;
    opt.k = 4;
    CHECK_THROWS_AS(train_clusters(pts, opt), ikt::InputError);
}

TEST_CASE("profile assignment") {
    ClusterModel m;
    m.centroids = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}, {0.5, 0.5}};
    const std::vector<double> v{0.9, 0.95};
    CHECK(assign_profile(v, m, true) == 1);
    CHECK(assign_profile(v, m, false) == 5);  // centroid index 3
    const std::vector<double> mid{0.5, 0.0};  // equidistant from 0 and 1
    CHECK(nearest_centroid(mid, m) == 0);
    CHECK(assign_profile(mid, m, false) == 2);
    const std::vector<double> bad{0.1};
    CHECK_THROWS(nearest_centroid(bad, m));
}

TEST_CASE("nearest centroid matches exhaustive argmin") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        ClusterModel m;
        m.centroids.assign(7, std::vector<double>(4));
        for (auto& c : m.centroids)
            for (auto& x : c) x = u(rng);
        std::vector<double> v(4);
        for (auto& x : v) x = u(rng);
        std::size_t best = 0;
        double best_d = 1e300;
        for (std::size_t k = 0; k < 7; ++k) {
            double d = 0.0;
            for (std::size_t j = 0; j < 4; ++j) d += (v[j] - m.centroids[k][j]) * (v[j] - m.centroids[k][j]);
            if (d < best_d) best_d = d, best = k;
        }
        CHECK(nearest_centroid(v, m) == best);
    }
}

TEST_CASE("centroid text round trip") {
    ClusterModel m;
    m.centroids = {{0.125, 0.5}, {0.75, 1.0}};
    const auto back = parse_centroids(format_centroids(m));
    CHECK(back.centroids == m.centroids);
}
