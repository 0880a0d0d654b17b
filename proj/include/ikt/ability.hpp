#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace ikt::ability {

// Attempts [begin, end) of one student form interval `index` (1-based).
struct Interval {
    std::size_t index = 1;
    std::size_t begin = 0;
    std::size_t end = 0;
};

// Attempt t (0-based) falls in interval t / interval_len + 1.
std::vector<Interval> segment_intervals(std::size_t attempt_count, std::size_t interval_len = 20);
std::size_t interval_of(std::size_t attempt, std::size_t interval_len);

// (skill, correct) pair in a student's history.
struct Attempt {
    std::uint32_t skill = 0;
    std::uint8_t correct = 0;
};

using PerformanceVector = std::vector<double>;

inline constexpr double kUnattemptedRate = 0.5;

// Cumulative per-skill success rate over `history`; 0.5 for skills the
// student never attempted.
PerformanceVector performance_vector(std::span<const Attempt> history, std::size_t skill_count);

// Running version of performance_vector for walking a student's history.
class PerformanceAccumulator {
public:
    explicit PerformanceAccumulator(std::size_t skill_count)
        : correct_(skill_count, 0), total_(skill_count, 0) {}
    void add(const Attempt& a);
    PerformanceVector vector() const;

private:
    std::vector<std::uint32_t> correct_;
    std::vector<std::uint32_t> total_;
};

struct ClusterModel {
    std::vector<std::vector<double>> centroids;  // K rows, one column per skill

    std::size_t k() const { return centroids.size(); }
    std::size_t dimension() const { return centroids.empty() ? 0 : centroids.front().size(); }
};

struct KMeansOptions {
    std::size_t k = 7;
    std::uint64_t seed = 1;
    std::size_t restarts = 10;
    std::size_t max_iterations = 300;
};

// k-means++ seeding followed by Lloyd iterations, repeated `restarts` times;
// the run with the lowest within-cluster sum of squares wins.
ClusterModel train_clusters(std::span<const PerformanceVector> vectors, const KMeansOptions& options = {});

double within_cluster_ss(const ClusterModel& model, std::span<const PerformanceVector> vectors);

// Index of the nearest centroid (squared Euclidean), lowest index on ties.
std::size_t nearest_centroid(std::span<const double> vector, const ClusterModel& model);

// Profile label: 1 for the first interval, otherwise 2 + nearest centroid
// index, so labels span {1, ..., K+1}.
using AbilityProfile = std::uint32_t;
inline constexpr AbilityProfile kInitialProfile = 1;
AbilityProfile assign_profile(std::span<const double> vector, const ClusterModel& model, bool is_first_interval);

// K rows x n columns, tab separated, 6 decimals.
std::string format_centroids(const ClusterModel& model);
ClusterModel parse_centroids(const std::string& text);

}  // namespace ikt::ability
