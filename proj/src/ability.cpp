#include "ikt/ability.hpp"

#include "ikt/errors.hpp"
#include "ikt/table_io.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

namespace ikt::ability {

std::size_t interval_of(std::size_t attempt, std::size_t interval_len) {
    return attempt / interval_len + 1;
}

std::vector<Interval> segment_intervals(std::size_t attempt_count, std::size_t interval_len) {
    if (interval_len == 0) throw InputError("interval length must be at least 1");
    std::vector<Interval> out;
    for (std::size_t begin = 0; begin < attempt_count; begin += interval_len) {
        out.push_back({out.size() + 1, begin, std::min(begin + interval_len, attempt_count)});
    }
    return out;
}

void PerformanceAccumulator::add(const Attempt& a) {
    ++total_.at(a.skill);
    correct_[a.skill] += a.correct;
}

PerformanceVector PerformanceAccumulator::vector() const {
    PerformanceVector v(total_.size(), kUnattemptedRate);
    for (std::size_t j = 0; j < total_.size(); ++j) {
        if (total_[j] > 0) v[j] = static_cast<double>(correct_[j]) / static_cast<double>(total_[j]);
    }
    return v;
}

PerformanceVector performance_vector(std::span<const Attempt> history, std::size_t skill_count) {
    PerformanceAccumulator acc(skill_count);
    for (const auto& a : history) acc.add(a);
    return acc.vector();
}

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double diff = a[i] - b[i];
        d += diff * diff;
    }
    return d;
}

double unit_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::vector<std::vector<double>> seed_plus_plus(std::span<const PerformanceVector> vectors, std::size_t k,
                                                std::mt19937_64& rng) {
    const std::size_t n = vectors.size();
    std::vector<std::vector<double>> centroids;
    centroids.reserve(k);
    centroids.push_back(vectors[rng() % n]);
    std::vector<double> d2(n);
    for (std::size_t i = 0; i < n; ++i) d2[i] = squared_distance(vectors[i], centroids.back());
    while (centroids.size() < k) {
        double total = 0.0;
        for (const double d : d2) total += d;
        std::size_t pick = 0;
        if (total > 0.0) {
            const double target = unit_uniform(rng) * total;
            double run = 0.0;
            pick = n - 1;
            for (std::size_t i = 0; i < n; ++i) {
                run += d2[i];
                if (run > target && d2[i] > 0.0) {
                    pick = i;
                    break;
                }
            }
        } else {
            pick = rng() % n;
        }
        centroids.push_back(vectors[pick]);
        for (std::size_t i = 0; i < n; ++i) {
            d2[i] = std::min(d2[i], squared_distance(vectors[i], centroids.back()));
        }
    }
    return centroids;
}

ClusterModel lloyd(std::span<const PerformanceVector> vectors, ClusterModel model, std::size_t max_iterations) {
    const std::size_t n = vectors.size();
    const std::size_t k = model.k();
    const std::size_t dim = model.dimension();
    std::vector<std::size_t> assign(n, k);
    for (std::size_t iter = 0; iter < max_iterations; ++iter) {
        bool changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            const auto c = nearest_centroid(vectors[i], model);
            if (c != assign[i]) {
                assign[i] = c;
                changed = true;
            }
        }
        if (!changed) break;

        std::vector<std::vector<double>> sums(k, std::vector<double>(dim, 0.0));
        std::vector<std::size_t> counts(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            auto& s = sums[assign[i]];
            for (std::size_t j = 0; j < dim; ++j) s[j] += vectors[i][j];
            ++counts[assign[i]];
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] == 0) {
                // Empty cluster: move it onto the point farthest from its centroid.
                std::size_t far = 0;
                double far_d = -1.0;
                for (std::size_t i = 0; i < n; ++i) {
                    const double d = squared_distance(vectors[i], model.centroids[assign[i]]);
                    if (d > far_d) {
                        far_d = d;
                        far = i;
                    }
                }
                model.centroids[c] = vectors[far];
                assign[far] = c;
                continue;
            }
            for (std::size_t j = 0; j < dim; ++j) {
                model.centroids[c][j] = sums[c][j] / static_cast<double>(counts[c]);
            }
        }
    }
    return model;
}

}  // namespace

double within_cluster_ss(const ClusterModel& model, std::span<const PerformanceVector> vectors) {
    double total = 0.0;
    for (const auto& v : vectors) total += squared_distance(v, model.centroids[nearest_centroid(v, model)]);
    return total;
}

ClusterModel train_clusters(std::span<const PerformanceVector> vectors, const KMeansOptions& options) {
    if (options.k == 0) throw InputError("cluster count must be at least 1");
    if (vectors.size() < options.k) {
        throw InputError("k-means needs at least " + std::to_string(options.k) + " vectors, got " +
                         std::to_string(vectors.size()));
    }
    const std::size_t dim = vectors.front().size();
    for (const auto& v : vectors) {
        if (v.size() != dim) throw std::invalid_argument("performance vectors differ in dimension");
    }
    std::mt19937_64 rng(options.seed);
    ClusterModel best;
    double best_ss = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < std::max<std::size_t>(options.restarts, 1); ++r) {
        ClusterModel m{seed_plus_plus(vectors, options.k, rng)};
        m = lloyd(vectors, std::move(m), options.max_iterations);
        const double ss = within_cluster_ss(m, vectors);
        if (ss < best_ss) {
            best_ss = ss;
            best = std::move(m);
        }
    }
    return best;
}

std::size_t nearest_centroid(std::span<const double> vector, const ClusterModel& model) {
    if (model.k() == 0) throw std::invalid_argument("cluster model is empty");
    if (vector.size() != model.dimension()) {
        throw std::invalid_argument("vector dimension " + std::to_string(vector.size()) +
                                    " does not match centroid dimension " + std::to_string(model.dimension()));
    }
    std::size_t best = 0;
    double best_d = squared_distance(vector, model.centroids[0]);
    for (std::size_t c = 1; c < model.k(); ++c) {
        const double d = squared_distance(vector, model.centroids[c]);
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    return best;
}

AbilityProfile assign_profile(std::span<const double> vector, const ClusterModel& model, bool is_first_interval) {
    if (is_first_interval) return kInitialProfile;
    return static_cast<AbilityProfile>(nearest_centroid(vector, model) + 2);
}

std::string format_centroids(const ClusterModel& model) {
    std::ostringstream os;
    for (const auto& row : model.centroids) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j) os << '\t';
            os << io::format_fixed(row[j], 6);
        }
        os << '\n';
    }
    return os.str();
}

ClusterModel parse_centroids(const std::string& text) {
    ClusterModel m;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (io::trim(line).empty()) continue;
        std::vector<double> row;
        for (const auto& f : io::split_delimited(line, '\t')) {
            double v = 0.0;
            if (!io::parse_double(f, v)) throw InputError("centroid matrix has a non-numeric entry");
            row.push_back(v);
        }
        if (!m.centroids.empty() && row.size() != m.dimension()) {
            throw InputError("centroid matrix rows differ in length");
        }
        m.centroids.push_back(std::move(row));
    }
    return m;
}

}  // namespace ikt::ability
