#pragma once

#include <cstdint>
#include <span>

namespace ikt::metrics {

struct Scored {
    double probability = 0.0;
    std::uint8_t label = 0;
};

// Mann-Whitney AUC: fraction of (positive, negative) pairs ranked correctly,
// ties counted as one half. Throws std::domain_error if a class is missing.
double auc(std::span<const Scored> scores);

// sqrt(mean((p - label)^2)). Throws std::domain_error on empty input.
double rmse(std::span<const Scored> scores);

}  // namespace ikt::metrics
