#include "ikt/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace ikt::metrics {

double auc(std::span<const Scored> scores) {
    std::vector<Scored> sorted(scores.begin(), scores.end());
    std::sort(sorted.begin(), sorted.end(),
              [](const Scored& a, const Scored& b) { return a.probability < b.probability; });
    double positives = 0.0;
    for (const auto& s : sorted) positives += s.label ? 1.0 : 0.0;
    const double negatives = static_cast<double>(sorted.size()) - positives;
    if (positives == 0.0 || negatives == 0.0) throw std::domain_error("AUC needs both classes");

    // Walk groups of tied scores; each positive beats every negative below
    // its group and ties with the negatives inside it.
    double concordant = 0.0;
    double negatives_below = 0.0;
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        double pos = 0.0, neg = 0.0;
        while (j < sorted.size() && sorted[j].probability == sorted[i].probability) {
            (sorted[j].label ? pos : neg) += 1.0;
            ++j;
        }
        concordant += pos * (negatives_below + 0.5 * neg);
        negatives_below += neg;
        i = j;
    }
    return concordant / (positives * negatives);
}

double rmse(std::span<const Scored> scores) {
    if (scores.empty()) throw std::domain_error("RMSE of an empty score set");
    double sum = 0.0;
    for (const auto& s : scores) {
        const double e = s.probability - (s.label ? 1.0 : 0.0);
        sum += e * e;
    }
    return std::sqrt(sum / static_cast<double>(scores.size()));
}

}  // namespace ikt::metrics
