#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ikt::bkt {

// Per-skill Bayesian Knowledge Tracing parameters.
struct BktParams {
    double l0 = 0.5;  // P(L0): mastered before the first attempt
    double t = 0.1;   // P(T): unmastered -> mastered after an attempt
    double g = 0.2;   // P(G): correct while unmastered
    double s = 0.1;   // P(S): incorrect while mastered

    friend bool operator==(const BktParams&, const BktParams&) = default;
};

using Responses = std::span<const std::uint8_t>;

// P(L_t | obs). Returns `prior` unchanged when the observation has zero
// probability under the model.
double posterior_given_obs(const BktParams& p, double prior, int obs);

// P(L_{t+1}) from the posterior at t.
double advance(const BktParams& p, double posterior);

// Running belief for one student on one skill. Mastered and unmastered
// masses are kept separately so neither is recovered as 1 minus the other.
class MasteryState {
public:
    explicit MasteryState(const BktParams& p) : mastered_(p.l0), unmastered_(1.0 - p.l0) {}

    // P(L_t) before the next response.
    double prior() const { return mastered_; }
    // Conditions on `obs`, applies the learning transition and returns the
    // probability the model assigned to `obs`.
    double observe(const BktParams& p, int obs);

private:
    double mastered_;
    double unmastered_;
};

// Prior mastery before each response; entry 0 is l0.
std::vector<double> trace_mastery(const BktParams& p, Responses responses);

// Sum of log P(r_t | r_<t) under the two-state chain.
double sequence_log_likelihood(const BktParams& p, Responses responses);

// Brute-force search space. Each parameter takes the values step, 2*step, ...
// strictly below 1 and not above its cap.
struct FitGrid {
    double step = 0.05;
    double l0_cap = 0.95;
    double t_cap = 0.95;
    double g_cap = 0.30;
    double s_cap = 0.30;

    std::vector<double> values(double cap) const;
};

// Grid point with the highest total log-likelihood; ties go to the
// lexicographically smallest (l0, t, g, s). Empty input (or only empty
// sequences) yields nullopt so the caller can substitute fallback params.
std::optional<BktParams> fit_skill(std::span<const std::vector<std::uint8_t>> sequences,
                                   const FitGrid& grid = {});

// Total log-likelihood of a set of sequences under `p`, evaluated the same
// way fit_skill scores grid points.
double total_log_likelihood(const BktParams& p, std::span<const std::vector<std::uint8_t>> sequences);

// Unweighted coordinate-wise mean; used for skills without training data.
BktParams mean_params(std::span<const BktParams> fitted);

// Plain-text table "skill_id l0 t g s", tab separated, 6 decimals.
struct SkillParams {
    std::string skill_id;
    BktParams params;
};
std::string format_param_table(std::span<const SkillParams> rows);
std::vector<SkillParams> parse_param_table(const std::string& text);

}  // namespace ikt::bkt
