#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ikt::tan {

// Evidence nodes available to the classifier, in canonical order.
enum class Feature : std::uint8_t { skill, mastery, profile, difficulty };

std::string_view feature_name(Feature f);
std::optional<Feature> parse_feature(std::string_view name);

// One labelled prediction instance.
struct FeatureRow {
    std::uint32_t skill = 0;       // dense skill index
    double mastery = 0.0;          // prior P(L_t) in [0, 1]
    std::uint32_t profile = 1;     // ability profile label, 1..K+1
    std::uint32_t difficulty = 5;  // problem difficulty level, 0..10
    std::uint8_t label = 0;
};

// Evidence for a single query. Categorical values are signed so that
// out-of-domain input can be represented and flagged.
struct Evidence {
    long long skill = 0;
    double mastery = 0.0;
    long long profile = 1;
    long long difficulty = 5;

    static Evidence from_row(const FeatureRow& r) {
        return {static_cast<long long>(r.skill), r.mastery, static_cast<long long>(r.profile),
                static_cast<long long>(r.difficulty)};
    }
};

// ---------------------------------------------------------------------------
// Discretization

// Value v maps to the number of cutpoints strictly below it, so a value equal
// to a cutpoint lands in the lower bin.
struct Discretizer {
    std::vector<double> cutpoints;  // strictly increasing

    std::size_t bin_count() const { return cutpoints.size() + 1; }
    std::uint32_t bin(double v) const;
};

// Recursive binary partitioning with the Fayyad-Irani MDL stopping rule.
Discretizer fit_mdl_discretizer(std::span<const double> values, std::span<const std::uint8_t> labels);

// Supervised discretization of the mastery feature against the label.
Discretizer fit_discretizer(std::span<const FeatureRow> rows);

// ---------------------------------------------------------------------------
// Generic discrete TAN over binary class

// Column-major table of discrete evidence values plus the binary class.
struct DiscreteData {
    std::vector<std::vector<std::uint32_t>> columns;
    std::vector<std::uint32_t> domains;
    std::vector<std::uint8_t> labels;

    std::size_t rows() const { return labels.size(); }
    std::size_t features() const { return columns.size(); }
};

// I(a; b | class) from empirical frequencies, natural log.
double conditional_mutual_information(const DiscreteData& data, std::size_t a, std::size_t b);

// Each evidence node has the class as parent plus at most one evidence
// parent; parent[i] == -1 marks the root.
struct TanStructure {
    std::vector<int> parent;

    std::size_t size() const { return parent.size(); }
    std::vector<std::pair<std::size_t, std::size_t>> edges() const;  // (parent, child)
    bool is_tree() const;
};

// Maximum-weight spanning tree (Kruskal, ties broken by ascending (i, j))
// oriented away from node 0.
TanStructure maximum_spanning_tree(const std::vector<std::vector<double>>& weights);

// Spanning tree over class-conditional mutual information.
TanStructure learn_structure(const DiscreteData& data);

double tree_weight(const TanStructure& s, const std::vector<std::vector<double>>& weights);

// CPTs for a fixed structure. Table for node i is indexed by
// ((parent_value * 2 + y) * domain_i + value); root nodes use parent_value 0.
class TanClassifier {
public:
    std::vector<std::uint32_t> domains;
    TanStructure structure;
    std::array<double, 2> prior{0.5, 0.5};
    std::vector<std::vector<double>> cpts;

    std::uint32_t parent_domain(std::size_t node) const;
    double cpt(std::size_t node, std::uint32_t value, std::uint32_t parent_value, int y) const;
    double& cpt_ref(std::size_t node, std::uint32_t value, std::uint32_t parent_value, int y);

    // Contribution of one node to the posterior log-odds; 0 when the node or
    // its parent value lies outside its domain.
    double node_log_ratio(std::size_t node, std::span<const std::int64_t> values, bool* fallback = nullptr) const;
    double prior_log_odds() const;
    double log_odds(std::span<const std::int64_t> values, bool* fallback = nullptr) const;
    double predict_proba(std::span<const std::int64_t> values, bool* fallback = nullptr) const;

    // Allocates tables of the right shape, filled with uniform columns.
    static TanClassifier uniform(std::vector<std::uint32_t> domains, TanStructure structure);
};

// Laplace-style estimate: (count + alpha) / (context_total + alpha * domain).
// Contexts with no observations get a uniform column.
TanClassifier estimate_cpts(const DiscreteData& data, const TanStructure& structure, double alpha = 1.0);

// Keeps probabilities off exactly 0 and 1 when log-odds overflow a double.
inline constexpr double kProbabilityFloor = 1e-15;
double logistic(double log_odds);

// ---------------------------------------------------------------------------
// Knowledge-tracing model over the selected features

struct FeatureDomains {
    std::uint32_t skills = 1;
    std::uint32_t profiles = 8;  // K + 1
    std::uint32_t difficulties = 11;
};

struct TanModel {
    std::vector<Feature> features;  // node order
    Discretizer discretizer;
    TanClassifier classifier;
    double alpha = 1.0;
    std::vector<std::string> skill_labels;  // optional display names by skill index

    // Maps evidence to per-node values; out-of-domain entries become -1.
    std::vector<std::int64_t> encode(const Evidence& e) const;
};

DiscreteData discretize(std::span<const FeatureRow> rows, std::span<const Feature> features,
                        const Discretizer& discretizer, const FeatureDomains& domains);

// Fits the discretizer, structure and CPTs on training rows.
TanModel fit_tan(std::span<const FeatureRow> rows, std::span<const Feature> features,
                 const FeatureDomains& domains, double alpha = 1.0);

double predict_proba(const TanModel& model, const Evidence& evidence);
// {P(y=0), P(y=1)} from a single normalization.
std::array<double, 2> class_distribution(const TanModel& model, const Evidence& evidence);

struct NodeContribution {
    Feature feature{};
    std::string value;
    std::optional<Feature> parent;
    std::string parent_value;
    double log_ratio = 0.0;
    bool fallback = false;
};

struct Explanation {
    double prior_log_odds = 0.0;
    std::vector<NodeContribution> nodes;
    double log_odds = 0.0;  // prior_log_odds + sum of node log ratios
    double probability = 0.5;
    bool flagged = false;  // some evidence was outside its declared domain
};

Explanation explain(const TanModel& model, const Evidence& evidence);

// Tab-separated "node value parent parent_value log_ratio fallback" rows
// preceded by key=value summary lines.
std::string format_explanation(const Explanation& e);

// Versioned text form; doubles are written in shortest round-trip notation.
std::string serialize(const TanModel& model);
TanModel deserialize(const std::string& text);

}  // namespace ikt::tan
