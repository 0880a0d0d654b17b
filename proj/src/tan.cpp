#include "ikt/tan.hpp"

#include "ikt/errors.hpp"
#include "ikt/table_io.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace ikt::tan {

std::string_view feature_name(Feature f) {
    switch (f) {
        case Feature::skill: return "skill";
        case Feature::mastery: return "mastery";
        case Feature::profile: return "profile";
        case Feature::difficulty: return "difficulty";
    }
    return "?";
}

std::optional<Feature> parse_feature(std::string_view name) {
    for (const auto f : {Feature::skill, Feature::mastery, Feature::profile, Feature::difficulty}) {
        if (feature_name(f) == name) return f;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Discretization

std::uint32_t Discretizer::bin(double v) const {
    return static_cast<std::uint32_t>(std::lower_bound(cutpoints.begin(), cutpoints.end(), v) - cutpoints.begin());
}

namespace {

struct ValueCounts {
    double value;
    std::array<std::size_t, 2> n;
};

double entropy_bits(std::size_t n0, std::size_t n1) {
    const double total = static_cast<double>(n0 + n1);
    double h = 0.0;
    for (const auto n : {n0, n1}) {
        if (n == 0) continue;
        const double p = static_cast<double>(n) / total;
        h -= p * std::log2(p);
    }
    return h;
}

int classes_present(std::size_t n0, std::size_t n1) { return (n0 > 0) + (n1 > 0); }

void mdl_split(std::span<const ValueCounts> values, std::vector<double>& cuts) {
    if (values.size() < 2) return;
    std::size_t t0 = 0, t1 = 0;
    for (const auto& v : values) {
        t0 += v.n[0];
        t1 += v.n[1];
    }
    const double total = static_cast<double>(t0 + t1);
    const double ent = entropy_bits(t0, t1);
    if (ent == 0.0) return;

    std::size_t best = values.size();
    double best_e = 0.0;
    std::size_t l0 = 0, l1 = 0;
    std::size_t best_l0 = 0, best_l1 = 0;
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
        l0 += values[i].n[0];
        l1 += values[i].n[1];
        const double nl = static_cast<double>(l0 + l1);
        const double e = (nl / total) * entropy_bits(l0, l1) + ((total - nl) / total) * entropy_bits(t0 - l0, t1 - l1);
        if (best == values.size() || e < best_e) {
            best = i;
            best_e = e;
            best_l0 = l0;
            best_l1 = l1;
        }
    }
    const double gain = ent - best_e;
    const double k = classes_present(t0, t1);
    const double k1 = classes_present(best_l0, best_l1);
    const double k2 = classes_present(t0 - best_l0, t1 - best_l1);
    const double delta = std::log2(std::pow(3.0, k) - 2.0) -
                         (k * ent - k1 * entropy_bits(best_l0, best_l1) -
                          k2 * entropy_bits(t0 - best_l0, t1 - best_l1));
    if (!(gain > (std::log2(total - 1.0) + delta) / total)) return;

    mdl_split(values.subspan(0, best + 1), cuts);
    cuts.push_back(0.5 * (values[best].value + values[best + 1].value));
    mdl_split(values.subspan(best + 1), cuts);
}

}  // namespace

Discretizer fit_mdl_discretizer(std::span<const double> values, std::span<const std::uint8_t> labels) {
    if (values.size() != labels.size()) throw std::invalid_argument("values and labels differ in length");
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<ValueCounts> grouped;
    for (const auto i : order) {
        if (grouped.empty() || grouped.back().value != values[i]) grouped.push_back({values[i], {0, 0}});
        ++grouped.back().n[labels[i] ? 1 : 0];
    }
    Discretizer d;
    mdl_split(grouped, d.cutpoints);
    return d;
}

Discretizer fit_discretizer(std::span<const FeatureRow> rows) {
    std::vector<double> values(rows.size());
    std::vector<std::uint8_t> labels(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        values[i] = rows[i].mastery;
        labels[i] = rows[i].label;
    }
    return fit_mdl_discretizer(values, labels);
}

// ---------------------------------------------------------------------------
// Structure

double conditional_mutual_information(const DiscreteData& data, std::size_t a, std::size_t b) {
    // Canonical argument order makes the result bit-for-bit symmetric.
    if (a > b) std::swap(a, b);
    const auto da = data.domains.at(a);
    const auto db = data.domains.at(b);
    const auto& ca = data.columns.at(a);
    const auto& cb = data.columns.at(b);
    const std::size_t n = data.rows();
    if (n == 0) return 0.0;
    std::vector<std::size_t> joint(static_cast<std::size_t>(da) * db * 2, 0);
    std::vector<std::size_t> ma(static_cast<std::size_t>(da) * 2, 0);
    std::vector<std::size_t> mb(static_cast<std::size_t>(db) * 2, 0);
    std::array<std::size_t, 2> ny{0, 0};
    for (std::size_t r = 0; r < n; ++r) {
        const int y = data.labels[r] ? 1 : 0;
        ++joint[(static_cast<std::size_t>(ca[r]) * db + cb[r]) * 2 + y];
        ++ma[ca[r] * 2 + y];
        ++mb[cb[r] * 2 + y];
        ++ny[y];
    }
    double mi = 0.0;
    const double total = static_cast<double>(n);
    for (std::uint32_t i = 0; i < da; ++i) {
        for (std::uint32_t j = 0; j < db; ++j) {
            for (int y = 0; y < 2; ++y) {
                const auto nij = joint[(static_cast<std::size_t>(i) * db + j) * 2 + y];
                if (nij == 0) continue;
                const double num = static_cast<double>(nij) * static_cast<double>(ny[y]);
                const double den = static_cast<double>(ma[i * 2 + y]) * static_cast<double>(mb[j * 2 + y]);
                mi += (static_cast<double>(nij) / total) * std::log(num / den);
            }
        }
    }
    return mi;
}

std::vector<std::pair<std::size_t, std::size_t>> TanStructure::edges() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < parent.size(); ++i) {
        if (parent[i] >= 0) out.emplace_back(static_cast<std::size_t>(parent[i]), i);
    }
    return out;
}

bool TanStructure::is_tree() const {
    const std::size_t n = parent.size();
    if (n == 0) return false;
    std::size_t roots = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (parent[i] < 0) {
            ++roots;
        } else if (static_cast<std::size_t>(parent[i]) >= n || static_cast<std::size_t>(parent[i]) == i) {
            return false;
        }
    }
    if (roots != 1) return false;
    // Every node must reach the root within n steps.
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t steps = 0;
        int cur = static_cast<int>(i);
        while (parent[cur] >= 0 && steps <= n) {
            cur = parent[cur];
            ++steps;
        }
        if (steps > n) return false;
    }
    return true;
}

TanStructure maximum_spanning_tree(const std::vector<std::vector<double>>& weights) {
    const std::size_t n = weights.size();
    if (n == 0) throw std::invalid_argument("spanning tree over zero nodes");
    struct Edge {
        double w;
        std::size_t i, j;
    };
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) edges.push_back({weights[i][j], i, j});
    }
    std::stable_sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) { return a.w > b.w; });

    std::vector<std::size_t> root(n);
    std::iota(root.begin(), root.end(), std::size_t{0});
    const auto find = [&](std::size_t x) {
        while (root[x] != x) x = root[x] = root[root[x]];
        return x;
    };
    std::vector<std::vector<std::size_t>> adj(n);
    for (const auto& e : edges) {
        const auto ri = find(e.i);
        const auto rj = find(e.j);
        if (ri == rj) continue;
        root[ri] = rj;
        adj[e.i].push_back(e.j);
        adj[e.j].push_back(e.i);
    }

    TanStructure s;
    s.parent.assign(n, -1);
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> queue{0};
    seen[0] = true;
    for (std::size_t q = 0; q < queue.size(); ++q) {
        auto next = adj[queue[q]];
        std::sort(next.begin(), next.end());
        for (const auto c : next) {
            if (seen[c]) continue;
            seen[c] = true;
            s.parent[c] = static_cast<int>(queue[q]);
            queue.push_back(c);
        }
    }
    return s;
}

TanStructure learn_structure(const DiscreteData& data) {
    const std::size_t n = data.features();
    if (n < 2) throw std::invalid_argument("TAN structure needs at least two evidence features");
    std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) w[i][j] = w[j][i] = conditional_mutual_information(data, i, j);
    }
    return maximum_spanning_tree(w);
}

double tree_weight(const TanStructure& s, const std::vector<std::vector<double>>& weights) {
    double total = 0.0;
    for (const auto& [p, c] : s.edges()) total += weights[p][c];
    return total;
}

// ---------------------------------------------------------------------------
// Parameters and inference

std::uint32_t TanClassifier::parent_domain(std::size_t node) const {
    const int p = structure.parent.at(node);
    return p < 0 ? 1u : domains.at(static_cast<std::size_t>(p));
}

double TanClassifier::cpt(std::size_t node, std::uint32_t value, std::uint32_t parent_value, int y) const {
    return cpts[node][(static_cast<std::size_t>(parent_value) * 2 + y) * domains[node] + value];
}

double& TanClassifier::cpt_ref(std::size_t node, std::uint32_t value, std::uint32_t parent_value, int y) {
    return cpts[node][(static_cast<std::size_t>(parent_value) * 2 + y) * domains[node] + value];
}

TanClassifier TanClassifier::uniform(std::vector<std::uint32_t> domains, TanStructure structure) {
    if (domains.size() != structure.size()) throw std::invalid_argument("structure and domains differ in size");
    TanClassifier c;
    c.domains = std::move(domains);
    c.structure = std::move(structure);
    c.cpts.resize(c.domains.size());
    for (std::size_t i = 0; i < c.domains.size(); ++i) {
        c.cpts[i].assign(static_cast<std::size_t>(c.parent_domain(i)) * 2 * c.domains[i], 1.0 / c.domains[i]);
    }
    return c;
}

double TanClassifier::node_log_ratio(std::size_t node, std::span<const std::int64_t> values, bool* fallback) const {
    const auto in_domain = [&](std::size_t i) { return values[i] >= 0 && values[i] < domains[i]; };
    const int p = structure.parent[node];
    if (!in_domain(node) || (p >= 0 && !in_domain(static_cast<std::size_t>(p)))) {
        if (fallback) *fallback = true;
        return 0.0;
    }
    const auto v = static_cast<std::uint32_t>(values[node]);
    const auto u = p < 0 ? 0u : static_cast<std::uint32_t>(values[static_cast<std::size_t>(p)]);
    return std::log(cpt(node, v, u, 1)) - std::log(cpt(node, v, u, 0));
}

double TanClassifier::prior_log_odds() const { return std::log(prior[1]) - std::log(prior[0]); }

double TanClassifier::log_odds(std::span<const std::int64_t> values, bool* fallback) const {
    if (values.size() != domains.size()) throw std::invalid_argument("evidence arity does not match model");
    double lo = prior_log_odds();
    for (std::size_t i = 0; i < domains.size(); ++i) lo += node_log_ratio(i, values, fallback);
    return lo;
}

double logistic(double log_odds) {
    const double p = log_odds >= 0 ? 1.0 / (1.0 + std::exp(-log_odds))
                                   : std::exp(log_odds) / (1.0 + std::exp(log_odds));
    return std::clamp(p, kProbabilityFloor, 1.0 - kProbabilityFloor);
}

double TanClassifier::predict_proba(std::span<const std::int64_t> values, bool* fallback) const {
    return logistic(log_odds(values, fallback));
}

TanClassifier estimate_cpts(const DiscreteData& data, const TanStructure& structure, double alpha) {
    if (alpha < 0.0) throw std::invalid_argument("smoothing alpha must be non-negative");
    auto c = TanClassifier::uniform(data.domains, structure);
    std::array<double, 2> ny{0.0, 0.0};
    for (const auto y : data.labels) ny[y ? 1 : 0] += 1.0;
    const double n = ny[0] + ny[1];
    for (int y = 0; y < 2; ++y) {
        c.prior[y] = n + 2 * alpha > 0 ? (ny[y] + alpha) / (n + 2 * alpha) : 0.5;
    }

    for (std::size_t i = 0; i < data.features(); ++i) {
        const int p = structure.parent[i];
        const auto di = data.domains[i];
        const auto du = c.parent_domain(i);
        std::vector<double> counts(static_cast<std::size_t>(du) * 2 * di, 0.0);
        for (std::size_t r = 0; r < data.rows(); ++r) {
            const auto u = p < 0 ? 0u : data.columns[static_cast<std::size_t>(p)][r];
            const int y = data.labels[r] ? 1 : 0;
            counts[(static_cast<std::size_t>(u) * 2 + y) * di + data.columns[i][r]] += 1.0;
        }
        for (std::uint32_t u = 0; u < du; ++u) {
            for (int y = 0; y < 2; ++y) {
                const std::size_t base = (static_cast<std::size_t>(u) * 2 + y) * di;
                double total = 0.0;
                for (std::uint32_t v = 0; v < di; ++v) total += counts[base + v];
                const double denom = total + alpha * di;
                for (std::uint32_t v = 0; v < di; ++v) {
                    c.cpts[i][base + v] = denom > 0.0 ? (counts[base + v] + alpha) / denom : 1.0 / di;
                }
            }
        }
    }
    return c;
}

// ---------------------------------------------------------------------------
// Knowledge-tracing model

namespace {

std::uint32_t domain_of(Feature f, const Discretizer& d, const FeatureDomains& domains) {
    switch (f) {
        case Feature::skill: return domains.skills;
        case Feature::mastery: return static_cast<std::uint32_t>(d.bin_count());
        case Feature::profile: return domains.profiles;
        case Feature::difficulty: return domains.difficulties;
    }
    return 1;
}

// Profile labels start at 1; all other categorical values are used as-is.
std::int64_t raw_value(Feature f, const Evidence& e, const Discretizer& d) {
    switch (f) {
        case Feature::skill: return e.skill;
        case Feature::mastery:
            if (!(e.mastery >= 0.0 && e.mastery <= 1.0)) return -1;
            return d.bin(e.mastery);
        case Feature::profile: return e.profile - 1;
        case Feature::difficulty: return e.difficulty;
    }
    return -1;
}

std::string describe(const TanModel& m, std::size_t node, std::int64_t value, const Evidence& e) {
    const Feature f = m.features[node];
    std::ostringstream os;
    switch (f) {
        case Feature::skill:
            if (value >= 0 && static_cast<std::size_t>(value) < m.skill_labels.size()) {
                os << m.skill_labels[static_cast<std::size_t>(value)];
            } else {
                os << e.skill;
            }
            break;
        case Feature::mastery: {
            os << io::format_fixed(e.mastery, 6);
            if (value >= 0) {
                const auto& cuts = m.discretizer.cutpoints;
                const auto b = static_cast<std::size_t>(value);
                os << " bin " << b << ' ' << (b == 0 ? std::string("(-inf") : "(" + io::format_fixed(cuts[b - 1], 6))
                   << ',' << (b == cuts.size() ? std::string("inf)") : io::format_fixed(cuts[b], 6) + "]");
            }
            break;
        }
        case Feature::profile: os << e.profile; break;
        case Feature::difficulty: os << e.difficulty; break;
    }
    return os.str();
}

}  // namespace

std::vector<std::int64_t> TanModel::encode(const Evidence& e) const {
    std::vector<std::int64_t> values(features.size());
    for (std::size_t i = 0; i < features.size(); ++i) {
        auto v = raw_value(features[i], e, discretizer);
        if (v < 0 || v >= classifier.domains[i]) v = -1;
        values[i] = v;
    }
    return values;
}

DiscreteData discretize(std::span<const FeatureRow> rows, std::span<const Feature> features,
                        const Discretizer& discretizer, const FeatureDomains& domains) {
    DiscreteData data;
    data.labels.reserve(rows.size());
    for (const auto& r : rows) data.labels.push_back(r.label);
    for (const auto f : features) {
        const auto dom = domain_of(f, discretizer, domains);
        std::vector<std::uint32_t> col;
        col.reserve(rows.size());
        for (const auto& r : rows) {
            const auto v = raw_value(f, Evidence::from_row(r), discretizer);
            if (v < 0 || v >= dom) {
                throw std::out_of_range(std::string("training value outside domain of ") +
                                        std::string(feature_name(f)));
            }
            col.push_back(static_cast<std::uint32_t>(v));
        }
        data.columns.push_back(std::move(col));
        data.domains.push_back(dom);
    }
    return data;
}

TanModel fit_tan(std::span<const FeatureRow> rows, std::span<const Feature> features,
                 const FeatureDomains& domains, double alpha) {
    if (rows.empty()) throw InputError("no training rows for the TAN model");
    TanModel m;
    m.features.assign(features.begin(), features.end());
    m.alpha = alpha;
    if (std::find(features.begin(), features.end(), Feature::mastery) != features.end()) {
        m.discretizer = fit_discretizer(rows);
    }
    const auto data = discretize(rows, features, m.discretizer, domains);
    m.classifier = estimate_cpts(data, learn_structure(data), alpha);
    return m;
}

double predict_proba(const TanModel& model, const Evidence& evidence) {
    return model.classifier.predict_proba(model.encode(evidence));
}

std::array<double, 2> class_distribution(const TanModel& model, const Evidence& evidence) {
    const double p1 = predict_proba(model, evidence);
    return {1.0 - p1, p1};
}

Explanation explain(const TanModel& model, const Evidence& evidence) {
    const auto values = model.encode(evidence);
    const auto& c = model.classifier;
    Explanation ex;
    ex.prior_log_odds = c.prior_log_odds();
    ex.log_odds = ex.prior_log_odds;
    for (std::size_t i = 0; i < model.features.size(); ++i) {
        NodeContribution nc;
        nc.feature = model.features[i];
        nc.value = describe(model, i, values[i], evidence);
        const int p = c.structure.parent[i];
        if (p >= 0) {
            nc.parent = model.features[static_cast<std::size_t>(p)];
            nc.parent_value = describe(model, static_cast<std::size_t>(p), values[static_cast<std::size_t>(p)], evidence);
        }
        nc.log_ratio = c.node_log_ratio(i, values, &nc.fallback);
        ex.flagged = ex.flagged || nc.fallback;
        ex.log_odds += nc.log_ratio;
        ex.nodes.push_back(std::move(nc));
    }
    ex.probability = logistic(ex.log_odds);
    return ex;
}

std::string format_explanation(const Explanation& e) {
    std::ostringstream os;
    os << "probability=" << io::format_fixed(e.probability, 6) << '\n';
    os << "log_odds=" << io::format_exact(e.log_odds) << '\n';
    os << "prior_log_odds=" << io::format_exact(e.prior_log_odds) << '\n';
    os << "flagged=" << (e.flagged ? 1 : 0) << '\n';
    os << "node\tvalue\tparent\tparent_value\tlog_ratio\tfallback\n";
    for (const auto& n : e.nodes) {
        os << feature_name(n.feature) << '\t' << n.value << '\t'
           << (n.parent ? std::string(feature_name(*n.parent)) : std::string("-")) << '\t'
           << (n.parent ? n.parent_value : std::string("-")) << '\t' << io::format_exact(n.log_ratio) << '\t'
           << (n.fallback ? 1 : 0) << '\n';
    }
    if (e.flagged) os << "note: out-of-domain evidence replaced by a uniform CPT column\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// Serialization

namespace {
constexpr std::string_view kMagic = "ikt-tan-model 1";
}

std::string serialize(const TanModel& m) {
    const auto& c = m.classifier;
    std::ostringstream os;
    os << kMagic << '\n';
    os << "features";
    for (const auto f : m.features) os << ' ' << feature_name(f);
    os << '\n';
    os << "alpha " << io::format_exact(m.alpha) << '\n';
    os << "cutpoints " << m.discretizer.cutpoints.size();
    for (const auto x : m.discretizer.cutpoints) os << ' ' << io::format_exact(x);
    os << '\n';
    os << "domains";
    for (const auto d : c.domains) os << ' ' << d;
    os << '\n';
    os << "parents";
    for (const auto p : c.structure.parent) os << ' ' << p;
    os << '\n';
    os << "prior " << io::format_exact(c.prior[0]) << ' ' << io::format_exact(c.prior[1]) << '\n';
    for (std::size_t i = 0; i < c.cpts.size(); ++i) {
        os << "cpt " << i << ' ' << c.cpts[i].size() << '\n';
        for (std::size_t k = 0; k < c.cpts[i].size(); ++k) {
            os << (k ? " " : "") << io::format_exact(c.cpts[i][k]);
        }
        os << '\n';
    }
    os << "skill_labels " << m.skill_labels.size() << '\n';
    for (const auto& l : m.skill_labels) os << l << '\n';
    os << "end\n";
    return os.str();
}

TanModel deserialize(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    const auto fail = [](const std::string& what) -> InputError { return InputError("TAN model: " + what); };
    if (!std::getline(in, line) || io::trim(line) != kMagic) throw fail("unrecognised header");

    TanModel m;
    auto& c = m.classifier;
    std::string key;
    while (in >> key) {
        if (key == "features") {
            std::getline(in, line);
            std::istringstream ls(line);
            std::string name;
            while (ls >> name) {
                const auto f = parse_feature(name);
                if (!f) throw fail("unknown feature '" + name + "'");
                m.features.push_back(*f);
            }
        } else if (key == "alpha") {
            std::string v;
            in >> v;
            if (!io::parse_double(v, m.alpha)) throw fail("bad alpha");
        } else if (key == "cutpoints") {
            std::size_t n = 0;
            in >> n;
            for (std::size_t i = 0; i < n; ++i) {
                std::string v;
                double x = 0.0;
                if (!(in >> v) || !io::parse_double(v, x)) throw fail("bad cutpoint");
                m.discretizer.cutpoints.push_back(x);
            }
        } else if (key == "domains" || key == "parents") {
            std::getline(in, line);
            std::istringstream ls(line);
            long long v = 0;
            while (ls >> v) {
                if (key == "domains") {
                    if (v <= 0) throw fail("non-positive domain");
                    c.domains.push_back(static_cast<std::uint32_t>(v));
                } else {
                    c.structure.parent.push_back(static_cast<int>(v));
                }
            }
        } else if (key == "prior") {
            std::string a, b;
            in >> a >> b;
            if (!io::parse_double(a, c.prior[0]) || !io::parse_double(b, c.prior[1])) throw fail("bad prior");
        } else if (key == "cpt") {
            std::size_t node = 0, n = 0;
            in >> node >> n;
            if (node != c.cpts.size()) throw fail("CPTs out of order");
            std::vector<double> table(n);
            for (auto& x : table) {
                std::string v;
                if (!(in >> v) || !io::parse_double(v, x)) throw fail("bad CPT entry");
            }
            c.cpts.push_back(std::move(table));
        } else if (key == "skill_labels") {
            std::size_t n = 0;
            in >> n;
            std::getline(in, line);
            for (std::size_t i = 0; i < n; ++i) {
                if (!std::getline(in, line)) throw fail("truncated skill labels");
                m.skill_labels.push_back(line);
            }
        } else if (key == "end") {
            break;
        } else {
            throw fail("unknown section '" + key + "'");
        }
    }
    if (key != "end") throw fail("missing end marker");
    if (m.features.size() != c.domains.size() || c.domains.size() != c.structure.size() ||
        c.cpts.size() != c.domains.size()) {
        throw fail("section sizes disagree");
    }
    if (!c.structure.is_tree()) throw fail("parent map is not a tree");
    for (std::size_t i = 0; i < c.cpts.size(); ++i) {
        if (c.cpts[i].size() != static_cast<std::size_t>(c.parent_domain(i)) * 2 * c.domains[i]) {
            throw fail("CPT " + std::to_string(i) + " has the wrong size");
        }
    }
    const auto mastery = std::find(m.features.begin(), m.features.end(), Feature::mastery);
    if (mastery != m.features.end() &&
        c.domains[static_cast<std::size_t>(mastery - m.features.begin())] != m.discretizer.bin_count()) {
        throw fail("mastery domain does not match cutpoints");
    }
    return m;
}

}  // namespace ikt::tan
