#include "ikt/bkt.hpp"

#include "ikt/errors.hpp"
#include "ikt/table_io.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace ikt::bkt {

double posterior_given_obs(const BktParams& p, double prior, int obs) {
    const double mastered = obs ? prior * (1.0 - p.s) : prior * p.s;
    const double unmastered = obs ? (1.0 - prior) * p.g : (1.0 - prior) * (1.0 - p.g);
    const double denom = mastered + unmastered;
    if (!(denom > 0.0)) return prior;
    return mastered / denom;
}

double advance(const BktParams& p, double posterior) {
    return posterior + (1.0 - posterior) * p.t;
}

double MasteryState::observe(const BktParams& p, int obs) {
    const double m = mastered_ * (obs ? 1.0 - p.s : p.s);
    const double u = unmastered_ * (obs ? p.g : 1.0 - p.g);
    const double c = m + u;
    if (!(c > 0.0)) return c;
    mastered_ = (m + u * p.t) / c;
    unmastered_ = u * (1.0 - p.t) / c;
    return c;
}

std::vector<double> trace_mastery(const BktParams& p, Responses responses) {
    std::vector<double> trace;
    trace.reserve(responses.size());
    MasteryState state(p);
    for (const auto r : responses) {
        trace.push_back(state.prior());
        state.observe(p, r);
    }
    return trace;
}

double sequence_log_likelihood(const BktParams& p, Responses responses) {
    double ll = 0.0;
    MasteryState state(p);
    for (const auto r : responses) ll += std::log(state.observe(p, r));
    return ll;
}

std::vector<double> FitGrid::values(double cap) const {
    if (!(step > 0.0) || step >= 1.0) throw InputError("grid step must lie in (0, 1)");
    std::vector<double> out;
    for (int k = 1;; ++k) {
        // Round to kill accumulated binary error so 0.05*k lands on 0.30 etc.
        const double v = std::round(k * step * 1e9) / 1e9;
        if (v >= 1.0 || v > cap + 1e-12) break;
        out.push_back(v);
    }
    if (out.empty()) throw InputError("grid cap leaves no admissible values");
    return out;
}

namespace {

struct DistinctSequence {
    const std::vector<std::uint8_t>* responses;
    double weight;
    std::size_t correct;
};

std::vector<DistinctSequence> distinct_sequences(std::span<const std::vector<std::uint8_t>> sequences,
                                                 std::map<std::vector<std::uint8_t>, std::size_t>& counts) {
    for (const auto& seq : sequences) {
        if (!seq.empty()) ++counts[seq];
    }
    std::vector<DistinctSequence> out;
    out.reserve(counts.size());
    for (const auto& [seq, n] : counts) {
        const auto correct = static_cast<std::size_t>(std::count(seq.begin(), seq.end(), 1));
        out.push_back({&seq, static_cast<double>(n), correct});
    }
    return out;
}

// log(w*exp(log_a) + (1-w)*exp(log_b)) given log(w) and log(1-w).
double log_mix(double log_w, double log_1mw, double log_a, double log_b) {
    const double x = log_w + log_a;
    const double y = log_1mw + log_b;
    const double hi = std::max(x, y);
    if (hi == -std::numeric_limits<double>::infinity()) return hi;
    return hi + std::log(std::exp(x - hi) + std::exp(y - hi));
}

// The likelihood is linear in the initial state distribution, so
// LL(l0) = log(l0 * P(r | mastered) + (1 - l0) * P(r | unmastered)).
// Mastery is absorbing, which makes P(r | mastered) closed-form.
struct StartConditioned {
    double log_from_mastered;
    double log_from_unmastered;
};

StartConditioned start_conditioned(double t, double g, double s, const DistinctSequence& d) {
    const auto n = d.responses->size();
    const auto wrong = n - d.correct;
    const double from_mastered = static_cast<double>(d.correct) * std::log1p(-s) +
                                 static_cast<double>(wrong) * std::log(s);
    const double from_unmastered = sequence_log_likelihood({0.0, t, g, s}, *d.responses);
    return {from_mastered, from_unmastered};
}

}  // namespace

double total_log_likelihood(const BktParams& p, std::span<const std::vector<std::uint8_t>> sequences) {
    std::map<std::vector<std::uint8_t>, std::size_t> counts;
    const auto distinct = distinct_sequences(sequences, counts);
    double total = 0.0;
    for (const auto& d : distinct) {
        const auto sc = start_conditioned(p.t, p.g, p.s, d);
        total += d.weight * log_mix(std::log(p.l0), std::log1p(-p.l0), sc.log_from_mastered,
                                    sc.log_from_unmastered);
    }
    return total;
}

std::optional<BktParams> fit_skill(std::span<const std::vector<std::uint8_t>> sequences,
                                   const FitGrid& grid) {
    std::map<std::vector<std::uint8_t>, std::size_t> counts;
    const auto distinct = distinct_sequences(sequences, counts);
    if (distinct.empty()) return std::nullopt;

    const auto l0s = grid.values(grid.l0_cap);
    const auto ts = grid.values(grid.t_cap);
    const auto gs = grid.values(grid.g_cap);
    const auto ss = grid.values(grid.s_cap);
    std::vector<double> log_l0(l0s.size()), log_1ml0(l0s.size());
    for (std::size_t i = 0; i < l0s.size(); ++i) {
        log_l0[i] = std::log(l0s[i]);
        log_1ml0[i] = std::log1p(-l0s[i]);
    }

    // scores[((l0 * |t| + t) * |g| + g) * |s| + s]
    std::vector<double> scores(l0s.size() * ts.size() * gs.size() * ss.size(), 0.0);
    std::vector<StartConditioned> conditioned(distinct.size());
    for (std::size_t ti = 0; ti < ts.size(); ++ti) {
        for (std::size_t gi = 0; gi < gs.size(); ++gi) {
            for (std::size_t si = 0; si < ss.size(); ++si) {
                for (std::size_t d = 0; d < distinct.size(); ++d) {
                    conditioned[d] = start_conditioned(ts[ti], gs[gi], ss[si], distinct[d]);
                }
                for (std::size_t li = 0; li < l0s.size(); ++li) {
                    double total = 0.0;
                    for (std::size_t d = 0; d < distinct.size(); ++d) {
                        total += distinct[d].weight * log_mix(log_l0[li], log_1ml0[li],
                                                              conditioned[d].log_from_mastered,
                                                              conditioned[d].log_from_unmastered);
                    }
                    scores[((li * ts.size() + ti) * gs.size() + gi) * ss.size() + si] = total;
                }
            }
        }
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i < scores.size(); ++i) {
        if (scores[i] > scores[best]) best = i;
    }
    const auto si = best % ss.size();
    const auto gi = (best / ss.size()) % gs.size();
    const auto ti = (best / (ss.size() * gs.size())) % ts.size();
    const auto li = best / (ss.size() * gs.size() * ts.size());
    return BktParams{l0s[li], ts[ti], gs[gi], ss[si]};
}

BktParams mean_params(std::span<const BktParams> fitted) {
    if (fitted.empty()) return BktParams{};
    BktParams m{0.0, 0.0, 0.0, 0.0};
    for (const auto& p : fitted) {
        m.l0 += p.l0;
        m.t += p.t;
        m.g += p.g;
        m.s += p.s;
    }
    const double n = static_cast<double>(fitted.size());
    return {m.l0 / n, m.t / n, m.g / n, m.s / n};
}

std::string format_param_table(std::span<const SkillParams> rows) {
    std::ostringstream os;
    os << "skill_id\tl0\tt\tg\ts\n";
    for (const auto& r : rows) {
        os << r.skill_id << '\t' << io::format_fixed(r.params.l0, 6) << '\t'
           << io::format_fixed(r.params.t, 6) << '\t' << io::format_fixed(r.params.g, 6) << '\t'
           << io::format_fixed(r.params.s, 6) << '\n';
    }
    return os.str();
}

std::vector<SkillParams> parse_param_table(const std::string& text) {
    std::vector<SkillParams> out;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 || io::trim(line).empty()) continue;
        const auto f = io::split_delimited(line, '\t');
        SkillParams sp;
        if (f.size() != 5 || !io::parse_double(f[1], sp.params.l0) || !io::parse_double(f[2], sp.params.t) ||
            !io::parse_double(f[3], sp.params.g) || !io::parse_double(f[4], sp.params.s)) {
            throw InputError("parameter table line " + std::to_string(line_no) + " is malformed");
        }
        sp.skill_id = f[0];
        out.push_back(std::move(sp));
    }
    return out;
}

}  // namespace ikt::bkt
