#include "adbn/learning.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "adbn/validate.hpp"

namespace adbn {

namespace {

/// Largest |delta_i * delta_j| over distinct pairs: the product of the two
/// largest magnitudes.
double top_two_product(const std::vector<ParamDelta>& items) {
    double first = 0.0, second = 0.0;
    for (const ParamDelta& item : items) {
        double a = std::abs(item.delta);
        if (a > first) {
            second = first;
            first = a;
        } else if (a > second) {
            second = a;
        }
    }
    return first * second;
}

ParamDelta raw_item(const ParamRef& ref, const GaussianParam& p, double delta) {
    double var = p.std * p.std;
    return {ref, delta, p.mean + delta, var - delta * delta, kNone};
}

}  // namespace

bool nonnegative_on_unit_box(const LinearWeight& w) {
    double worst = w.a;
    for (int i = 0; i < w.b.size(); ++i) worst += std::min(0.0, w.b[i]);
    return worst >= 0.0;
}

UpdateDelta linear_gaussian_moments(const LinearWeight& w,
                                    const std::vector<GaussianParam>& params) {
    if (static_cast<size_t>(w.b.size()) != params.size()) {
        throw EngineError("weight and parameter counts differ");
    }
    double denom = w.a;
    for (size_t i = 0; i < params.size(); ++i) denom += w.b[i] * params[i].mean;
    if (denom <= 0.0) throw EngineError("evidence weight is not positive at the means");

    UpdateDelta out;
    for (size_t i = 0; i < params.size(); ++i) {
        double var = params[i].std * params[i].std;
        out.items.push_back(raw_item({}, params[i], var * w.b[i] / denom));
    }
    out.max_abs_cov = top_two_product(out.items);
    return out;
}

UpdateDelta general_cpt_delta(const TabularCpd& cpd, const MessageSet& msgs) {
    int node = cpd.child;
    const Eigen::VectorXd& lam = msgs.lambda[node];
    const Eigen::VectorXd& pi = msgs.pi[node];
    double denom = lam.dot(pi);
    if (denom <= 0.0) throw EngineError("zero case weight at the parameter means");

    UpdateDelta out;
    ConfigSpace space = cpd.config_space();
    std::vector<int> states(cpd.parents.size(), 0);
    long long cfg = 0;
    do {
        double w = 1.0;
        for (size_t s = 0; s < states.size(); ++s) {
            w *= msgs.pi_from_parent[node][s][states[s]];
        }
        for (int x = 1; x < cpd.child_card; ++x) {
            const GaussianParam& p = cpd.at(cfg, x);
            double var = p.std * p.std;
            double delta = var * (lam[x] - lam[0]) * w / denom;
            out.items.push_back(raw_item({node, ParamRef::Kind::Table, cfg, -1, 0, x}, p, delta));
        }
        ++cfg;
    } while (space.advance(states));
    out.max_abs_cov = top_two_product(out.items);
    return out;
}

UpdateDelta noisy_max_delta(const NoisyMaxCpd& cpd, const MessageSet& msgs,
                            const QProfile& qprof) {
    int node = cpd.child;
    int g = cpd.g_child;
    const Eigen::VectorXd& lam = msgs.lambda[node];
    double denom = lam.dot(msgs.pi[node]);
    if (denom <= 0.0) throw EngineError("zero case weight at the parameter means");
    int m = static_cast<int>(qprof.per_link.size());
    if (m != cpd.num_effective_links()) throw EngineError("gate profile does not match family");

    // suffix products of the per-link cumulative vectors
    std::vector<Eigen::VectorXd> suf(m + 1, Eigen::VectorXd::Ones(g + 1));
    for (int e = m - 1; e >= 0; --e) suf[e] = qprof.per_link[e].cwiseProduct(suf[e + 1]);

    UpdateDelta out;
    Eigen::VectorXd pre = Eigen::VectorXd::Ones(g + 1);
    for (int e = 0; e < m; ++e) {
        Eigen::VectorXd other = pre.cwiseProduct(suf[e + 1]);

        // prefix[x] accumulates sum of (lambda drop * other) up to x; its
        // value at x-1 drives the delta of the state-x parameters.
        Eigen::VectorXd prefix(g + 1);
        double acc = 0.0;
        for (int x = 0; x <= g; ++x) {
            double r = (x < g) ? (lam[x] - lam[x + 1]) * other[x] : lam[g] * other[g];
            acc += r;
            prefix[x] = acc;
        }

        if (e < cpd.num_links()) {
            const NoisyMaxLink& link = cpd.links[e];
            const Eigen::VectorXd& pimsg = msgs.pi_from_parent[node][e];
            for (int u = 1; u <= link.g_u; ++u) {
                for (int x = 1; x <= g; ++x) {
                    const GaussianParam& p = cpd.link_param(e, u, x);
                    double var = p.std * p.std;
                    double delta = -var * pimsg[u] * prefix[x - 1] / denom;
                    out.items.push_back(
                        raw_item({node, ParamRef::Kind::MaxLink, 0, e, u, x}, p, delta));
                }
            }
        } else {
            for (int x = 1; x <= g; ++x) {
                const GaussianParam& p = cpd.leak_param(x);
                double var = p.std * p.std;
                double delta = -var * prefix[x - 1] / denom;
                out.items.push_back(raw_item({node, ParamRef::Kind::Leak, 0, -1, 0, x}, p, delta));
            }
        }
        pre = pre.cwiseProduct(qprof.per_link[e]);
    }
    out.max_abs_cov = top_two_product(out.items);
    return out;
}

double binary_or_delta(const GaussianParam& link, double pi_present, double lambda_absent,
                       double lambda_present) {
    double rise = lambda_present - lambda_absent;
    double denom = lambda_absent + rise * pi_present * link.mean;
    if (denom <= 0.0) throw EngineError("zero case weight at the parameter means");
    return link.std * link.std * pi_present * rise / denom;
}

namespace {

struct Committer {
    const Network& old_net;
    Network net;
    const Options& opts;
    std::vector<ParamDelta> items;
    std::map<ParamRef, size_t> index;

    size_t entry(const ParamRef& ref) {
        auto it = index.find(ref);
        if (it != index.end()) return it->second;
        const GaussianParam& p = get_param(old_net, ref);
        items.push_back({ref, 0.0, p.mean, p.std * p.std, kNone});
        index.emplace(ref, items.size() - 1);
        return items.size() - 1;
    }

    void commit(const ParamRef& ref, double raw_delta) {
        GaussianParam p = get_param(old_net, ref);
        double applied = opts.gamma * raw_delta;
        ParamDelta& item = items[entry(ref)];
        item.delta = applied;
        item.new_mean = p.mean + applied;
        if (item.new_mean < opts.mean_eps) {
            item.new_mean = opts.mean_eps;
            item.flags |= kMeanClamped;
        } else if (item.new_mean > 1.0 - opts.mean_eps) {
            item.new_mean = 1.0 - opts.mean_eps;
            item.flags |= kMeanClamped;
        }
        double var = p.std * p.std;
        item.new_var = var - applied * applied;
        if (var == 0.0) {
            item.new_var = 0.0;  // exactly known values stay point masses
        } else if (item.new_var < opts.var_floor) {
            item.new_var = opts.var_floor;
            item.flags |= kVarFloored;
        }
        store(item);
    }

    void store(const ParamDelta& item) {
        set_param(net, item.ref, {item.new_mean, std::sqrt(std::max(0.0, item.new_var))});
    }

    /// Pulls a whole column (a parent configuration of a table, one cause
    /// state of a link, or the leak) back when its means sum past 1 - eps.
    void rescale_column(const std::vector<ParamRef>& refs) {
        double sum = 0.0;
        for (const ParamRef& ref : refs) sum += get_param(net, ref).mean;
        double limit = 1.0 - opts.mean_eps;
        if (sum <= limit) return;
        double scale = limit / sum;
        for (const ParamRef& ref : refs) {
            ParamDelta& item = items[entry(ref)];
            item.new_mean = get_param(net, ref).mean * scale;
            item.flags |= kColumnRescaled;
            store(item);
        }
    }

    void rescale_all() {
        for (int node = 0; node < net.num_nodes(); ++node) {
            if (const auto* t = std::get_if<TabularCpd>(&net.cpds[node])) {
                for (long long cfg = 0; cfg < t->num_configs(); ++cfg) {
                    std::vector<ParamRef> column;
                    for (int x = 1; x < t->child_card; ++x) {
                        column.push_back({node, ParamRef::Kind::Table, cfg, -1, 0, x});
                    }
                    rescale_column(column);
                }
                continue;
            }
            const auto& m = std::get<NoisyMaxCpd>(net.cpds[node]);
            for (int li = 0; li < m.num_links(); ++li) {
                for (int u = 1; u <= m.links[li].g_u; ++u) {
                    std::vector<ParamRef> column;
                    for (int x = 1; x <= m.g_child; ++x) {
                        column.push_back({node, ParamRef::Kind::MaxLink, 0, li, u, x});
                    }
                    rescale_column(column);
                }
            }
            if (m.has_leak()) {
                std::vector<ParamRef> column;
                for (int x = 1; x <= m.g_child; ++x) {
                    column.push_back({node, ParamRef::Kind::Leak, 0, -1, 0, x});
                }
                rescale_column(column);
            }
        }
    }
};

}  // namespace

std::pair<Network, std::vector<ParamDelta>> apply_deltas(
    const Network& net, const std::vector<std::pair<ParamRef, double>>& raw,
    const Options& opts) {
    Committer committer{net, net, opts, {}, {}};
    for (const auto& [ref, delta] : raw) committer.commit(ref, delta);
    committer.rescale_all();
    return {std::move(committer.net), std::move(committer.items)};
}

CaseOutcome apply_case(const Network& net, const CaseRecord& record, const Options& opts) {
    CaseOutcome out{net, {}};
    MessageSet msgs;
    try {
        msgs = propagate(net, record, opts);
    } catch (const ZeroEvidenceError& e) {
        out.report.error = e.what();
        return out;
    }
    out.report.evidence_probability = msgs.evidence_probability;

    std::vector<std::pair<ParamRef, double>> raw;
    double first = 0.0, second = 0.0;
    for (int node = 0; node < net.num_nodes(); ++node) {
        UpdateDelta fam;
        if (const auto* t = std::get_if<TabularCpd>(&net.cpds[node])) {
            fam = general_cpt_delta(*t, msgs);
        } else {
            fam = noisy_max_delta(std::get<NoisyMaxCpd>(net.cpds[node]), msgs,
                                  msgs.q_profile[node]);
        }
        for (const ParamDelta& item : fam.items) {
            if (item.delta == 0.0) continue;
            raw.emplace_back(item.ref, item.delta);
            double a = std::abs(opts.gamma * item.delta);
            if (a > first) {
                second = first;
                first = a;
            } else if (a > second) {
                second = a;
            }
        }
    }
    out.report.max_abs_cov = first * second;

    auto [committed, items] = apply_deltas(net, raw, opts);
    ValidationReport check = validate_network(committed, opts);
    if (!check.ok()) {
        out.report.error = "post-update validation failed:\n" + check.summary();
        return out;
    }
    for (const ValidationIssue& issue : check.warnings) {
        out.report.post_warnings.push_back(issue.where + ": " + issue.message);
    }
    out.net = std::move(committed);
    out.report.accepted = true;
    out.report.updates = std::move(items);
    return out;
}

}  // namespace adbn
