#include "adbn/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "adbn/io.hpp"
#include "adbn/oracle.hpp"

namespace adbn::cli {

namespace {

using nlohmann::json;

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// Loads, parses and validates a network file; throws with a readable
/// message on any failure.
Network load_network(const std::string& path, const Options& opts) {
    NetworkParseResult result = parse_network(read_file(path), opts);
    if (!result.errors.empty()) {
        throw IoError(path + ":\n" + format_issues(result.errors));
    }
    if (!result.validation.ok()) {
        throw InvalidNetworkError(path + ":\n" + result.validation.summary());
    }
    return std::move(*result.network);
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
    } else {
        write_file(out_path, text);
    }
}

std::vector<CaseEntry> inline_case(const Network& net, const std::vector<std::string>& pairs) {
    CaseEntry entry;
    entry.id = "inline";
    for (const std::string& pair : pairs) {
        size_t eq = pair.find('=');
        if (eq == std::string::npos) {
            throw IoError("evidence must look like VAR=STATE, got '" + pair + "'");
        }
        std::string var = pair.substr(0, eq), state = pair.substr(eq + 1);
        int node = net.node_index(var);
        if (node < 0) throw IoError("unknown variable '" + var + "'");
        int idx = -1;
        for (int s = 0; s < net.cardinality(node); ++s) {
            if (net.variables[node].states[s] == state) idx = s;
        }
        if (idx < 0) throw IoError("unknown state '" + state + "' of '" + var + "'");
        entry.record.assignments[node] = idx;
    }
    return {entry};
}

std::vector<CaseEntry> load_cases(const Network& net, const std::string& path) {
    CaseParseResult result = parse_cases(read_file(path), net);
    if (!result.ok()) throw IoError(path + ":\n" + format_issues(result.errors));
    return std::move(result.cases);
}

std::vector<int> resolve_queries(const Network& net, const std::vector<std::string>& names) {
    std::vector<int> nodes;
    if (names.empty()) {
        for (int i = 0; i < net.num_nodes(); ++i) nodes.push_back(i);
        return nodes;
    }
    for (const std::string& name : names) {
        int node = net.node_index(name);
        if (node < 0) throw IoError("unknown variable '" + name + "'");
        nodes.push_back(node);
    }
    return nodes;
}

/// One output line per case: id, evidence probability and the queried
/// marginals (state order follows the network document).
std::string marginal_line(const std::string& id, double evidence, const Network& net,
                          const std::vector<int>& queries,
                          const std::vector<Eigen::VectorXd>& marginals) {
    std::string out = "{\"evidence_probability\":" + format_double(evidence) +
                      ",\"id\":" + json(id).dump() + ",\"marginals\":{";
    std::vector<std::pair<std::string, int>> named;
    for (size_t i = 0; i < queries.size(); ++i) {
        named.emplace_back(net.variables[queries[i]].name, static_cast<int>(i));
    }
    std::sort(named.begin(), named.end());
    for (size_t i = 0; i < named.size(); ++i) {
        if (i) out += ',';
        out += json(named[i].first).dump();
        out += ":[";
        const Eigen::VectorXd& m = marginals[named[i].second];
        for (int s = 0; s < m.size(); ++s) {
            if (s) out += ',';
            out += format_double(m[s]);
        }
        out += ']';
    }
    out += "}}";
    return out;
}

std::string error_line(const std::string& id, const std::string& message) {
    return "{\"error\":" + json(message).dump() + ",\"id\":" + json(id).dump() + "}";
}

int run_infer(const Network& net, const std::vector<CaseEntry>& cases,
              const std::vector<int>& queries, const Options& opts, bool oracle,
              const std::string& out_path) {
    std::string out;
    int failures = 0;
    JointTable joint;
    if (oracle) joint = enumerate_joint(net, opts);
    for (const CaseEntry& entry : cases) {
        try {
            double evidence = 0.0;
            std::vector<Eigen::VectorXd> marginals;
            if (oracle) {
                OracleResult res = oracle_conditional(joint, entry.record);
                if (res.evidence_probability <= 0.0) {
                    throw ZeroEvidenceError("(joint enumeration)");
                }
                evidence = res.evidence_probability;
                for (int q : queries) marginals.push_back(res.marginals[q]);
            } else {
                MessageSet msgs = propagate(net, entry.record, opts);
                evidence = msgs.evidence_probability;
                for (int q : queries) marginals.push_back(posterior_marginal(msgs, q));
            }
            out += marginal_line(entry.id, evidence, net, queries, marginals);
        } catch (const EngineError& e) {
            out += error_line(entry.id, e.what());
            ++failures;
        }
        out += '\n';
    }
    emit(out, out_path);
    return failures == 0 ? 0 : 1;
}

int run_learn(Network net, const std::vector<CaseEntry>& cases, const Options& opts,
              const std::string& net_out, const std::string& report_out) {
    std::vector<CaseReport> reports;
    long long seq = 0;
    int accepted = 0;
    for (const CaseEntry& entry : cases) {
        CaseOutcome outcome = apply_case(net, entry.record, opts);
        outcome.report.case_id = entry.id;
        outcome.report.seq = seq++;
        if (outcome.report.accepted) {
            net = std::move(outcome.net);
            ++accepted;
        }
        reports.push_back(std::move(outcome.report));
    }
    if (!net_out.empty()) write_file(net_out, serialize_network(net));
    if (!report_out.empty()) write_file(report_out, write_report(reports, net));
    std::cout << "accepted " << accepted << " of " << cases.size() << " cases\n";
    if (net_out.empty()) std::cout << serialize_network(net);
    return 0;
}

int run_expand(const Network& net, const std::string& node_name, const Options& opts,
               const std::string& out_path) {
    int node = net.node_index(node_name);
    if (node < 0) throw IoError("unknown variable '" + node_name + "'");
    const auto* m = std::get_if<NoisyMaxCpd>(&net.cpds[node]);
    if (!m) throw IoError("'" + node_name + "' is not a noisy-MAX family");
    PointCpt table = expand_noisy_max(*m, opts.expand_cap);

    std::string out = "{\"child\":" + json(node_name).dump() + ",\"parents\":[";
    std::vector<int> parents = m->parent_nodes();
    for (size_t i = 0; i < parents.size(); ++i) {
        if (i) out += ',';
        out += json(net.variables[parents[i]].name).dump();
    }
    out += "],\"rows\":[";
    ConfigSpace space = table.config_space();
    std::vector<int> states(parents.size(), 0);
    long long cfg = 0;
    do {
        if (cfg) out += ',';
        out += "{\"config\":[";
        for (size_t s = 0; s < states.size(); ++s) {
            if (s) out += ',';
            out += json(net.variables[parents[s]].states[states[s]]).dump();
        }
        out += "],\"probs\":[";
        for (int x = 0; x < table.child_card; ++x) {
            if (x) out += ',';
            out += format_double(table.table(x, cfg));
        }
        out += "]}";
        ++cfg;
    } while (space.advance(states));
    out += "]}\n";
    emit(out, out_path);
    return 0;
}

int run_sample(const Network& net, int n, std::uint64_t seed, double mask,
               const std::string& out_path) {
    std::vector<CaseRecord> records = forward_sample(net, n, seed, mask);
    std::vector<CaseEntry> entries;
    char buf[32];
    for (size_t i = 0; i < records.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "case-%06zu", i + 1);
        entries.push_back({buf, std::move(records[i])});
    }
    emit(serialize_cases(entries, net), out_path);
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"polytree Bayesian networks with Gaussian-uncertain parameters"};
    app.require_subcommand(1);
    app.fallthrough(true);

    Options opts;
    app.add_option("--warn-ratio", opts.warn_ratio, "std/min(mean,1-mean) warning threshold");
    app.add_option("--mean-eps", opts.mean_eps, "clamp margin for committed means");
    app.add_option("--var-floor", opts.var_floor, "lower bound for committed variances");
    app.add_option("--gamma", opts.gamma, "learning rate applied to every update");
    app.add_option("--expand-cap", opts.expand_cap, "max configurations for gate expansion");
    app.add_option("--joint-cap", opts.joint_cap, "max entries for joint enumeration");

    std::string net_path, cases_path, out_path, report_path, node_name;
    std::vector<std::string> evidence, queries;
    int n = 100;
    std::uint64_t seed = 12345;
    double mask = 0.0;

    CLI::App* validate = app.add_subcommand("validate", "check a network file");
    validate->add_option("network", net_path, "network file")->required();

    CLI::App* canon = app.add_subcommand("canon", "rewrite a network in canonical form");
    canon->add_option("network", net_path, "network file")->required();
    canon->add_option("--out", out_path, "output file (default stdout)");

    CLI::App* infer = app.add_subcommand("infer", "posterior marginals by propagation");
    infer->add_option("network", net_path, "network file")->required();
    infer->add_option("--cases", cases_path, "case file (one JSON object per line)");
    infer->add_option("--evidence", evidence, "inline evidence VAR=STATE");
    infer->add_option("--query", queries, "variables to report (default all)");
    infer->add_option("--out", out_path, "output file (default stdout)");

    CLI::App* oracle = app.add_subcommand("oracle-infer",
                                          "posterior marginals by joint enumeration");
    oracle->add_option("network", net_path, "network file")->required();
    oracle->add_option("--cases", cases_path, "case file (one JSON object per line)");
    oracle->add_option("--evidence", evidence, "inline evidence VAR=STATE");
    oracle->add_option("--query", queries, "variables to report (default all)");
    oracle->add_option("--out", out_path, "output file (default stdout)");

    CLI::App* learn = app.add_subcommand("learn", "sequential parameter adjustment");
    learn->add_option("network", net_path, "network file")->required();
    learn->add_option("--cases", cases_path, "case file")->required();
    learn->add_option("--out", out_path, "updated network file (default stdout)");
    learn->add_option("--report", report_path, "per-case report file");

    CLI::App* expand = app.add_subcommand("expand", "expand a noisy-MAX family to a table");
    expand->add_option("network", net_path, "network file")->required();
    expand->add_option("--node", node_name, "family to expand")->required();
    expand->add_option("--out", out_path, "output file (default stdout)");

    CLI::App* sample = app.add_subcommand("sample", "draw cases at the parameter means");
    sample->add_option("network", net_path, "network file")->required();
    sample->add_option("-n,--cases", n, "number of cases")->check(CLI::PositiveNumber);
    sample->add_option("--seed", seed, "random seed");
    sample->add_option("--mask", mask, "per-variable hide probability")
        ->check(CLI::Range(0.0, 1.0));
    sample->add_option("--out", out_path, "output file (default stdout)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);  // prints help or the usage error itself
        return code == 0 ? 0 : 2;
    }

    try {
        if (validate->parsed()) {
            NetworkParseResult result = parse_network(read_file(net_path), opts);
            if (!result.errors.empty()) {
                std::cerr << format_issues(result.errors);
                return 1;
            }
            std::cout << result.validation.summary();
            if (!result.validation.ok()) return 1;
            long long params = 0;
            for (const Cpd& cpd : result.network->cpds) params += param_count(cpd);
            std::cout << "ok: " << result.network->num_nodes() << " variables, " << params
                      << " parameters\n";
            return 0;
        }
        if (canon->parsed()) {
            emit(serialize_network(load_network(net_path, opts)), out_path);
            return 0;
        }
        if (infer->parsed() || oracle->parsed()) {
            Network net = load_network(net_path, opts);
            if (cases_path.empty() == evidence.empty()) {
                throw IoError("provide exactly one of --cases or --evidence");
            }
            std::vector<CaseEntry> cases =
                cases_path.empty() ? inline_case(net, evidence) : load_cases(net, cases_path);
            return run_infer(net, cases, resolve_queries(net, queries), opts,
                             oracle->parsed(), out_path);
        }
        if (learn->parsed()) {
            Network net = load_network(net_path, opts);
            std::vector<CaseEntry> cases = load_cases(net, cases_path);
            return run_learn(std::move(net), cases, opts, out_path, report_path);
        }
        if (expand->parsed()) {
            return run_expand(load_network(net_path, opts), node_name, opts, out_path);
        }
        if (sample->parsed()) {
            return run_sample(load_network(net_path, opts), n, seed, mask, out_path);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace adbn::cli
