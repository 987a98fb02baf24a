#include "adbn/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "adbn/cpt.hpp"

namespace adbn {

using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// canonical writing: keys sorted (json's object is an ordered map), floats at
// 17 significant digits so values survive a round trip bit-exactly
// ---------------------------------------------------------------------------

std::string format_double(double v) {
    if (!std::isfinite(v)) throw IoError("non-finite number in document");
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void dump_canonical(const json& j, std::string& out, int indent, int depth) {
    auto pad = [&](int d) {
        if (indent >= 0) out.append(static_cast<size_t>(d) * indent, ' ');
    };
    switch (j.type()) {
        case json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += '{';
            bool first = true;
            for (const auto& [key, value] : j.items()) {
                if (!first) out += ',';
                first = false;
                if (indent >= 0) out += '\n';
                pad(depth + 1);
                out += json(key).dump();
                out += indent >= 0 ? ": " : ":";
                dump_canonical(value, out, indent, depth + 1);
            }
            if (indent >= 0) out += '\n';
            pad(depth);
            out += '}';
            return;
        }
        case json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            out += '[';
            bool first = true;
            for (const auto& value : j) {
                if (!first) out += ',';
                first = false;
                if (indent >= 0) out += '\n';
                pad(depth + 1);
                dump_canonical(value, out, indent, depth + 1);
            }
            if (indent >= 0) out += '\n';
            pad(depth);
            out += ']';
            return;
        }
        case json::value_t::number_float:
            out += format_double(j.get<double>());
            return;
        default:
            out += j.dump();
            return;
    }
}

std::string dump_pretty(const json& j) {
    std::string out;
    dump_canonical(j, out, 2, 0);
    out += '\n';
    return out;
}

std::string dump_line(const json& j) {
    std::string out;
    dump_canonical(j, out, -1, 0);
    return out;
}

// ---------------------------------------------------------------------------
// strict reading
// ---------------------------------------------------------------------------

struct Reader {
    std::vector<IoIssue>& errors;

    void error(const std::string& where, const std::string& message) {
        errors.push_back({where, message});
    }

    /// Rejects fields outside the allowed set.
    void check_fields(const json& obj, const std::string& path,
                      std::initializer_list<const char*> allowed) {
        for (const auto& [key, value] : obj.items()) {
            bool known = false;
            for (const char* name : allowed) {
                if (key == name) {
                    known = true;
                    break;
                }
            }
            if (!known) error(path, "unknown field '" + key + "'");
        }
    }

    const json* field(const json& obj, const std::string& path, const char* key,
                      bool required = true) {
        auto it = obj.find(key);
        if (it == obj.end()) {
            if (required) error(path, std::string("missing field '") + key + "'");
            return nullptr;
        }
        return &*it;
    }

    bool get_string(const json& obj, const std::string& path, const char* key,
                    std::string& out) {
        const json* v = field(obj, path, key);
        if (!v) return false;
        if (!v->is_string()) {
            error(path + "." + key, "expected a string");
            return false;
        }
        out = v->get<std::string>();
        return true;
    }

    bool get_number(const json& obj, const std::string& path, const char* key, double& out) {
        const json* v = field(obj, path, key);
        if (!v) return false;
        if (!v->is_number()) {
            error(path + "." + key, "expected a number");
            return false;
        }
        out = v->get<double>();
        return true;
    }
};

int state_index(const Variable& var, const std::string& name) {
    for (int i = 0; i < var.cardinality(); ++i) {
        if (var.states[i] == name) return i;
    }
    return -1;
}

/// Parses {"mean":, "std":, ...} plus the given name key; returns the state
/// index resolved against var, or -1 on error.
int parse_param(Reader& r, const json& obj, const std::string& path, const char* name_key,
                const Variable& var, GaussianParam& out,
                std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) {
        r.error(path, "expected an object");
        return -1;
    }
    r.check_fields(obj, path, allowed);
    std::string state;
    bool ok = r.get_string(obj, path, name_key, state);
    ok = r.get_number(obj, path, "mean", out.mean) && ok;
    ok = r.get_number(obj, path, "std", out.std) && ok;
    if (!ok) return -1;
    int idx = state_index(var, state);
    if (idx < 0) {
        r.error(path + "." + name_key, "unknown state '" + state + "' of '" + var.name + "'");
        return -1;
    }
    if (idx == 0) {
        r.error(path + "." + name_key,
                "state 0 has no parameter; it holds the leftover probability");
        return -1;
    }
    return idx;
}

/// Fills a dense parameter list indexed by state 1..card-1 from a JSON array,
/// requiring each state exactly once.
void parse_param_list(Reader& r, const json& arr, const std::string& path, const char* name_key,
                      const Variable& var, std::vector<GaussianParam>& slots,
                      std::vector<bool>& seen, long long offset,
                      std::initializer_list<const char*> allowed) {
    if (!arr.is_array()) {
        r.error(path, "expected an array");
        return;
    }
    for (size_t i = 0; i < arr.size(); ++i) {
        std::string ipath = path + "[" + std::to_string(i) + "]";
        GaussianParam p;
        int idx = parse_param(r, arr[i], ipath, name_key, var, p, allowed);
        if (idx < 0) continue;
        if (seen[offset + idx - 1]) {
            r.error(ipath, "duplicate parameter for state '" + var.states[idx] + "'");
            continue;
        }
        seen[offset + idx - 1] = true;
        slots[offset + idx - 1] = p;
    }
    for (int x = 1; x < var.cardinality(); ++x) {
        if (!seen[offset + x - 1]) {
            r.error(path, "missing parameter for state '" + var.states[x] + "'");
        }
    }
}

}  // namespace

std::string format_issues(const std::vector<IoIssue>& issues) {
    std::ostringstream os;
    for (const auto& issue : issues) os << issue.where << ": " << issue.message << "\n";
    return os.str();
}

NetworkParseResult parse_network(const std::string& text, const Options& opts) {
    NetworkParseResult result;
    Reader r{result.errors};

    json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded()) {
        r.error("document", "not valid JSON");
        return result;
    }
    if (!doc.is_object()) {
        r.error("document", "expected a JSON object");
        return result;
    }
    r.check_fields(doc, "document", {"cpds", "format_version", "kind", "variables"});
    std::string version, kind;
    if (r.get_string(doc, "document", "format_version", version) && version != "1") {
        r.error("document.format_version", "unsupported version '" + version + "'");
    }
    if (r.get_string(doc, "document", "kind", kind) && kind != "adbn-network") {
        r.error("document.kind", "expected 'adbn-network'");
    }

    Network net;
    const json* vars = r.field(doc, "document", "variables");
    if (!vars || !vars->is_array()) {
        if (vars) r.error("document.variables", "expected an array");
        return result;
    }
    for (size_t i = 0; i < vars->size(); ++i) {
        std::string path = "variables[" + std::to_string(i) + "]";
        const json& v = (*vars)[i];
        if (!v.is_object()) {
            r.error(path, "expected an object");
            return result;
        }
        r.check_fields(v, path, {"graded", "name", "states"});
        Variable var;
        r.get_string(v, path, "name", var.name);
        if (auto it = v.find("graded"); it != v.end()) {
            if (!it->is_boolean()) {
                r.error(path + ".graded", "expected a boolean");
            } else {
                var.graded = it->get<bool>();
            }
        }
        const json* states = r.field(v, path, "states");
        if (states) {
            if (!states->is_array() || states->empty()) {
                r.error(path + ".states", "expected a non-empty array");
            } else {
                for (size_t s = 0; s < states->size(); ++s) {
                    if (!(*states)[s].is_string()) {
                        r.error(path + ".states[" + std::to_string(s) + "]",
                                "expected a string");
                        break;
                    }
                    var.states.push_back((*states)[s].get<std::string>());
                }
            }
        }
        net.variables.push_back(std::move(var));
    }
    if (!result.errors.empty()) return result;

    const json* cpds = r.field(doc, "document", "cpds");
    if (!cpds || !cpds->is_array()) {
        if (cpds) r.error("document.cpds", "expected an array");
        return result;
    }
    std::vector<std::optional<Cpd>> parsed(net.num_nodes());
    for (size_t i = 0; i < cpds->size(); ++i) {
        std::string path = "cpds[" + std::to_string(i) + "]";
        const json& c = (*cpds)[i];
        if (!c.is_object()) {
            r.error(path, "expected an object");
            continue;
        }
        std::string child_name, type;
        if (!r.get_string(c, path, "child", child_name) || !r.get_string(c, path, "type", type)) {
            continue;
        }
        int child = net.node_index(child_name);
        if (child < 0) {
            r.error(path + ".child", "unknown variable '" + child_name + "'");
            continue;
        }
        if (parsed[child]) {
            r.error(path, "second CPD for variable '" + child_name + "'");
            continue;
        }
        const Variable& cv = net.variables[child];

        if (type == "prior") {
            r.check_fields(c, path, {"child", "params", "type"});
            TabularCpd t;
            t.child = child;
            t.child_card = cv.cardinality();
            t.params.resize(cv.cardinality() - 1);
            std::vector<bool> seen(t.params.size(), false);
            if (const json* params = r.field(c, path, "params")) {
                parse_param_list(r, *params, path + ".params", "state", cv, t.params, seen, 0,
                                 {"mean", "state", "std"});
            }
            parsed[child] = Cpd(std::move(t));
        } else if (type == "table") {
            r.check_fields(c, path, {"child", "parents", "rows", "type"});
            TabularCpd t;
            t.child = child;
            t.child_card = cv.cardinality();
            const json* parents = r.field(c, path, "parents");
            bool header_ok = true;
            if (!parents || !parents->is_array() || parents->empty()) {
                if (parents) {
                    r.error(path + ".parents",
                            "expected a non-empty array (use type 'prior' for roots)");
                }
                header_ok = false;
            } else {
                for (size_t s = 0; s < parents->size(); ++s) {
                    if (!(*parents)[s].is_string()) {
                        r.error(path + ".parents[" + std::to_string(s) + "]",
                                "expected a string");
                        header_ok = false;
                        break;
                    }
                    int p = net.node_index((*parents)[s].get<std::string>());
                    if (p < 0) {
                        r.error(path + ".parents[" + std::to_string(s) + "]",
                                "unknown variable '" + (*parents)[s].get<std::string>() + "'");
                        header_ok = false;
                        break;
                    }
                    t.parents.push_back(p);
                    t.parent_cards.push_back(net.cardinality(p));
                }
            }
            if (!header_ok) continue;

            ConfigSpace space(t.parent_cards);
            t.params.resize(space.size() * (t.child_card - 1));
            std::vector<bool> seen(t.params.size(), false);
            std::vector<bool> row_seen(space.size(), false);
            const json* rows = r.field(c, path, "rows");
            if (rows && !rows->is_array()) r.error(path + ".rows", "expected an array");
            if (rows && rows->is_array()) {
                for (size_t ri = 0; ri < rows->size(); ++ri) {
                    std::string rpath = path + ".rows[" + std::to_string(ri) + "]";
                    const json& row = (*rows)[ri];
                    if (!row.is_object()) {
                        r.error(rpath, "expected an object");
                        continue;
                    }
                    r.check_fields(row, rpath, {"config", "params"});
                    const json* config = r.field(row, rpath, "config");
                    if (!config || !config->is_array() ||
                        config->size() != t.parents.size()) {
                        if (config) {
                            r.error(rpath + ".config", "expected one state per parent");
                        }
                        continue;
                    }
                    std::vector<int> states;
                    bool cfg_ok = true;
                    for (size_t s = 0; s < config->size(); ++s) {
                        const Variable& pv = net.variables[t.parents[s]];
                        if (!(*config)[s].is_string()) {
                            r.error(rpath + ".config[" + std::to_string(s) + "]",
                                    "expected a string");
                            cfg_ok = false;
                            break;
                        }
                        int idx = state_index(pv, (*config)[s].get<std::string>());
                        if (idx < 0) {
                            r.error(rpath + ".config[" + std::to_string(s) + "]",
                                    "unknown state '" + (*config)[s].get<std::string>() +
                                        "' of '" + pv.name + "'");
                            cfg_ok = false;
                            break;
                        }
                        states.push_back(idx);
                    }
                    if (!cfg_ok) continue;
                    long long cfg = space.flat(states);
                    if (row_seen[cfg]) {
                        r.error(rpath, "duplicate row for this configuration");
                        continue;
                    }
                    row_seen[cfg] = true;
                    if (const json* params = r.field(row, rpath, "params")) {
                        parse_param_list(r, *params, rpath + ".params", "state", cv, t.params,
                                         seen, cfg * (t.child_card - 1),
                                         {"mean", "state", "std"});
                    }
                }
                for (long long cfg = 0; cfg < space.size(); ++cfg) {
                    if (!row_seen[cfg]) {
                        r.error(path + ".rows",
                                "missing row for configuration " + std::to_string(cfg));
                    }
                }
            }
            parsed[child] = Cpd(std::move(t));
        } else if (type == "noisy_max") {
            r.check_fields(c, path, {"child", "leak", "links", "type"});
            NoisyMaxCpd m;
            m.child = child;
            m.g_child = cv.degrees();
            const json* links = r.field(c, path, "links");
            if (links && !links->is_array()) r.error(path + ".links", "expected an array");
            if (links && links->is_array()) {
                for (size_t li = 0; li < links->size(); ++li) {
                    std::string lpath = path + ".links[" + std::to_string(li) + "]";
                    const json& lj = (*links)[li];
                    if (!lj.is_object()) {
                        r.error(lpath, "expected an object");
                        continue;
                    }
                    r.check_fields(lj, lpath, {"params", "parent"});
                    std::string parent_name;
                    if (!r.get_string(lj, lpath, "parent", parent_name)) continue;
                    int parent = net.node_index(parent_name);
                    if (parent < 0) {
                        r.error(lpath + ".parent", "unknown variable '" + parent_name + "'");
                        continue;
                    }
                    NoisyMaxLink link;
                    link.parent = parent;
                    link.g_u = net.variables[parent].degrees();
                    link.params.resize(static_cast<size_t>(link.g_u) * m.g_child);
                    std::vector<bool> seen(link.params.size(), false);
                    const json* params = r.field(lj, lpath, "params");
                    if (params && !params->is_array()) {
                        r.error(lpath + ".params", "expected an array");
                    }
                    if (params && params->is_array()) {
                        const Variable& pv = net.variables[parent];
                        for (size_t pi = 0; pi < params->size(); ++pi) {
                            std::string ppath =
                                lpath + ".params[" + std::to_string(pi) + "]";
                            const json& pj = (*params)[pi];
                            if (!pj.is_object()) {
                                r.error(ppath, "expected an object");
                                continue;
                            }
                            r.check_fields(pj, ppath, {"cause", "effect", "mean", "std"});
                            std::string cause_name, effect_name;
                            GaussianParam p;
                            bool ok = r.get_string(pj, ppath, "cause", cause_name);
                            ok = r.get_string(pj, ppath, "effect", effect_name) && ok;
                            ok = r.get_number(pj, ppath, "mean", p.mean) && ok;
                            ok = r.get_number(pj, ppath, "std", p.std) && ok;
                            if (!ok) continue;
                            int u = state_index(pv, cause_name);
                            int x = state_index(cv, effect_name);
                            if (u <= 0) {
                                r.error(ppath + ".cause", u < 0
                                            ? "unknown state '" + cause_name + "' of '" +
                                                  pv.name + "'"
                                            : "the absent state carries no parameter");
                                continue;
                            }
                            if (x <= 0) {
                                r.error(ppath + ".effect",
                                        x < 0 ? "unknown state '" + effect_name + "' of '" +
                                                    cv.name + "'"
                                              : "the absent state carries no parameter");
                                continue;
                            }
                            size_t slot = static_cast<size_t>(u - 1) * m.g_child + (x - 1);
                            if (seen[slot]) {
                                r.error(ppath, "duplicate parameter");
                                continue;
                            }
                            seen[slot] = true;
                            link.params[slot] = p;
                        }
                        for (int u = 1; u <= link.g_u; ++u) {
                            for (int x = 1; x <= m.g_child; ++x) {
                                if (!seen[static_cast<size_t>(u - 1) * m.g_child + (x - 1)]) {
                                    r.error(lpath + ".params",
                                            "missing parameter for cause '" + pv.states[u] +
                                                "' effect '" + cv.states[x] + "'");
                                }
                            }
                        }
                    }
                    m.links.push_back(std::move(link));
                }
            }
            if (const json* leak = r.field(c, path, "leak", /*required=*/false)) {
                m.leak.resize(m.g_child);
                std::vector<bool> seen(m.g_child, false);
                parse_param_list(r, *leak, path + ".leak", "effect", cv, m.leak, seen, 0,
                                 {"effect", "mean", "std"});
            }
            parsed[child] = Cpd(std::move(m));
        } else {
            r.error(path + ".type", "unknown CPD type '" + type + "'");
        }
    }
    for (int node = 0; node < net.num_nodes(); ++node) {
        if (!parsed[node]) {
            r.error("cpds", "missing CPD for variable '" + net.variables[node].name + "'");
        }
    }
    if (!result.errors.empty()) return result;

    for (auto& cpd : parsed) net.cpds.push_back(std::move(*cpd));
    result.validation = validate_network(net, opts);
    result.network = std::move(net);
    return result;
}

namespace {

json param_json(const GaussianParam& p) {
    json j;
    j["mean"] = p.mean;
    j["std"] = p.std;
    return j;
}

}  // namespace

std::string serialize_network(const Network& net) {
    json doc;
    doc["format_version"] = "1";
    doc["kind"] = "adbn-network";

    json vars = json::array();
    for (const Variable& v : net.variables) {
        json jv;
        jv["graded"] = v.graded;
        jv["name"] = v.name;
        jv["states"] = v.states;
        vars.push_back(std::move(jv));
    }
    doc["variables"] = std::move(vars);

    json cpds = json::array();
    for (int node = 0; node < net.num_nodes(); ++node) {
        const Variable& cv = net.variables[node];
        json jc;
        jc["child"] = cv.name;
        if (const auto* t = std::get_if<TabularCpd>(&net.cpds[node])) {
            if (t->is_prior()) {
                jc["type"] = "prior";
                json params = json::array();
                for (int x = 1; x < t->child_card; ++x) {
                    json p = param_json(t->at(0, x));
                    p["state"] = cv.states[x];
                    params.push_back(std::move(p));
                }
                jc["params"] = std::move(params);
            } else {
                jc["type"] = "table";
                json parents = json::array();
                for (int p : t->parents) parents.push_back(net.variables[p].name);
                jc["parents"] = std::move(parents);
                json rows = json::array();
                ConfigSpace space = t->config_space();
                std::vector<int> states(t->parents.size(), 0);
                long long cfg = 0;
                do {
                    json row;
                    json config = json::array();
                    for (size_t s = 0; s < states.size(); ++s) {
                        config.push_back(net.variables[t->parents[s]].states[states[s]]);
                    }
                    row["config"] = std::move(config);
                    json params = json::array();
                    for (int x = 1; x < t->child_card; ++x) {
                        json p = param_json(t->at(cfg, x));
                        p["state"] = cv.states[x];
                        params.push_back(std::move(p));
                    }
                    row["params"] = std::move(params);
                    rows.push_back(std::move(row));
                    ++cfg;
                } while (space.advance(states));
                jc["rows"] = std::move(rows);
            }
        } else {
            const auto& m = std::get<NoisyMaxCpd>(net.cpds[node]);
            jc["type"] = "noisy_max";
            json links = json::array();
            for (int li = 0; li < m.num_links(); ++li) {
                const Variable& pv = net.variables[m.links[li].parent];
                json lj;
                lj["parent"] = pv.name;
                json params = json::array();
                for (int u = 1; u <= m.links[li].g_u; ++u) {
                    for (int x = 1; x <= m.g_child; ++x) {
                        json p = param_json(m.link_param(li, u, x));
                        p["cause"] = pv.states[u];
                        p["effect"] = cv.states[x];
                        params.push_back(std::move(p));
                    }
                }
                lj["params"] = std::move(params);
                links.push_back(std::move(lj));
            }
            jc["links"] = std::move(links);
            if (m.has_leak()) {
                json leak = json::array();
                for (int x = 1; x <= m.g_child; ++x) {
                    json p = param_json(m.leak_param(x));
                    p["effect"] = cv.states[x];
                    leak.push_back(std::move(p));
                }
                jc["leak"] = std::move(leak);
            }
        }
        cpds.push_back(std::move(jc));
    }
    doc["cpds"] = std::move(cpds);
    return dump_pretty(doc);
}

CaseParseResult parse_cases(const std::string& text, const Network& net) {
    CaseParseResult result;
    Reader r{result.errors};
    std::set<std::string> ids;

    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::string path = "line " + std::to_string(lineno);
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            r.error(path, "expected a JSON object");
            continue;
        }
        r.check_fields(j, path, {"assignments", "id"});
        CaseEntry entry;
        if (!r.get_string(j, path, "id", entry.id)) continue;
        if (entry.id.empty()) {
            r.error(path + ".id", "empty id");
            continue;
        }
        if (!ids.insert(entry.id).second) {
            r.error(path + ".id", "duplicate id '" + entry.id + "'");
            continue;
        }
        const json* assign = r.field(j, path, "assignments");
        if (!assign) continue;
        if (!assign->is_object()) {
            r.error(path + ".assignments", "expected an object");
            continue;
        }
        bool ok = true;
        for (const auto& [var_name, state] : assign->items()) {
            int node = net.node_index(var_name);
            if (node < 0) {
                r.error(path + ".assignments", "unknown variable '" + var_name + "'");
                ok = false;
                continue;
            }
            if (!state.is_string()) {
                r.error(path + ".assignments." + var_name, "expected a state name");
                ok = false;
                continue;
            }
            int idx = state_index(net.variables[node], state.get<std::string>());
            if (idx < 0) {
                r.error(path + ".assignments." + var_name,
                        "unknown state '" + state.get<std::string>() + "'");
                ok = false;
                continue;
            }
            entry.record.assignments[node] = idx;
        }
        if (ok) result.cases.push_back(std::move(entry));
    }
    return result;
}

std::string serialize_cases(const std::vector<CaseEntry>& cases, const Network& net) {
    std::string out;
    for (const CaseEntry& entry : cases) {
        json j;
        json assign;
        for (const auto& [node, state] : entry.record.assignments) {
            assign[net.variables[node].name] = net.variables[node].states[state];
        }
        j["assignments"] = assign.is_null() ? json::object() : std::move(assign);
        j["id"] = entry.id;
        out += dump_line(j);
        out += '\n';
    }
    return out;
}

namespace {

json flags_json(std::uint8_t flags) {
    json out = json::array();
    if (flags & kColumnRescaled) out.push_back("column_rescaled");
    if (flags & kMeanClamped) out.push_back("mean_clamped");
    if (flags & kVarFloored) out.push_back("var_floored");
    return out;
}

json update_json(const ParamDelta& item, const Network& net) {
    json j;
    j["cpd"] = net.variables[item.ref.node].name;
    j["delta"] = item.delta;
    j["effect"] = net.variables[item.ref.node].states[item.ref.effect];
    j["flags"] = flags_json(item.flags);
    j["mean"] = item.new_mean;
    j["std"] = std::sqrt(std::max(0.0, item.new_var));
    switch (item.ref.kind) {
        case ParamRef::Kind::Table: {
            const auto& t = std::get<TabularCpd>(net.cpds[item.ref.node]);
            j["kind"] = "table";
            json config = json::array();
            auto states = t.config_space().unflat(item.ref.config);
            for (size_t s = 0; s < t.parents.size(); ++s) {
                config.push_back(net.variables[t.parents[s]].states[states[s]]);
            }
            j["config"] = std::move(config);
            break;
        }
        case ParamRef::Kind::MaxLink: {
            const auto& m = std::get<NoisyMaxCpd>(net.cpds[item.ref.node]);
            const Variable& pv = net.variables[m.links[item.ref.link].parent];
            j["kind"] = "link";
            j["parent"] = pv.name;
            j["cause"] = pv.states[item.ref.cause];
            break;
        }
        case ParamRef::Kind::Leak:
            j["kind"] = "leak";
            break;
    }
    return j;
}

}  // namespace

std::string write_report(const std::vector<CaseReport>& reports, const Network& net) {
    json header;
    header["format_version"] = "1";
    header["kind"] = "adbn-learn-report";
    std::string out = dump_line(header);
    out += '\n';
    for (const CaseReport& report : reports) {
        json j;
        j["accepted"] = report.accepted;
        j["id"] = report.case_id;
        j["seq"] = report.seq;
        if (report.accepted) {
            j["evidence_probability"] = report.evidence_probability;
            j["max_abs_cov"] = report.max_abs_cov;
            json updates = json::array();
            for (const ParamDelta& item : report.updates) {
                updates.push_back(update_json(item, net));
            }
            j["updates"] = std::move(updates);
            j["warnings"] = report.post_warnings;
        } else {
            j["error"] = report.error;
        }
        out += dump_line(j);
        out += '\n';
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream os;
    os << in.rdbuf();
    if (in.bad()) throw IoError("failed reading '" + path + "'");
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace adbn
