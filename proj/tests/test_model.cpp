#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "adbn/cpt.hpp"
#include "support.hpp"

using namespace adbn;
using testsupport::gp;
using testsupport::NetBuilder;

TEST_CASE("config space indexing, last parent fastest") {
    ConfigSpace space({2, 3});
    CHECK(space.size() == 6);
    CHECK(space.flat({0, 0}) == 0);
    CHECK(space.flat({0, 2}) == 2);
    CHECK(space.flat({1, 0}) == 3);
    CHECK(space.unflat(5) == std::vector<int>{1, 2});

    std::vector<int> states(2, 0);
    long long count = 0;
    do {
        CHECK(space.flat(states) == count);
        ++count;
    } while (space.advance(states));
    CHECK(count == 6);

    ConfigSpace empty(std::vector<int>{});
    CHECK(empty.size() == 1);
    CHECK(empty.flat({}) == 0);
}

TEST_CASE("generated state names") {
    Variable g = make_variable("S", 3, true);
    CHECK(g.states == std::vector<std::string>{"absent", "deg1", "deg2"});
    CHECK(g.degrees() == 2);
    Variable p = make_variable("P", 2, false);
    CHECK(p.states == std::vector<std::string>{"s0", "s1"});
}

TEST_CASE("parameter addressing round trip") {
    Network net = testsupport::gate_chain();
    int total = 0;
    ParamRef previous{};
    bool first = true;
    for_each_param(net, [&](const ParamRef& ref, const GaussianParam& p) {
        CHECK(get_param(net, ref) == p);
        if (!first) CHECK(previous < ref);
        previous = ref;
        first = false;
        ++total;
    });
    // 2 + 1 priors, (2*2 + 1*2) link + 2 leak, 3 table entries
    CHECK(total == 2 + 1 + 4 + 2 + 2 + 3);

    ParamRef leak{2, ParamRef::Kind::Leak, 0, -1, 0, 2};
    GaussianParam before = get_param(net, leak);
    set_param(net, leak, {0.03, 0.004});
    CHECK(get_param(net, leak).mean == 0.03);
    set_param(net, leak, before);

    CHECK(param_count(net.cpds[2]) == 8);
    CHECK(parents_of(net.cpds[2]) == std::vector<int>{0, 1});
    CHECK(child_of(net.cpds[3]) == 3);
}

TEST_CASE("parameter labels name the interaction") {
    Network net = testsupport::gate_chain();
    CHECK(describe(net, {0, ParamRef::Kind::Table, 0, -1, 0, 1}) == "Cold(prior -> deg1)");
    CHECK(describe(net, {2, ParamRef::Kind::MaxLink, 0, 0, 2, 1}) ==
          "Sneezing(Cold=deg2 -> deg1)");
    CHECK(describe(net, {2, ParamRef::Kind::Leak, 0, -1, 0, 2}) == "Sneezing(leak -> deg2)");
    CHECK(describe(net, {3, ParamRef::Kind::Table, 2, -1, 0, 1}) ==
          "Tissues(Sneezing=deg2 -> s1)");
}

TEST_CASE("children lists carry the parent slot") {
    Network net = testsupport::gate_chain();
    auto children = children_of(net);
    REQUIRE(children[0].size() == 1);
    CHECK(children[0][0] == std::pair<int, int>{2, 0});
    CHECK(children[1][0] == std::pair<int, int>{2, 1});
    CHECK(children[2][0] == std::pair<int, int>{3, 0});
    CHECK(children[3].empty());
}

namespace {

ValidationReport check(const Network& net) { return validate_network(net, Options{}); }

bool mentions(const std::vector<ValidationIssue>& issues, const std::string& text) {
    for (const auto& issue : issues) {
        if (issue.message.find(text) != std::string::npos) return true;
    }
    return false;
}

}  // namespace

TEST_CASE("well-formed networks validate cleanly") {
    CHECK(check(testsupport::two_node_chain()).errors.empty());
    CHECK(check(testsupport::gate_chain()).errors.empty());
    CHECK(check(testsupport::learn_start()).errors.empty());
    Rng rng(99);
    for (int i = 0; i < 10; ++i) {
        CHECK(check(testsupport::random_polytree(rng, 6)).errors.empty());
    }
}

TEST_CASE("undirected cycles are rejected") {
    // diamond: V0 -> V1 -> V3, V0 -> V2 -> V3 is a DAG but not singly connected
    Network net;
    for (int i = 0; i < 4; ++i) net.variables.push_back(make_variable("V" + std::to_string(i), 2, false));
    TabularCpd prior{0, 2, {}, {}, {gp(0.5)}};
    TabularCpd v1{1, 2, {0}, {2}, {gp(0.3), gp(0.6)}};
    TabularCpd v2{2, 2, {0}, {2}, {gp(0.3), gp(0.6)}};
    TabularCpd v3{3, 2, {1, 2}, {2, 2}, {gp(0.1), gp(0.2), gp(0.3), gp(0.4)}};
    net.cpds = {Cpd(prior), Cpd(v1), Cpd(v2), Cpd(v3)};
    ValidationReport report = check(net);
    CHECK(mentions(report.errors, "singly connected"));
}

TEST_CASE("directed two-cycles are rejected") {
    Network net;
    net.variables.push_back(make_variable("A", 2, false));
    net.variables.push_back(make_variable("B", 2, false));
    TabularCpd a{0, 2, {1}, {2}, {gp(0.3), gp(0.6)}};
    TabularCpd b{1, 2, {0}, {2}, {gp(0.3), gp(0.6)}};
    net.cpds = {Cpd(a), Cpd(b)};
    CHECK_FALSE(check(net).ok());
}

TEST_CASE("parameter range violations") {
    auto base = [] {
        NetBuilder b;
        int a = b.var("A", 2);
        b.prior(a, {gp(0.3, 0.05)});
        return b;
    };
    {
        Network net;
        net.variables = {make_variable("A", 2, false)};
        net.cpds = {Cpd(TabularCpd{0, 2, {}, {}, {gp(1.0)}})};
        CHECK(mentions(check(net).errors, "strictly inside (0,1)"));
        net.cpds = {Cpd(TabularCpd{0, 2, {}, {}, {gp(0.0)}})};
        CHECK(mentions(check(net).errors, "strictly inside (0,1)"));
        net.cpds = {Cpd(TabularCpd{0, 2, {}, {}, {{0.3, 0.3}}})};
        CHECK(mentions(check(net).errors, "breaks down"));
        net.cpds = {Cpd(TabularCpd{0, 2, {}, {}, {{0.3, -0.1}}})};
        CHECK(mentions(check(net).errors, "negative std"));
        net.cpds = {Cpd(TabularCpd{0, 2, {}, {}, {{0.3, 0.15}}})};
        ValidationReport report = check(net);
        CHECK(report.ok());
        CHECK(mentions(report.warnings, "exceeds"));
    }
    (void)base;
}

TEST_CASE("column mass must leave room for state 0") {
    Network net;
    net.variables = {make_variable("A", 3, true)};
    net.cpds = {Cpd(TabularCpd{0, 3, {}, {}, {gp(0.6), gp(0.5)}})};
    CHECK(mentions(check(net).errors, "sum to >= 1"));
}

TEST_CASE("structural bookkeeping errors") {
    Network net;
    net.variables = {make_variable("A", 2, false), make_variable("B", 2, false)};
    SUBCASE("missing cpd") {
        net.cpds = {Cpd(TabularCpd{0, 2, {}, {}, {gp(0.5)}})};
        CHECK_FALSE(check(net).ok());
    }
    SUBCASE("wrong child slot") {
        net.cpds = {Cpd(TabularCpd{1, 2, {}, {}, {gp(0.5)}}),
                    Cpd(TabularCpd{0, 2, {}, {}, {gp(0.5)}})};
        CHECK_FALSE(check(net).ok());
    }
    SUBCASE("wrong parameter count") {
        net.cpds = {Cpd(TabularCpd{0, 2, {}, {}, {gp(0.5)}}),
                    Cpd(TabularCpd{1, 2, {0}, {2}, {gp(0.3)}})};
        CHECK(mentions(check(net).errors, "wrong parameter count"));
    }
    SUBCASE("cardinality mismatch") {
        net.cpds = {Cpd(TabularCpd{0, 2, {}, {}, {gp(0.5)}}),
                    Cpd(TabularCpd{1, 3, {0}, {2}, {gp(0.3), gp(0.3), gp(0.3), gp(0.3)}})};
        CHECK(mentions(check(net).errors, "cardinality mismatch"));
    }
    SUBCASE("duplicate parent") {
        net.cpds = {Cpd(TabularCpd{0, 2, {}, {}, {gp(0.5)}}),
                    Cpd(TabularCpd{1, 2, {0, 0}, {2, 2}, {gp(0.1), gp(0.2), gp(0.3), gp(0.4)}})};
        CHECK(mentions(check(net).errors, "duplicate parent"));
    }
    SUBCASE("duplicate variable name") {
        net.variables[1].name = "A";
        net.cpds = {Cpd(TabularCpd{0, 2, {}, {}, {gp(0.5)}}),
                    Cpd(TabularCpd{1, 2, {}, {}, {gp(0.5)}})};
        CHECK(mentions(check(net).errors, "duplicate variable name"));
    }
}

TEST_CASE("gates demand graded variables") {
    Network net;
    net.variables = {make_variable("U", 2, false), make_variable("X", 2, true)};
    NoisyMaxCpd m;
    m.child = 1;
    m.g_child = 1;
    m.links.push_back({0, 1, {gp(0.4, 0.02)}});
    net.cpds = {Cpd(TabularCpd{0, 2, {}, {}, {gp(0.5)}}), Cpd(m)};
    CHECK(mentions(check(net).errors, "graded"));
}

TEST_CASE("graded state zero should be called absent") {
    Network net;
    Variable v = make_variable("X", 2, true);
    v.states[0] = "off";
    net.variables = {v};
    net.cpds = {Cpd(TabularCpd{0, 2, {}, {}, {gp(0.5)}})};
    ValidationReport report = check(net);
    CHECK(report.ok());
    CHECK(mentions(report.warnings, "absent"));
}

TEST_CASE("require_valid throws with the issue list") {
    Network net;
    net.variables = {make_variable("A", 2, false)};
    net.cpds = {Cpd(TabularCpd{0, 2, {}, {}, {gp(1.5)}})};
    CHECK_THROWS_AS(require_valid(net, Options{}), InvalidNetworkError);
}

TEST_CASE("mean tables: columns are distributions") {
    Network net = testsupport::gate_chain();
    PointCpt cpt = mean_cpt(std::get<TabularCpd>(net.cpds[3]));
    CHECK(cpt.table.rows() == 2);
    CHECK(cpt.table.cols() == 3);
    for (int c = 0; c < 3; ++c) CHECK(cpt.table.col(c).sum() == doctest::Approx(1.0));
    CHECK(cpt.table(1, 0) == 0.1);
    CHECK(cpt.table(0, 2) == doctest::Approx(0.1));
}

TEST_CASE("gate expansion follows the max-of-causes rule") {
    // two binary causes, no leak: P(X=1 | both) = 1 - (1-t1)(1-t2)
    NetBuilder b;
    int u1 = b.graded_var("U1", 2);
    int u2 = b.graded_var("U2", 2);
    int x = b.graded_var("X", 2);
    b.prior(u1, {gp(0.5)}).prior(u2, {gp(0.5)});
    b.gate(x, {{u1, {gp(0.6)}}, {u2, {gp(0.5)}}});
    Network net = b.build();

    PointCpt cpt = expand_noisy_max(std::get<NoisyMaxCpd>(net.cpds[x]));
    CHECK(cpt.table(1, 0) == 0.0);  // both absent, no leak
    CHECK(cpt.table(1, 1) == doctest::Approx(0.5));
    CHECK(cpt.table(1, 2) == doctest::Approx(0.6));
    CHECK(cpt.table(1, 3) == doctest::Approx(1.0 - 0.4 * 0.5));

    SUBCASE("a leak acts as one more always-present cause") {
        NetBuilder b2;
        int v = b2.graded_var("V", 2);
        int y = b2.graded_var("Y", 2);
        b2.prior(v, {gp(0.5)});
        b2.gate(y, {{v, {gp(0.6)}}}, {gp(0.1)});
        Network net2 = b2.build();
        PointCpt with_leak = expand_noisy_max(std::get<NoisyMaxCpd>(net2.cpds[y]));
        CHECK(with_leak.table(1, 0) == doctest::Approx(0.1));
        CHECK(with_leak.table(1, 1) == doctest::Approx(1.0 - 0.4 * 0.9));
    }
}

TEST_CASE("graded expansion accumulates cumulative products") {
    Network net = testsupport::gate_chain();
    const auto& m = std::get<NoisyMaxCpd>(net.cpds[2]);
    PointCpt cpt = expand_noisy_max(m);
    CHECK(cpt.parent_cards == std::vector<int>{3, 2});
    // config (Cold=deg1, Allergy=absent): only the Cold link and leak act
    // P(X<=0) = (1-0.3-0.1)(1-0.05-0.02), P(X<=1) = (1-0.1)(1-0.02)
    long long cfg = ConfigSpace({3, 2}).flat({1, 0});
    double c0 = 0.6 * 0.93, c1 = 0.9 * 0.98;
    CHECK(cpt.table(0, cfg) == doctest::Approx(c0).epsilon(1e-12));
    CHECK(cpt.table(1, cfg) == doctest::Approx(c1 - c0).epsilon(1e-12));
    CHECK(cpt.table(2, cfg) == doctest::Approx(1.0 - c1).epsilon(1e-12));

    for (long long c = 0; c < cpt.table.cols(); ++c) {
        CHECK(cpt.table.col(c).sum() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(cpt.table.col(c).minCoeff() >= 0.0);
    }
}

TEST_CASE("expansion respects the configuration cap") {
    Rng rng(7);
    testsupport::GateFixture fx = testsupport::random_gate(rng, 6, 3, true);
    CHECK_THROWS_AS(expand_noisy_max(fx.cpd, 8), CapExceededError);
}

TEST_CASE("point_cpt dispatches on the family kind") {
    Network net = testsupport::gate_chain();
    CHECK(point_cpt(net.cpds[3]).table.cols() == 3);
    CHECK(point_cpt(net.cpds[2]).table.cols() == 6);
}
