#include <gtest/gtest.h>

#include "opnmon/weathermap/status.hpp"
#include "opnmon/weathermap/topology.hpp"
#include "oracles.hpp"

using namespace opnmon;
using namespace opnmon::weathermap;
using core::OperationalState;
using Member = std::optional<OperationalState>;

namespace {

const std::vector<Member> kMembers{OperationalState::Up, OperationalState::Degraded, OperationalState::Down,
                                   OperationalState::Unknown, std::nullopt};

TopologyError::Kind kindOf(const std::string& config) {
    try {
        loadTopology(config);
    } catch (const TopologyError& e) {
        return e.kind();
    }
    ADD_FAILURE() << "accepted: " << config;
    return TopologyError::Kind::ConfigSyntax;
}

std::string topo(const std::string& nodes, const std::string& links) {
    return R"({"nodes": [)" + nodes + R"(], "links": [)" + links + "]}";
}

const std::string kT0 = R"({"id": "T0", "tier": 0, "position": [0, 0]})";
const std::string kA = R"({"id": "A", "tier": 1, "position": [1, 0]})";
const std::string kB = R"({"id": "B", "tier": 1, "position": [0, 1]})";

std::string link(const std::string& id, const std::string& a, const std::string& b, const std::string& e2e,
                 const std::string& ifA, const std::string& ifB) {
    return R"({"id": ")" + id + R"(", "endpoints": [")" + a + R"(", ")" + b + R"("], "e2e_link_ids": [)" + e2e +
           R"(], "ip_interfaces": {"a": ")" + ifA + R"(", "b": ")" + ifB + R"("}})";
}

assembly::E2ELinkView view(const std::string& id, OperationalState op) {
    const std::vector<core::MonitoredLinkReport> r{{core::E2ELinkId(id), core::MonitoredLinkType::DomainLink,
                                                    core::DemarcationPointId("x"), core::DemarcationPointId("y"), "D",
                                                    op, core::AdministrativeState::NormalOperation, 0}};
    return assembly::stitch(core::E2ELinkId(id), r);
}

}  // namespace

TEST(Topology, FixtureLoads) {
    const auto t = loadTopologyFile(std::string(FIXTURE_DIR) + "/topology.json");
    EXPECT_EQ(t.nodes.size(), 12u);
    EXPECT_EQ(t.links.size(), 11u);
    EXPECT_EQ(t.tier0().id, "CERN");
    EXPECT_EQ(t.hadesNodes().size(), 12u);
    const auto* kit = t.findLink("CERN--DE-KIT");
    ASSERT_NE(kit, nullptr);
    EXPECT_EQ(kit->e2eLinkIds.size(), 2u);
    EXPECT_EQ(t.linkOf(core::E2ELinkId("CERN-DE-KIT-LHCOPN-002")), kit);
    EXPECT_EQ(t.linkOf(core::E2ELinkId("nope")), nullptr);
    EXPECT_EQ(loadTopology(toJson(t).dump()), t);
}

TEST(Topology, DefaultsAndValidConfig) {
    const auto t = loadTopology(topo(kT0 + "," + kA, link("L", "T0", "A", R"("E1")", "i1", "i2")));
    EXPECT_EQ(t.findNode("A")->hadesNode, "A");
    EXPECT_EQ(t.findNode("A")->bwctlAddress, "A");
    EXPECT_EQ(t.links[0].other("T0"), "A");
}

TEST(Topology, EveryErrorKind) {
    using K = TopologyError::Kind;
    EXPECT_EQ(kindOf("{"), K::ConfigSyntax);
    EXPECT_EQ(kindOf(topo(R"({"id": "T0", "tier": 2, "position": [0,0]})", "")), K::ConfigSyntax);
    EXPECT_EQ(kindOf(topo(kT0 + "," + kA, link("L", "T0", "T0", R"("E1")", "i1", "i2"))), K::ConfigSyntax);
    EXPECT_EQ(kindOf(topo(kT0 + "," + kA, link("L", "T0", "A", "", "i1", "i2"))), K::ConfigSyntax);
    EXPECT_EQ(kindOf(topo(kT0 + "," + kT0, "")), K::DuplicateId);
    EXPECT_EQ(kindOf(topo(kT0 + "," + kA, link("A", "T0", "A", R"("E1")", "i1", "i2"))), K::DuplicateId);
    EXPECT_EQ(kindOf(topo(kT0 + "," + kA,
                          link("L1", "T0", "A", R"("E1")", "i1", "i2") + "," + link("L2", "A", "T0", R"("E2")", "i3", "i4"))),
              K::DuplicateId);
    EXPECT_EQ(kindOf(topo(kT0 + "," + kA + "," + kB,
                          link("L1", "T0", "A", R"("E1")", "i1", "i2") + "," + link("L2", "T0", "B", R"("E2")", "i1", "i4"))),
              K::DuplicateId);
    EXPECT_EQ(kindOf(topo(kT0 + R"(, {"id": "A", "tier": 1, "position": [1,0], "hades_node": "T0"})", "")),
              K::DuplicateId);
    EXPECT_EQ(kindOf(topo(kT0 + "," + kA, link("L", "T0", "GHOST", R"("E1")", "i1", "i2"))), K::DanglingReference);
    EXPECT_EQ(kindOf(topo(kT0 + R"(, {"id": "T0b", "tier": 0, "position": [1,0]})", "")), K::MultipleTier0);
    EXPECT_EQ(kindOf(topo(kA, "")), K::MultipleTier0);
    EXPECT_EQ(kindOf(topo(kT0 + "," + kA + "," + kB,
                          link("L1", "T0", "A", R"("E1")", "i1", "i2") + "," + link("L2", "T0", "B", R"("E1")", "i3", "i4"))),
              K::DuplicateE2EMapping);
}

TEST(Topology, ErrorsCarryLocations) {
    try {
        loadTopology(topo(kT0 + "," + kA, link("L", "T0", "GHOST", R"("E1")", "i1", "i2")));
        FAIL();
    } catch (const TopologyError& e) {
        EXPECT_EQ(e.location(), "/links/0/endpoints/1");
    }
}

TEST(Status, ColorsAndNames) {
    const std::map<AbstractLinkStatus, std::pair<std::string, std::string>> expected{
        {AbstractLinkStatus::Up, {"GREEN", "#00c000"}},      {AbstractLinkStatus::Warning, {"YELLOW", "#ffd700"}},
        {AbstractLinkStatus::Down, {"RED", "#e00000"}},      {AbstractLinkStatus::Unknown, {"BLUE", "#1e64ff"}},
        {AbstractLinkStatus::TopologyUnknown, {"MAGENTA", "#ff00ff"}}};
    for (auto s : kAbstractStatuses) {
        EXPECT_EQ(colorName(s), expected.at(s).first);
        EXPECT_EQ(colorHex(s), expected.at(s).second);
    }
}

TEST(Status, PairTableMatchesOracle) {
    for (const auto& a : kMembers) {
        for (const auto& b : kMembers) {
            const std::vector members{a, b};
            EXPECT_EQ(toString(combineMemberStates(members)), oracle::pairRule(a, b));
        }
        const std::vector single{a};
        EXPECT_EQ(toString(combineMemberStates(single)), oracle::singleRule(a));
    }
}

TEST(Status, WorseningMembersNeverImprovesStatus) {
    for (int n = 1; n <= 3; ++n) {
        std::size_t combos = 1;
        for (int i = 0; i < n; ++i) combos *= kMembers.size();
        for (std::size_t code = 0; code < combos; ++code) {
            std::vector<Member> members;
            for (std::size_t c = code, i = 0; i < static_cast<std::size_t>(n); ++i, c /= kMembers.size()) {
                members.push_back(kMembers[c % kMembers.size()]);
            }
            const int before = oracle::abstractSeverity(std::string(toString(combineMemberStates(members))));
            for (std::size_t i = 0; i < members.size(); ++i) {
                if (!members[i]) continue;
                for (auto replacement : core::kOperationalStates) {
                    if (oracle::memberSeverity(replacement) <= oracle::memberSeverity(*members[i])) continue;
                    auto worse = members;
                    worse[i] = replacement;
                    const int after = oracle::abstractSeverity(std::string(toString(combineMemberStates(worse))));
                    ASSERT_GE(after, before);
                }
            }
        }
    }
}

TEST(Status, ComputedFromViews) {
    const auto t = loadTopologyFile(std::string(FIXTURE_DIR) + "/topology.json");
    const auto& kit = *t.findLink("CERN--DE-KIT");
    std::map<core::E2ELinkId, assembly::E2ELinkView> views;
    EXPECT_EQ(computeAbstractStatus(kit, views), AbstractLinkStatus::TopologyUnknown);
    views.emplace(core::E2ELinkId("CERN-DE-KIT-LHCOPN-001"), view("CERN-DE-KIT-LHCOPN-001", OperationalState::Down));
    EXPECT_EQ(computeAbstractStatus(kit, views), AbstractLinkStatus::Unknown);
    views.emplace(core::E2ELinkId("CERN-DE-KIT-LHCOPN-002"), view("CERN-DE-KIT-LHCOPN-002", OperationalState::Up));
    EXPECT_EQ(computeAbstractStatus(kit, views), AbstractLinkStatus::Warning);
}

TEST(Selection, Scopes) {
    const auto t = loadTopologyFile(std::string(FIXTURE_DIR) + "/topology.json");
    EXPECT_EQ(selectionScope("DE-KIT", t).size(), 1u);
    EXPECT_EQ(selectionScope("DE-KIT", t)[0].id, "CERN--DE-KIT");
    EXPECT_EQ(selectionScope("CERN", t).size(), 11u);
    EXPECT_EQ(selectionScope("CERN--NDGF", t).size(), 1u);
    EXPECT_THROW(selectionScope("MOON", t), SelectionError);
}
