#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "opnmon/assembly/stitch.hpp"
#include "oracles.hpp"

using namespace opnmon;
using assembly::Diagnostic;
using core::AdministrativeState;
using core::MonitoredLinkReport;
using core::MonitoredLinkType;
using core::OperationalState;

namespace {

const core::E2ELinkId kLink("CERN-X-LHCOPN-001");

MonitoredLinkReport section(const std::string& a, const std::string& b, OperationalState op,
                            const std::string& domain = "D", MonitoredLinkType type = MonitoredLinkType::DomainLink,
                            AdministrativeState admin = AdministrativeState::NormalOperation) {
    return {kLink, type, core::DemarcationPointId(a), core::DemarcationPointId(b), domain, op, admin, 1791763200};
}

std::vector<MonitoredLinkReport> toReports(const std::vector<oracle::ChainSection>& chain) {
    std::vector<MonitoredLinkReport> out;
    for (std::size_t i = 0; i < chain.size(); ++i) {
        out.push_back(section(chain[i].a, chain[i].b, chain[i].state, "D" + std::to_string(i)));
    }
    return out;
}

/// DP sequence of a chain produced by oracle::randomChain.
std::vector<std::string> chainDps(const std::vector<oracle::ChainSection>& chain) {
    std::vector<std::string> dps;
    if (chain.size() == 1) return {chain[0].a, chain[0].b};
    const bool aShared = chain[0].a == chain[1].a || chain[0].a == chain[1].b;
    dps.push_back(aShared ? chain[0].b : chain[0].a);
    for (const auto& s : chain) dps.push_back(s.a == dps.back() ? s.b : s.a);
    return dps;
}

bool hasDiagnostic(const assembly::E2ELinkView& v, Diagnostic::Kind kind) {
    return std::any_of(v.diagnostics.begin(), v.diagnostics.end(), [&](const Diagnostic& d) { return d.kind == kind; });
}

}  // namespace

TEST(Aggregate, ExhaustiveAgainstBruteForce) {
    for (int n = 1; n <= 6; ++n) {
        for (const auto& seq : oracle::allSequences(n)) {
            const auto r = assembly::aggregate(seq);
            ASSERT_EQ(r.state, oracle::worstOf(seq));
            ASSERT_EQ(r.hasUnknown, std::find(seq.begin(), seq.end(), OperationalState::Unknown) != seq.end());
        }
    }
}

TEST(Aggregate, AdministrativeExhaustive) {
    for (int n = 1; n <= 4; ++n) {
        for (const auto& seq : oracle::allSequences(n)) {
            std::vector<AdministrativeState> admin;
            for (auto s : seq) admin.push_back(static_cast<AdministrativeState>(static_cast<int>(s)));
            AdministrativeState expected = admin.front();
            for (auto a : admin) {
                if (oracle::severity(a) > oracle::severity(expected)) expected = a;
            }
            ASSERT_EQ(assembly::aggregateAdministrative(admin), expected);
        }
    }
}

TEST(Aggregate, EmptyInputIsAnError) {
    try {
        assembly::aggregate(std::span<const OperationalState>{});
        FAIL();
    } catch (const assembly::AssemblyError& e) {
        EXPECT_EQ(e.kind(), assembly::AssemblyError::Kind::EmptyInput);
    }
}

TEST(Aggregate, CustomWeightsAreHonoured) {
    core::WeightTable w;
    w.operational = {3, 2, 1, 0};  // UP worst
    const std::vector states{OperationalState::Down, OperationalState::Up};
    EXPECT_EQ(assembly::aggregate(states, w).state, OperationalState::Up);
}

TEST(Pairing, AllStatePairs) {
    for (auto a : core::kOperationalStates) {
        for (auto b : core::kOperationalStates) {
            const std::vector reports{section("X", "Y", a, "GEANT", MonitoredLinkType::InterDomainLinkPart),
                                      section("Y", "X", b, "DFN", MonitoredLinkType::InterDomainLinkPart)};
            const auto paired = assembly::pairInterDomainParts(reports);
            ASSERT_EQ(paired.reports.size(), 1u);
            const auto& r = paired.reports[0];
            EXPECT_EQ(r.report.linkType, MonitoredLinkType::InterDomainLink);
            EXPECT_EQ(r.report.operational, oracle::worstOf({a, b}));
            EXPECT_FALSE(r.halfReported);
            EXPECT_EQ(r.sources.size(), 2u);
            EXPECT_TRUE(paired.diagnostics.empty());
        }
    }
}

TEST(Pairing, HalfAndOverReported) {
    const std::vector half{section("X", "Y", OperationalState::Up, "GEANT", MonitoredLinkType::InterDomainLinkPart)};
    const auto h = assembly::pairInterDomainParts(half);
    ASSERT_EQ(h.reports.size(), 1u);
    EXPECT_TRUE(h.reports[0].halfReported);
    ASSERT_EQ(h.diagnostics.size(), 1u);
    EXPECT_EQ(h.diagnostics[0].kind, Diagnostic::Kind::HalfReported);

    std::vector<MonitoredLinkReport> three;
    for (const char* d : {"A", "B", "C"}) {
        three.push_back(section("X", "Y", OperationalState::Up, d, MonitoredLinkType::InterDomainLinkPart));
    }
    const auto o = assembly::pairInterDomainParts(three);
    ASSERT_EQ(o.reports.size(), 1u);
    EXPECT_TRUE(o.reports[0].overReported);
    EXPECT_EQ(o.diagnostics[0].kind, Diagnostic::Kind::OverReported);
}

TEST(Stitch, RandomChainsReconstructInOrder) {
    std::mt19937_64 rng(2026);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 30);
        const auto chain = oracle::randomChain(rng, n, "dp");
        const auto dps = chainDps(chain);
        auto reports = toReports(chain);
        std::shuffle(reports.begin(), reports.end(), rng);

        const assembly::Endpoints ends{core::DemarcationPointId(dps.front()), core::DemarcationPointId(dps.back())};
        const auto view = assembly::stitch(kLink, reports, ends);
        ASSERT_TRUE(view.fullyReconstructed);
        ASSERT_FALSE(view.topologyConflict);
        ASSERT_EQ(view.fragments.size(), 1u);
        ASSERT_TRUE(view.gaps.empty());
        const auto& f = view.fragments[0];
        ASSERT_EQ(f.size(), static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            ASSERT_EQ(f[i].dpA.str(), dps[i]);
            ASSERT_EQ(f[i].dpB.str(), dps[i + 1]);
        }
        std::vector<OperationalState> states;
        for (const auto& s : chain) states.push_back(s.state);
        ASSERT_EQ(view.aggregatedOperational, oracle::worstOf(states));
        ASSERT_EQ(view.sectionCount(), static_cast<std::size_t>(n));
    }
}

TEST(Stitch, UniqueWalkMatchesHamiltonianOracle) {
    std::mt19937_64 rng(11);
    for (int n = 1; n <= 7; ++n) {
        for (int trial = 0; trial < 5; ++trial) {
            const auto chain = oracle::randomChain(rng, n, "h");
            const auto dps = chainDps(chain);
            const auto walks = oracle::hamiltonianWalks(chain, dps.front());
            ASSERT_EQ(walks.size(), 1u);
            const auto view = assembly::stitch(
                kLink, toReports(chain),
                assembly::Endpoints{core::DemarcationPointId(dps.front()), core::DemarcationPointId(dps.back())});
            ASSERT_EQ(view.fragments.size(), 1u);
            for (std::size_t i = 0; i < walks[0].size(); ++i) {
                EXPECT_EQ(view.fragments[0][i].dpA.str(), walks[0][i].first);
                EXPECT_EQ(view.fragments[0][i].dpB.str(), walks[0][i].second);
            }
        }
    }
}

TEST(Stitch, WithoutEndpointsOrientsCanonically) {
    const std::vector reports{section("m", "z", OperationalState::Up), section("a", "m", OperationalState::Up)};
    const auto view = assembly::stitch(kLink, reports);
    ASSERT_EQ(view.fragments.size(), 1u);
    EXPECT_EQ(view.fragments[0].front().dpA.str(), "a");
    EXPECT_EQ(view.fragments[0].back().dpB.str(), "z");
    EXPECT_TRUE(view.fullyReconstructed);
}

TEST(Stitch, MissingInteriorSectionLeavesAGap) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 3 + static_cast<int>(rng() % 10);
        auto chain = oracle::randomChain(rng, n, "g");
        for (auto& s : chain) s.state = OperationalState::Up;
        const auto dps = chainDps(chain);
        const std::size_t removed = 1 + rng() % (n - 2);
        chain.erase(chain.begin() + static_cast<std::ptrdiff_t>(removed));

        const auto view = assembly::stitch(
            kLink, toReports(chain),
            assembly::Endpoints{core::DemarcationPointId(dps.front()), core::DemarcationPointId(dps.back())});
        ASSERT_EQ(view.fragments.size(), 2u);
        ASSERT_EQ(view.gaps.size(), 1u);
        EXPECT_EQ(view.gaps[0].after.str(), dps[removed]);
        EXPECT_EQ(view.gaps[0].before.str(), dps[removed + 1]);
        EXPECT_FALSE(view.fullyReconstructed);
        EXPECT_TRUE(view.hasUnknown);
        EXPECT_EQ(view.aggregatedOperational, OperationalState::Up);
    }
}

TEST(Stitch, BranchingAndCyclesAreConflicts) {
    const std::vector branch{section("a", "b", OperationalState::Up), section("b", "c", OperationalState::Up),
                             section("b", "d", OperationalState::Up)};
    const auto v1 = assembly::stitch(kLink, branch);
    EXPECT_TRUE(v1.topologyConflict);
    EXPECT_FALSE(v1.fullyReconstructed);
    EXPECT_TRUE(hasDiagnostic(v1, Diagnostic::Kind::TopologyConflict));
    EXPECT_EQ(v1.sectionCount(), 3u);

    const std::vector loop{section("a", "b", OperationalState::Up), section("b", "c", OperationalState::Up),
                           section("c", "a", OperationalState::Up)};
    const auto v2 = assembly::stitch(kLink, loop);
    EXPECT_TRUE(v2.topologyConflict);
    EXPECT_FALSE(v2.fullyReconstructed);

    const std::vector parallel{section("a", "b", OperationalState::Up, "D1"),
                               section("b", "a", OperationalState::Down, "D2")};
    EXPECT_TRUE(assembly::stitch(kLink, parallel).topologyConflict);
}

TEST(Stitch, InterDomainPartsJoinDomainSections) {
    const std::vector reports{
        section("cern-a", "cern-b", OperationalState::Up, "CERN"),
        section("cern-b", "geant-a", OperationalState::Up, "CERN", MonitoredLinkType::InterDomainLinkPart),
        section("cern-b", "geant-a", OperationalState::Degraded, "GEANT", MonitoredLinkType::InterDomainLinkPart),
        section("geant-a", "geant-b", OperationalState::Up, "GEANT"),
    };
    const auto view = assembly::stitch(
        kLink, reports, assembly::Endpoints{core::DemarcationPointId("cern-a"), core::DemarcationPointId("geant-b")});
    ASSERT_TRUE(view.fullyReconstructed);
    ASSERT_EQ(view.sectionCount(), 3u);
    const auto& idl = view.fragments[0][1];
    EXPECT_EQ(idl.linkType, MonitoredLinkType::InterDomainLink);
    EXPECT_EQ(idl.operational, OperationalState::Degraded);
    EXPECT_EQ(idl.domains, (std::vector<std::string>{"CERN", "GEANT"}));
    EXPECT_EQ(view.aggregatedOperational, OperationalState::Degraded);
    EXPECT_FALSE(view.hasUnknown);
    EXPECT_EQ(view.contributingReports().size(), 4u);
}

TEST(Stitch, DuplicatesMergeAndEmptyIsUnknown) {
    auto r = section("a", "b", OperationalState::Up);
    auto worse = r;
    worse.operational = OperationalState::Down;
    const std::vector dup{r, worse};
    const auto v = assembly::stitch(kLink, dup);
    EXPECT_EQ(v.sectionCount(), 1u);
    EXPECT_EQ(v.aggregatedOperational, OperationalState::Down);
    EXPECT_TRUE(hasDiagnostic(v, Diagnostic::Kind::DuplicateReport));

    const auto empty = assembly::stitch(kLink, std::span<const MonitoredLinkReport>{});
    EXPECT_EQ(empty.aggregatedOperational, OperationalState::Unknown);
    EXPECT_TRUE(empty.hasUnknown);
    EXPECT_FALSE(empty.fullyReconstructed);

    auto other = r;
    other.e2eLinkId = core::E2ELinkId("OTHER");
    const std::vector mixed{r, other};
    EXPECT_THROW(assembly::stitch(kLink, mixed), assembly::AssemblyError);
}

TEST(Stitch, EndpointMismatchIsNotFullyReconstructed) {
    const std::vector reports{section("a", "b", OperationalState::Up)};
    const auto v = assembly::stitch(
        kLink, reports, assembly::Endpoints{core::DemarcationPointId("a"), core::DemarcationPointId("zz")});
    EXPECT_FALSE(v.fullyReconstructed);
    EXPECT_TRUE(hasDiagnostic(v, Diagnostic::Kind::EndpointMismatch));
}
