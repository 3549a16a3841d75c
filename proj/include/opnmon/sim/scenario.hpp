#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "opnmon/assembly/stitch.hpp"
#include "opnmon/core/model.hpp"
#include "opnmon/mp/snapshot.hpp"
#include "opnmon/weathermap/topology.hpp"

namespace opnmon::sim {

class ScenarioError : public Error {
public:
    using Error::Error;
};

struct DomainLinkSpec {
    std::string localId;
    core::E2ELinkId e2eLinkId;
    core::MonitoredLinkType linkType = core::MonitoredLinkType::DomainLink;
    std::string dpA;
    std::string dpB;
};

struct DomainSpec {
    std::string name;
    core::StateMappingTable mapping;
    std::vector<DomainLinkSpec> links;
};

struct E2ELinkSpec {
    core::E2ELinkId id;
    bool productive = true;
    std::optional<assembly::Endpoints> endpoints;
};

/// Takes effect at `cycle` and holds until a later event overrides the
/// same field. Events without a local id target the domain's MP.
struct ScenarioEvent {
    std::int64_t cycle = 0;
    std::string domain;
    std::optional<std::string> localId;
    std::optional<core::OperationalState> operational;
    std::optional<core::AdministrativeState> administrative;
    std::optional<std::string> vendorState;  // raw, may be unmapped
    std::optional<bool> present;             // false: the entry vanishes from snapshots
    std::optional<bool> reachable;           // MP reachability
};

/// Cycles are half-open: [fromCycle, toCycle).
struct Reroute {
    std::string src;
    std::string dst;
    std::int64_t fromCycle = 0;
    std::int64_t toCycle = 0;
    std::vector<std::string> hops;
};

struct LossWindow {
    std::string src;
    std::string dst;
    std::int64_t fromCycle = 0;
    std::int64_t toCycle = 0;
    double loss = 0;
};

struct MetricSpec {
    bool enabled = false;
    std::map<std::string, double> nodeOwdMs;  // pair baseline = src + dst
    double defaultNodeOwdMs = 5.0;
    double owdNoiseMs = 0.5;
    double jitterMs = 0.2;
    double jitterNoiseMs = 0.05;
    double throughputBps = 9.0e9;
    double throughputNoiseBps = 2.0e8;
    double utilizationBps = 3.0e9;
    double utilizationNoiseBps = 1.0e8;
    std::vector<Reroute> reroutes;
    std::vector<LossWindow> lossWindows;
};

struct Scenario {
    std::uint64_t seed = 0;
    std::int64_t startTime = 0;
    std::int64_t period = core::kDefaultPollingPeriod;
    double acceleration = 1.0;  // wall-clock speed-up when not running back-to-back
    std::vector<DomainSpec> domains;
    std::vector<E2ELinkSpec> e2eLinks;
    std::vector<ScenarioEvent> events;
    MetricSpec metrics;
    std::optional<weathermap::AbstractTopology> topology;

    const DomainSpec* findDomain(std::string_view name) const noexcept;
};

/// Throws ScenarioError on any inconsistency: unknown domains or local ids
/// in events, states no vendor string maps to, metric windows naming
/// unknown nodes, metrics without a topology.
void validate(const Scenario& scenario);

Scenario scenarioFromJson(const nlohmann::json& j, const std::filesystem::path& baseDir = {});
Scenario loadScenario(const std::filesystem::path& file);

/// Vendor string for `state`: the smallest key of the domain's mapping that
/// maps to it.
std::optional<std::string> vendorStringFor(const core::StateMappingTable& mapping, core::OperationalState state);
std::optional<std::string> adminStringFor(const core::StateMappingTable& mapping, core::AdministrativeState state);

/// What the script says about one entry at one cycle.
struct EntryCondition {
    std::string vendorState;
    std::string adminRaw;
    bool present = true;
};

EntryCondition conditionAt(const Scenario& scenario, const DomainSpec& domain, const DomainLinkSpec& link,
                           std::int64_t cycle);
bool reachableAt(const Scenario& scenario, std::string_view domain, std::int64_t cycle);

/// The snapshot a domain hands its MP at `cycle`.
mp::LocalSnapshot snapshotAt(const Scenario& scenario, const DomainSpec& domain, std::int64_t cycle);

struct ExpectedLink {
    core::OperationalState operational = core::OperationalState::Unknown;
    core::AdministrativeState administrative = core::AdministrativeState::Unknown;
    bool uncertain = true;  // some section unreported or UNKNOWN
};

/// Ground truth from the script alone: per section, the worst of the
/// reachable parts; per link, the worst of the reported sections; UNKNOWN
/// when nothing is reported.
std::map<core::E2ELinkId, ExpectedLink> expectedLinks(const Scenario& scenario, std::int64_t cycle);
std::map<core::E2ELinkId, core::OperationalState> expectedStates(const Scenario& scenario, std::int64_t cycle);

}  // namespace opnmon::sim
