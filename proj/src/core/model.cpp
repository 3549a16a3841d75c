#include "opnmon/core/model.hpp"

#include <algorithm>
#include <set>

namespace opnmon::core {

namespace {

constexpr std::array<std::string_view, 4> kOperationalNames{"UP", "DEGRADED", "DOWN", "UNKNOWN"};
constexpr std::array<std::string_view, 4> kAdministrativeNames{"NORMAL_OPERATION", "PLANNED_MAINTENANCE",
                                                               "TROUBLESHOOTING", "UNKNOWN"};
constexpr std::array<std::string_view, 3> kLinkTypeNames{"DOMAIN_LINK", "INTER_DOMAIN_LINK",
                                                         "INTER_DOMAIN_LINK_PART"};

template <typename Enum, std::size_t N>
std::optional<Enum> lookup(const std::array<std::string_view, N>& names, std::string_view text) noexcept {
    for (std::size_t i = 0; i < N; ++i) {
        if (names[i] == text) {
            return static_cast<Enum>(i);
        }
    }
    return std::nullopt;
}

template <typename Enum>
Enum orThrow(std::optional<Enum> value, std::string_view text, const char* what) {
    if (!value) {
        throw ModelError(ModelError::Kind::UnknownEnumText,
                         "unknown " + std::string(what) + " '" + std::string(text) + "'");
    }
    return *value;
}

void requireInjective(const std::array<int, 4>& weights, const char* what) {
    std::set<int> seen(weights.begin(), weights.end());
    if (seen.size() != weights.size()) {
        throw ModelError(ModelError::Kind::InvalidWeights, std::string(what) + " weights must be distinct");
    }
}

}  // namespace

std::string_view toString(OperationalState s) noexcept { return kOperationalNames[static_cast<std::size_t>(s)]; }
std::string_view toString(AdministrativeState s) noexcept {
    return kAdministrativeNames[static_cast<std::size_t>(s)];
}
std::string_view toString(MonitoredLinkType t) noexcept { return kLinkTypeNames[static_cast<std::size_t>(t)]; }

std::optional<OperationalState> parseOperationalState(std::string_view text) noexcept {
    return lookup<OperationalState>(kOperationalNames, text);
}
std::optional<AdministrativeState> parseAdministrativeState(std::string_view text) noexcept {
    return lookup<AdministrativeState>(kAdministrativeNames, text);
}
std::optional<MonitoredLinkType> parseLinkType(std::string_view text) noexcept {
    return lookup<MonitoredLinkType>(kLinkTypeNames, text);
}

OperationalState operationalStateFromString(std::string_view text) {
    return orThrow(parseOperationalState(text), text, "operational state");
}
AdministrativeState administrativeStateFromString(std::string_view text) {
    return orThrow(parseAdministrativeState(text), text, "administrative state");
}
MonitoredLinkType linkTypeFromString(std::string_view text) {
    return orThrow(parseLinkType(text), text, "monitored link type");
}

void WeightTable::validate() const {
    requireInjective(operational, "operational");
    requireInjective(administrative, "administrative");
}

const WeightTable& WeightTable::defaults() noexcept {
    static const WeightTable table{};
    return table;
}

int operationalWeight(OperationalState s, const WeightTable& table) noexcept {
    return table.operational[static_cast<std::size_t>(s)];
}

int administrativeWeight(AdministrativeState s, const WeightTable& table) noexcept {
    return table.administrative[static_cast<std::size_t>(s)];
}

OperationalState worse(OperationalState a, OperationalState b, const WeightTable& table) noexcept {
    return operationalWeight(b, table) > operationalWeight(a, table) ? b : a;
}

AdministrativeState worse(AdministrativeState a, AdministrativeState b, const WeightTable& table) noexcept {
    return administrativeWeight(b, table) > administrativeWeight(a, table) ? b : a;
}

void validate(const MonitoredLinkReport& report) {
    if (report.e2eLinkId.empty() || report.dpA.empty() || report.dpB.empty()) {
        throw ModelError(ModelError::Kind::InvalidReport, "monitored link report has an empty id");
    }
    if (report.dpA == report.dpB) {
        throw ModelError(ModelError::Kind::InvalidReport,
                         "monitored link report for " + report.e2eLinkId.str() +
                             " has identical demarcation points '" + report.dpA.str() + "'");
    }
}

PollingCycle PollingCycle::at(std::int64_t origin, std::int64_t index, std::int64_t period) {
    if (period <= 0) {
        throw ModelError(ModelError::Kind::InvalidCycle, "polling period must be positive");
    }
    if (index < 0) {
        throw ModelError(ModelError::Kind::InvalidCycle, "cycle index must be non-negative");
    }
    return PollingCycle{index, origin + index * period, period};
}

std::int64_t cycleIndexOf(std::int64_t origin, std::int64_t period, std::int64_t timestamp) {
    if (period <= 0) {
        throw ModelError(ModelError::Kind::InvalidCycle, "polling period must be positive");
    }
    const std::int64_t delta = timestamp - origin;
    std::int64_t q = delta / period;
    if (delta % period != 0 && delta < 0) {
        --q;
    }
    return q;
}

OperationalState StateMappingTable::mapOperational(std::string_view vendorState) const {
    if (auto it = operational.find(vendorState); it != operational.end()) {
        return it->second;
    }
    return OperationalState::Unknown;
}

AdministrativeState StateMappingTable::mapAdministrative(std::string_view raw) const {
    if (auto it = administrative.find(raw); it != administrative.end()) {
        return it->second;
    }
    return AdministrativeState::Unknown;
}

}  // namespace opnmon::core
