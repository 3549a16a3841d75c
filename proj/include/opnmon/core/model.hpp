#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace opnmon {

/// Base class for every error raised by the library. Each module derives its
/// own error type carrying a module-specific kind enum.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace core {

enum class OperationalState : std::uint8_t { Up, Degraded, Down, Unknown };

enum class AdministrativeState : std::uint8_t { NormalOperation, PlannedMaintenance, Troubleshooting, Unknown };

enum class MonitoredLinkType : std::uint8_t { DomainLink, InterDomainLink, InterDomainLinkPart };

inline constexpr std::array kOperationalStates{OperationalState::Up, OperationalState::Degraded,
                                               OperationalState::Down, OperationalState::Unknown};
inline constexpr std::array kAdministrativeStates{
    AdministrativeState::NormalOperation, AdministrativeState::PlannedMaintenance,
    AdministrativeState::Troubleshooting, AdministrativeState::Unknown};
inline constexpr std::array kLinkTypes{MonitoredLinkType::DomainLink, MonitoredLinkType::InterDomainLink,
                                       MonitoredLinkType::InterDomainLinkPart};

class ModelError : public Error {
public:
    enum class Kind { EmptyId, UnknownEnumText, InvalidReport, InvalidWeights, InvalidCycle };

    ModelError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

// Canonical upper-snake encodings used by every file format and API.
std::string_view toString(OperationalState s) noexcept;
std::string_view toString(AdministrativeState s) noexcept;
std::string_view toString(MonitoredLinkType t) noexcept;

std::optional<OperationalState> parseOperationalState(std::string_view text) noexcept;
std::optional<AdministrativeState> parseAdministrativeState(std::string_view text) noexcept;
std::optional<MonitoredLinkType> parseLinkType(std::string_view text) noexcept;

// Throwing variants for config loaders.
OperationalState operationalStateFromString(std::string_view text);
AdministrativeState administrativeStateFromString(std::string_view text);
MonitoredLinkType linkTypeFromString(std::string_view text);

/// Severity weights for worst-dominates aggregation. The defaults order
/// UP < UNKNOWN < DEGRADED < DOWN and NORMAL_OPERATION < UNKNOWN <
/// PLANNED_MAINTENANCE < TROUBLESHOOTING; any injective table may be installed.
struct WeightTable {
    std::array<int, 4> operational{0, 2, 3, 1};     // indexed by OperationalState
    std::array<int, 4> administrative{0, 2, 3, 1};  // indexed by AdministrativeState

    /// Throws ModelError(InvalidWeights) unless both arrays are injective.
    void validate() const;

    static const WeightTable& defaults() noexcept;
};

int operationalWeight(OperationalState s, const WeightTable& table = WeightTable::defaults()) noexcept;
int administrativeWeight(AdministrativeState s, const WeightTable& table = WeightTable::defaults()) noexcept;

OperationalState worse(OperationalState a, OperationalState b,
                       const WeightTable& table = WeightTable::defaults()) noexcept;
AdministrativeState worse(AdministrativeState a, AdministrativeState b,
                          const WeightTable& table = WeightTable::defaults()) noexcept;

/// Opaque, case-sensitive, non-empty identifier. Tag keeps DP ids and E2E
/// link ids from being mixed up.
template <typename Tag>
class StrongId {
public:
    StrongId() = default;
    explicit StrongId(std::string value) : value_(std::move(value)) {
        if (value_.empty()) {
            throw ModelError(ModelError::Kind::EmptyId, std::string(Tag::name) + " must not be empty");
        }
    }

    const std::string& str() const noexcept { return value_; }
    bool empty() const noexcept { return value_.empty(); }

    friend bool operator==(const StrongId&, const StrongId&) = default;
    friend auto operator<=>(const StrongId&, const StrongId&) = default;

private:
    std::string value_;
};

struct DemarcationPointTag {
    static constexpr const char* name = "demarcation point id";
};
struct E2ELinkTag {
    static constexpr const char* name = "E2E link id";
};

using DemarcationPointId = StrongId<DemarcationPointTag>;
using E2ELinkId = StrongId<E2ELinkTag>;

/// One domain's abstracted status for one section of an E2E link.
struct MonitoredLinkReport {
    E2ELinkId e2eLinkId;
    MonitoredLinkType linkType = MonitoredLinkType::DomainLink;
    DemarcationPointId dpA;
    DemarcationPointId dpB;
    std::string reportingDomain;
    OperationalState operational = OperationalState::Unknown;
    AdministrativeState administrative = AdministrativeState::Unknown;
    std::int64_t cycleTimestamp = 0;

    friend bool operator==(const MonitoredLinkReport&, const MonitoredLinkReport&) = default;
};

/// Throws ModelError(InvalidReport) on empty ids or dp_a == dp_b.
void validate(const MonitoredLinkReport& report);

inline constexpr std::int64_t kDefaultPollingPeriod = 300;

struct PollingCycle {
    std::int64_t index = 0;
    std::int64_t start = 0;
    std::int64_t period = kDefaultPollingPeriod;

    std::int64_t end() const noexcept { return start + period; }
    bool contains(std::int64_t timestamp) const noexcept { return timestamp >= start && timestamp < end(); }

    /// Cycle number `index` of a schedule whose cycle 0 starts at `origin`.
    static PollingCycle at(std::int64_t origin, std::int64_t index, std::int64_t period = kDefaultPollingPeriod);
};

/// Index of the cycle a timestamp belongs to (floor division, negative-safe).
std::int64_t cycleIndexOf(std::int64_t origin, std::int64_t period, std::int64_t timestamp);

/// Vendor vocabulary to abstracted states. Total: anything unmapped is UNKNOWN.
struct StateMappingTable {
    std::map<std::string, OperationalState, std::less<>> operational;
    std::map<std::string, AdministrativeState, std::less<>> administrative;

    OperationalState mapOperational(std::string_view vendorState) const;
    AdministrativeState mapAdministrative(std::string_view raw) const;
};

}  // namespace core
}  // namespace opnmon

template <typename Tag>
struct std::hash<opnmon::core::StrongId<Tag>> {
    std::size_t operator()(const opnmon::core::StrongId<Tag>& id) const noexcept {
        return std::hash<std::string>{}(id.str());
    }
};
