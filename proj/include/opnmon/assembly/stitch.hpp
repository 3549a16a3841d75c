#pragma once

// Reconstruction of E2E links from per-domain section reports.
//
// Reports of one E2E link form a multigraph whose vertices are demarcation
// point ids and whose edges are sections. Every connected component must be a
// simple path; each path becomes one fragment, and consecutive fragments are
// separated by a gap. States aggregate worst-dominates by weight.

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "opnmon/core/model.hpp"

namespace opnmon::assembly {

class AssemblyError : public Error {
public:
    enum class Kind { EmptyInput, MixedLinks };

    AssemblyError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

struct Diagnostic {
    enum class Kind { TopologyConflict, HalfReported, OverReported, DuplicateReport, EndpointMismatch };

    Kind kind;
    std::string message;

    friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

std::string_view toString(Diagnostic::Kind kind) noexcept;

struct AggregateResult {
    core::OperationalState state = core::OperationalState::Unknown;
    bool hasUnknown = false;

    friend bool operator==(const AggregateResult&, const AggregateResult&) = default;
};

/// Weight-argmax of `states`; hasUnknown is set if any member is UNKNOWN.
/// Throws AssemblyError(EmptyInput) on an empty list.
AggregateResult aggregate(std::span<const core::OperationalState> states,
                          const core::WeightTable& weights = core::WeightTable::defaults());

core::AdministrativeState aggregateAdministrative(std::span<const core::AdministrativeState> states,
                                                  const core::WeightTable& weights = core::WeightTable::defaults());

struct PairedReport {
    core::MonitoredLinkReport report;
    bool halfReported = false;  // an INTER_DOMAIN_LINK_PART without its counterpart
    bool overReported = false;  // more than two parts for one inter-domain section
    std::vector<core::MonitoredLinkReport> sources;

    friend bool operator==(const PairedReport&, const PairedReport&) = default;
};

struct PairingResult {
    std::vector<PairedReport> reports;
    std::vector<Diagnostic> diagnostics;
};

/// Collapses every group of INTER_DOMAIN_LINK_PART reports sharing
/// (E2E id, unordered DP pair) into one INTER_DOMAIN_LINK report carrying
/// the worst states of the group. Other reports pass through. Output is in
/// canonical order.
PairingResult pairInterDomainParts(std::span<const core::MonitoredLinkReport> reports,
                                   const core::WeightTable& weights = core::WeightTable::defaults());

/// Merges reports that agree on (E2E id, unordered DP pair, type, domain):
/// worst states, latest timestamp.
std::vector<core::MonitoredLinkReport> deduplicate(std::span<const core::MonitoredLinkReport> reports,
                                                   std::vector<Diagnostic>* diagnostics = nullptr,
                                                   const core::WeightTable& weights = core::WeightTable::defaults());

struct Section {
    core::DemarcationPointId dpA;  // entry side along the fragment
    core::DemarcationPointId dpB;  // exit side along the fragment
    core::MonitoredLinkType linkType = core::MonitoredLinkType::DomainLink;
    core::OperationalState operational = core::OperationalState::Unknown;
    core::AdministrativeState administrative = core::AdministrativeState::Unknown;
    bool halfReported = false;
    std::vector<std::string> domains;  // sorted, unique
    std::vector<core::MonitoredLinkReport> contributingReports;

    friend bool operator==(const Section&, const Section&) = default;
};

using Fragment = std::vector<Section>;

struct Gap {
    core::DemarcationPointId after;   // last DP of the preceding fragment
    core::DemarcationPointId before;  // first DP of the following fragment

    friend bool operator==(const Gap&, const Gap&) = default;
};

using Endpoints = std::pair<core::DemarcationPointId, core::DemarcationPointId>;

struct E2ELinkView {
    core::E2ELinkId e2eLinkId;
    std::vector<Fragment> fragments;
    std::vector<Gap> gaps;
    core::OperationalState aggregatedOperational = core::OperationalState::Unknown;
    core::AdministrativeState aggregatedAdministrative = core::AdministrativeState::Unknown;
    bool hasUnknown = true;
    bool fullyReconstructed = false;
    bool topologyConflict = false;
    std::vector<Diagnostic> diagnostics;

    std::size_t sectionCount() const noexcept;
    /// Every report that fed any section, in fragment order.
    std::vector<core::MonitoredLinkReport> contributingReports() const;

    friend bool operator==(const E2ELinkView&, const E2ELinkView&) = default;
};

/// Rebuilds one E2E link from the cycle's reports. `endpoints`, when given,
/// are (Tier-0 side, far side) and anchor fragment orientation and order.
/// A link with no reports yields an empty UNKNOWN view. Branching or cyclic
/// report sets are flagged with a TopologyConflict diagnostic; the view is
/// still returned, never fully reconstructed.
E2ELinkView stitch(const core::E2ELinkId& linkId, std::span<const core::MonitoredLinkReport> reports,
                   const std::optional<Endpoints>& endpoints = std::nullopt,
                   const core::WeightTable& weights = core::WeightTable::defaults());

/// Convenience overload; requires a non-empty report list.
E2ELinkView stitch(std::span<const core::MonitoredLinkReport> reports,
                   const std::optional<Endpoints>& endpoints = std::nullopt,
                   const core::WeightTable& weights = core::WeightTable::defaults());

}  // namespace opnmon::assembly
