#include "opnmon/mp/agent.hpp"

namespace opnmon::mp {

nmwg::StatusDocument buildStatusDocument(const LocalSnapshot& snapshot, const core::StateMappingTable& mapping) {
    std::vector<core::MonitoredLinkReport> reports;
    reports.reserve(snapshot.entries.size());
    for (const auto& entry : snapshot.entries) {
        core::MonitoredLinkReport r;
        try {
            r.e2eLinkId = core::E2ELinkId(entry.e2eLinkId);
            r.dpA = core::DemarcationPointId(entry.dpA);
            r.dpB = core::DemarcationPointId(entry.dpB);
            r.linkType = entry.linkType;
            r.reportingDomain = snapshot.domain;
            r.operational = mapping.mapOperational(entry.vendorState);
            r.administrative = mapping.mapAdministrative(entry.adminStateRaw);
            r.cycleTimestamp = snapshot.snapshotTime;
            core::validate(r);
        } catch (const core::ModelError& e) {
            throw AgentError(AgentError::Kind::InvalidSnapshot,
                             "snapshot entry '" + entry.localLinkId + "': " + e.what());
        }
        reports.push_back(std::move(r));
    }
    return nmwg::makeStatusDocument(nmwg::kResponseType, std::move(reports));
}

MeasurementPoint::MeasurementPoint(std::string domain, core::StateMappingTable mapping)
    : domain_(std::move(domain)),
      mapping_(std::move(mapping)),
      served_(std::make_shared<const nmwg::StatusDocument>(nmwg::makeStatusDocument(nmwg::kResponseType, {}))) {}

std::shared_ptr<const nmwg::StatusDocument> MeasurementPoint::ingestSnapshot(const LocalSnapshot& snapshot) {
    if (snapshot.domain != domain_) {
        throw AgentError(AgentError::Kind::DomainMismatch,
                         "snapshot for domain '" + snapshot.domain + "' sent to MP of '" + domain_ + "'");
    }
    // Built outside the lock; only the pointer swap is serialised.
    auto doc = std::make_shared<const nmwg::StatusDocument>(buildStatusDocument(snapshot, mapping_));

    std::lock_guard lock(mutex_);
    if (snapshotTime_ && snapshot.snapshotTime < *snapshotTime_) {
        throw AgentError(AgentError::Kind::StaleSnapshot,
                         "snapshot time " + std::to_string(snapshot.snapshotTime) + " is older than served " +
                             std::to_string(*snapshotTime_));
    }
    snapshotTime_ = snapshot.snapshotTime;
    served_ = doc;
    return doc;
}

nmwg::StatusDocument MeasurementPoint::serveStatus(const nmwg::StatusDocument& request) const {
    if (request.messageType != nmwg::kRequestType) {
        throw AgentError(AgentError::Kind::InvalidRequest, "expected " + std::string(nmwg::kRequestType) +
                                                               ", got '" + request.messageType + "'");
    }
    if (request.metadata.empty()) {
        throw AgentError(AgentError::Kind::InvalidRequest, "request carries no metadata block");
    }
    for (const auto& m : request.metadata) {
        if (m.eventType != nmwg::kPathStatus) {
            throw AgentError(AgentError::Kind::UnsupportedEventType, "unsupported eventType '" + m.eventType + "'");
        }
    }
    return *current();
}

std::string MeasurementPoint::handle(std::string_view requestBytes) const {
    const nmwg::ParsedMessage parsed = nmwg::parseMessage(requestBytes);
    return nmwg::emitStatusDocument(serveStatus(parsed.document), parsed.soapEnvelope);
}

std::shared_ptr<const nmwg::StatusDocument> MeasurementPoint::current() const {
    std::lock_guard lock(mutex_);
    return served_;
}

std::optional<std::int64_t> MeasurementPoint::lastSnapshotTime() const {
    std::lock_guard lock(mutex_);
    return snapshotTime_;
}

}  // namespace opnmon::mp
