#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include "opnmon/core/model.hpp"
#include "opnmon/mp/snapshot.hpp"
#include "opnmon/nmwg/codec.hpp"

namespace opnmon::mp {

class AgentError : public Error {
public:
    enum class Kind { StaleSnapshot, DomainMismatch, InvalidSnapshot, UnsupportedEventType, InvalidRequest };

    AgentError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

/// Maps one snapshot to a response document; one report per entry.
nmwg::StatusDocument buildStatusDocument(const LocalSnapshot& snapshot, const core::StateMappingTable& mapping);

/// Per-domain measurement point. Ingest swaps the served document as a
/// whole; readers always see one complete snapshot.
class MeasurementPoint {
public:
    MeasurementPoint(std::string domain, core::StateMappingTable mapping);

    const std::string& domain() const noexcept { return domain_; }

    std::shared_ptr<const nmwg::StatusDocument> ingestSnapshot(const LocalSnapshot& snapshot);

    /// Answers a SetupDataRequest for Path.Status with the current document.
    nmwg::StatusDocument serveStatus(const nmwg::StatusDocument& request) const;

    /// Wire-level entry point: parses, serves and emits, mirroring the
    /// request's SOAP envelope choice.
    std::string handle(std::string_view requestBytes) const;

    std::shared_ptr<const nmwg::StatusDocument> current() const;
    std::optional<std::int64_t> lastSnapshotTime() const;

private:
    std::string domain_;
    core::StateMappingTable mapping_;

    mutable std::mutex mutex_;
    std::shared_ptr<const nmwg::StatusDocument> served_;
    std::optional<std::int64_t> snapshotTime_;
};

}  // namespace opnmon::mp
