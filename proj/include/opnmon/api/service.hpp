#pragma once

#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "opnmon/archive/archive.hpp"
#include "opnmon/monitor/cycle.hpp"
#include "opnmon/weathermap/status.hpp"

namespace opnmon::api {

class ApiError : public Error {
public:
    enum class Kind { NotReady, UnknownElement };

    ApiError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

inline constexpr std::int64_t kMetricWindow = 86400;
inline constexpr std::int64_t kMetricStep = 300;

/// What the monitor hands over after each cycle.
struct CycleInput {
    std::shared_ptr<const monitor::CycleResult> result;
    std::string statusXml;
    std::string weeklyCsv;
    std::string monthlyCsv;
};

/// Every payload of one published cycle, rendered up front.
struct Snapshot {
    std::int64_t cycleIndex = 0;
    std::int64_t windowFrom = 0;
    std::int64_t windowTo = 0;
    std::map<std::string, weathermap::AbstractLinkStatus> statuses;  // by abstract link id
    std::string overview;
    std::map<std::string, std::string> linkMetrics;
    std::map<std::string, std::string> nodeMetrics;
    std::map<std::string, std::string> e2eSegments;
    std::string statusXml;
    std::string weeklyCsv;
    std::string monthlyCsv;
};

/// Read-only facade over the latest published cycle. publish() renders a
/// complete Snapshot and swaps it in; readers never wait for rendering and
/// never see two cycles mixed in one payload.
class ApiService {
public:
    ApiService(weathermap::AbstractTopology topology, std::shared_ptr<const archive::MetricArchive> archive);

    void publish(const CycleInput& input);

    /// Latest snapshot, or nullptr before the first publish.
    std::shared_ptr<const Snapshot> snapshot() const;

    const std::string& topologyJson() const noexcept { return topologyJson_; }
    const weathermap::AbstractTopology& topology() const noexcept { return topology_; }

    // Each throws ApiError(NotReady) before the first cycle and
    // ApiError(UnknownElement) for ids not in the topology.
    std::string overview() const;
    std::string linkMetrics(const std::string& linkId) const;
    std::string nodeMetrics(const std::string& nodeId) const;
    std::string e2eSegments(const std::string& linkId) const;
    std::string statusXml() const;
    std::string statsCsv(std::string_view window) const;  // "weekly" or "monthly"

private:
    using StateMap = std::map<core::E2ELinkId, core::OperationalState>;

    std::shared_ptr<const Snapshot> require() const;

    std::string renderOverview(const monitor::CycleResult& result, const Snapshot& snap) const;
    std::string renderLinkMetrics(const weathermap::AbstractLink& link, const Snapshot& snap) const;
    std::string renderNodeMetrics(const weathermap::AbstractNode& node, const Snapshot& snap) const;
    std::string renderE2ESegments(const weathermap::AbstractLink& link, const monitor::CycleResult& result) const;

    weathermap::AbstractTopology topology_;
    std::shared_ptr<const archive::MetricArchive> archive_;
    std::string topologyJson_;

    std::mutex publishMutex_;            // serializes publishers
    std::map<std::int64_t, StateMap> history_;  // E2E states by 300 s slot

    mutable std::mutex snapshotMutex_;
    std::shared_ptr<const Snapshot> snapshot_;
};

}  // namespace opnmon::api
