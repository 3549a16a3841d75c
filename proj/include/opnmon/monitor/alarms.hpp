#pragma once

#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "opnmon/monitor/config.hpp"
#include "opnmon/monitor/cycle.hpp"

namespace opnmon::monitor {

struct AlarmEvent {
    core::E2ELinkId linkId;
    core::OperationalState oldState = core::OperationalState::Unknown;
    core::OperationalState newState = core::OperationalState::Unknown;
    core::AdministrativeState administrative = core::AdministrativeState::Unknown;
    std::int64_t cycleIndex = 0;
    bool notify = false;      // new state is DEGRADED or DOWN
    bool suppressed = false;  // link under PLANNED_MAINTENANCE at the transition
    std::vector<std::string> channels;

    friend bool operator==(const AlarmEvent&, const AlarmEvent&) = default;
};

/// One event per link whose aggregated operational state differs between
/// the two cycles. Links missing from `previous` raise nothing.
std::vector<AlarmEvent> detectTransitions(const CycleResult& previous, const CycleResult& current);

/// Single-line JSON with sorted keys.
std::string toJsonLine(const AlarmEvent& event);

class NotificationSink {
public:
    virtual ~NotificationSink() = default;
    virtual const std::string& name() const noexcept = 0;
    virtual SinkRole role() const noexcept = 0;
    virtual void deliver(const AlarmEvent& event) = 0;
};

/// Append-only JSON-lines file; stands in for mail to the coordination unit.
class JsonLinesSink final : public NotificationSink {
public:
    JsonLinesSink(std::string name, SinkRole role, std::filesystem::path path);
    const std::string& name() const noexcept override { return name_; }
    SinkRole role() const noexcept override { return role_; }
    void deliver(const AlarmEvent& event) override;

private:
    std::string name_;
    SinkRole role_;
    std::filesystem::path path_;
    std::mutex mutex_;
};

/// One UDP datagram per event carrying the JSON line; a trap stand-in.
class UdpTrapSink final : public NotificationSink {
public:
    UdpTrapSink(std::string name, std::string host, int port);
    ~UdpTrapSink() override;
    UdpTrapSink(const UdpTrapSink&) = delete;
    UdpTrapSink& operator=(const UdpTrapSink&) = delete;

    const std::string& name() const noexcept override { return name_; }
    SinkRole role() const noexcept override { return SinkRole::Trap; }
    void deliver(const AlarmEvent& event) override;

private:
    std::string name_;
    int fd_ = -1;
    std::vector<unsigned char> address_;
};

/// Collects deliveries in memory.
class MemorySink final : public NotificationSink {
public:
    MemorySink(std::string name, SinkRole role) : name_(std::move(name)), role_(role) {}
    const std::string& name() const noexcept override { return name_; }
    SinkRole role() const noexcept override { return role_; }
    void deliver(const AlarmEvent& event) override;
    std::vector<AlarmEvent> events() const;

private:
    std::string name_;
    SinkRole role_;
    mutable std::mutex mutex_;
    std::vector<AlarmEvent> events_;
};

std::unique_ptr<NotificationSink> makeSink(const SinkConfig& config);

/// Routes events: trap sinks get every transition, notify sinks only
/// unsuppressed transitions to DEGRADED or DOWN. Fills AlarmEvent::channels.
class AlarmDispatcher {
public:
    void addSink(std::unique_ptr<NotificationSink> sink);
    void dispatch(std::vector<AlarmEvent>& events);
    const std::vector<std::unique_ptr<NotificationSink>>& sinks() const noexcept { return sinks_; }

private:
    std::vector<std::unique_ptr<NotificationSink>> sinks_;
};

}  // namespace opnmon::monitor
