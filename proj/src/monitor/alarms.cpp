#include "opnmon/monitor/alarms.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cstring>

#include <spdlog/spdlog.h>

namespace opnmon::monitor {

std::vector<AlarmEvent> detectTransitions(const CycleResult& previous, const CycleResult& current) {
    std::vector<AlarmEvent> events;
    for (const auto& [id, view] : current.views) {
        const assembly::E2ELinkView* before = previous.find(id);
        if (before == nullptr || before->aggregatedOperational == view.aggregatedOperational) continue;
        AlarmEvent e;
        e.linkId = id;
        e.oldState = before->aggregatedOperational;
        e.newState = view.aggregatedOperational;
        e.administrative = view.aggregatedAdministrative;
        e.cycleIndex = current.cycle.index;
        e.notify = e.newState == core::OperationalState::Degraded || e.newState == core::OperationalState::Down;
        e.suppressed = view.aggregatedAdministrative == core::AdministrativeState::PlannedMaintenance;
        events.push_back(std::move(e));
    }
    return events;
}

std::string toJsonLine(const AlarmEvent& event) {
    nlohmann::json j{{"cycle", event.cycleIndex},
                     {"link", event.linkId.str()},
                     {"old", core::toString(event.oldState)},
                     {"new", core::toString(event.newState)},
                     {"administrative", core::toString(event.administrative)},
                     {"notify", event.notify},
                     {"suppressed", event.suppressed},
                     {"channels", event.channels}};
    return j.dump();
}

JsonLinesSink::JsonLinesSink(std::string name, SinkRole role, std::filesystem::path path)
    : name_(std::move(name)), role_(role), path_(std::move(path)) {
    if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
}

void JsonLinesSink::deliver(const AlarmEvent& event) {
    std::lock_guard lock(mutex_);
    std::ofstream out(path_, std::ios::app | std::ios::binary);
    out << toJsonLine(event) << '\n';
}

UdpTrapSink::UdpTrapSink(std::string name, std::string host, int port) : name_(std::move(name)) {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_DGRAM;
    addrinfo* res = nullptr;
    const std::string service = std::to_string(port);
    if (getaddrinfo(host.c_str(), service.c_str(), &hints, &res) != 0 || res == nullptr) {
        throw MonitorError(MonitorError::Kind::Config, "cannot resolve trap target " + host);
    }
    fd_ = ::socket(res->ai_family, res->ai_socktype, res->ai_protocol);
    if (fd_ >= 0) {
        const auto* bytes = reinterpret_cast<const unsigned char*>(res->ai_addr);
        address_.assign(bytes, bytes + res->ai_addrlen);
    }
    freeaddrinfo(res);
    if (fd_ < 0) throw MonitorError(MonitorError::Kind::Config, "cannot open UDP socket");
}

UdpTrapSink::~UdpTrapSink() {
    if (fd_ >= 0) ::close(fd_);
}

void UdpTrapSink::deliver(const AlarmEvent& event) {
    const std::string payload = toJsonLine(event);
    const auto sent = ::sendto(fd_, payload.data(), payload.size(), 0,
                               reinterpret_cast<const sockaddr*>(address_.data()),
                               static_cast<socklen_t>(address_.size()));
    if (sent < 0) spdlog::warn("trap sink {}: sendto failed: {}", name_, std::strerror(errno));
}

void MemorySink::deliver(const AlarmEvent& event) {
    std::lock_guard lock(mutex_);
    events_.push_back(event);
}

std::vector<AlarmEvent> MemorySink::events() const {
    std::lock_guard lock(mutex_);
    return events_;
}

std::unique_ptr<NotificationSink> makeSink(const SinkConfig& config) {
    if (config.transport == "udp") {
        if (config.role != SinkRole::Trap) {
            throw MonitorError(MonitorError::Kind::Config, "sink " + config.name + ": udp transport is trap-only");
        }
        return std::make_unique<UdpTrapSink>(config.name, config.host, config.port);
    }
    if (config.path.empty()) throw MonitorError(MonitorError::Kind::Config, "sink " + config.name + " has no path");
    return std::make_unique<JsonLinesSink>(config.name, config.role, config.path);
}

void AlarmDispatcher::addSink(std::unique_ptr<NotificationSink> sink) { sinks_.push_back(std::move(sink)); }

void AlarmDispatcher::dispatch(std::vector<AlarmEvent>& events) {
    for (auto& e : events) {
        e.channels.clear();
        for (const auto& sink : sinks_) {
            if (sink->role() == SinkRole::Trap || (e.notify && !e.suppressed)) e.channels.push_back(sink->name());
        }
        for (const auto& sink : sinks_) {
            if (sink->role() == SinkRole::Trap || (e.notify && !e.suppressed)) sink->deliver(e);
        }
    }
}

}  // namespace opnmon::monitor
