#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "opnmon/assembly/stitch.hpp"
#include "opnmon/core/model.hpp"

namespace opnmon::monitor {

class MonitorError : public Error {
public:
    enum class Kind { EmptyRegistry, Config };

    MonitorError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

struct MpEndpoint {
    std::string domain;
    std::string url;
    std::chrono::milliseconds timeout{30000};
    bool soap = false;  // wrap requests in a SOAP 1.1 envelope
};

struct LinkConfig {
    core::E2ELinkId id;
    bool productive = false;
    std::optional<assembly::Endpoints> endpoints;  // (Tier-0 side, far side)
};

enum class SinkRole { Notify, Trap };

struct SinkConfig {
    std::string name;
    SinkRole role = SinkRole::Notify;
    std::string transport;  // "file" or "udp"
    std::filesystem::path path;
    std::string host;
    int port = 0;
};

struct MonitorConfig {
    std::int64_t period = core::kDefaultPollingPeriod;
    std::optional<std::int64_t> origin;  // start of cycle 0; defaults to the current period boundary
    std::vector<MpEndpoint> mps;
    std::vector<LinkConfig> links;
    std::vector<SinkConfig> sinks;
    std::filesystem::path outputDir;  // empty: no files written
    core::WeightTable weights;

    std::set<core::E2ELinkId> productiveLinks() const;
    const LinkConfig* findLink(const core::E2ELinkId& id) const noexcept;
};

/// Throws MonitorError(Config) on duplicate MP urls or link ids and on bad values.
void validate(const MonitorConfig& config);

MonitorConfig monitorConfigFromJson(const nlohmann::json& j, const std::filesystem::path& baseDir = {});
MonitorConfig loadMonitorConfig(const std::filesystem::path& file);

}  // namespace opnmon::monitor
