#include "opnmon/monitor/config.hpp"

#include <fstream>
#include <sstream>

namespace opnmon::monitor {

using nlohmann::json;

namespace {

[[noreturn]] void configError(const std::string& what) { throw MonitorError(MonitorError::Kind::Config, what); }

std::filesystem::path resolvePath(const std::string& p, const std::filesystem::path& baseDir) {
    std::filesystem::path path(p);
    return path.is_absolute() || baseDir.empty() ? path : baseDir / path;
}

std::array<int, 4> readWeights(const json& j, const char* key, std::array<int, 4> defaults, bool operational) {
    if (!j.contains(key)) return defaults;
    for (const auto& [name, weight] : j.at(key).items()) {
        std::size_t index = 0;
        if (operational) {
            auto s = core::parseOperationalState(name);
            if (!s) configError("unknown operational state '" + name + "' in weights");
            index = static_cast<std::size_t>(*s);
        } else {
            auto s = core::parseAdministrativeState(name);
            if (!s) configError("unknown administrative state '" + name + "' in weights");
            index = static_cast<std::size_t>(*s);
        }
        defaults[index] = weight.get<int>();
    }
    return defaults;
}

}  // namespace

std::set<core::E2ELinkId> MonitorConfig::productiveLinks() const {
    std::set<core::E2ELinkId> out;
    for (const auto& l : links) {
        if (l.productive) out.insert(l.id);
    }
    return out;
}

const LinkConfig* MonitorConfig::findLink(const core::E2ELinkId& id) const noexcept {
    for (const auto& l : links) {
        if (l.id == id) return &l;
    }
    return nullptr;
}

void validate(const MonitorConfig& config) {
    if (config.period <= 0) configError("period must be positive");
    std::set<std::string> urls;
    for (const auto& mp : config.mps) {
        if (mp.url.empty()) configError("MP endpoint for " + mp.domain + " has no url");
        if (!urls.insert(mp.url).second) configError("duplicate MP url " + mp.url);
        if (mp.timeout.count() <= 0) configError("MP timeout must be positive");
    }
    std::set<core::E2ELinkId> ids;
    for (const auto& l : config.links) {
        if (!ids.insert(l.id).second) configError("duplicate link " + l.id.str());
        if (l.endpoints && l.endpoints->first == l.endpoints->second) {
            configError("link " + l.id.str() + " has identical endpoints");
        }
    }
    std::set<std::string> sinkNames;
    for (const auto& s : config.sinks) {
        if (!sinkNames.insert(s.name).second) configError("duplicate sink name " + s.name);
        if (s.transport != "file" && s.transport != "udp") configError("sink " + s.name + ": unknown transport");
    }
    config.weights.validate();
}

MonitorConfig monitorConfigFromJson(const json& j, const std::filesystem::path& baseDir) {
    MonitorConfig cfg;
    try {
        cfg.period = j.value("period_seconds", core::kDefaultPollingPeriod);
        if (j.contains("origin")) cfg.origin = j.at("origin").get<std::int64_t>();
        for (const auto& m : j.value("mps", json::array())) {
            MpEndpoint ep;
            ep.domain = m.at("domain").get<std::string>();
            ep.url = m.at("url").get<std::string>();
            ep.timeout = std::chrono::milliseconds(
                static_cast<std::int64_t>(m.value("timeout_seconds", 30.0) * 1000.0));
            ep.soap = m.value("soap", false);
            cfg.mps.push_back(std::move(ep));
        }
        for (const auto& l : j.value("links", json::array())) {
            LinkConfig link;
            link.id = core::E2ELinkId(l.at("id").get<std::string>());
            link.productive = l.value("productive", false);
            if (l.contains("endpoints")) {
                const auto& ep = l.at("endpoints");
                if (!ep.is_array() || ep.size() != 2) configError("link endpoints must be a pair");
                link.endpoints = assembly::Endpoints{core::DemarcationPointId(ep[0].get<std::string>()),
                                                     core::DemarcationPointId(ep[1].get<std::string>())};
            }
            cfg.links.push_back(std::move(link));
        }
        for (const auto& s : j.value("sinks", json::array())) {
            SinkConfig sink;
            sink.name = s.at("name").get<std::string>();
            const std::string role = s.value("role", "notify");
            if (role == "notify") {
                sink.role = SinkRole::Notify;
            } else if (role == "trap") {
                sink.role = SinkRole::Trap;
            } else {
                configError("sink " + sink.name + ": unknown role '" + role + "'");
            }
            sink.transport = s.value("transport", "file");
            if (s.contains("path")) sink.path = resolvePath(s.at("path").get<std::string>(), baseDir);
            sink.host = s.value("host", "127.0.0.1");
            sink.port = s.value("port", 0);
            cfg.sinks.push_back(std::move(sink));
        }
        if (j.contains("output_dir")) cfg.outputDir = resolvePath(j.at("output_dir").get<std::string>(), baseDir);
        if (j.contains("weights")) {
            const auto& w = j.at("weights");
            cfg.weights.operational = readWeights(w, "operational", cfg.weights.operational, true);
            cfg.weights.administrative = readWeights(w, "administrative", cfg.weights.administrative, false);
        }
    } catch (const json::exception& e) {
        configError(std::string("monitor config: ") + e.what());
    } catch (const core::ModelError& e) {
        configError(std::string("monitor config: ") + e.what());
    }
    validate(cfg);
    return cfg;
}

MonitorConfig loadMonitorConfig(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) configError("cannot open " + file.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    json j = json::parse(ss.str(), nullptr, false);
    if (j.is_discarded()) configError(file.string() + " is not valid JSON");
    return monitorConfigFromJson(j, file.parent_path());
}

}  // namespace opnmon::monitor
