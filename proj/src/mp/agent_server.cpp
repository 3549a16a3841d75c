#include "opnmon/mp/agent_server.hpp"

#include <fstream>
#include <sstream>

#include <httplib.h>
#include <spdlog/spdlog.h>

namespace opnmon::mp {

namespace {

std::string readFile(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SnapshotError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int statusFor(const AgentError& e) {
    switch (e.kind()) {
        case AgentError::Kind::StaleSnapshot: return 409;
        case AgentError::Kind::DomainMismatch: return 422;
        default: return 400;
    }
}

}  // namespace

AgentConfig agentConfigFromJson(const nlohmann::json& j, const std::filesystem::path& baseDir) {
    if (!j.is_object() || !j.contains("domain") || !j.at("domain").is_string()) {
        throw SnapshotError("agent config requires a string 'domain'");
    }
    AgentConfig cfg;
    cfg.domain = j.at("domain").get<std::string>();
    cfg.mapping = mappingFromJson(j.value("mapping", nlohmann::json()));
    if (j.contains("snapshot_path")) {
        std::filesystem::path p = j.at("snapshot_path").get<std::string>();
        cfg.snapshotPath = p.is_absolute() ? p : baseDir / p;
    }
    cfg.watchInterval = std::chrono::milliseconds(j.value("watch_interval_ms", 1000));
    return cfg;
}

AgentConfig loadAgentConfig(const std::filesystem::path& file) {
    auto j = nlohmann::json::parse(readFile(file), nullptr, false);
    if (j.is_discarded()) throw SnapshotError(file.string() + " is not valid JSON");
    return agentConfigFromJson(j, file.parent_path());
}

AgentServer::AgentServer(MeasurementPoint& mp) : mp_(mp), server_(std::make_unique<httplib::Server>()) {
    server_->Post("/mp", [this](const httplib::Request& req, httplib::Response& res) {
        try {
            res.set_content(mp_.handle(req.body), "text/xml; charset=utf-8");
        } catch (const nmwg::CodecError& e) {
            res.status = 400;
            res.set_content(e.what(), "text/plain");
        } catch (const AgentError& e) {
            res.status = statusFor(e);
            res.set_content(e.what(), "text/plain");
        }
    });
    server_->Put("/snapshot", [this](const httplib::Request& req, httplib::Response& res) {
        try {
            mp_.ingestSnapshot(parseSnapshot(req.body));
            res.status = 204;
        } catch (const SnapshotError& e) {
            res.status = 400;
            res.set_content(e.what(), "text/plain");
        } catch (const AgentError& e) {
            res.status = statusFor(e);
            res.set_content(e.what(), "text/plain");
        }
    });
}

AgentServer::~AgentServer() { stop(); }

int AgentServer::startOnAnyPort(const std::string& host) {
    const int port = server_->bind_to_any_port(host);
    if (port <= 0) return -1;
    serverThread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
    return port;
}

bool AgentServer::start(const std::string& host, int port) {
    if (!server_->bind_to_port(host, port)) return false;
    serverThread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
    return true;
}

bool AgentServer::listen(const std::string& host, int port) { return server_->listen(host, port); }

void AgentServer::stop() {
    watching_ = false;
    if (watchThread_.joinable()) watchThread_.join();
    server_->stop();
    if (serverThread_.joinable()) serverThread_.join();
}

bool AgentServer::loadSnapshotFile(const std::filesystem::path& path) {
    try {
        mp_.ingestSnapshot(parseSnapshot(readFile(path)));
        return true;
    } catch (const Error& e) {
        spdlog::warn("snapshot {} rejected: {}", path.string(), e.what());
        return false;
    }
}

void AgentServer::watchSnapshotFile(std::filesystem::path path, std::chrono::milliseconds interval) {
    watching_ = true;
    watchThread_ = std::thread([this, path = std::move(path), interval] {
        std::optional<std::filesystem::file_time_type> seen;
        while (watching_) {
            std::error_code ec;
            const auto mtime = std::filesystem::last_write_time(path, ec);
            if (!ec && (!seen || mtime != *seen)) {
                seen = mtime;
                loadSnapshotFile(path);
            }
            // Sleep in small steps so stop() is prompt.
            for (auto slept = std::chrono::milliseconds(0); watching_ && slept < interval;
                 slept += std::chrono::milliseconds(20)) {
                std::this_thread::sleep_for(std::chrono::milliseconds(20));
            }
        }
    });
}

}  // namespace opnmon::mp
