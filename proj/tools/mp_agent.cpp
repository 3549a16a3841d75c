#include <csignal>
#include <iostream>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "listen_address.hpp"
#include "opnmon/mp/agent_server.hpp"

namespace {
opnmon::mp::AgentServer* g_server = nullptr;
void onSignal(int) {
    if (g_server) g_server->stop();
}
}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Per-domain measurement point: serves Path.Status over NMWG"};
    std::string configPath;
    std::string listen = "127.0.0.1:8081";
    app.add_option("--config", configPath, "agent configuration (JSON)")->required()->check(CLI::ExistingFile);
    app.add_option("--listen", listen, "host:port to serve on");
    CLI11_PARSE(app, argc, argv);

    try {
        const auto cfg = opnmon::mp::loadAgentConfig(configPath);
        const auto [host, port] = opnmon::tools::parseListen(listen);
        opnmon::mp::MeasurementPoint mp(cfg.domain, cfg.mapping);
        opnmon::mp::AgentServer server(mp);
        if (cfg.snapshotPath) {
            server.loadSnapshotFile(*cfg.snapshotPath);
            server.watchSnapshotFile(*cfg.snapshotPath, cfg.watchInterval);
        }
        g_server = &server;
        std::signal(SIGINT, onSignal);
        std::signal(SIGTERM, onSignal);
        spdlog::info("mp-agent for {} listening on {}:{}", cfg.domain, host, port);
        if (!server.listen(host, port)) {
            spdlog::error("cannot listen on {}:{}", host, port);
            return 1;
        }
        g_server = nullptr;
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return 1;
    }
    return 0;
}
