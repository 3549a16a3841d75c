#include <atomic>
#include <csignal>
#include <thread>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "opnmon/monitor/poller.hpp"
#include "opnmon/monitor/service.hpp"

namespace {
std::atomic<bool> g_stop{false};
void onSignal(int) { g_stop = true; }
}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Central E2E link monitor: polls MPs, stitches links, keeps statistics and raises alarms"};
    std::string configPath;
    std::int64_t cycles = 0;
    bool accelerate = false;
    app.add_option("--config", configPath, "monitor configuration (JSON)")->required()->check(CLI::ExistingFile);
    app.add_option("--cycles", cycles, "stop after this many cycles (0: run forever)")->check(CLI::NonNegativeNumber);
    app.add_flag("--accelerate", accelerate, "run cycles back-to-back instead of on period boundaries");
    CLI11_PARSE(app, argc, argv);

    std::signal(SIGINT, onSignal);
    std::signal(SIGTERM, onSignal);
    try {
        auto config = opnmon::monitor::loadMonitorConfig(configPath);
        opnmon::monitor::MonitorService service(std::move(config), std::make_shared<opnmon::monitor::HttpStatusPoller>());
        const auto period = service.config().period;
        for (std::int64_t i = 0; !g_stop && (cycles == 0 || i < cycles); ++i) {
            if (!accelerate) {
                // Cycle i starts at origin + i * period on the wall clock.
                const auto due = std::chrono::system_clock::time_point(std::chrono::seconds(service.origin() + i * period));
                while (!g_stop && std::chrono::system_clock::now() < due) {
                    std::this_thread::sleep_for(std::chrono::milliseconds(200));
                }
                if (g_stop) break;
            }
            const auto pub = service.step(i);
            spdlog::info("cycle {}: {}/{} MPs answered, {} links, {} alarms, {} ms", i, pub->result->respondingDomains(),
                         pub->result->polls.size(), pub->result->views.size(), pub->alarms.size(),
                         pub->result->wallTime.count() / 1000);
        }
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return 1;
    }
    return 0;
}
