// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 on any failure.

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <spdlog/spdlog.h>
#include <unistd.h>

#include "opnmon/archive/archive.hpp"
#include "opnmon/assembly/stitch.hpp"
#include "opnmon/monitor/exports.hpp"
#include "opnmon/monitor/service.hpp"
#include "opnmon/mp/agent_server.hpp"
#include "opnmon/nmwg/codec.hpp"
#include "opnmon/sim/simulator.hpp"
#include "opnmon/weathermap/status.hpp"
#include "oracles.hpp"
#include "random_docs.hpp"

using namespace opnmon;
using core::AdministrativeState;
using core::OperationalState;
using Clock = std::chrono::steady_clock;

namespace {

// Pinned limits.
constexpr double kAggregationBudgetSeconds = 1.0;
constexpr double kStitchingBudgetSeconds = 10.0;
constexpr double kCycleBudgetSeconds = 5.0;
constexpr double kEndToEndBudgetSeconds = 60.0;
constexpr const char* kExpectedLedgerRow = "L,75.00,16.67,8.33,0.00,12";
constexpr std::size_t kDayPoints = 288;
constexpr std::size_t kMeshSeries = 132;
constexpr int kFederationSize = 30;
constexpr int kCodecDocuments = 1000;
constexpr int kStitchChains = 1000;
constexpr std::int64_t kEndToEndCycles = 24;

constexpr std::int64_t kOrigin = 1791763200;

struct Outcome {
    bool pass = false;
    std::string detail;
};

double secondsSince(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmtSeconds(double s) {
    std::ostringstream os;
    os.precision(3);
    os << std::fixed << s << " s";
    return os.str();
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::filesystem::path scratch(const std::string& tag) {
    auto dir = std::filesystem::temp_directory_path() / ("opnmon-acc-" + tag + "-" + std::to_string(::getpid()));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

core::MonitoredLinkReport report(const std::string& link, const std::string& a, const std::string& b,
                                 OperationalState op, const std::string& domain,
                                 core::MonitoredLinkType type = core::MonitoredLinkType::DomainLink) {
    return {core::E2ELinkId(link), type, core::DemarcationPointId(a), core::DemarcationPointId(b), domain, op,
            AdministrativeState::NormalOperation, kOrigin};
}

core::StateMappingTable identityMapping() {
    core::StateMappingTable m;
    for (auto s : core::kOperationalStates) m.operational.emplace(std::string(core::toString(s)), s);
    for (auto s : core::kAdministrativeStates) m.administrative.emplace(std::string(core::toString(s)), s);
    return m;
}

Outcome aggregation() {
    const auto start = Clock::now();
    std::size_t checked = 0;
    for (int n = 1; n <= 6; ++n) {
        for (const auto& seq : oracle::allSequences(n)) {
            if (assembly::aggregate(seq).state != oracle::worstOf(seq)) {
                return {false, "mismatch at n=" + std::to_string(n)};
            }
            ++checked;
        }
    }
    const double t = secondsSince(start);
    return {t < kAggregationBudgetSeconds, std::to_string(checked) + " multisets in " + fmtSeconds(t)};
}

std::vector<std::string> chainDps(const std::vector<oracle::ChainSection>& chain) {
    std::vector<std::string> dps;
    const bool aShared = chain[0].a == chain[1].a || chain[0].a == chain[1].b;
    dps.push_back(aShared ? chain[0].b : chain[0].a);
    for (const auto& s : chain) dps.push_back(s.a == dps.back() ? s.b : s.a);
    return dps;
}

Outcome stitching() {
    const auto start = Clock::now();
    std::mt19937_64 rng(20261012);
    const core::E2ELinkId id("CHAIN");
    for (int trial = 0; trial < kStitchChains; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 11);
        auto chain = oracle::randomChain(rng, n, "dp");
        const auto dps = chainDps(chain);
        std::vector<core::MonitoredLinkReport> reports;
        for (std::size_t i = 0; i < chain.size(); ++i) {
            reports.push_back(report("CHAIN", chain[i].a, chain[i].b, chain[i].state, "D" + std::to_string(i)));
        }
        std::shuffle(reports.begin(), reports.end(), rng);
        const assembly::Endpoints ends{core::DemarcationPointId(dps.front()), core::DemarcationPointId(dps.back())};
        const auto view = assembly::stitch(id, reports, ends);
        bool exact = view.fullyReconstructed && view.fragments.size() == 1 &&
                     view.fragments[0].size() == static_cast<std::size_t>(n);
        for (int i = 0; exact && i < n; ++i) {
            exact = view.fragments[0][i].dpA.str() == dps[i] && view.fragments[0][i].dpB.str() == dps[i + 1];
        }
        if (!exact) return {false, "chain " + std::to_string(trial) + " not reconstructed"};

        if (n >= 3) {
            const std::size_t removed = 1 + rng() % static_cast<std::size_t>(n - 2);
            std::vector<core::MonitoredLinkReport> holed;
            for (const auto& r : reports) {
                const bool isRemoved = (r.dpA.str() == dps[removed] && r.dpB.str() == dps[removed + 1]) ||
                                       (r.dpB.str() == dps[removed] && r.dpA.str() == dps[removed + 1]);
                if (!isRemoved) holed.push_back(r);
            }
            const auto gapped = assembly::stitch(id, holed, ends);
            if (gapped.fragments.size() != 2 || gapped.gaps.size() != 1) {
                return {false, "chain " + std::to_string(trial) + " with a hole gave " +
                                   std::to_string(gapped.fragments.size()) + " fragments"};
            }
        }
    }
    const double t = secondsSince(start);
    return {t < kStitchingBudgetSeconds, std::to_string(kStitchChains) + " chains in " + fmtSeconds(t)};
}

Outcome pairing() {
    int pairs = 0;
    for (auto a : core::kOperationalStates) {
        for (auto b : core::kOperationalStates) {
            const std::vector reports{
                report("L", "x", "y", a, "GEANT", core::MonitoredLinkType::InterDomainLinkPart),
                report("L", "y", "x", b, "DFN", core::MonitoredLinkType::InterDomainLinkPart)};
            const auto paired = assembly::pairInterDomainParts(reports);
            if (paired.reports.size() != 1 || paired.reports[0].report.operational != oracle::worstOf({a, b}) ||
                paired.reports[0].report.linkType != core::MonitoredLinkType::InterDomainLink) {
                return {false, std::string("pair ") + std::string(core::toString(a)) + "/" +
                                   std::string(core::toString(b))};
            }
            ++pairs;
        }
    }
    return {pairs == 16, std::to_string(pairs) + " pairs"};
}

/// Two domains, one link a-b-c. Returns the weekly CSV after the script.
struct TwoDomainRig {
    std::shared_ptr<mp::MeasurementPoint> left = std::make_shared<mp::MeasurementPoint>("LEFT", identityMapping());
    std::shared_ptr<mp::MeasurementPoint> right = std::make_shared<mp::MeasurementPoint>("RIGHT", identityMapping());
    std::shared_ptr<monitor::InProcessPoller> poller = std::make_shared<monitor::InProcessPoller>();
    std::unique_ptr<monitor::MonitorService> service;
    monitor::MemorySink* notify = nullptr;
    monitor::MemorySink* trap = nullptr;

    TwoDomainRig() {
        poller->attach("inproc://LEFT", left);
        poller->attach("inproc://RIGHT", right);
        monitor::MonitorConfig cfg;
        cfg.origin = kOrigin;
        cfg.mps = {{"LEFT", "inproc://LEFT", std::chrono::seconds(1), false},
                   {"RIGHT", "inproc://RIGHT", std::chrono::seconds(1), true}};
        cfg.links = {{core::E2ELinkId("L"), true,
                      assembly::Endpoints{core::DemarcationPointId("a"), core::DemarcationPointId("c")}}};
        service = std::make_unique<monitor::MonitorService>(cfg, poller);
        auto n = std::make_unique<monitor::MemorySink>("notify", monitor::SinkRole::Notify);
        auto t = std::make_unique<monitor::MemorySink>("trap", monitor::SinkRole::Trap);
        notify = n.get();
        trap = t.get();
        service->addSink(std::move(n));
        service->addSink(std::move(t));
    }

    std::shared_ptr<const monitor::Publication> step(std::int64_t cycle, const std::string& op, const std::string& admin,
                                                     bool rightReachable = true) {
        const std::int64_t t = kOrigin + cycle * 300;
        left->ingestSnapshot({"LEFT", t, {{"l1", "L", core::MonitoredLinkType::DomainLink, "a", "b", op, admin}}});
        right->ingestSnapshot(
            {"RIGHT", t, {{"r1", "L", core::MonitoredLinkType::DomainLink, "b", "c", "UP", "NORMAL_OPERATION"}}});
        poller->setReachable("inproc://RIGHT", rightReachable);
        return service->step(cycle);
    }
};

Outcome ledger() {
    TwoDomainRig rig;
    std::shared_ptr<const monitor::Publication> last;
    for (int c = 0; c < 12; ++c) {
        if (c < 9) last = rig.step(c, "UP", "NORMAL_OPERATION");
        else if (c < 11) last = rig.step(c, "DOWN", "NORMAL_OPERATION");
        else last = rig.step(c, "UP", "NORMAL_OPERATION", false);
    }
    const auto* l = rig.service->ledgers().current(core::E2ELinkId("L"), monitor::Window::Weekly);
    const bool rowFound = last->weeklyCsv.find(std::string(kExpectedLedgerRow) + "\n") != std::string::npos;
    const bool summed = l != nullptr && l->certainUp + l->down + l->uncertain + l->unknown == 12 && l->total == 12;
    const std::string row = last->weeklyCsv.substr(last->weeklyCsv.find('\n') + 1);
    return {rowFound && summed, "row " + row.substr(0, row.find('\n'))};
}

Outcome cycleBudget() {
    std::vector<std::unique_ptr<mp::MeasurementPoint>> points;
    std::vector<std::unique_ptr<mp::AgentServer>> servers;
    std::vector<monitor::MpEndpoint> registry;
    std::vector<monitor::LinkConfig> links;
    constexpr int kLinks = 12;
    for (int l = 0; l < kLinks; ++l) {
        const std::string id = "E2E-" + std::to_string(l);
        links.push_back({core::E2ELinkId(id), true,
                         assembly::Endpoints{core::DemarcationPointId(id + "-dp0"),
                                             core::DemarcationPointId(id + "-dp" + std::to_string(kFederationSize))}});
    }
    for (int d = 0; d < kFederationSize; ++d) {
        const std::string domain = "NREN" + std::to_string(d);
        auto point = std::make_unique<mp::MeasurementPoint>(domain, identityMapping());
        mp::LocalSnapshot snap{domain, kOrigin, {}};
        for (int l = 0; l < kLinks; ++l) {
            const std::string id = "E2E-" + std::to_string(l);
            snap.entries.push_back({domain + "-" + id, id, core::MonitoredLinkType::DomainLink,
                                    id + "-dp" + std::to_string(d), id + "-dp" + std::to_string(d + 1), "UP",
                                    "NORMAL_OPERATION"});
        }
        point->ingestSnapshot(snap);
        auto server = std::make_unique<mp::AgentServer>(*point);
        const int port = server->startOnAnyPort();
        if (port <= 0) return {false, "could not bind agent " + domain};
        registry.push_back({domain, "http://127.0.0.1:" + std::to_string(port) + "/mp", std::chrono::seconds(5),
                            d % 2 == 1});
        points.push_back(std::move(point));
        servers.push_back(std::move(server));
    }
    const auto start = Clock::now();
    const auto result = monitor::runCycle(core::PollingCycle::at(kOrigin, 0), registry,
                                          std::make_shared<monitor::HttpStatusPoller>(), links);
    monitor::LedgerBook book;
    std::set<core::E2ELinkId> productive;
    for (const auto& l : links) productive.insert(l.id);
    monitor::updateLedgers(result, book, productive);
    const auto xml = monitor::exportStatusXml(result, productive);
    const double t = secondsSince(start);
    for (auto& s : servers) s->stop();

    std::size_t complete = 0;
    for (const auto& [id, v] : result.views) complete += v.fullyReconstructed ? 1 : 0;
    const bool ok = result.respondingDomains() == kFederationSize && complete == kLinks && !xml.empty();
    return {ok && t <= kCycleBudgetSeconds, std::to_string(result.respondingDomains()) + " MPs, " +
                                                std::to_string(complete) + " links stitched in " + fmtSeconds(t)};
}

Outcome suppression() {
    TwoDomainRig inside;
    inside.step(0, "UP", "NORMAL_OPERATION");
    inside.step(1, "UP", "PLANNED_MAINTENANCE");
    const auto pubIn = inside.step(2, "DOWN", "PLANNED_MAINTENANCE");
    const bool suppressed = pubIn->alarms.size() == 1 && pubIn->alarms[0].suppressed &&
                            inside.notify->events().empty() && inside.trap->events().size() == 1;

    TwoDomainRig outside;
    outside.step(0, "UP", "NORMAL_OPERATION");
    outside.step(1, "UP", "NORMAL_OPERATION");
    const auto pubOut = outside.step(2, "DOWN", "NORMAL_OPERATION");
    const bool notified = pubOut->alarms.size() == 1 && !pubOut->alarms[0].suppressed &&
                          outside.notify->events().size() == 1;
    return {suppressed && notified, "inside window: " + std::to_string(inside.notify->events().size()) +
                                        " notify, outside: " + std::to_string(outside.notify->events().size())};
}

Outcome codec() {
    std::mt19937_64 rng(1);
    for (int i = 0; i < kCodecDocuments; ++i) {
        const auto doc = gen::randomDocument(rng);
        const bool soap = i % 2 == 1;
        const auto parsed = nmwg::parseMessage(nmwg::emitStatusDocument(doc, soap));
        if (!(parsed.document == doc) || parsed.soapEnvelope != soap) {
            return {false, "document " + std::to_string(i) + " changed on round trip"};
        }
    }
    const char* listing = R"(<nmwg:message type="SetupDataRequest"
      xmlns:nmwg="http://ggf.org/ns/nmwg/base/2.0/">
   <nmwg:metadata id="meta1">
     <nmwg:eventType>Path.Status</nmwg:eventType>
   </nmwg:metadata>
   <nmwg:data id="data1" metadataIdRef="meta1"/>
</nmwg:message>)";
    const auto skeleton = nmwg::parseStatusDocument(listing);
    const bool shape = skeleton.messageType == "SetupDataRequest" && skeleton.metadata.size() == 1 &&
                       skeleton.metadata[0].id == "meta1" && skeleton.metadata[0].eventType == "Path.Status" &&
                       skeleton.data.size() == 1 && skeleton.data[0].id == "data1" &&
                       skeleton.data[0].metadataRef == "meta1" && skeleton.data[0].reports.empty();
    return {shape, std::to_string(kCodecDocuments) + " documents, skeleton " + (shape ? "ok" : "wrong")};
}

Outcome weathermapRule() {
    const std::vector<std::optional<OperationalState>> members{OperationalState::Up, OperationalState::Degraded,
                                                               OperationalState::Down, OperationalState::Unknown,
                                                               std::nullopt};
    int cells = 0;
    for (const auto& a : members) {
        for (const auto& b : members) {
            const std::vector pair{a, b};
            if (weathermap::toString(weathermap::combineMemberStates(pair)) != oracle::pairRule(a, b)) {
                return {false, "table cell mismatch"};
            }
            ++cells;
        }
    }
    const std::vector<std::optional<OperationalState>> absent{std::nullopt, std::nullopt};
    if (weathermap::combineMemberStates(absent) != weathermap::AbstractLinkStatus::TopologyUnknown) {
        return {false, "all-absent is not TOPOLOGY_UNKNOWN"};
    }
    int replacements = 0;
    for (const auto& a : members) {
        for (const auto& b : members) {
            std::vector pair{a, b};
            const int before = oracle::abstractSeverity(std::string(weathermap::toString(weathermap::combineMemberStates(pair))));
            for (std::size_t i = 0; i < 2; ++i) {
                if (!pair[i]) continue;
                for (auto r : core::kOperationalStates) {
                    if (oracle::memberSeverity(r) <= oracle::memberSeverity(*pair[i])) continue;
                    auto worse = pair;
                    worse[i] = r;
                    const int after =
                        oracle::abstractSeverity(std::string(weathermap::toString(weathermap::combineMemberStates(worse))));
                    if (after < before) return {false, "monotonicity violated"};
                    ++replacements;
                }
            }
        }
    }
    return {cells == 25, std::to_string(cells) + " cells, " + std::to_string(replacements) + " worsening steps"};
}

Outcome endToEnd() {
    const auto scenario = sim::loadScenario(std::string(FIXTURE_DIR) + "/scenario.json");
    const std::vector<std::string> files{"status.xml",  "stats-weekly.csv", "stats-monthly.csv",
                                         "alarms.jsonl", "notify.jsonl",     "trap.jsonl"};
    const auto start = Clock::now();
    std::vector<std::map<std::string, std::string>> outputs;
    std::vector<std::string> perCycleXml(2);
    for (int run = 0; run < 2; ++run) {
        const auto dir = scratch("e2e" + std::to_string(run));
        sim::SimulatorOptions opts;
        opts.outputDir = dir;
        sim::Simulator simulator(scenario, opts);
        const auto trace = simulator.run(kEndToEndCycles);
        for (const auto& c : trace.cycles) perCycleXml[run] += c.statusXml;
        std::map<std::string, std::string> contents;
        for (const auto& f : files) contents[f] = slurp(dir / f);
        outputs.push_back(std::move(contents));
        std::filesystem::remove_all(dir);
    }
    const double t = secondsSince(start);
    for (const auto& f : files) {
        if (outputs[0][f] != outputs[1][f]) return {false, f + " differs between runs"};
        if (outputs[0][f].empty() && f != "notify.jsonl") return {false, f + " is empty"};
    }
    if (perCycleXml[0] != perCycleXml[1]) return {false, "per-cycle status.xml differs"};
    return {t <= kEndToEndBudgetSeconds,
            "2 x " + std::to_string(kEndToEndCycles) + " cycles, byte-identical outputs, " + fmtSeconds(t)};
}

Outcome archiveShape() {
    archive::MetricArchive store;
    std::vector<std::string> nodes;
    for (int i = 0; i < 12; ++i) nodes.push_back("node" + std::to_string(i));
    std::vector<archive::MetricSample> batch;
    for (int slot = 0; slot < 288; ++slot) {
        for (const auto& s : nodes) {
            for (const auto& d : nodes) {
                if (s == d) continue;
                batch.push_back({archive::SeriesKey::hades(s, d, archive::MetricKind::OneWayDelay),
                                 kOrigin + slot * 300 + 42, archive::Triplet{1, 2, 3}});
            }
        }
    }
    store.ingestBatch(batch);
    const auto keys = store.seriesKeys();
    std::size_t minPoints = SIZE_MAX;
    for (const auto& k : keys) minPoints = std::min(minPoints, store.queryWindow(k, kOrigin, kOrigin + 86400).size());
    std::size_t maxPoints = 0;
    for (const auto& k : keys) maxPoints = std::max(maxPoints, store.queryWindow(k, kOrigin, kOrigin + 86400).size());
    const bool ok = keys.size() == kMeshSeries && minPoints == kDayPoints && maxPoints == kDayPoints &&
                    archive::missingMeshPairs(store, nodes, archive::MetricKind::OneWayDelay).empty();
    return {ok, std::to_string(keys.size()) + " series, " + std::to_string(minPoints) + " points each"};
}

}  // namespace

int main() {
    spdlog::set_level(spdlog::level::err);
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"aggregation-oracle", aggregation},
        {"stitching", stitching},
        {"inter-domain-pairing", pairing},
        {"availability-ledger", ledger},
        {"cycle-budget", cycleBudget},
        {"maintenance-suppression", suppression},
        {"nmwg-codec-round-trip", codec},
        {"weathermap-status", weathermapRule},
        {"end-to-end-determinism", endToEnd},
        {"archive-shape", archiveShape},
    };
    int failures = 0;
    for (const auto& [name, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
        failures += o.pass ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
