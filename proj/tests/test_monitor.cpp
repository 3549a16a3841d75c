#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "opnmon/monitor/alarms.hpp"
#include "opnmon/monitor/exports.hpp"
#include "opnmon/monitor/ledger.hpp"
#include "opnmon/monitor/service.hpp"
#include "opnmon/mp/agent_server.hpp"
#include "oracles.hpp"

using namespace opnmon;
using namespace opnmon::monitor;
using core::AdministrativeState;
using core::OperationalState;

namespace {

constexpr std::int64_t kMonday = 1791763200;  // 2026-10-12 00:00 UTC

assembly::E2ELinkView viewOf(const std::string& id, OperationalState op,
                             AdministrativeState admin = AdministrativeState::NormalOperation, bool complete = true) {
    std::vector<core::MonitoredLinkReport> reports{{core::E2ELinkId(id), core::MonitoredLinkType::DomainLink,
                                                    core::DemarcationPointId("a"), core::DemarcationPointId("b"), "D",
                                                    op, admin, kMonday}};
    if (!complete) {
        reports.push_back(reports[0]);
        reports[1].dpA = core::DemarcationPointId("c");
        reports[1].dpB = core::DemarcationPointId("d");
    }
    return assembly::stitch(core::E2ELinkId(id), reports);
}

CycleResult cycleWith(std::int64_t index, std::vector<assembly::E2ELinkView> views) {
    CycleResult r;
    r.cycle = core::PollingCycle::at(kMonday, index);
    for (auto& v : views) r.views.emplace(v.e2eLinkId, std::move(v));
    return r;
}

std::filesystem::path tempDir(const std::string& tag) {
    auto dir = std::filesystem::temp_directory_path() / ("opnmon-" + tag + "-" + std::to_string(::getpid()));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

mp::LocalSnapshot domainSnapshot(const std::string& domain, const std::string& a, const std::string& b,
                                 const std::string& state, std::int64_t t = kMonday) {
    return {domain, t, {{"x", "L1", core::MonitoredLinkType::DomainLink, a, b, state, "NORMAL_OPERATION"}}};
}

core::StateMappingTable identityMapping() {
    core::StateMappingTable m;
    for (auto s : core::kOperationalStates) m.operational.emplace(std::string(core::toString(s)), s);
    for (auto s : core::kAdministrativeStates) m.administrative.emplace(std::string(core::toString(s)), s);
    return m;
}

}  // namespace

TEST(Percent, MatchesDecimalOracle) {
    for (std::uint64_t total = 1; total <= 150; ++total) {
        for (std::uint64_t count = 0; count <= total; ++count) {
            ASSERT_EQ(formatPercent(count, total), oracle::percent(count, total)) << count << "/" << total;
        }
    }
    EXPECT_EQ(formatPercent(1, 8), "12.50");
    EXPECT_EQ(formatPercent(1, 6), "16.67");
    EXPECT_EQ(formatPercent(0, 0), "n/a");
    EXPECT_EQ(formatPercent(8064, 8064), "100.00");
}

TEST(Ledger, NineTwoOneGivesSeventyFivePercent) {
    AvailabilityLedger l;
    l.linkId = core::E2ELinkId("L");
    for (int i = 0; i < 9; ++i) l.record(PeriodClass::CertainUp);
    for (int i = 0; i < 2; ++i) l.record(PeriodClass::Down);
    l.record(PeriodClass::Uncertain);
    EXPECT_TRUE(l.conserved());
    EXPECT_EQ(l.certainUp + l.down + l.uncertain + l.unknown, 12u);
    ASSERT_TRUE(l.availability());
    EXPECT_DOUBLE_EQ(*l.availability(), 0.75);
    const std::vector ledgers{l};
    EXPECT_EQ(exportStatsCsv(ledgers), std::string(kStatsCsvHeader) + "\nL,75.00,16.67,8.33,0.00,12\n");

    AvailabilityLedger empty;
    empty.linkId = core::E2ELinkId("M");
    EXPECT_FALSE(empty.availability());
    const std::vector none{empty};
    EXPECT_EQ(exportStatsCsv(none), std::string(kStatsCsvHeader) + "\nM,n/a,n/a,n/a,n/a,0\n");
}

TEST(Ledger, Classification) {
    EXPECT_EQ(classify(viewOf("L", OperationalState::Up)), PeriodClass::CertainUp);
    EXPECT_EQ(classify(viewOf("L", OperationalState::Degraded)), PeriodClass::CertainUp);
    EXPECT_EQ(classify(viewOf("L", OperationalState::Down)), PeriodClass::Down);
    EXPECT_EQ(classify(viewOf("L", OperationalState::Unknown)), PeriodClass::Unknown);
    EXPECT_EQ(classify(viewOf("L", OperationalState::Up, AdministrativeState::NormalOperation, false)),
              PeriodClass::Uncertain);
    EXPECT_EQ(classify(viewOf("L", OperationalState::Down, AdministrativeState::NormalOperation, false)),
              PeriodClass::Uncertain);
    EXPECT_EQ(classify(assembly::stitch(core::E2ELinkId("L"), std::span<const core::MonitoredLinkReport>{})),
              PeriodClass::Unknown);
}

TEST(Ledger, WindowBoundaries) {
    EXPECT_EQ(windowStart(Window::Weekly, kMonday), kMonday);
    EXPECT_EQ(windowStart(Window::Weekly, kMonday + 6 * 86400 + 86399), kMonday);
    EXPECT_EQ(windowStart(Window::Weekly, kMonday - 1), kMonday - 7 * 86400);
    EXPECT_EQ(windowStart(Window::Monthly, kMonday), kMonday - 11 * 86400);           // 2026-10-01
    EXPECT_EQ(windowStart(Window::Monthly, kMonday - 11 * 86400 - 1), 1788220800);   // 2026-09-01
    EXPECT_EQ(windowStart(Window::Monthly, 1709251200 - 1), 1706745600);             // Feb 2024 (leap)
}

TEST(Ledger, RollsOverAtWeekBoundary) {
    LedgerBook book;
    const core::E2ELinkId id("L");
    book.track(id, kMonday);
    const std::int64_t periods = 7 * 288;
    for (std::int64_t i = 0; i < periods + 3; ++i) book.record(id, kMonday + i * 300, PeriodClass::CertainUp);
    ASSERT_EQ(book.closed().size(), 1u);
    EXPECT_EQ(book.closed()[0].total, static_cast<std::uint64_t>(periods));
    EXPECT_EQ(book.closed()[0].window, Window::Weekly);
    const auto* current = book.current(id, Window::Weekly);
    ASSERT_NE(current, nullptr);
    EXPECT_EQ(current->windowStart, kMonday + 7 * 86400);
    EXPECT_EQ(current->total, 3u);
    EXPECT_EQ(book.current(id, Window::Monthly)->total, static_cast<std::uint64_t>(periods + 3));
}

TEST(Ledger, UpdateCountsOnlyProductiveLinks) {
    LedgerBook book;
    const std::set<core::E2ELinkId> productive{core::E2ELinkId("P"), core::E2ELinkId("MISSING")};
    for (const auto& id : productive) book.track(id, kMonday);
    const auto r = cycleWith(0, {viewOf("P", OperationalState::Down), viewOf("Q", OperationalState::Up)});
    updateLedgers(r, book, productive);
    EXPECT_EQ(book.current(core::E2ELinkId("P"), Window::Weekly)->down, 1u);
    EXPECT_EQ(book.current(core::E2ELinkId("MISSING"), Window::Weekly)->unknown, 1u);
    EXPECT_EQ(book.current(core::E2ELinkId("Q"), Window::Weekly), nullptr);
}

TEST(Alarms, TransitionsNotifyAndSuppress) {
    const auto before = cycleWith(0, {viewOf("A", OperationalState::Up), viewOf("B", OperationalState::Up),
                                      viewOf("C", OperationalState::Down), viewOf("D", OperationalState::Up)});
    const auto after = cycleWith(1, {viewOf("A", OperationalState::Down),
                                     viewOf("B", OperationalState::Down, AdministrativeState::PlannedMaintenance),
                                     viewOf("C", OperationalState::Up), viewOf("D", OperationalState::Up),
                                     viewOf("E", OperationalState::Down)});
    auto events = detectTransitions(before, after);
    ASSERT_EQ(events.size(), 3u);
    EXPECT_TRUE(events[0].notify);
    EXPECT_FALSE(events[0].suppressed);
    EXPECT_TRUE(events[1].suppressed);
    EXPECT_FALSE(events[2].notify);

    AlarmDispatcher dispatcher;
    auto notify = std::make_unique<MemorySink>("mail", SinkRole::Notify);
    auto trap = std::make_unique<MemorySink>("trap", SinkRole::Trap);
    auto* n = notify.get();
    auto* t = trap.get();
    dispatcher.addSink(std::move(notify));
    dispatcher.addSink(std::move(trap));
    dispatcher.dispatch(events);
    EXPECT_EQ(n->events().size(), 1u);
    EXPECT_EQ(n->events()[0].linkId.str(), "A");
    EXPECT_EQ(t->events().size(), 3u);
    EXPECT_EQ(events[0].channels, (std::vector<std::string>{"mail", "trap"}));
    EXPECT_EQ(events[1].channels, (std::vector<std::string>{"trap"}));

    const auto line = nlohmann::json::parse(toJsonLine(events[1]));
    EXPECT_EQ(line["administrative"], "PLANNED_MAINTENANCE");
    EXPECT_EQ(line["suppressed"], true);
    EXPECT_EQ(line["cycle"], 1);
}

TEST(Exports, StatusXmlRoundTrip) {
    const auto r = cycleWith(7, {viewOf("A", OperationalState::Down, AdministrativeState::Troubleshooting),
                                 viewOf("B", OperationalState::Up, AdministrativeState::NormalOperation, false),
                                 viewOf("C&<>", OperationalState::Degraded)});
    const std::set<core::E2ELinkId> productive{core::E2ELinkId("A"), core::E2ELinkId("B"), core::E2ELinkId("C&<>"),
                                               core::E2ELinkId("Z")};
    const auto status = makeStatusExport(r, productive);
    ASSERT_EQ(status.links.size(), 4u);
    EXPECT_EQ(status.cycleIndex, 7);
    EXPECT_EQ(status.timestamp, kMonday + 7 * 300);
    EXPECT_TRUE(status.links[1].uncertain);
    EXPECT_EQ(status.links[3].operational, OperationalState::Unknown);
    const auto xmlText = exportStatusXml(status);
    EXPECT_EQ(parseStatusXml(xmlText), status);
    EXPECT_EQ(exportStatusXml(r, productive), xmlText);
    EXPECT_THROW(parseStatusXml("<nope/>"), Error);
}

TEST(Cycle, JsonRoundTrip) {
    auto r = cycleWith(3, {viewOf("A", OperationalState::Down), viewOf("B", OperationalState::Up,
                                                                       AdministrativeState::Unknown, false)});
    r.polls.push_back({"GEANT", "inproc://GEANT", true, "", 2});
    r.polls.push_back({"DFN", "inproc://DFN", false, "timeout", 0});
    const auto back = cycleFromJson(toJson(r));
    EXPECT_EQ(back.cycle.index, 3);
    EXPECT_EQ(back.cycle.start, r.cycle.start);
    EXPECT_EQ(back.views, r.views);
    EXPECT_EQ(back.polls, r.polls);
    EXPECT_EQ(back.respondingDomains(), 1u);
}

TEST(Config, ParsesAndValidates) {
    const auto j = nlohmann::json::parse(R"({
      "period_seconds": 300, "origin": 1791763200,
      "mps": [{"domain": "GEANT", "url": "http://127.0.0.1:1/mp", "timeout_seconds": 2.5, "soap": true}],
      "links": [{"id": "L1", "productive": true, "endpoints": ["a", "b"]}, {"id": "L2"}],
      "sinks": [{"name": "mail", "role": "notify", "transport": "file", "path": "out/notify.jsonl"}],
      "output_dir": "out"
    })");
    const auto cfg = monitorConfigFromJson(j, "/base");
    EXPECT_EQ(cfg.origin, kMonday);
    ASSERT_EQ(cfg.mps.size(), 1u);
    EXPECT_EQ(cfg.mps[0].timeout, std::chrono::milliseconds(2500));
    EXPECT_TRUE(cfg.mps[0].soap);
    EXPECT_EQ(cfg.productiveLinks(), (std::set<core::E2ELinkId>{core::E2ELinkId("L1")}));
    EXPECT_EQ(cfg.outputDir, std::filesystem::path("/base/out"));
    EXPECT_EQ(cfg.sinks[0].path, std::filesystem::path("/base/out/notify.jsonl"));

    auto dup = j;
    dup["mps"].push_back(dup["mps"][0]);
    EXPECT_THROW(monitorConfigFromJson(dup), MonitorError);
    auto badSink = j;
    badSink["sinks"][0]["role"] = "pager";
    EXPECT_THROW(monitorConfigFromJson(badSink), MonitorError);
}

TEST(RunCycle, InProcessWithOutage) {
    auto geant = std::make_shared<mp::MeasurementPoint>("GEANT", identityMapping());
    auto dfn = std::make_shared<mp::MeasurementPoint>("DFN", identityMapping());
    geant->ingestSnapshot(domainSnapshot("GEANT", "a", "b", "UP"));
    dfn->ingestSnapshot(domainSnapshot("DFN", "b", "c", "DEGRADED"));
    auto poller = std::make_shared<InProcessPoller>();
    poller->attach("inproc://GEANT", geant);
    poller->attach("inproc://DFN", dfn);
    const std::vector<MpEndpoint> registry{{"GEANT", "inproc://GEANT", std::chrono::seconds(1), false},
                                           {"DFN", "inproc://DFN", std::chrono::seconds(1), true}};
    const std::vector<LinkConfig> links{
        {core::E2ELinkId("L1"), true, assembly::Endpoints{core::DemarcationPointId("a"), core::DemarcationPointId("c")}},
        {core::E2ELinkId("SILENT"), true, std::nullopt}};

    const auto full = runCycle(core::PollingCycle::at(kMonday, 0), registry, poller, links);
    EXPECT_EQ(full.respondingDomains(), 2u);
    const auto* l1 = full.find(core::E2ELinkId("L1"));
    ASSERT_NE(l1, nullptr);
    EXPECT_TRUE(l1->fullyReconstructed);
    EXPECT_EQ(l1->aggregatedOperational, OperationalState::Degraded);
    const auto* silent = full.find(core::E2ELinkId("SILENT"));
    ASSERT_NE(silent, nullptr);
    EXPECT_EQ(silent->aggregatedOperational, OperationalState::Unknown);

    poller->setReachable("inproc://DFN", false);
    const auto partial = runCycle(core::PollingCycle::at(kMonday, 1), registry, poller, links);
    EXPECT_EQ(partial.respondingDomains(), 1u);
    EXPECT_FALSE(partial.polls[1].ok);
    EXPECT_FALSE(partial.polls[1].error.empty());
    const auto* l1b = partial.find(core::E2ELinkId("L1"));
    EXPECT_EQ(l1b->aggregatedOperational, OperationalState::Up);
    EXPECT_FALSE(l1b->fullyReconstructed);
    EXPECT_EQ(classify(*l1b), PeriodClass::Uncertain);

    EXPECT_THROW(runCycle(core::PollingCycle::at(kMonday, 2), {}, poller, links), MonitorError);
}

TEST(RunCycle, OverHttpWithDeadEndpoint) {
    mp::MeasurementPoint geant("GEANT", identityMapping());
    mp::MeasurementPoint dfn("DFN", identityMapping());
    geant.ingestSnapshot(domainSnapshot("GEANT", "a", "b", "UP"));
    dfn.ingestSnapshot(domainSnapshot("DFN", "b", "c", "DOWN"));
    mp::AgentServer s1(geant), s2(dfn);
    const int p1 = s1.startOnAnyPort();
    const int p2 = s2.startOnAnyPort();
    const std::vector<MpEndpoint> registry{
        {"GEANT", "http://127.0.0.1:" + std::to_string(p1) + "/mp", std::chrono::seconds(2), false},
        {"DFN", "http://127.0.0.1:" + std::to_string(p2) + "/mp", std::chrono::seconds(2), true},
        {"GONE", "http://127.0.0.1:1/mp", std::chrono::milliseconds(300), false}};
    const auto r = runCycle(core::PollingCycle::at(kMonday, 0), registry, std::make_shared<HttpStatusPoller>());
    EXPECT_EQ(r.respondingDomains(), 2u);
    EXPECT_FALSE(r.polls[2].ok);
    const auto* l1 = r.find(core::E2ELinkId("L1"));
    ASSERT_NE(l1, nullptr);
    EXPECT_EQ(l1->aggregatedOperational, OperationalState::Down);
    EXPECT_EQ(l1->sectionCount(), 2u);
    s1.stop();
    s2.stop();
}

TEST(Service, WritesOutputsAndSuppressesMaintenance) {
    const auto dir = tempDir("service");
    auto geant = std::make_shared<mp::MeasurementPoint>("GEANT", identityMapping());
    auto poller = std::make_shared<InProcessPoller>();
    poller->attach("inproc://GEANT", geant);

    MonitorConfig cfg;
    cfg.origin = kMonday;
    cfg.mps = {{"GEANT", "inproc://GEANT", std::chrono::seconds(1), false}};
    cfg.links = {{core::E2ELinkId("L1"), true, std::nullopt}};
    cfg.outputDir = dir;
    cfg.sinks = {{"mail", SinkRole::Notify, "file", dir / "notify.jsonl", "", 0}};
    MonitorService service(cfg, poller);
    auto mem = std::make_unique<MemorySink>("mem", SinkRole::Notify);
    auto* memPtr = mem.get();
    service.addSink(std::move(mem));
    int published = 0;
    service.onPublish([&](const Publication&) { ++published; });

    auto ingest = [&](std::int64_t cycle, const std::string& op, const std::string& admin) {
        mp::LocalSnapshot s = domainSnapshot("GEANT", "a", "b", op, kMonday + cycle * 300);
        s.entries[0].adminStateRaw = admin;
        geant->ingestSnapshot(s);
    };
    ingest(0, "UP", "NORMAL_OPERATION");
    service.step(0);
    ingest(1, "DOWN", "PLANNED_MAINTENANCE");
    service.step(1);
    ingest(2, "UP", "NORMAL_OPERATION");
    service.step(2);
    ingest(3, "DOWN", "NORMAL_OPERATION");
    const auto last = service.step(3);

    EXPECT_EQ(published, 4);
    ASSERT_EQ(service.alarmLog().size(), 3u);
    EXPECT_TRUE(service.alarmLog()[0].suppressed);
    EXPECT_FALSE(service.alarmLog()[2].suppressed);
    ASSERT_EQ(memPtr->events().size(), 1u);
    EXPECT_EQ(memPtr->events()[0].cycleIndex, 3);
    EXPECT_EQ(last->alarms.size(), 1u);

    EXPECT_EQ(slurp(dir / "status.xml"), last->statusXml);
    EXPECT_EQ(slurp(dir / "stats-weekly.csv"), last->weeklyCsv);
    EXPECT_NE(last->weeklyCsv.find("L1,50.00,50.00,0.00,0.00,4"), std::string::npos);
    EXPECT_TRUE(std::filesystem::exists(dir / "cycle.json"));
    std::ifstream notifyFile(dir / "notify.jsonl");
    std::string line;
    int lines = 0;
    while (std::getline(notifyFile, line)) ++lines;
    EXPECT_EQ(lines, 1);
    std::ifstream alarmFile(dir / "alarms.jsonl");
    lines = 0;
    while (std::getline(alarmFile, line)) ++lines;
    EXPECT_EQ(lines, 3);
    const auto cycle = cycleFromJson(nlohmann::json::parse(slurp(dir / "cycle.json")));
    EXPECT_EQ(cycle.cycle.index, 3);
    std::filesystem::remove_all(dir);
}
