#include "opnmon/monitor/cycle.hpp"

namespace opnmon::monitor {

using nlohmann::json;

namespace {

json reportToJson(const core::MonitoredLinkReport& r) {
    return {{"e2e_link_id", r.e2eLinkId.str()},
            {"link_type", core::toString(r.linkType)},
            {"dp_a", r.dpA.str()},
            {"dp_b", r.dpB.str()},
            {"domain", r.reportingDomain},
            {"operational", core::toString(r.operational)},
            {"administrative", core::toString(r.administrative)},
            {"timestamp", r.cycleTimestamp}};
}

core::MonitoredLinkReport reportFromJson(const json& j) {
    core::MonitoredLinkReport r;
    r.e2eLinkId = core::E2ELinkId(j.at("e2e_link_id").get<std::string>());
    r.linkType = core::linkTypeFromString(j.at("link_type").get<std::string>());
    r.dpA = core::DemarcationPointId(j.at("dp_a").get<std::string>());
    r.dpB = core::DemarcationPointId(j.at("dp_b").get<std::string>());
    r.reportingDomain = j.at("domain").get<std::string>();
    r.operational = core::operationalStateFromString(j.at("operational").get<std::string>());
    r.administrative = core::administrativeStateFromString(j.at("administrative").get<std::string>());
    r.cycleTimestamp = j.at("timestamp").get<std::int64_t>();
    return r;
}

assembly::Diagnostic::Kind diagnosticKind(const std::string& text) {
    using K = assembly::Diagnostic::Kind;
    for (K k : {K::TopologyConflict, K::HalfReported, K::OverReported, K::DuplicateReport, K::EndpointMismatch}) {
        if (assembly::toString(k) == text) return k;
    }
    throw core::ModelError(core::ModelError::Kind::UnknownEnumText, "unknown diagnostic kind '" + text + "'");
}

}  // namespace

std::size_t CycleResult::respondingDomains() const noexcept {
    std::size_t n = 0;
    for (const auto& p : polls) n += p.ok ? 1 : 0;
    return n;
}

const assembly::E2ELinkView* CycleResult::find(const core::E2ELinkId& id) const noexcept {
    auto it = views.find(id);
    return it == views.end() ? nullptr : &it->second;
}

json toJson(const assembly::E2ELinkView& view) {
    json fragments = json::array();
    for (const auto& f : view.fragments) {
        json sections = json::array();
        for (const auto& s : f) {
            json reports = json::array();
            for (const auto& r : s.contributingReports) reports.push_back(reportToJson(r));
            sections.push_back({{"dp_a", s.dpA.str()},
                                {"dp_b", s.dpB.str()},
                                {"link_type", core::toString(s.linkType)},
                                {"operational", core::toString(s.operational)},
                                {"administrative", core::toString(s.administrative)},
                                {"half_reported", s.halfReported},
                                {"domains", s.domains},
                                {"reports", std::move(reports)}});
        }
        fragments.push_back(std::move(sections));
    }
    json gaps = json::array();
    for (const auto& g : view.gaps) gaps.push_back({{"after", g.after.str()}, {"before", g.before.str()}});
    json diagnostics = json::array();
    for (const auto& d : view.diagnostics) {
        diagnostics.push_back({{"kind", assembly::toString(d.kind)}, {"message", d.message}});
    }
    return {{"id", view.e2eLinkId.str()},
            {"operational", core::toString(view.aggregatedOperational)},
            {"administrative", core::toString(view.aggregatedAdministrative)},
            {"has_unknown", view.hasUnknown},
            {"fully_reconstructed", view.fullyReconstructed},
            {"topology_conflict", view.topologyConflict},
            {"fragments", std::move(fragments)},
            {"gaps", std::move(gaps)},
            {"diagnostics", std::move(diagnostics)}};
}

assembly::E2ELinkView viewFromJson(const json& j) {
    assembly::E2ELinkView view;
    view.e2eLinkId = core::E2ELinkId(j.at("id").get<std::string>());
    view.aggregatedOperational = core::operationalStateFromString(j.at("operational").get<std::string>());
    view.aggregatedAdministrative = core::administrativeStateFromString(j.at("administrative").get<std::string>());
    view.hasUnknown = j.at("has_unknown").get<bool>();
    view.fullyReconstructed = j.at("fully_reconstructed").get<bool>();
    view.topologyConflict = j.value("topology_conflict", false);
    for (const auto& f : j.at("fragments")) {
        assembly::Fragment fragment;
        for (const auto& s : f) {
            assembly::Section section;
            section.dpA = core::DemarcationPointId(s.at("dp_a").get<std::string>());
            section.dpB = core::DemarcationPointId(s.at("dp_b").get<std::string>());
            section.linkType = core::linkTypeFromString(s.at("link_type").get<std::string>());
            section.operational = core::operationalStateFromString(s.at("operational").get<std::string>());
            section.administrative = core::administrativeStateFromString(s.at("administrative").get<std::string>());
            section.halfReported = s.value("half_reported", false);
            section.domains = s.value("domains", std::vector<std::string>{});
            for (const auto& r : s.value("reports", json::array())) section.contributingReports.push_back(reportFromJson(r));
            fragment.push_back(std::move(section));
        }
        view.fragments.push_back(std::move(fragment));
    }
    for (const auto& g : j.at("gaps")) {
        view.gaps.push_back({core::DemarcationPointId(g.at("after").get<std::string>()),
                             core::DemarcationPointId(g.at("before").get<std::string>())});
    }
    for (const auto& d : j.value("diagnostics", json::array())) {
        view.diagnostics.push_back({diagnosticKind(d.at("kind").get<std::string>()), d.at("message").get<std::string>()});
    }
    return view;
}

json toJson(const CycleResult& result) {
    json views = json::array();
    for (const auto& [id, view] : result.views) views.push_back(toJson(view));
    json polls = json::array();
    for (const auto& p : result.polls) {
        polls.push_back({{"domain", p.domain}, {"url", p.url}, {"ok", p.ok}, {"error", p.error},
                         {"reports", p.reportCount}});
    }
    return {{"cycle", result.cycle.index},
            {"start", result.cycle.start},
            {"period", result.cycle.period},
            {"views", std::move(views)},
            {"polls", std::move(polls)}};
}

CycleResult cycleFromJson(const json& j) {
    CycleResult result;
    result.cycle.index = j.at("cycle").get<std::int64_t>();
    result.cycle.start = j.at("start").get<std::int64_t>();
    result.cycle.period = j.at("period").get<std::int64_t>();
    for (const auto& v : j.at("views")) {
        auto view = viewFromJson(v);
        auto id = view.e2eLinkId;
        result.views.emplace(std::move(id), std::move(view));
    }
    for (const auto& p : j.value("polls", json::array())) {
        result.polls.push_back({p.at("domain").get<std::string>(), p.at("url").get<std::string>(),
                                p.at("ok").get<bool>(), p.value("error", ""), p.value("reports", std::size_t{0})});
    }
    return result;
}

}  // namespace opnmon::monitor
