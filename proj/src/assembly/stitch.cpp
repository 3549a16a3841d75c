#include "opnmon/assembly/stitch.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

namespace opnmon::assembly {

using core::DemarcationPointId;
using core::MonitoredLinkReport;
using core::MonitoredLinkType;
using core::OperationalState;

namespace {

using DpPair = std::pair<std::string, std::string>;

DpPair unorderedPair(const MonitoredLinkReport& r) {
    return r.dpA < r.dpB ? DpPair{r.dpA.str(), r.dpB.str()} : DpPair{r.dpB.str(), r.dpA.str()};
}

auto canonicalKey(const MonitoredLinkReport& r) {
    auto [lo, hi] = unorderedPair(r);
    return std::make_tuple(r.e2eLinkId.str(), lo, hi, static_cast<int>(r.linkType), r.reportingDomain,
                           r.dpA.str(), static_cast<int>(r.operational), static_cast<int>(r.administrative),
                           r.cycleTimestamp);
}

bool canonicalLess(const MonitoredLinkReport& a, const MonitoredLinkReport& b) {
    return canonicalKey(a) < canonicalKey(b);
}

void sortCanonical(std::vector<MonitoredLinkReport>& reports) {
    std::sort(reports.begin(), reports.end(), canonicalLess);
}

std::string describe(const std::string& e2e, const DpPair& pair) {
    return e2e + " section " + pair.first + "--" + pair.second;
}

// A report plus every raw report merged into it.
struct Unit {
    MonitoredLinkReport report;
    bool halfReported = false;
    bool overReported = false;
    std::vector<MonitoredLinkReport> raw;
};

void absorb(MonitoredLinkReport& into, const MonitoredLinkReport& other, const core::WeightTable& weights) {
    into.operational = core::worse(into.operational, other.operational, weights);
    into.administrative = core::worse(into.administrative, other.administrative, weights);
    into.cycleTimestamp = std::max(into.cycleTimestamp, other.cycleTimestamp);
}

std::vector<Unit> dedupUnits(std::span<const MonitoredLinkReport> reports, std::vector<Diagnostic>* diagnostics,
                             const core::WeightTable& weights) {
    using Key = std::tuple<std::string, std::string, std::string, int, std::string>;
    std::map<Key, std::vector<MonitoredLinkReport>> groups;
    for (const auto& r : reports) {
        auto [lo, hi] = unorderedPair(r);
        groups[Key{r.e2eLinkId.str(), lo, hi, static_cast<int>(r.linkType), r.reportingDomain}].push_back(r);
    }
    std::vector<Unit> units;
    units.reserve(groups.size());
    for (auto& [key, members] : groups) {
        sortCanonical(members);
        Unit u;
        u.report = members.front();
        for (std::size_t i = 1; i < members.size(); ++i) absorb(u.report, members[i], weights);
        if (members.size() > 1 && diagnostics != nullptr) {
            diagnostics->push_back({Diagnostic::Kind::DuplicateReport,
                                    describe(std::get<0>(key), {std::get<1>(key), std::get<2>(key)}) +
                                        " reported " + std::to_string(members.size()) + " times by " +
                                        std::get<4>(key)});
        }
        u.raw = std::move(members);
        units.push_back(std::move(u));
    }
    return units;
}

std::string joinDomains(const std::vector<MonitoredLinkReport>& reports) {
    std::set<std::string> domains;
    for (const auto& r : reports) domains.insert(r.reportingDomain);
    std::string out;
    for (const auto& d : domains) {
        if (!out.empty()) out += '+';
        out += d;
    }
    return out;
}

std::vector<Unit> pairUnits(std::vector<Unit> units, std::vector<Diagnostic>& diagnostics,
                            const core::WeightTable& weights) {
    using Key = std::tuple<std::string, std::string, std::string>;
    std::map<Key, std::vector<Unit>> parts;
    std::vector<Unit> out;
    for (auto& u : units) {
        if (u.report.linkType == MonitoredLinkType::InterDomainLinkPart) {
            auto [lo, hi] = unorderedPair(u.report);
            parts[Key{u.report.e2eLinkId.str(), lo, hi}].push_back(std::move(u));
        } else {
            out.push_back(std::move(u));
        }
    }
    for (auto& [key, group] : parts) {
        const DpPair pair{std::get<1>(key), std::get<2>(key)};
        if (group.size() == 1) {
            Unit single = std::move(group.front());
            single.halfReported = true;
            diagnostics.push_back({Diagnostic::Kind::HalfReported,
                                   describe(std::get<0>(key), pair) + " reported only by " +
                                       single.report.reportingDomain});
            out.push_back(std::move(single));
            continue;
        }
        Unit merged;
        merged.report = group.front().report;
        merged.report.linkType = MonitoredLinkType::InterDomainLink;
        merged.report.dpA = DemarcationPointId(pair.first);
        merged.report.dpB = DemarcationPointId(pair.second);
        for (std::size_t i = 1; i < group.size(); ++i) absorb(merged.report, group[i].report, weights);
        for (auto& g : group) merged.raw.insert(merged.raw.end(), g.raw.begin(), g.raw.end());
        sortCanonical(merged.raw);
        merged.report.reportingDomain = joinDomains(merged.raw);
        if (group.size() > 2) {
            merged.overReported = true;
            diagnostics.push_back({Diagnostic::Kind::OverReported, describe(std::get<0>(key), pair) + " has " +
                                                                       std::to_string(group.size()) +
                                                                       " inter-domain parts"});
        }
        out.push_back(std::move(merged));
    }
    std::sort(out.begin(), out.end(), [](const Unit& a, const Unit& b) { return canonicalLess(a.report, b.report); });
    return out;
}

Section makeSection(const std::vector<const Unit*>& units, const core::WeightTable& weights) {
    Section s;
    const MonitoredLinkReport& first = units.front()->report;
    auto [lo, hi] = unorderedPair(first);
    s.dpA = DemarcationPointId(lo);
    s.dpB = DemarcationPointId(hi);
    s.linkType = first.linkType;
    s.operational = first.operational;
    s.administrative = first.administrative;
    s.halfReported = units.size() == 1 && units.front()->halfReported;
    for (const Unit* u : units) {
        s.operational = core::worse(s.operational, u->report.operational, weights);
        s.administrative = core::worse(s.administrative, u->report.administrative, weights);
        s.contributingReports.insert(s.contributingReports.end(), u->raw.begin(), u->raw.end());
    }
    sortCanonical(s.contributingReports);
    std::set<std::string> domains;
    for (const auto& r : s.contributingReports) domains.insert(r.reportingDomain);
    s.domains.assign(domains.begin(), domains.end());
    return s;
}

void reverseFragment(Fragment& fragment) {
    std::reverse(fragment.begin(), fragment.end());
    for (auto& s : fragment) std::swap(s.dpA, s.dpB);
}

void orient(Fragment& fragment, const std::optional<Endpoints>& endpoints) {
    const auto& front = fragment.front().dpA;
    const auto& back = fragment.back().dpB;
    bool flip = false;
    if (endpoints) {
        const auto& [a, b] = *endpoints;
        if (back == a) {
            flip = true;
        } else if (front == a) {
            flip = false;
        } else if (front == b) {
            flip = true;
        } else if (back == b) {
            flip = false;
        } else {
            flip = back < front;
        }
    } else {
        flip = back < front;
    }
    if (flip) reverseFragment(fragment);
}

int anchorRank(const Fragment& fragment, const std::optional<Endpoints>& endpoints) {
    if (!endpoints) return 1;
    if (fragment.front().dpA == endpoints->first) return 0;
    if (fragment.back().dpB == endpoints->second) return 2;
    return 1;
}

}  // namespace

std::string_view toString(Diagnostic::Kind kind) noexcept {
    switch (kind) {
        case Diagnostic::Kind::TopologyConflict: return "TOPOLOGY_CONFLICT";
        case Diagnostic::Kind::HalfReported: return "HALF_REPORTED";
        case Diagnostic::Kind::OverReported: return "OVER_REPORTED";
        case Diagnostic::Kind::DuplicateReport: return "DUPLICATE_REPORT";
        case Diagnostic::Kind::EndpointMismatch: return "ENDPOINT_MISMATCH";
    }
    return "UNKNOWN";
}

AggregateResult aggregate(std::span<const OperationalState> states, const core::WeightTable& weights) {
    if (states.empty()) throw AssemblyError(AssemblyError::Kind::EmptyInput, "cannot aggregate an empty state list");
    AggregateResult result{states.front(), false};
    for (auto s : states) {
        result.state = core::worse(result.state, s, weights);
        result.hasUnknown = result.hasUnknown || s == OperationalState::Unknown;
    }
    return result;
}

core::AdministrativeState aggregateAdministrative(std::span<const core::AdministrativeState> states,
                                                  const core::WeightTable& weights) {
    if (states.empty()) throw AssemblyError(AssemblyError::Kind::EmptyInput, "cannot aggregate an empty state list");
    core::AdministrativeState result = states.front();
    for (auto s : states) result = core::worse(result, s, weights);
    return result;
}

std::vector<MonitoredLinkReport> deduplicate(std::span<const MonitoredLinkReport> reports,
                                             std::vector<Diagnostic>* diagnostics, const core::WeightTable& weights) {
    std::vector<MonitoredLinkReport> out;
    for (auto& u : dedupUnits(reports, diagnostics, weights)) out.push_back(std::move(u.report));
    return out;
}

PairingResult pairInterDomainParts(std::span<const MonitoredLinkReport> reports, const core::WeightTable& weights) {
    std::vector<Unit> units;
    units.reserve(reports.size());
    for (const auto& r : reports) units.push_back(Unit{r, false, false, {r}});
    PairingResult result;
    for (auto& u : pairUnits(std::move(units), result.diagnostics, weights)) {
        result.reports.push_back(PairedReport{std::move(u.report), u.halfReported, u.overReported, std::move(u.raw)});
    }
    return result;
}

std::size_t E2ELinkView::sectionCount() const noexcept {
    std::size_t n = 0;
    for (const auto& f : fragments) n += f.size();
    return n;
}

std::vector<MonitoredLinkReport> E2ELinkView::contributingReports() const {
    std::vector<MonitoredLinkReport> out;
    for (const auto& f : fragments) {
        for (const auto& s : f) out.insert(out.end(), s.contributingReports.begin(), s.contributingReports.end());
    }
    return out;
}

E2ELinkView stitch(const core::E2ELinkId& linkId, std::span<const MonitoredLinkReport> reports,
                   const std::optional<Endpoints>& endpoints, const core::WeightTable& weights) {
    E2ELinkView view;
    view.e2eLinkId = linkId;
    for (const auto& r : reports) {
        if (r.e2eLinkId != linkId) {
            throw AssemblyError(AssemblyError::Kind::MixedLinks, "report for " + r.e2eLinkId.str() +
                                                                     " passed to stitch of " + linkId.str());
        }
    }
    if (reports.empty()) return view;

    std::vector<Unit> units = pairUnits(dedupUnits(reports, &view.diagnostics, weights), view.diagnostics, weights);

    // Sections keyed by unordered DP pair. Inter-domain reports for the same
    // pair describe the same connection and merge; any other parallel
    // section is kept separate and surfaces below as a cycle.
    std::map<DpPair, std::vector<const Unit*>> byPair;
    for (const auto& u : units) byPair[unorderedPair(u.report)].push_back(&u);

    std::vector<Section> sections;
    for (const auto& [pair, members] : byPair) {
        const bool allInterDomain = std::all_of(members.begin(), members.end(), [](const Unit* u) {
            return u->report.linkType == MonitoredLinkType::InterDomainLink;
        });
        if (members.size() > 1 && allInterDomain) {
            view.diagnostics.push_back({Diagnostic::Kind::OverReported,
                                        describe(linkId.str(), pair) + " reported as whole inter-domain link " +
                                            std::to_string(members.size()) + " times"});
            sections.push_back(makeSection(members, weights));
        } else {
            for (const Unit* u : members) sections.push_back(makeSection({u}, weights));
        }
    }

    std::map<std::string, std::vector<std::size_t>> adjacency;
    for (std::size_t i = 0; i < sections.size(); ++i) {
        adjacency[sections[i].dpA.str()].push_back(i);
        adjacency[sections[i].dpB.str()].push_back(i);
    }

    std::set<std::string> visited;
    for (const auto& [startDp, unused] : adjacency) {
        if (visited.contains(startDp)) continue;

        // Collect the component.
        std::set<std::string> dps;
        std::set<std::size_t> edges;
        std::vector<std::string> stack{startDp};
        while (!stack.empty()) {
            std::string dp = std::move(stack.back());
            stack.pop_back();
            if (!dps.insert(dp).second) continue;
            for (std::size_t e : adjacency.at(dp)) {
                edges.insert(e);
                const auto& s = sections[e];
                const std::string& other = s.dpA.str() == dp ? s.dpB.str() : s.dpA.str();
                if (!dps.contains(other)) stack.push_back(other);
            }
        }
        visited.insert(dps.begin(), dps.end());

        std::vector<std::string> branching;
        for (const auto& dp : dps) {
            if (adjacency.at(dp).size() > 2) branching.push_back(dp);
        }
        const bool cyclic = edges.size() >= dps.size();
        if (!branching.empty() || cyclic) {
            view.topologyConflict = true;
            std::string msg = linkId.str() + ": ";
            if (!branching.empty()) {
                msg += "demarcation point";
                for (const auto& dp : branching) msg += " " + dp;
                msg += " joins more than two sections";
            } else {
                msg += "sections around " + *dps.begin() + " form a cycle";
            }
            view.diagnostics.push_back({Diagnostic::Kind::TopologyConflict, msg});
            for (std::size_t e : edges) view.fragments.push_back(Fragment{sections[e]});
            continue;
        }

        // Simple path: walk from the lexicographically smaller terminal.
        std::string current;
        for (const auto& dp : dps) {
            if (adjacency.at(dp).size() == 1) {
                current = dp;
                break;
            }
        }
        Fragment fragment;
        std::optional<std::size_t> previous;
        for (;;) {
            std::optional<std::size_t> next;
            for (std::size_t e : adjacency.at(current)) {
                if (e != previous) next = e;
            }
            if (!next) break;
            Section s = sections[*next];
            if (s.dpA.str() != current) std::swap(s.dpA, s.dpB);
            current = s.dpB.str();
            fragment.push_back(std::move(s));
            previous = next;
        }
        view.fragments.push_back(std::move(fragment));
    }

    for (auto& f : view.fragments) orient(f, endpoints);
    std::stable_sort(view.fragments.begin(), view.fragments.end(), [&](const Fragment& a, const Fragment& b) {
        const int ra = anchorRank(a, endpoints);
        const int rb = anchorRank(b, endpoints);
        if (ra != rb) return ra < rb;
        if (a.front().dpA != b.front().dpA) return a.front().dpA < b.front().dpA;
        return a.back().dpB < b.back().dpB;
    });

    for (std::size_t i = 0; i + 1 < view.fragments.size(); ++i) {
        view.gaps.push_back(Gap{view.fragments[i].back().dpB, view.fragments[i + 1].front().dpA});
    }

    std::vector<OperationalState> ops;
    std::vector<core::AdministrativeState> admins;
    for (const auto& f : view.fragments) {
        for (const auto& s : f) {
            ops.push_back(s.operational);
            admins.push_back(s.administrative);
        }
    }
    const AggregateResult agg = aggregate(ops, weights);
    view.aggregatedOperational = agg.state;
    view.aggregatedAdministrative = aggregateAdministrative(admins, weights);
    view.hasUnknown = agg.hasUnknown || !view.gaps.empty();

    const bool single = !view.topologyConflict && view.fragments.size() == 1;
    if (single && endpoints) {
        const bool anchored = view.fragments.front().front().dpA == endpoints->first &&
                              view.fragments.front().back().dpB == endpoints->second;
        if (!anchored) {
            view.diagnostics.push_back({Diagnostic::Kind::EndpointMismatch,
                                        linkId.str() + ": reconstructed chain " +
                                            view.fragments.front().front().dpA.str() + " .. " +
                                            view.fragments.front().back().dpB.str() +
                                            " does not span the configured endpoints"});
        }
        view.fullyReconstructed = anchored;
    } else {
        view.fullyReconstructed = single;
    }
    return view;
}

E2ELinkView stitch(std::span<const MonitoredLinkReport> reports, const std::optional<Endpoints>& endpoints,
                   const core::WeightTable& weights) {
    if (reports.empty()) throw AssemblyError(AssemblyError::Kind::EmptyInput, "stitch needs at least one report");
    return stitch(reports.front().e2eLinkId, reports, endpoints, weights);
}

}  // namespace opnmon::assembly
