#include "opnmon/weathermap/topology.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace opnmon::weathermap {

namespace {

using Kind = TopologyError::Kind;
using nlohmann::json;

[[noreturn]] void fail(Kind kind, const std::string& at, const std::string& what) { throw TopologyError(kind, at, what); }

const json& member(const json& obj, const char* key, const std::string& at) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(Kind::ConfigSyntax, at, std::string("missing '") + key + "'");
    return *it;
}

std::string nonEmptyString(const json& v, const std::string& at) {
    if (!v.is_string() || v.get_ref<const std::string&>().empty()) fail(Kind::ConfigSyntax, at, "expected a non-empty string");
    return v.get<std::string>();
}

double number(const json& v, const std::string& at) {
    if (!v.is_number()) fail(Kind::ConfigSyntax, at, "expected a number");
    return v.get<double>();
}

AbstractNode parseNode(const json& j, const std::string& at) {
    if (!j.is_object()) fail(Kind::ConfigSyntax, at, "node must be an object");
    AbstractNode n;
    n.id = nonEmptyString(member(j, "id", at), at + "/id");
    const json& tier = member(j, "tier", at);
    if (!tier.is_number_integer() || (tier.get<int>() != 0 && tier.get<int>() != 1)) {
        fail(Kind::ConfigSyntax, at + "/tier", "tier must be 0 or 1");
    }
    n.tier = tier.get<int>();
    const json& pos = member(j, "position", at);
    if (!pos.is_array() || pos.size() != 2) fail(Kind::ConfigSyntax, at + "/position", "expected [x, y]");
    n.x = number(pos[0], at + "/position/0");
    n.y = number(pos[1], at + "/position/1");
    n.hadesNode = j.contains("hades_node") ? nonEmptyString(j["hades_node"], at + "/hades_node") : n.id;
    n.bwctlAddress =
        j.contains("bwctl_address") ? nonEmptyString(j["bwctl_address"], at + "/bwctl_address") : n.hadesNode;
    return n;
}

AbstractLink parseLink(const json& j, const std::string& at) {
    if (!j.is_object()) fail(Kind::ConfigSyntax, at, "link must be an object");
    AbstractLink l;
    l.id = nonEmptyString(member(j, "id", at), at + "/id");
    const json& ends = member(j, "endpoints", at);
    if (!ends.is_array() || ends.size() != 2) fail(Kind::ConfigSyntax, at + "/endpoints", "expected two node ids");
    l.a = nonEmptyString(ends[0], at + "/endpoints/0");
    l.b = nonEmptyString(ends[1], at + "/endpoints/1");
    if (l.a == l.b) fail(Kind::ConfigSyntax, at + "/endpoints", "link endpoints must differ");
    const json& ids = member(j, "e2e_link_ids", at);
    if (!ids.is_array() || ids.empty()) fail(Kind::ConfigSyntax, at + "/e2e_link_ids", "expected a non-empty array");
    for (std::size_t i = 0; i < ids.size(); ++i) {
        l.e2eLinkIds.emplace_back(nonEmptyString(ids[i], at + "/e2e_link_ids/" + std::to_string(i)));
    }
    const std::string ifAt = at + "/ip_interfaces";
    const json& ifs = member(j, "ip_interfaces", at);
    if (!ifs.is_object()) fail(Kind::ConfigSyntax, ifAt, "expected {\"a\": ..., \"b\": ...}");
    l.interfaceA = nonEmptyString(member(ifs, "a", ifAt), ifAt + "/a");
    l.interfaceB = nonEmptyString(member(ifs, "b", ifAt), ifAt + "/b");
    if (l.interfaceA == l.interfaceB) fail(Kind::DuplicateId, ifAt, "both interfaces are '" + l.interfaceA + "'");
    return l;
}

}  // namespace

std::string_view toString(TopologyError::Kind kind) noexcept {
    switch (kind) {
        case Kind::ConfigSyntax: return "ConfigSyntax";
        case Kind::DuplicateId: return "DuplicateId";
        case Kind::DanglingReference: return "DanglingReference";
        case Kind::MultipleTier0: return "MultipleTier0";
        case Kind::DuplicateE2EMapping: return "DuplicateE2EMapping";
    }
    return "?";
}

const AbstractNode& AbstractTopology::tier0() const {
    for (const auto& n : nodes) {
        if (n.tier == 0) return n;
    }
    throw TopologyError(Kind::MultipleTier0, "/nodes", "no Tier-0 node");
}

const AbstractNode* AbstractTopology::findNode(std::string_view id) const noexcept {
    for (const auto& n : nodes) {
        if (n.id == id) return &n;
    }
    return nullptr;
}

const AbstractLink* AbstractTopology::findLink(std::string_view id) const noexcept {
    for (const auto& l : links) {
        if (l.id == id) return &l;
    }
    return nullptr;
}

const AbstractLink* AbstractTopology::linkOf(const core::E2ELinkId& e2eId) const noexcept {
    for (const auto& l : links) {
        for (const auto& id : l.e2eLinkIds) {
            if (id == e2eId) return &l;
        }
    }
    return nullptr;
}

std::vector<std::string> AbstractTopology::hadesNodes() const {
    std::vector<std::string> out;
    for (const auto& n : nodes) out.push_back(n.hadesNode);
    return out;
}

AbstractTopology loadTopology(std::string_view config) {
    json doc = json::parse(config, nullptr, false);
    if (doc.is_discarded()) fail(Kind::ConfigSyntax, "", "not valid JSON");
    if (!doc.is_object()) fail(Kind::ConfigSyntax, "", "top level must be an object");

    AbstractTopology topo;
    const json& nodes = member(doc, "nodes", "");
    const json& links = member(doc, "links", "");
    if (!nodes.is_array()) fail(Kind::ConfigSyntax, "/nodes", "expected an array");
    if (!links.is_array()) fail(Kind::ConfigSyntax, "/links", "expected an array");

    std::map<std::string, std::string> ids;  // element id -> where it was declared
    auto claim = [&ids](const std::string& id, const std::string& at) {
        auto [it, inserted] = ids.emplace(id, at);
        if (!inserted) fail(Kind::DuplicateId, at, "id '" + id + "' already declared at " + it->second);
    };

    std::map<std::string, std::string> hades, bwctl;
    std::optional<std::string> tier0At;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const std::string at = "/nodes/" + std::to_string(i);
        AbstractNode n = parseNode(nodes[i], at);
        claim(n.id, at + "/id");
        if (n.tier == 0) {
            if (tier0At) fail(Kind::MultipleTier0, at + "/tier", "second Tier-0 node; first at " + *tier0At);
            tier0At = at;
        }
        if (auto [it, ok] = hades.emplace(n.hadesNode, at); !ok) {
            fail(Kind::DuplicateId, at + "/hades_node", "HADES node '" + n.hadesNode + "' already mapped at " + it->second);
        }
        if (auto [it, ok] = bwctl.emplace(n.bwctlAddress, at); !ok) {
            fail(Kind::DuplicateId, at + "/bwctl_address",
                 "BWCTL address '" + n.bwctlAddress + "' already mapped at " + it->second);
        }
        topo.nodes.push_back(std::move(n));
    }
    if (!tier0At) fail(Kind::MultipleTier0, "/nodes", "exactly one Tier-0 node is required, found none");

    std::map<core::E2ELinkId, std::string> e2eOwner;
    std::map<std::string, std::string> interfaces;
    std::map<std::pair<std::string, std::string>, std::string> pairs;
    for (std::size_t i = 0; i < links.size(); ++i) {
        const std::string at = "/links/" + std::to_string(i);
        AbstractLink l = parseLink(links[i], at);
        claim(l.id, at + "/id");
        if (!topo.findNode(l.a)) fail(Kind::DanglingReference, at + "/endpoints/0", "unknown node '" + l.a + "'");
        if (!topo.findNode(l.b)) fail(Kind::DanglingReference, at + "/endpoints/1", "unknown node '" + l.b + "'");
        const auto key = std::minmax(l.a, l.b);
        if (auto [it, ok] = pairs.emplace(std::pair(key.first, key.second), at); !ok) {
            fail(Kind::DuplicateId, at + "/endpoints", "nodes already joined by the link at " + it->second);
        }
        for (std::size_t k = 0; k < l.e2eLinkIds.size(); ++k) {
            const std::string idAt = at + "/e2e_link_ids/" + std::to_string(k);
            if (auto [it, ok] = e2eOwner.emplace(l.e2eLinkIds[k], idAt); !ok) {
                fail(Kind::DuplicateE2EMapping, idAt,
                     "E2E link '" + l.e2eLinkIds[k].str() + "' already mapped at " + it->second);
            }
        }
        for (const auto& [ifId, side] : {std::pair{l.interfaceA, "a"}, std::pair{l.interfaceB, "b"}}) {
            const std::string ifAt = at + "/ip_interfaces/" + side;
            if (auto [it, ok] = interfaces.emplace(ifId, ifAt); !ok) {
                fail(Kind::DuplicateId, ifAt, "interface '" + ifId + "' already used at " + it->second);
            }
        }
        topo.links.push_back(std::move(l));
    }
    return topo;
}

AbstractTopology loadTopologyFile(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) fail(Kind::ConfigSyntax, "", "cannot read " + file.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return loadTopology(ss.str());
}

nlohmann::json toJson(const AbstractTopology& topology) {
    json nodes = json::array();
    for (const auto& n : topology.nodes) {
        nodes.push_back({{"id", n.id},
                         {"tier", n.tier},
                         {"position", {n.x, n.y}},
                         {"hades_node", n.hadesNode},
                         {"bwctl_address", n.bwctlAddress}});
    }
    json links = json::array();
    for (const auto& l : topology.links) {
        json ids = json::array();
        for (const auto& id : l.e2eLinkIds) ids.push_back(id.str());
        links.push_back({{"id", l.id},
                         {"endpoints", {l.a, l.b}},
                         {"e2e_link_ids", std::move(ids)},
                         {"ip_interfaces", {{"a", l.interfaceA}, {"b", l.interfaceB}}}});
    }
    return {{"nodes", std::move(nodes)}, {"links", std::move(links)}};
}

}  // namespace opnmon::weathermap
