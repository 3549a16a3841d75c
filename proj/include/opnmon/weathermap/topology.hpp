#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "opnmon/core/model.hpp"

namespace opnmon::weathermap {

class TopologyError : public Error {
public:
    enum class Kind { ConfigSyntax, DuplicateId, DanglingReference, MultipleTier0, DuplicateE2EMapping };

    /// `location` is a JSON pointer into the configuration document.
    TopologyError(Kind kind, std::string location, const std::string& what)
        : Error(location + ": " + what), kind_(kind), location_(std::move(location)) {}

    Kind kind() const noexcept { return kind_; }
    const std::string& location() const noexcept { return location_; }

private:
    Kind kind_;
    std::string location_;
};

std::string_view toString(TopologyError::Kind kind) noexcept;

struct AbstractNode {
    std::string id;
    int tier = 1;
    double x = 0;
    double y = 0;
    std::string hadesNode;     // defaults to id
    std::string bwctlAddress;  // defaults to hadesNode

    friend bool operator==(const AbstractNode&, const AbstractNode&) = default;
};

/// Undirected. `a` and `b` are stored as configured; interfaceA sits on `a`.
struct AbstractLink {
    std::string id;
    std::string a;
    std::string b;
    std::vector<core::E2ELinkId> e2eLinkIds;  // second entry: 1+1 protection
    std::string interfaceA;
    std::string interfaceB;

    bool touches(std::string_view node) const noexcept { return a == node || b == node; }
    /// The endpoint that is not `node`.
    const std::string& other(std::string_view node) const noexcept { return a == node ? b : a; }

    friend bool operator==(const AbstractLink&, const AbstractLink&) = default;
};

/// Immutable after load.
struct AbstractTopology {
    std::vector<AbstractNode> nodes;
    std::vector<AbstractLink> links;

    const AbstractNode& tier0() const;
    const AbstractNode* findNode(std::string_view id) const noexcept;
    const AbstractLink* findLink(std::string_view id) const noexcept;
    /// Link carrying `e2eId`, if any.
    const AbstractLink* linkOf(const core::E2ELinkId& e2eId) const noexcept;
    std::vector<std::string> hadesNodes() const;

    friend bool operator==(const AbstractTopology&, const AbstractTopology&) = default;
};

/// Parses and validates; every violation raises TopologyError with location.
AbstractTopology loadTopology(std::string_view config);
AbstractTopology loadTopologyFile(const std::filesystem::path& file);

nlohmann::json toJson(const AbstractTopology& topology);

}  // namespace opnmon::weathermap
