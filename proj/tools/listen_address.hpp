#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace opnmon::tools {

/// "host:port", ":port" or "port" -> (host, port); host defaults to 127.0.0.1.
inline std::pair<std::string, int> parseListen(const std::string& addr) {
    const auto colon = addr.rfind(':');
    std::string host = colon == std::string::npos ? "" : addr.substr(0, colon);
    const std::string port = colon == std::string::npos ? addr : addr.substr(colon + 1);
    if (host.empty()) host = "127.0.0.1";
    std::size_t used = 0;
    const int p = std::stoi(port, &used);
    if (used != port.size() || p < 0 || p > 65535) throw std::invalid_argument("bad port in '" + addr + "'");
    return {host, p};
}

}  // namespace opnmon::tools
