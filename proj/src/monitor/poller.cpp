#include "opnmon/monitor/poller.hpp"

#include <httplib.h>

namespace opnmon::monitor {

namespace {

struct ParsedUrl {
    std::string base;  // scheme://host:port
    std::string path;
};

ParsedUrl splitUrl(const std::string& url) {
    const auto scheme = url.find("://");
    const auto pathStart = url.find('/', scheme == std::string::npos ? 0 : scheme + 3);
    if (pathStart == std::string::npos) return {url, "/mp"};
    return {url.substr(0, pathStart), url.substr(pathStart)};
}

}  // namespace

const std::string& statusRequest(bool soap) {
    static const std::string bare =
        nmwg::emitStatusDocument(nmwg::makeStatusDocument(nmwg::kRequestType, {}), false);
    static const std::string wrapped =
        nmwg::emitStatusDocument(nmwg::makeStatusDocument(nmwg::kRequestType, {}), true);
    return soap ? wrapped : bare;
}

nmwg::StatusDocument HttpStatusPoller::poll(const MpEndpoint& endpoint) {
    const ParsedUrl url = splitUrl(endpoint.url);
    httplib::Client client(url.base);
    const auto seconds = std::chrono::duration_cast<std::chrono::seconds>(endpoint.timeout);
    const auto micros = std::chrono::duration_cast<std::chrono::microseconds>(endpoint.timeout - seconds);
    client.set_connection_timeout(seconds.count(), micros.count());
    client.set_read_timeout(seconds.count(), micros.count());
    client.set_write_timeout(seconds.count(), micros.count());

    auto res = client.Post(url.path, statusRequest(endpoint.soap), "text/xml; charset=utf-8");
    if (!res) throw PollError(endpoint.url + ": " + httplib::to_string(res.error()));
    if (res->status != 200) throw PollError(endpoint.url + ": HTTP " + std::to_string(res->status) + " " + res->body);
    return nmwg::parseStatusDocument(res->body);
}

void InProcessPoller::attach(const std::string& url, std::shared_ptr<const mp::MeasurementPoint> agent) {
    std::lock_guard lock(mutex_);
    agents_[url] = std::move(agent);
}

void InProcessPoller::setReachable(const std::string& url, bool reachable) {
    std::lock_guard lock(mutex_);
    if (reachable) {
        unreachable_.erase(url);
    } else {
        unreachable_.insert(url);
    }
}

nmwg::StatusDocument InProcessPoller::poll(const MpEndpoint& endpoint) {
    std::shared_ptr<const mp::MeasurementPoint> agent;
    {
        std::lock_guard lock(mutex_);
        if (unreachable_.contains(endpoint.url)) throw PollError(endpoint.url + ": unreachable");
        auto it = agents_.find(endpoint.url);
        if (it == agents_.end()) throw PollError(endpoint.url + ": no such measurement point");
        agent = it->second;
    }
    return nmwg::parseStatusDocument(agent->handle(statusRequest(endpoint.soap)));
}

}  // namespace opnmon::monitor
