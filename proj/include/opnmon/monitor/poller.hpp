#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>

#include "opnmon/monitor/config.hpp"
#include "opnmon/mp/agent.hpp"
#include "opnmon/nmwg/codec.hpp"

namespace opnmon::monitor {

class PollError : public Error {
public:
    using Error::Error;
};

/// Fetches one MP's current status document. Implementations must be safe
/// to call concurrently and must honour the endpoint timeout.
class StatusPoller {
public:
    virtual ~StatusPoller() = default;
    virtual nmwg::StatusDocument poll(const MpEndpoint& endpoint) = 0;
};

/// POSTs a Path.Status SetupDataRequest to the endpoint url.
class HttpStatusPoller final : public StatusPoller {
public:
    nmwg::StatusDocument poll(const MpEndpoint& endpoint) override;
};

/// Talks to in-process measurement points through the full wire encoding.
/// Endpoints can be marked unreachable to simulate outages.
class InProcessPoller final : public StatusPoller {
public:
    void attach(const std::string& url, std::shared_ptr<const mp::MeasurementPoint> agent);
    void setReachable(const std::string& url, bool reachable);
    nmwg::StatusDocument poll(const MpEndpoint& endpoint) override;

private:
    mutable std::mutex mutex_;
    std::map<std::string, std::shared_ptr<const mp::MeasurementPoint>> agents_;
    std::set<std::string> unreachable_;
};

/// The request every poll sends: Listing-style SetupDataRequest for Path.Status.
const std::string& statusRequest(bool soap);

}  // namespace opnmon::monitor
