#pragma once

#include "opnmon/archive/archive.hpp"

namespace httplib {
class Server;
}

namespace opnmon::archive {

/// Installs `PUT /archive/{series}` on `server`. The body is one sample
/// object or an array of them; answers 204, or 400 with the error text.
void mountArchiveRoutes(httplib::Server& server, MetricArchive& archive);

/// Client side of the same route, used by the simulator's HTTP mode.
void putSamples(const std::string& baseUrl, const SeriesKey& key, std::span<const MetricSample> samples);

}  // namespace opnmon::archive
