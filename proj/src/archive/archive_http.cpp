#include "opnmon/archive/archive_http.hpp"

#include <httplib.h>

namespace opnmon::archive {

void mountArchiveRoutes(httplib::Server& server, MetricArchive& archive) {
    server.Put(R"(/archive/(.+))", [&archive](const httplib::Request& req, httplib::Response& res) {
        try {
            const SeriesKey key = SeriesKey::parse(req.matches[1].str());
            const auto body = nlohmann::json::parse(req.body, nullptr, false);
            if (body.is_discarded()) throw ArchiveError(ArchiveError::Kind::InvalidSample, "body is not JSON");
            std::vector<MetricSample> samples;
            if (body.is_array()) {
                for (const auto& item : body) samples.push_back(sampleFromJson(key, item));
            } else {
                samples.push_back(sampleFromJson(key, body));
            }
            archive.ingestBatch(samples);
            res.status = 204;
        } catch (const ArchiveError& e) {
            res.status = e.kind() == ArchiveError::Kind::Storage ? 500 : 400;
            res.set_content(e.what(), "text/plain");
        }
    });
}

void putSamples(const std::string& baseUrl, const SeriesKey& key, std::span<const MetricSample> samples) {
    nlohmann::json body = nlohmann::json::array();
    for (const auto& s : samples) body.push_back(toJson(s));
    httplib::Client client(baseUrl);
    const auto path = "/archive/" + key.name();
    auto res = client.Put(path, body.dump(), "application/json");
    if (!res) {
        throw ArchiveError(ArchiveError::Kind::Storage, "PUT " + path + ": " + httplib::to_string(res.error()));
    }
    if (res->status != 204) {
        throw ArchiveError(ArchiveError::Kind::Storage,
                           "PUT " + path + " answered " + std::to_string(res->status) + ": " + res->body);
    }
}

}  // namespace opnmon::archive
