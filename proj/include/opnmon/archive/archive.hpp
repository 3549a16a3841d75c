#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "opnmon/archive/metric.hpp"

namespace opnmon::archive {

struct RouteSegment {
    std::string signature;  // hops joined by " > "
    std::int64_t start = 0;
    std::int64_t end = 0;  // exclusive: last bin + resolution
    std::size_t hopCount = 0;

    friend bool operator==(const RouteSegment&, const RouteSegment&) = default;
};

/// Time-series store keyed by SeriesKey. Samples are floored onto the
/// family grid; a second write to the same bin replaces the first.
///
/// With a directory, every series is one append-only JSON-lines file
/// (percent-encoded series name + ".jsonl") replayed on open.
class MetricArchive {
public:
    MetricArchive();
    explicit MetricArchive(std::filesystem::path directory);
    ~MetricArchive();

    MetricArchive(const MetricArchive&) = delete;
    MetricArchive& operator=(const MetricArchive&) = delete;

    void ingest(const MetricSample& sample);
    /// Validates everything first, then writes; one file append per series.
    void ingestBatch(std::span<const MetricSample> samples);

    /// Samples in [from, to), ascending; missing bins stay missing.
    std::vector<MetricSample> queryWindow(const SeriesKey& key, std::int64_t from, std::int64_t to) const;

    /// Maximal runs of consecutive samples with an identical hop list.
    std::vector<RouteSegment> hopCountSegments(const SeriesKey& key, std::int64_t from, std::int64_t to) const;

    bool hasSeries(const SeriesKey& key) const;
    std::vector<SeriesKey> seriesKeys() const;
    std::size_t sampleCount(const SeriesKey& key) const;
    std::optional<std::int64_t> latestTimestamp(const SeriesKey& key) const;

    const std::optional<std::filesystem::path>& directory() const noexcept { return directory_; }

private:
    struct Series;

    std::shared_ptr<Series> find(const SeriesKey& key) const;
    std::shared_ptr<Series> findOrCreate(const SeriesKey& key);
    void load();

    std::optional<std::filesystem::path> directory_;
    mutable std::shared_mutex mapMutex_;
    std::map<SeriesKey, std::shared_ptr<Series>> series_;
};

/// Directed (src, dst) pairs over `nodes` lacking a HADES series of `metric`.
std::vector<std::pair<std::string, std::string>> missingMeshPairs(const MetricArchive& archive,
                                                                  std::span<const std::string> nodes,
                                                                  MetricKind metric);

std::string encodeSeriesFileName(std::string_view seriesName);
std::string decodeSeriesFileName(std::string_view fileName);

}  // namespace opnmon::archive
