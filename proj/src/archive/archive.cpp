#include "opnmon/archive/archive.hpp"

#include <fstream>
#include <mutex>

#include <spdlog/spdlog.h>

namespace opnmon::archive {

struct MetricArchive::Series {
    SeriesKey key;
    mutable std::shared_mutex mutex;
    std::map<std::int64_t, MetricValue> bins;
};

namespace {

constexpr std::string_view kExtension = ".jsonl";

bool safeFileChar(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' || c == '_' ||
           c == '.';
}

int hexValue(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    return -1;
}

}  // namespace

std::string encodeSeriesFileName(std::string_view seriesName) {
    static constexpr char kHex[] = "0123456789ABCDEF";
    std::string out;
    for (char c : seriesName) {
        if (safeFileChar(c)) {
            out += c;
        } else {
            const auto u = static_cast<unsigned char>(c);
            out += '%';
            out += kHex[u >> 4];
            out += kHex[u & 0xF];
        }
    }
    return out + std::string(kExtension);
}

std::string decodeSeriesFileName(std::string_view fileName) {
    if (fileName.size() < kExtension.size() || fileName.substr(fileName.size() - kExtension.size()) != kExtension) {
        throw ArchiveError(ArchiveError::Kind::Storage, "not a series file: " + std::string(fileName));
    }
    fileName.remove_suffix(kExtension.size());
    std::string out;
    for (std::size_t i = 0; i < fileName.size(); ++i) {
        if (fileName[i] == '%' && i + 2 < fileName.size()) {
            const int hi = hexValue(fileName[i + 1]);
            const int lo = hexValue(fileName[i + 2]);
            if (hi < 0 || lo < 0) throw ArchiveError(ArchiveError::Kind::Storage, "bad escape in file name");
            out += static_cast<char>(hi * 16 + lo);
            i += 2;
        } else if (fileName[i] == '%') {
            throw ArchiveError(ArchiveError::Kind::Storage, "truncated escape in file name");
        } else {
            out += fileName[i];
        }
    }
    return out;
}

MetricArchive::MetricArchive() = default;

MetricArchive::MetricArchive(std::filesystem::path directory) : directory_(std::move(directory)) {
    std::filesystem::create_directories(*directory_);
    load();
}

MetricArchive::~MetricArchive() = default;

void MetricArchive::load() {
    for (const auto& entry : std::filesystem::directory_iterator(*directory_)) {
        if (!entry.is_regular_file() || entry.path().extension() != kExtension) continue;
        SeriesKey key;
        try {
            key = SeriesKey::parse(decodeSeriesFileName(entry.path().filename().string()));
        } catch (const ArchiveError& e) {
            spdlog::warn("archive: skipping {}: {}", entry.path().string(), e.what());
            continue;
        }
        auto series = std::make_shared<Series>();
        series->key = key;
        std::ifstream in(entry.path());
        std::string line;
        std::size_t lineNo = 0;
        while (std::getline(in, line)) {
            ++lineNo;
            if (line.empty()) continue;
            auto j = nlohmann::json::parse(line, nullptr, false);
            try {
                if (j.is_discarded()) throw ArchiveError(ArchiveError::Kind::Storage, "unparseable line");
                MetricSample s = sampleFromJson(key, j);
                validate(s);
                series->bins[alignToGrid(key.family, s.timestamp)] = std::move(s.value);
            } catch (const ArchiveError& e) {
                // A torn final line after a crash is expected; anything else is worth a warning too.
                spdlog::warn("archive: {}:{} ignored: {}", entry.path().string(), lineNo, e.what());
            }
        }
        series_.emplace(key, std::move(series));
    }
}

std::shared_ptr<MetricArchive::Series> MetricArchive::find(const SeriesKey& key) const {
    std::shared_lock lock(mapMutex_);
    auto it = series_.find(key);
    return it == series_.end() ? nullptr : it->second;
}

std::shared_ptr<MetricArchive::Series> MetricArchive::findOrCreate(const SeriesKey& key) {
    if (auto s = find(key)) return s;
    std::unique_lock lock(mapMutex_);
    auto [it, inserted] = series_.try_emplace(key);
    if (inserted) {
        it->second = std::make_shared<Series>();
        it->second->key = key;
    }
    return it->second;
}

void MetricArchive::ingest(const MetricSample& sample) { ingestBatch(std::span(&sample, 1)); }

void MetricArchive::ingestBatch(std::span<const MetricSample> samples) {
    for (const auto& s : samples) validate(s);

    std::map<SeriesKey, std::vector<const MetricSample*>> grouped;
    for (const auto& s : samples) grouped[s.key].push_back(&s);

    for (const auto& [key, group] : grouped) {
        auto series = findOrCreate(key);
        std::unique_lock lock(series->mutex);
        if (directory_) {
            const auto path = *directory_ / encodeSeriesFileName(key.name());
            std::ofstream out(path, std::ios::app | std::ios::binary);
            if (!out) throw ArchiveError(ArchiveError::Kind::Storage, "cannot append to " + path.string());
            for (const MetricSample* s : group) {
                MetricSample aligned = *s;
                aligned.timestamp = alignToGrid(key.family, s->timestamp);
                out << toJson(aligned).dump() << '\n';
            }
            out.flush();
            if (!out) throw ArchiveError(ArchiveError::Kind::Storage, "write failed for " + path.string());
        }
        for (const MetricSample* s : group) series->bins[alignToGrid(key.family, s->timestamp)] = s->value;
    }
}

std::vector<MetricSample> MetricArchive::queryWindow(const SeriesKey& key, std::int64_t from, std::int64_t to) const {
    if (from >= to) {
        throw ArchiveError(ArchiveError::Kind::InvalidWindow,
                           "window [" + std::to_string(from) + ", " + std::to_string(to) + ") is empty or inverted");
    }
    auto series = find(key);
    if (!series) throw ArchiveError(ArchiveError::Kind::UnknownSeries, "unknown series " + key.name());
    std::shared_lock lock(series->mutex);
    std::vector<MetricSample> out;
    for (auto it = series->bins.lower_bound(from); it != series->bins.end() && it->first < to; ++it) {
        out.push_back(MetricSample{key, it->first, it->second});
    }
    return out;
}

std::vector<RouteSegment> MetricArchive::hopCountSegments(const SeriesKey& key, std::int64_t from,
                                                          std::int64_t to) const {
    if (key.family != SeriesFamily::Hades || key.metric != MetricKind::HopList) {
        throw ArchiveError(ArchiveError::Kind::WrongMetric, key.name() + " is not a HADES traceroute series");
    }
    const std::int64_t bin = resolution(key.family);
    std::vector<RouteSegment> segments;
    const std::vector<std::string>* currentHops = nullptr;
    const auto samples = queryWindow(key, from, to);
    for (const auto& s : samples) {
        const auto& hops = std::get<HopList>(s.value).hops;
        if (currentHops != nullptr && hops == *currentHops) {
            segments.back().end = s.timestamp + bin;
            continue;
        }
        RouteSegment seg;
        for (const auto& hop : hops) {
            if (!seg.signature.empty()) seg.signature += " > ";
            seg.signature += hop;
        }
        seg.start = s.timestamp;
        seg.end = s.timestamp + bin;
        seg.hopCount = hops.size();
        segments.push_back(std::move(seg));
        currentHops = &hops;
    }
    return segments;
}

bool MetricArchive::hasSeries(const SeriesKey& key) const { return find(key) != nullptr; }

std::vector<SeriesKey> MetricArchive::seriesKeys() const {
    std::shared_lock lock(mapMutex_);
    std::vector<SeriesKey> keys;
    for (const auto& [key, s] : series_) keys.push_back(key);
    return keys;
}

std::size_t MetricArchive::sampleCount(const SeriesKey& key) const {
    auto series = find(key);
    if (!series) return 0;
    std::shared_lock lock(series->mutex);
    return series->bins.size();
}

std::optional<std::int64_t> MetricArchive::latestTimestamp(const SeriesKey& key) const {
    auto series = find(key);
    if (!series) return std::nullopt;
    std::shared_lock lock(series->mutex);
    if (series->bins.empty()) return std::nullopt;
    return series->bins.rbegin()->first;
}

std::vector<std::pair<std::string, std::string>> missingMeshPairs(const MetricArchive& archive,
                                                                  std::span<const std::string> nodes,
                                                                  MetricKind metric) {
    std::vector<std::pair<std::string, std::string>> missing;
    for (const auto& src : nodes) {
        for (const auto& dst : nodes) {
            if (src == dst) continue;
            if (!archive.hasSeries(SeriesKey::hades(src, dst, metric))) missing.emplace_back(src, dst);
        }
    }
    return missing;
}

}  // namespace opnmon::archive
