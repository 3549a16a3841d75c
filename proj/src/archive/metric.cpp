#include "opnmon/archive/metric.hpp"

#include <array>
#include <cmath>

namespace opnmon::archive {

namespace {

constexpr std::array<std::string_view, 3> kFamilyNames{"hades", "bwctl", "if"};
constexpr std::array<std::string_view, 8> kMetricNames{"owd",        "jitter",      "loss",        "hops",
                                                       "throughput", "utilization", "input_errors", "output_drops"};

[[noreturn]] void invalidKey(const std::string& what) { throw ArchiveError(ArchiveError::Kind::InvalidKey, what); }
[[noreturn]] void invalidSample(const std::string& what) {
    throw ArchiveError(ArchiveError::Kind::InvalidSample, what);
}

bool metricAllowed(SeriesFamily family, MetricKind metric) {
    switch (family) {
        case SeriesFamily::Hades:
            return metric == MetricKind::OneWayDelay || metric == MetricKind::Jitter || metric == MetricKind::Loss ||
                   metric == MetricKind::HopList;
        case SeriesFamily::Bwctl: return metric == MetricKind::Throughput;
        case SeriesFamily::Interface:
            return metric == MetricKind::Utilization || metric == MetricKind::InputErrors ||
                   metric == MetricKind::OutputDrops;
    }
    return false;
}

std::size_t expectedAlternative(MetricKind metric) {
    switch (metric) {
        case MetricKind::OneWayDelay:
        case MetricKind::Jitter:
        case MetricKind::Throughput: return 0;
        case MetricKind::Loss:
        case MetricKind::Utilization: return 1;
        case MetricKind::InputErrors:
        case MetricKind::OutputDrops: return 2;
        case MetricKind::HopList: return 3;
    }
    return 0;
}

void checkId(const std::string& id, const char* what) {
    if (id.empty()) invalidKey(std::string(what) + " must not be empty");
    if (id.find(':') != std::string::npos) invalidKey(std::string(what) + " '" + id + "' contains ':'");
}

bool finiteNonNegative(double v) { return std::isfinite(v) && v >= 0.0; }

}  // namespace

std::string_view toString(SeriesFamily f) noexcept { return kFamilyNames[static_cast<std::size_t>(f)]; }
std::string_view toString(MetricKind m) noexcept { return kMetricNames[static_cast<std::size_t>(m)]; }

std::int64_t resolution(SeriesFamily family) noexcept {
    return family == SeriesFamily::Bwctl ? kEightHours : kFiveMinutes;
}

SeriesKey SeriesKey::hades(std::string src, std::string dst, MetricKind metric) {
    return SeriesKey{SeriesFamily::Hades, std::move(src), std::move(dst), metric};
}

SeriesKey SeriesKey::bwctl(std::string src, std::string dst) {
    return SeriesKey{SeriesFamily::Bwctl, std::move(src), std::move(dst), MetricKind::Throughput};
}

SeriesKey SeriesKey::interface(std::string id, MetricKind metric) {
    return SeriesKey{SeriesFamily::Interface, std::move(id), {}, metric};
}

std::string SeriesKey::name() const {
    std::string out(toString(family));
    out += ':';
    out += source;
    if (family != SeriesFamily::Interface) {
        out += ':';
        out += destination;
    }
    out += ':';
    out += toString(metric);
    return out;
}

SeriesKey SeriesKey::parse(std::string_view name) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (;;) {
        const auto colon = name.find(':', start);
        parts.emplace_back(name.substr(start, colon == std::string_view::npos ? std::string_view::npos : colon - start));
        if (colon == std::string_view::npos) break;
        start = colon + 1;
    }
    SeriesKey key;
    bool familyFound = false;
    for (std::size_t i = 0; i < kFamilyNames.size(); ++i) {
        if (!parts.empty() && parts[0] == kFamilyNames[i]) {
            key.family = static_cast<SeriesFamily>(i);
            familyFound = true;
        }
    }
    if (!familyFound) invalidKey("unknown series family in '" + std::string(name) + "'");
    const std::size_t expected = key.family == SeriesFamily::Interface ? 3 : 4;
    if (parts.size() != expected) invalidKey("malformed series name '" + std::string(name) + "'");
    key.source = parts[1];
    if (expected == 4) key.destination = parts[2];
    bool metricFound = false;
    for (std::size_t i = 0; i < kMetricNames.size(); ++i) {
        if (parts.back() == kMetricNames[i]) {
            key.metric = static_cast<MetricKind>(i);
            metricFound = true;
        }
    }
    if (!metricFound) invalidKey("unknown metric in '" + std::string(name) + "'");
    key.validate();
    return key;
}

void SeriesKey::validate() const {
    if (!metricAllowed(family, metric)) {
        invalidKey(std::string(toString(metric)) + " is not a " + std::string(toString(family)) + " metric");
    }
    checkId(source, "series source");
    if (family == SeriesFamily::Interface) {
        if (!destination.empty()) invalidKey("interface series have no destination");
    } else {
        checkId(destination, "series destination");
        if (source == destination) invalidKey("directed series needs distinct endpoints, got " + source);
    }
}

void validate(const MetricSample& sample) {
    try {
        sample.key.validate();
    } catch (const ArchiveError& e) {
        invalidSample(e.what());
    }
    if (sample.value.index() != expectedAlternative(sample.key.metric)) {
        invalidSample("value type does not match metric " + std::string(toString(sample.key.metric)));
    }
    if (const auto* t = std::get_if<Triplet>(&sample.value)) {
        if (!finiteNonNegative(t->min) || !finiteNonNegative(t->med) || !finiteNonNegative(t->max)) {
            invalidSample("triplet values must be finite and non-negative");
        }
        if (!(t->min <= t->med && t->med <= t->max)) invalidSample("triplet must satisfy min <= med <= max");
    } else if (const auto* s = std::get_if<Scalar>(&sample.value)) {
        if (!finiteNonNegative(s->value)) invalidSample("value must be finite and non-negative");
        if (sample.key.metric == MetricKind::Loss && s->value > 1.0) {
            invalidSample("loss fraction " + std::to_string(s->value) + " outside [0,1]");
        }
    } else if (const auto* h = std::get_if<HopList>(&sample.value)) {
        for (const auto& hop : h->hops) {
            if (hop.empty()) invalidSample("empty hop in hop list");
        }
    }
}

std::int64_t alignToGrid(SeriesFamily family, std::int64_t timestamp) noexcept {
    const std::int64_t bin = resolution(family);
    std::int64_t q = timestamp / bin;
    if (timestamp % bin != 0 && timestamp < 0) --q;
    return q * bin;
}

nlohmann::json toJson(const MetricSample& sample) {
    nlohmann::json j{{"timestamp", sample.timestamp}};
    std::visit(
        [&j](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Triplet>) {
                j["min"] = v.min;
                j["med"] = v.med;
                j["max"] = v.max;
            } else if constexpr (std::is_same_v<T, Scalar>) {
                j["value"] = v.value;
            } else if constexpr (std::is_same_v<T, Counter>) {
                j["count"] = v.value;
            } else {
                j["hops"] = v.hops;
            }
        },
        sample.value);
    return j;
}

MetricSample sampleFromJson(const SeriesKey& key, const nlohmann::json& j) {
    MetricSample s;
    s.key = key;
    try {
        s.timestamp = j.at("timestamp").get<std::int64_t>();
        switch (expectedAlternative(key.metric)) {
            case 0:
                s.value = Triplet{j.at("min").get<double>(), j.at("med").get<double>(), j.at("max").get<double>()};
                break;
            case 1: s.value = Scalar{j.at("value").get<double>()}; break;
            case 2: s.value = Counter{j.at("count").get<std::uint64_t>()}; break;
            default: s.value = HopList{j.at("hops").get<std::vector<std::string>>()}; break;
        }
    } catch (const nlohmann::json::exception& e) {
        invalidSample(std::string("sample JSON: ") + e.what());
    }
    return s;
}

}  // namespace opnmon::archive
