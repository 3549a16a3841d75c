#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "opnmon/core/model.hpp"

namespace opnmon::archive {

class ArchiveError : public Error {
public:
    enum class Kind { InvalidSample, InvalidKey, UnknownSeries, InvalidWindow, WrongMetric, Storage };

    ArchiveError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

/// HADES and BWCTL series sit on directed node pairs; router series on one interface.
enum class SeriesFamily { Hades, Bwctl, Interface };

enum class MetricKind { OneWayDelay, Jitter, Loss, HopList, Throughput, Utilization, InputErrors, OutputDrops };

std::string_view toString(SeriesFamily f) noexcept;
std::string_view toString(MetricKind m) noexcept;

inline constexpr std::int64_t kFiveMinutes = 300;
inline constexpr std::int64_t kEightHours = 8 * 3600;

/// Bin width of a family: 300 s for HADES and router metrics, 8 h for BWCTL.
std::int64_t resolution(SeriesFamily family) noexcept;

struct SeriesKey {
    SeriesFamily family = SeriesFamily::Hades;
    std::string source;       // node id, BWCTL address or interface id
    std::string destination;  // empty for interface series
    MetricKind metric = MetricKind::OneWayDelay;

    static SeriesKey hades(std::string src, std::string dst, MetricKind metric);
    static SeriesKey bwctl(std::string src, std::string dst);
    static SeriesKey interface(std::string id, MetricKind metric);

    /// "hades:SRC:DST:owd", "bwctl:SRC:DST:throughput", "if:ID:utilization".
    std::string name() const;
    static SeriesKey parse(std::string_view name);

    /// Throws ArchiveError(InvalidKey) for bad family/metric combinations,
    /// empty or ':'-bearing ids and src == dst.
    void validate() const;

    friend auto operator<=>(const SeriesKey&, const SeriesKey&) = default;
    friend bool operator==(const SeriesKey&, const SeriesKey&) = default;
};

struct Triplet {
    double min = 0;
    double med = 0;
    double max = 0;
    friend bool operator==(const Triplet&, const Triplet&) = default;
};
struct Scalar {
    double value = 0;
    friend bool operator==(const Scalar&, const Scalar&) = default;
};
struct Counter {
    std::uint64_t value = 0;
    friend bool operator==(const Counter&, const Counter&) = default;
};
struct HopList {
    std::vector<std::string> hops;
    friend bool operator==(const HopList&, const HopList&) = default;
};

/// owd/jitter (ms) and throughput (bit/s): Triplet. loss (fraction) and
/// utilization (bit/s): Scalar. input errors / output drops: Counter.
using MetricValue = std::variant<Triplet, Scalar, Counter, HopList>;

struct MetricSample {
    SeriesKey key;
    std::int64_t timestamp = 0;
    MetricValue value;

    friend bool operator==(const MetricSample&, const MetricSample&) = default;
};

/// Throws ArchiveError(InvalidSample) if the value does not fit the metric
/// or violates its range (loss in [0,1], min <= med <= max, finite, >= 0).
void validate(const MetricSample& sample);

/// Floors to the family's resolution grid.
std::int64_t alignToGrid(SeriesFamily family, std::int64_t timestamp) noexcept;

/// Value part only: {"timestamp", "min"/"med"/"max" | "value" | "count" | "hops"}.
nlohmann::json toJson(const MetricSample& sample);
MetricSample sampleFromJson(const SeriesKey& key, const nlohmann::json& j);

}  // namespace opnmon::archive
