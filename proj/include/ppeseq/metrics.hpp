#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <sstream>
#include <string>

namespace ppeseq {

/// Log-bucketed latency histogram (nanoseconds). Buckets grow by 25% from
/// 100 ns, which bounds percentile error well under the 1 ms budget this
/// project cares about while keeping the footprint constant for
/// long-running monitors.
class LatencyHistogram {
  public:
    void record(std::uint64_t ns) {
        ++count_;
        sum_ns_ += ns;
        max_ns_ = std::max(max_ns_, ns);
        min_ns_ = count_ == 1 ? ns : std::min(min_ns_, ns);
        buckets_[bucket_of(ns)] += 1;
    }

    std::uint64_t count() const { return count_; }
    std::uint64_t max_ns() const { return max_ns_; }
    std::uint64_t min_ns() const { return count_ ? min_ns_ : 0; }
    double mean_ns() const {
        return count_ ? static_cast<double>(sum_ns_) / static_cast<double>(count_) : 0.0;
    }

    /// Upper bound of the bucket holding the p-quantile (p in [0,1]).
    std::uint64_t percentile_ns(double p) const {
        if (count_ == 0) return 0;
        p = std::clamp(p, 0.0, 1.0);
        const std::uint64_t rank =
            std::max<std::uint64_t>(1, static_cast<std::uint64_t>(p * static_cast<double>(count_) + 0.5));
        std::uint64_t seen = 0;
        for (std::size_t i = 0; i < kBuckets; ++i) {
            seen += buckets_[i];
            if (seen >= rank) return upper_bound_ns(i);
        }
        return max_ns_;
    }

    void merge(const LatencyHistogram& other) {
        if (other.count_ == 0) return;
        if (count_ == 0) min_ns_ = other.min_ns_;
        else min_ns_ = std::min(min_ns_, other.min_ns_);
        count_ += other.count_;
        sum_ns_ += other.sum_ns_;
        max_ns_ = std::max(max_ns_, other.max_ns_);
        for (std::size_t i = 0; i < kBuckets; ++i) buckets_[i] += other.buckets_[i];
    }

  private:
    static constexpr std::size_t kBuckets = 120;
    static constexpr double kBase = 100.0;   // ns
    static constexpr double kGrowth = 1.25;

    static std::size_t bucket_of(std::uint64_t ns) {
        double bound = kBase;
        for (std::size_t i = 0; i + 1 < kBuckets; ++i) {
            if (static_cast<double>(ns) <= bound) return i;
            bound *= kGrowth;
        }
        return kBuckets - 1;
    }

    static std::uint64_t upper_bound_ns(std::size_t bucket) {
        double bound = kBase;
        for (std::size_t i = 0; i < bucket; ++i) bound *= kGrowth;
        return static_cast<std::uint64_t>(bound);
    }

    std::array<std::uint64_t, kBuckets> buckets_{};
    std::uint64_t count_ = 0;
    std::uint64_t sum_ns_ = 0;
    std::uint64_t max_ns_ = 0;
    std::uint64_t min_ns_ = 0;
};

/// End-of-run counters every command reports.
struct RunStats {
    std::uint64_t batches = 0;
    std::uint64_t detections = 0;
    std::uint64_t dropped_records = 0;
    std::uint64_t dropped_detections = 0;
    std::uint64_t alerts_emitted = 0;
    std::uint64_t sink_failures = 0;
    std::uint64_t sink_dropped = 0;
    LatencyHistogram engine_latency;  // batch dequeue -> alert enqueue

    std::string summary() const {
        std::ostringstream os;
        os << "batches=" << batches
           << " detections=" << detections
           << " dropped_records=" << dropped_records
           << " dropped_detections=" << dropped_detections
           << " alerts=" << alerts_emitted;
        if (sink_failures || sink_dropped)
            os << " sink_failures=" << sink_failures << " sink_dropped=" << sink_dropped;
        os << " latency_p50_us=" << static_cast<double>(engine_latency.percentile_ns(0.50)) / 1000.0
           << " latency_p99_us=" << static_cast<double>(engine_latency.percentile_ns(0.99)) / 1000.0;
        return os.str();
    }
};

}  // namespace ppeseq
