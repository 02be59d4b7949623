#pragma once

#include <algorithm>
#include <array>
#include <stdexcept>
#include <string>

#include "ppeseq/types.hpp"

namespace ppeseq {

struct InvalidPolicyError : std::runtime_error {
    explicit InvalidPolicyError(const std::string& why)
        : std::runtime_error("invalid threshold policy: " + why) {}
};

struct InvalidThresholdError : std::runtime_error {
    explicit InvalidThresholdError(const std::string& why)
        : std::runtime_error("invalid thresholds: " + why) {}
};

/// Maps a detector's per-class AP onto a confidence gate:
/// clamp(alpha * ap, floor, ceil). Operators tune alpha/floor/ceil or set
/// the confidence directly in config, bypassing derivation.
struct ThresholdPolicy {
    double alpha = 0.5;
    double floor = 0.25;
    double ceil = 0.9;

    void validate() const {
        if (alpha <= 0.0) throw InvalidPolicyError("alpha must be > 0");
        if (!(floor > 0.0 && floor <= ceil && ceil <= 1.0))
            throw InvalidPolicyError("need 0 < floor <= ceil <= 1");
    }
};

inline double derive_confidence_threshold(double ap, const ThresholdPolicy& policy = {}) {
    policy.validate();
    if (ap < 0.0 || ap > 1.0)
        throw InvalidPolicyError("ap must be in [0,1], got " + std::to_string(ap));
    return std::clamp(policy.alpha * ap, policy.floor, policy.ceil);
}

/// Per-class gating parameters. A class counts as worn once it accrues
/// `frequency` qualifying frames (confidence >= `confidence`) within the last
/// `window_frames` frames; a worn class counts as removed after
/// `removal_window_frames` consecutive frames without a qualifying detection.
struct ClassThresholdEntry {
    double confidence = 0.5;
    std::uint32_t frequency = 5;
    std::uint32_t window_frames = 30;
    std::uint32_t removal_window_frames = 45;

    void validate(std::string_view cls_name) const {
        auto fail = [&](const std::string& why) {
            throw InvalidThresholdError(std::string(cls_name) + ": " + why);
        };
        if (!(confidence > 0.0 && confidence <= 1.0)) fail("confidence must be in (0,1]");
        if (frequency == 0) fail("frequency must be positive");
        if (window_frames == 0) fail("window_frames must be positive");
        if (removal_window_frames == 0) fail("removal_window_frames must be positive");
        if (frequency > window_frames)
            fail("frequency (" + std::to_string(frequency) + ") exceeds window_frames (" +
                 std::to_string(window_frames) + "), satisfaction would be unreachable");
    }

    friend bool operator==(const ClassThresholdEntry&, const ClassThresholdEntry&) = default;
};

/// Gating parameters for all five classes. Constructing validates every
/// entry; classes without an explicit entry keep the defaults.
class ClassThresholds {
  public:
    ClassThresholds() { validate(); }

    explicit ClassThresholds(std::array<ClassThresholdEntry, kClassCount> entries)
        : entries_(entries) {
        validate();
    }

    static ClassThresholds uniform(ClassThresholdEntry e) {
        std::array<ClassThresholdEntry, kClassCount> entries;
        entries.fill(e);
        return ClassThresholds(entries);
    }

    const ClassThresholdEntry& of(PpeClass c) const { return entries_[class_index(c)]; }

    void set(PpeClass c, const ClassThresholdEntry& e) {
        e.validate(render_class(c));
        entries_[class_index(c)] = e;
    }

    friend bool operator==(const ClassThresholds&, const ClassThresholds&) = default;

  private:
    void validate() const {
        for (PpeClass c : all_classes()) entries_[class_index(c)].validate(render_class(c));
    }

    std::array<ClassThresholdEntry, kClassCount> entries_{};
};

}  // namespace ppeseq
