#pragma once

#include <array>
#include <cctype>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ppeseq {

/// The five PPE classes the detector reports. Closed set: anything else is
/// an ingestion error (or a counted drop in lenient mode).
enum class PpeClass : std::uint8_t {
    Coverall = 0,
    FaceShield,
    Gloves,
    Goggles,
    Mask,
};

inline constexpr std::size_t kClassCount = 5;

constexpr std::array<PpeClass, kClassCount> all_classes() {
    return {PpeClass::Coverall, PpeClass::FaceShield, PpeClass::Gloves,
            PpeClass::Goggles, PpeClass::Mask};
}

constexpr std::size_t class_index(PpeClass c) {
    return static_cast<std::size_t>(c);
}

struct UnknownClassError : std::runtime_error {
    explicit UnknownClassError(const std::string& name)
        : std::runtime_error("unknown PPE class: \"" + name + "\""), name(name) {}
    std::string name;
};

/// Canonical wire/file name, lowercase with underscores.
constexpr std::string_view render_class(PpeClass c) {
    switch (c) {
        case PpeClass::Coverall:   return "coverall";
        case PpeClass::FaceShield: return "face_shield";
        case PpeClass::Gloves:     return "gloves";
        case PpeClass::Goggles:    return "goggles";
        case PpeClass::Mask:       return "mask";
    }
    return "";
}

/// Case-insensitive, separator-insensitive parse. Accepts the detector-side
/// aliases "ppe" and "gown" (both coverall) and "glasses" (goggles).
inline PpeClass parse_class(std::string_view name) {
    std::string key;
    key.reserve(name.size());
    for (char ch : name) {
        if (ch == ' ' || ch == '_' || ch == '-') continue;
        key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    }
    if (key == "coverall" || key == "ppe" || key == "gown") return PpeClass::Coverall;
    if (key == "faceshield") return PpeClass::FaceShield;
    if (key == "gloves") return PpeClass::Gloves;
    if (key == "goggles" || key == "glasses") return PpeClass::Goggles;
    if (key == "mask") return PpeClass::Mask;
    throw UnknownClassError(std::string(name));
}

/// Normalized box center/size, all in [0,1].
struct BBox {
    double cx = 0.0;
    double cy = 0.0;
    double w = 0.0;
    double h = 0.0;

    bool valid() const {
        return cx >= 0.0 && cx <= 1.0 && cy >= 0.0 && cy <= 1.0 &&
               w > 0.0 && w <= 1.0 && h > 0.0 && h <= 1.0;
    }
    friend bool operator==(const BBox&, const BBox&) = default;
};

/// One detector hit. timestamp_ms is relative to session start; frame_index
/// is authoritative for ordering.
struct DetectionEvent {
    std::uint64_t frame_index = 0;
    std::uint64_t timestamp_ms = 0;
    PpeClass cls = PpeClass::Coverall;
    double confidence = 0.0;
    BBox bbox;

    bool valid() const {
        return confidence >= 0.0 && confidence <= 1.0 && bbox.valid();
    }
    friend bool operator==(const DetectionEvent&, const DetectionEvent&) = default;
};

/// Frame-granular delivery unit. An empty detections list is a valid frame
/// (nothing visible) and still advances window/absence bookkeeping.
struct FrameBatch {
    std::uint64_t frame_index = 0;
    std::uint64_t timestamp_ms = 0;
    std::vector<DetectionEvent> detections;

    friend bool operator==(const FrameBatch&, const FrameBatch&) = default;
};

struct NonMonotonicFrameError : std::runtime_error {
    NonMonotonicFrameError(std::uint64_t previous, std::uint64_t observed)
        : std::runtime_error("non-monotonic frame index: " + std::to_string(observed) +
                             " after " + std::to_string(previous)),
          previous(previous), observed(observed) {}
    std::uint64_t previous;
    std::uint64_t observed;
};

}  // namespace ppeseq
