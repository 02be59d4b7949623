#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "ppeseq/types.hpp"

namespace ppeseq {

struct MalformedRecordError : std::runtime_error {
    MalformedRecordError(std::size_t position, const std::string& reason)
        : std::runtime_error("malformed record at byte " + std::to_string(position) +
                             ": " + reason),
          position(position), reason(reason) {}
    std::size_t position;
    std::string reason;
};

/// Drop counters for lenient-mode ingestion. Strict mode never drops, it
/// throws instead.
struct IngestStats {
    std::uint64_t dropped_records = 0;
    std::uint64_t dropped_detections = 0;
};

namespace detail {

inline std::uint64_t require_uint(const nlohmann::json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end())
        throw MalformedRecordError(0, std::string("missing field \"") + key + "\"");
    if (!it->is_number_integer() || (it->is_number_integer() && it->get<std::int64_t>() < 0))
        throw MalformedRecordError(0, std::string("field \"") + key +
                                          "\" must be a non-negative integer");
    return it->get<std::uint64_t>();
}

// Parses one detection object {class, conf, bbox[4]}. In lenient mode a
// detection that cannot be sanely repaired returns nullopt.
inline std::optional<DetectionEvent> parse_detection(const nlohmann::json& obj,
                                                     std::uint64_t frame,
                                                     std::uint64_t t_ms,
                                                     bool strict,
                                                     IngestStats* stats) {
    auto drop = [&]() -> std::optional<DetectionEvent> {
        if (stats) ++stats->dropped_detections;
        return std::nullopt;
    };

    auto cls_it = obj.find("class");
    if (cls_it == obj.end() || !cls_it->is_string()) {
        if (strict) throw MalformedRecordError(0, "detection missing string \"class\"");
        return drop();
    }
    PpeClass cls;
    try {
        cls = parse_class(cls_it->get<std::string>());
    } catch (const UnknownClassError&) {
        if (strict) throw;
        return drop();
    }

    auto conf_it = obj.find("conf");
    if (conf_it == obj.end() || !conf_it->is_number()) {
        if (strict) throw MalformedRecordError(0, "detection missing numeric \"conf\"");
        return drop();
    }
    double conf = conf_it->get<double>();
    if (conf < 0.0 || conf > 1.0) {
        if (strict)
            throw MalformedRecordError(0, "confidence " + std::to_string(conf) +
                                              " out of [0,1]");
        conf = std::clamp(conf, 0.0, 1.0);
    }

    auto bbox_it = obj.find("bbox");
    if (bbox_it == obj.end() || !bbox_it->is_array() || bbox_it->size() != 4 ||
        !std::all_of(bbox_it->begin(), bbox_it->end(),
                     [](const nlohmann::json& v) { return v.is_number(); })) {
        if (strict) throw MalformedRecordError(0, "detection needs \"bbox\" of 4 numbers");
        return drop();
    }
    BBox box{(*bbox_it)[0].get<double>(), (*bbox_it)[1].get<double>(),
             (*bbox_it)[2].get<double>(), (*bbox_it)[3].get<double>()};
    if (!box.valid()) {
        if (strict) throw MalformedRecordError(0, "bbox out of normalized range");
        if (box.w <= 0.0 || box.h <= 0.0) return drop();
        box.cx = std::clamp(box.cx, 0.0, 1.0);
        box.cy = std::clamp(box.cy, 0.0, 1.0);
        box.w = std::min(box.w, 1.0);
        box.h = std::min(box.h, 1.0);
    }

    DetectionEvent det;
    det.frame_index = frame;
    det.timestamp_ms = t_ms;
    det.cls = cls;
    det.confidence = conf;
    det.bbox = box;
    return det;
}

}  // namespace detail

/// Parse one line of the native wire format:
///   {"frame": <uint>, "t_ms": <uint>, "detections": [{"class","conf","bbox"}...]}
/// Unknown object keys are ignored (producers may attach extras). Strict
/// mode throws MalformedRecordError/UnknownClassError; lenient mode repairs
/// what it can, drops what it cannot, and counts every drop. A lenient
/// whole-line drop returns nullopt.
inline std::optional<FrameBatch> parse_event_line(std::string_view line,
                                                  bool strict = true,
                                                  IngestStats* stats = nullptr) {
    try {
        nlohmann::json doc = nlohmann::json::parse(line);
        if (!doc.is_object()) throw MalformedRecordError(0, "record is not a JSON object");

        FrameBatch batch;
        batch.frame_index = detail::require_uint(doc, "frame");
        batch.timestamp_ms = detail::require_uint(doc, "t_ms");

        auto det_it = doc.find("detections");
        if (det_it == doc.end() || !det_it->is_array())
            throw MalformedRecordError(0, "missing array \"detections\"");
        for (const nlohmann::json& obj : *det_it) {
            if (!obj.is_object())
                throw MalformedRecordError(0, "detection is not a JSON object");
            auto det = detail::parse_detection(obj, batch.frame_index,
                                               batch.timestamp_ms, strict, stats);
            if (det) batch.detections.push_back(*det);
        }
        return batch;
    } catch (const nlohmann::json::parse_error& e) {
        if (strict) throw MalformedRecordError(e.byte, e.what());
        if (stats) ++stats->dropped_records;
        return std::nullopt;
    } catch (const MalformedRecordError&) {
        if (strict) throw;
        if (stats) ++stats->dropped_records;
        return std::nullopt;
    }
}

/// Render a batch as one native-format line (no trailing newline). Doubles
/// use the shortest representation that round-trips bit-exactly, so
/// parse(render(b)) == b.
inline std::string render_event_line(const FrameBatch& batch) {
    nlohmann::ordered_json doc;
    doc["frame"] = batch.frame_index;
    doc["t_ms"] = batch.timestamp_ms;
    doc["detections"] = nlohmann::ordered_json::array();
    for (const DetectionEvent& det : batch.detections) {
        nlohmann::ordered_json obj;
        obj["class"] = std::string(render_class(det.cls));
        obj["conf"] = det.confidence;
        obj["bbox"] = {det.bbox.cx, det.bbox.cy, det.bbox.w, det.bbox.h};
        doc["detections"].push_back(std::move(obj));
    }
    return doc.dump();
}

}  // namespace ppeseq
