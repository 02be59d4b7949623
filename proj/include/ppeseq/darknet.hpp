#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ppeseq/types.hpp"
#include "ppeseq/wire.hpp"

namespace ppeseq {

/// Parse darknet's JSON detection dump (the single-array form): an array of
/// frame objects carrying frame_id and objects[].{name, confidence,
/// relative_coordinates{center_x,center_y,width,height}}. Extra fields such
/// as class_id or filename are ignored. Darknet emits no timestamps, so they
/// are synthesized as frame_id * 1000 / fps.
inline std::vector<FrameBatch> parse_darknet_json(std::string_view document,
                                                  double fps = 30.0,
                                                  bool strict = true,
                                                  IngestStats* stats = nullptr) {
    if (!(fps > 0.0)) throw MalformedRecordError(0, "fps must be positive");

    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(document);
    } catch (const nlohmann::json::parse_error& e) {
        throw MalformedRecordError(e.byte, e.what());
    }
    if (!doc.is_array())
        throw MalformedRecordError(0, "darknet document must be a JSON array of frames");

    std::vector<FrameBatch> batches;
    std::optional<std::uint64_t> prev_frame;
    for (const nlohmann::json& frame_obj : doc) {
        if (!frame_obj.is_object())
            throw MalformedRecordError(0, "frame entry is not a JSON object");

        FrameBatch batch;
        batch.frame_index = detail::require_uint(frame_obj, "frame_id");
        if (prev_frame && batch.frame_index <= *prev_frame)
            throw NonMonotonicFrameError(*prev_frame, batch.frame_index);
        prev_frame = batch.frame_index;
        batch.timestamp_ms = static_cast<std::uint64_t>(
            std::llround(static_cast<double>(batch.frame_index) * 1000.0 / fps));

        auto objects_it = frame_obj.find("objects");
        if (objects_it == frame_obj.end()) {
            if (strict) throw MalformedRecordError(0, "frame entry missing \"objects\"");
            batches.push_back(std::move(batch));
            continue;
        }
        if (!objects_it->is_array())
            throw MalformedRecordError(0, "\"objects\" must be an array");

        for (const nlohmann::json& obj : *objects_it) {
            auto drop = [&]() {
                if (stats) ++stats->dropped_detections;
            };
            if (!obj.is_object()) {
                if (strict) throw MalformedRecordError(0, "object entry is not a JSON object");
                drop();
                continue;
            }

            auto name_it = obj.find("name");
            if (name_it == obj.end() || !name_it->is_string()) {
                if (strict) throw MalformedRecordError(0, "object missing string \"name\"");
                drop();
                continue;
            }
            PpeClass cls;
            try {
                cls = parse_class(name_it->get<std::string>());
            } catch (const UnknownClassError&) {
                if (strict) throw;
                drop();
                continue;
            }

            auto conf_it = obj.find("confidence");
            if (conf_it == obj.end() || !conf_it->is_number()) {
                if (strict) throw MalformedRecordError(0, "object missing numeric \"confidence\"");
                drop();
                continue;
            }
            double conf = conf_it->get<double>();
            if (conf < 0.0 || conf > 1.0) {
                if (strict)
                    throw MalformedRecordError(0, "confidence " + std::to_string(conf) +
                                                      " out of [0,1]");
                conf = std::clamp(conf, 0.0, 1.0);
            }

            auto rc_it = obj.find("relative_coordinates");
            if (rc_it == obj.end() || !rc_it->is_object()) {
                if (strict)
                    throw MalformedRecordError(0, "object missing \"relative_coordinates\"");
                drop();
                continue;
            }
            auto coord = [&](const char* key) -> std::optional<double> {
                auto it = rc_it->find(key);
                if (it == rc_it->end() || !it->is_number()) return std::nullopt;
                return it->get<double>();
            };
            auto cx = coord("center_x"), cy = coord("center_y");
            auto w = coord("width"), h = coord("height");
            if (!cx || !cy || !w || !h) {
                if (strict)
                    throw MalformedRecordError(0, "relative_coordinates needs numeric "
                                                  "center_x/center_y/width/height");
                drop();
                continue;
            }
            BBox box{*cx, *cy, *w, *h};
            if (!box.valid()) {
                if (strict) throw MalformedRecordError(0, "bbox out of normalized range");
                if (box.w <= 0.0 || box.h <= 0.0) {
                    drop();
                    continue;
                }
                box.cx = std::clamp(box.cx, 0.0, 1.0);
                box.cy = std::clamp(box.cy, 0.0, 1.0);
                box.w = std::min(box.w, 1.0);
                box.h = std::min(box.h, 1.0);
            }

            DetectionEvent det;
            det.frame_index = batch.frame_index;
            det.timestamp_ms = batch.timestamp_ms;
            det.cls = cls;
            det.confidence = conf;
            det.bbox = box;
            batch.detections.push_back(det);
        }
        batches.push_back(std::move(batch));
    }
    return batches;
}

}  // namespace ppeseq
