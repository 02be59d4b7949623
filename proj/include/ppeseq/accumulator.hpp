#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ppeseq/sequence.hpp"
#include "ppeseq/thresholds.hpp"
#include "ppeseq/types.hpp"

namespace ppeseq {

enum class TransitionKind : std::uint8_t {
    BecameSatisfied,  // class met its frequency/confidence gate
    BecameAbsent,     // previously satisfied class hit its removal window (doffing only)
};

struct Transition {
    PpeClass cls = PpeClass::Coverall;
    TransitionKind kind = TransitionKind::BecameSatisfied;
    std::uint64_t frame_index = 0;
    std::uint64_t timestamp_ms = 0;

    friend bool operator==(const Transition&, const Transition&) = default;
};

/// Sliding-window evidence gate, one per class. A frame "qualifies" for a
/// class when it holds at least one detection of that class at or above the
/// class's confidence threshold; multiple boxes in one frame still count as
/// one qualifying frame. Frame gaps in the input count as empty frames, as
/// do the frames before the first observed batch (the dense axis starts at
/// frame 0).
///
/// Single-writer: observe/reset/is_satisfied must all be called from one
/// execution context.
class AccumulatorSet {
  public:
    AccumulatorSet(ClassThresholds thresholds, Mode mode)
        : thresholds_(std::move(thresholds)), mode_(mode) {
        for (PpeClass c : all_classes()) {
            auto& st = states_[class_index(c)];
            st.ring.assign(thresholds_.of(c).window_frames, 0);
        }
    }

    /// Feed one frame batch. Requires batch.frame_index strictly greater
    /// than any previously observed frame. Returns the transitions this
    /// frame caused, in canonical class order.
    std::vector<Transition> observe(const FrameBatch& batch) {
        if (last_frame_ && batch.frame_index <= *last_frame_)
            throw NonMonotonicFrameError(*last_frame_, batch.frame_index);

        // Frames skipped since the previous batch (or since frame 0 for the
        // first batch) are empty frames for every class.
        const std::uint64_t gap =
            last_frame_ ? batch.frame_index - *last_frame_ - 1 : batch.frame_index;

        std::array<bool, kClassCount> qualifying{};
        for (const DetectionEvent& det : batch.detections) {
            if (det.confidence >= thresholds_.of(det.cls).confidence)
                qualifying[class_index(det.cls)] = true;
        }

        std::vector<Transition> out;
        for (PpeClass c : all_classes()) {
            auto& st = states_[class_index(c)];
            const auto& th = thresholds_.of(c);

            advance_empty(st, gap);
            step(st, qualifying[class_index(c)]);

            if (!st.satisfied && st.hit_count >= th.frequency) {
                st.satisfied = true;
                st.satisfied_at = {batch.frame_index, batch.timestamp_ms};
                out.push_back({c, TransitionKind::BecameSatisfied,
                               batch.frame_index, batch.timestamp_ms});
            } else if (mode_ == Mode::Doffing && st.satisfied &&
                       st.absent_run >= th.removal_window_frames) {
                st.satisfied = false;
                // Stale window hits must not instantly re-satisfy the class;
                // require th.frequency frames of fresh evidence.
                clear_window(st);
                out.push_back({c, TransitionKind::BecameAbsent,
                               batch.frame_index, batch.timestamp_ms});
            }
        }

        last_frame_ = batch.frame_index;
        return out;
    }

    bool is_satisfied(PpeClass c) const { return states_[class_index(c)].satisfied; }

    std::optional<std::pair<std::uint64_t, std::uint64_t>> satisfied_at(PpeClass c) const {
        return states_[class_index(c)].satisfied_at;
    }

    std::uint64_t consecutive_absent_frames(PpeClass c) const {
        return states_[class_index(c)].absent_run;
    }

    /// Return one class to its initial state (empty window, no absence run,
    /// not satisfied). Idempotent.
    void reset(PpeClass c) {
        auto& st = states_[class_index(c)];
        clear_window(st);
        st.absent_run = 0;
        st.satisfied = false;
        st.satisfied_at.reset();
    }

    /// Full restart: every class reset and the frame cursor cleared, so the
    /// same stream can be replayed from scratch.
    void reset() {
        for (PpeClass c : all_classes()) reset(c);
        last_frame_.reset();
    }

    Mode mode() const { return mode_; }
    const ClassThresholds& thresholds() const { return thresholds_; }

  private:
    struct ClassState {
        std::vector<std::uint8_t> ring;  // qualifying flag per frame, ring-indexed
        std::size_t head = 0;            // slot for the next frame
        std::uint32_t hit_count = 0;
        std::uint64_t absent_run = 0;
        bool satisfied = false;
        std::optional<std::pair<std::uint64_t, std::uint64_t>> satisfied_at;
    };

    static void clear_window(ClassState& st) {
        std::fill(st.ring.begin(), st.ring.end(), 0);
        st.hit_count = 0;
    }

    // One frame with a known qualifying flag.
    static void step(ClassState& st, bool qualifying) {
        st.hit_count -= st.ring[st.head];
        st.ring[st.head] = qualifying ? 1 : 0;
        st.hit_count += st.ring[st.head];
        st.head = (st.head + 1) % st.ring.size();
        st.absent_run = qualifying ? 0 : st.absent_run + 1;
    }

    static void advance_empty(ClassState& st, std::uint64_t n) {
        st.absent_run += n;
        if (n >= st.ring.size()) {
            clear_window(st);
            st.head = 0;
            return;
        }
        for (std::uint64_t i = 0; i < n; ++i) {
            st.hit_count -= st.ring[st.head];
            st.ring[st.head] = 0;
            st.head = (st.head + 1) % st.ring.size();
        }
    }

    ClassThresholds thresholds_;
    Mode mode_;
    std::array<ClassState, kClassCount> states_{};
    std::optional<std::uint64_t> last_frame_;
};

}  // namespace ppeseq
