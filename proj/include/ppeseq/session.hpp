#pragma once

#include <cstdint>
#include <vector>

#include "ppeseq/accumulator.hpp"
#include "ppeseq/engine.hpp"
#include "ppeseq/sequence.hpp"
#include "ppeseq/thresholds.hpp"

namespace ppeseq {

/// One monitored donning/doffing session: threshold gating composed with
/// sequence verification. Feed frame batches in order; alerts come out as
/// they happen; finish() returns the verdict.
class Session {
  public:
    Session(SequenceSpec spec, Mode mode, ClassThresholds thresholds)
        : accumulator_(std::move(thresholds), mode),
          engine_(std::move(spec), mode) {}

    static Session with_defaults(Mode mode) {
        return Session(default_sequence(mode), mode, ClassThresholds{});
    }

    /// Process one batch. Batches after the sequence completed are still
    /// consumed (counted, thresholds advanced) but produce no alerts.
    std::vector<Alert> feed(const FrameBatch& batch) {
        ++batches_;
        detections_ += batch.detections.size();
        std::vector<Transition> transitions = accumulator_.observe(batch);
        engine_.note_position(batch.frame_index, batch.timestamp_ms);
        std::vector<Alert> alerts;
        for (const Transition& t : transitions) {
            if (engine_.finished()) break;
            std::vector<Alert> batch_alerts = engine_.on_transition(t);
            alerts.insert(alerts.end(), batch_alerts.begin(), batch_alerts.end());
        }
        return alerts;
    }

    /// Alerts emitted by finish itself (a Timeout with pending steps adds a
    /// SessionTimeout alert). Call finish_alerts() after finish() to fetch
    /// anything new.
    Verdict finish(FinishReason reason) {
        const std::size_t before = engine_.emitted_alerts().size();
        Verdict v = engine_.finish(reason);
        finish_alerts_.assign(engine_.emitted_alerts().begin() + before,
                              engine_.emitted_alerts().end());
        return v;
    }

    const std::vector<Alert>& finish_alerts() const { return finish_alerts_; }

    bool sequence_complete() const { return engine_.finished(); }
    const SequenceEngine& engine() const { return engine_; }
    const AccumulatorSet& accumulator() const { return accumulator_; }
    std::uint64_t batches() const { return batches_; }
    std::uint64_t detections() const { return detections_; }

  private:
    AccumulatorSet accumulator_;
    SequenceEngine engine_;
    std::vector<Alert> finish_alerts_;
    std::uint64_t batches_ = 0;
    std::uint64_t detections_ = 0;
};

}  // namespace ppeseq
