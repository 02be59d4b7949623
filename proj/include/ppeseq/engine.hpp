#pragma once

#include <bitset>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ppeseq/accumulator.hpp"
#include "ppeseq/sequence.hpp"
#include "ppeseq/types.hpp"

namespace ppeseq {

enum class AlertKind : std::uint8_t {
    StepCompleted,
    MissedStep,
    SessionComplete,
    SessionTimeout,
};

inline std::string_view render_alert_kind(AlertKind k) {
    switch (k) {
        case AlertKind::StepCompleted:   return "step_completed";
        case AlertKind::MissedStep:      return "missed_step";
        case AlertKind::SessionComplete: return "session_complete";
        case AlertKind::SessionTimeout:  return "session_timeout";
    }
    return "";
}

/// Real-time feedback event. For StepCompleted, `step_index`/`label` name
/// the completed step and `completed_class` the class that completed it.
/// For MissedStep they name the step that was skipped and `triggered_by`
/// the class whose out-of-order completion revealed the skip.
struct Alert {
    AlertKind kind = AlertKind::StepCompleted;
    std::uint64_t frame_index = 0;
    std::uint64_t timestamp_ms = 0;
    std::optional<std::size_t> step_index;
    std::string label;
    std::optional<PpeClass> completed_class;
    std::optional<PpeClass> triggered_by;

    friend bool operator==(const Alert&, const Alert&) = default;
};

enum class StepStatus : std::uint8_t { Pending, Done };

struct StepRecord {
    std::size_t step_index = 0;
    StepStatus status = StepStatus::Pending;
    std::optional<PpeClass> completed_class;
    std::optional<std::uint64_t> completed_at_frame;
    std::optional<std::uint64_t> completed_at_ms;
};

enum class Outcome : std::uint8_t { Compliant, NonCompliant, Incomplete };

inline std::string_view render_outcome(Outcome o) {
    switch (o) {
        case Outcome::Compliant:    return "Compliant";
        case Outcome::NonCompliant: return "NonCompliant";
        case Outcome::Incomplete:   return "Incomplete";
    }
    return "";
}

/// End-of-session judgment. NonCompliant wins whenever any MissedStep alert
/// was emitted; otherwise Incomplete if any step is still pending.
struct Verdict {
    Outcome outcome = Outcome::Incomplete;
    std::vector<Alert> violations;           // the MissedStep alerts, in order
    std::vector<std::size_t> pending_steps;  // indexes still pending at end
    std::vector<StepRecord> step_records;
    std::uint64_t session_duration_ms = 0;
};

enum class FinishReason : std::uint8_t { EndOfStream, Timeout };

struct SessionFinishedError : std::runtime_error {
    SessionFinishedError() : std::runtime_error("session already finished") {}
};

/// Verifies accumulator transitions against a protocol checklist and emits
/// real-time alerts. Donning: a step completes when one of its classes
/// becomes satisfied. Doffing: a step completes when one of its classes
/// becomes absent, interpreted only after the "fully donned" baseline
/// (every step had at least one of its classes satisfied).
///
/// Out-of-order completions are recorded and the session continues: the
/// worker gets a MissedStep alert for every still-pending earlier step,
/// and the violation persists in the verdict even if the missed step is
/// completed later.
///
/// Single-writer; feed transitions from one execution context.
class SequenceEngine {
  public:
    SequenceEngine(SequenceSpec spec, Mode mode)
        : spec_(std::move(spec)), mode_(mode) {
        records_.resize(spec_.step_count());
        for (std::size_t i = 0; i < records_.size(); ++i) records_[i].step_index = i;
    }

    /// Apply one transition; returns the alerts it caused (also retained
    /// for the verdict). Throws SessionFinishedError once the session is
    /// finished.
    std::vector<Alert> on_transition(const Transition& t) {
        if (finished_) throw SessionFinishedError();
        note_position(t.frame_index, t.timestamp_ms);

        if (mode_ == Mode::Doffing && t.kind == TransitionKind::BecameSatisfied) {
            baseline_seen_.set(class_index(t.cls));
            return {};
        }
        const TransitionKind completing_kind = mode_ == Mode::Donning
                                                   ? TransitionKind::BecameSatisfied
                                                   : TransitionKind::BecameAbsent;
        if (t.kind != completing_kind) return {};
        if (mode_ == Mode::Doffing && !baseline_ready()) return {};

        const std::size_t idx = spec_.step_of(t.cls);
        if (idx == SequenceSpec::npos) return {};
        if (records_[idx].status == StepStatus::Done) return {};

        std::vector<Alert> alerts;
        for (std::size_t j = 0; j < idx; ++j) {
            if (records_[j].status != StepStatus::Pending) continue;
            Alert a;
            a.kind = AlertKind::MissedStep;
            a.frame_index = t.frame_index;
            a.timestamp_ms = t.timestamp_ms;
            a.step_index = j;
            a.label = spec_.steps()[j].label;
            a.triggered_by = t.cls;
            alerts.push_back(std::move(a));
        }

        records_[idx].status = StepStatus::Done;
        records_[idx].completed_class = t.cls;
        records_[idx].completed_at_frame = t.frame_index;
        records_[idx].completed_at_ms = t.timestamp_ms;

        Alert done;
        done.kind = AlertKind::StepCompleted;
        done.frame_index = t.frame_index;
        done.timestamp_ms = t.timestamp_ms;
        done.step_index = idx;
        done.label = spec_.steps()[idx].label;
        done.completed_class = t.cls;
        alerts.push_back(std::move(done));

        if (pending_count() == 0) {
            Alert complete;
            complete.kind = AlertKind::SessionComplete;
            complete.frame_index = t.frame_index;
            complete.timestamp_ms = t.timestamp_ms;
            alerts.push_back(std::move(complete));
            finished_ = true;
        }

        emitted_.insert(emitted_.end(), alerts.begin(), alerts.end());
        return alerts;
    }

    /// Update the stream position without a transition, so timeout alerts
    /// and the session duration carry the last frame actually seen.
    void note_position(std::uint64_t frame, std::uint64_t t_ms) {
        if (frame >= last_frame_) {
            last_frame_ = frame;
            last_ms_ = t_ms;
        }
    }

    /// Close the session and return the verdict. A Timeout with pending
    /// steps first emits a SessionTimeout alert. Idempotent: calling again
    /// returns the same verdict and emits nothing new.
    Verdict finish(FinishReason reason) {
        if (!finished_) {
            if (reason == FinishReason::Timeout && pending_count() > 0) {
                Alert a;
                a.kind = AlertKind::SessionTimeout;
                a.frame_index = last_frame_;
                a.timestamp_ms = last_ms_;
                emitted_.push_back(std::move(a));
            }
            finished_ = true;
        }

        Verdict v;
        v.step_records = records_;
        v.session_duration_ms = last_ms_;
        for (const Alert& a : emitted_)
            if (a.kind == AlertKind::MissedStep) v.violations.push_back(a);
        for (const StepRecord& r : records_)
            if (r.status == StepStatus::Pending) v.pending_steps.push_back(r.step_index);

        if (!v.violations.empty())
            v.outcome = Outcome::NonCompliant;
        else if (!v.pending_steps.empty())
            v.outcome = Outcome::Incomplete;
        else
            v.outcome = Outcome::Compliant;
        return v;
    }

    bool finished() const { return finished_; }
    const std::vector<Alert>& emitted_alerts() const { return emitted_; }
    const std::vector<StepRecord>& step_records() const { return records_; }
    const SequenceSpec& spec() const { return spec_; }
    Mode mode() const { return mode_; }

    /// Lowest pending step index, or step_count() when all done.
    std::size_t cursor() const {
        for (std::size_t i = 0; i < records_.size(); ++i)
            if (records_[i].status == StepStatus::Pending) return i;
        return records_.size();
    }

    std::size_t pending_count() const {
        std::size_t n = 0;
        for (const StepRecord& r : records_)
            if (r.status == StepStatus::Pending) ++n;
        return n;
    }

    /// Doffing baseline: every step has had at least one of its classes
    /// satisfied. (Alternatives count as one requirement; a subject wears
    /// goggles or a face shield, not necessarily both.)
    bool baseline_ready() const {
        for (const StepSpec& step : spec_.steps()) {
            bool any = false;
            for (PpeClass c : step.alternatives)
                if (baseline_seen_.test(class_index(c))) { any = true; break; }
            if (!any) return false;
        }
        return true;
    }

  private:
    SequenceSpec spec_;
    Mode mode_;
    std::vector<StepRecord> records_;
    std::vector<Alert> emitted_;
    std::bitset<kClassCount> baseline_seen_;
    bool finished_ = false;
    std::uint64_t last_frame_ = 0;
    std::uint64_t last_ms_ = 0;
};

}  // namespace ppeseq
