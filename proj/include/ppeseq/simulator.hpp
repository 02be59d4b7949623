#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "ppeseq/sequence.hpp"
#include "ppeseq/session.hpp"
#include "ppeseq/thresholds.hpp"
#include "ppeseq/types.hpp"

namespace ppeseq {

struct InvalidScenarioError : std::runtime_error {
    explicit InvalidScenarioError(const std::string& why)
        : std::runtime_error("invalid scenario: " + why) {}
};

/// Detector quality model for one class: how often a worn item yields a
/// detection, how often a non-worn item false-positives, and where the
/// confidence scores land (truncated normal, clamped into [0,1]).
struct ClassNoise {
    double hit_rate = 1.0;
    double false_positive_rate = 0.0;
    double conf_mean_worn = 1.0;
    double conf_mean_absent = 0.0;
    double conf_stddev = 0.0;

    void validate(std::string_view cls) const {
        auto prob = [&](double p, const char* what) {
            if (p < 0.0 || p > 1.0)
                throw InvalidScenarioError(std::string(cls) + ": " + what + " must be in [0,1]");
        };
        prob(hit_rate, "hit_rate");
        prob(false_positive_rate, "false_positive_rate");
        prob(conf_mean_worn, "conf_mean_worn");
        prob(conf_mean_absent, "conf_mean_absent");
        if (conf_stddev < 0.0)
            throw InvalidScenarioError(std::string(cls) + ": conf_stddev must be >= 0");
    }
};

struct NoiseModel {
    std::array<ClassNoise, kClassCount> per_class{};

    static NoiseModel uniform(const ClassNoise& n) {
        NoiseModel m;
        m.per_class.fill(n);
        return m;
    }

    /// Perfect detector: every worn item seen at confidence 1, nothing else.
    static NoiseModel noise_free() { return uniform(ClassNoise{}); }

    const ClassNoise& of(PpeClass c) const { return per_class[class_index(c)]; }
    ClassNoise& of(PpeClass c) { return per_class[class_index(c)]; }

    void validate() const {
        for (PpeClass c : all_classes()) of(c).validate(render_class(c));
    }
};

/// When each step's item is put on (donning) or taken off (doffing).
struct ScheduleEntry {
    std::size_t step_index = 0;
    PpeClass class_chosen = PpeClass::Coverall;
    std::uint64_t start_frame = 0;
};

/// A scripted session. The base schedule lists events in frame order; an
/// injected violation swaps the start frames of two adjacent entries so the
/// later step's item is handled first (the realistic "two steps exchanged"
/// error).
struct Scenario {
    Mode mode = Mode::Donning;
    SequenceSpec spec = default_sequence(Mode::Donning);
    std::vector<ScheduleEntry> schedule;
    std::uint64_t total_frames = 0;
    double fps = 30.0;
    std::optional<std::size_t> injected_swap;  // swaps schedule[i] and schedule[i+1]
    std::uint64_t warmup_margin_frames = 60;

    void validate() const {
        if (schedule.empty()) throw InvalidScenarioError("empty schedule");
        if (!(fps > 0.0)) throw InvalidScenarioError("fps must be positive");
        for (std::size_t i = 0; i < schedule.size(); ++i) {
            const ScheduleEntry& e = schedule[i];
            if (e.step_index >= spec.step_count())
                throw InvalidScenarioError("schedule entry references step " +
                                           std::to_string(e.step_index) + " of " +
                                           std::to_string(spec.step_count()));
            if (spec.step_of(e.class_chosen) != e.step_index)
                throw InvalidScenarioError("schedule class does not belong to its step");
            if (i > 0 && e.start_frame <= schedule[i - 1].start_frame)
                throw InvalidScenarioError("schedule start frames must be strictly increasing");
        }
        if (injected_swap) {
            if (*injected_swap + 1 >= schedule.size())
                throw InvalidScenarioError("injected swap index out of range");
        }
        if (total_frames < schedule.back().start_frame + warmup_margin_frames)
            throw InvalidScenarioError("total_frames too small for the schedule plus warm-up");
    }

    /// Schedule with the injected violation applied (start frames of the two
    /// adjacent entries exchanged).
    std::vector<ScheduleEntry> effective_schedule() const {
        std::vector<ScheduleEntry> s = schedule;
        if (injected_swap)
            std::swap(s[*injected_swap].start_frame, s[*injected_swap + 1].start_frame);
        return s;
    }

    /// Ground truth: a scenario is meant to be compliant when its base
    /// schedule walks the steps in spec order and nothing was injected.
    bool intended_compliant() const {
        if (injected_swap) return false;
        if (schedule.size() != spec.step_count()) return false;
        for (std::size_t i = 0; i < schedule.size(); ++i)
            if (schedule[i].step_index != i) return false;
        return true;
    }
};

namespace sim_detail {

// One entry per scheduled class; worn state over the dense frame axis.
struct WornSpan {
    PpeClass cls;
    std::uint64_t from;  // inclusive
    std::uint64_t to;    // exclusive; donning runs to stream end
};

inline std::vector<WornSpan> worn_spans(const Scenario& scenario) {
    std::vector<WornSpan> spans;
    for (const ScheduleEntry& e : scenario.effective_schedule()) {
        if (scenario.mode == Mode::Donning)
            spans.push_back({e.class_chosen, e.start_frame, scenario.total_frames});
        else
            spans.push_back({e.class_chosen, 0, e.start_frame});
    }
    return spans;
}

}  // namespace sim_detail

/// Deterministic stream synthesis: identical (scenario, noise, seed) always
/// produces the identical batch list. Donning scenarios wear each item from
/// its start frame onward; doffing scenarios start fully donned and remove
/// per schedule.
inline std::vector<FrameBatch> generate(const Scenario& scenario,
                                        const NoiseModel& noise,
                                        std::uint64_t seed) {
    scenario.validate();
    noise.validate();

    const auto spans = sim_detail::worn_spans(scenario);
    auto worn_at = [&](PpeClass c, std::uint64_t frame) {
        for (const auto& span : spans)
            if (span.cls == c && frame >= span.from && frame < span.to) return true;
        return false;
    };

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> center(0.25, 0.75);
    std::uniform_real_distribution<double> extent(0.1, 0.3);

    auto sample_conf = [&](double mean, double stddev) {
        if (stddev <= 0.0) return std::clamp(mean, 0.0, 1.0);
        std::normal_distribution<double> dist(mean, stddev);
        return std::clamp(dist(rng), 0.0, 1.0);
    };

    std::vector<FrameBatch> batches;
    batches.reserve(scenario.total_frames);
    for (std::uint64_t frame = 0; frame < scenario.total_frames; ++frame) {
        FrameBatch batch;
        batch.frame_index = frame;
        batch.timestamp_ms = static_cast<std::uint64_t>(
            std::llround(static_cast<double>(frame) * 1000.0 / scenario.fps));
        for (PpeClass c : all_classes()) {
            const ClassNoise& n = noise.of(c);
            const bool worn = worn_at(c, frame);
            const double p = worn ? n.hit_rate : n.false_positive_rate;
            if (unit(rng) >= p) continue;
            DetectionEvent det;
            det.frame_index = frame;
            det.timestamp_ms = batch.timestamp_ms;
            det.cls = c;
            det.confidence = sample_conf(worn ? n.conf_mean_worn : n.conf_mean_absent,
                                         n.conf_stddev);
            det.bbox = {center(rng), center(rng), extent(rng), extent(rng)};
            batch.detections.push_back(det);
        }
        batches.push_back(std::move(batch));
    }
    return batches;
}

/// Compliant schedule builder. Picks each step's class among its
/// alternatives (seeded), spaces the events to clear the accumulator
/// warm-up, and sizes total_frames to cover doffing removal windows.
inline Scenario make_scenario(Mode mode,
                              const SequenceSpec& spec,
                              const ClassThresholds& thresholds,
                              std::uint64_t seed,
                              double fps = 30.0) {
    std::mt19937_64 rng(seed ^ 0x5ceed5eedULL);

    std::uint64_t margin = 10;
    for (PpeClass c : all_classes()) {
        const auto& th = thresholds.of(c);
        margin = std::max<std::uint64_t>(margin, th.frequency + 10);
        if (mode == Mode::Doffing)
            margin = std::max<std::uint64_t>(margin, th.removal_window_frames + 15);
    }

    Scenario scenario;
    scenario.mode = mode;
    scenario.spec = spec;
    scenario.fps = fps;
    scenario.warmup_margin_frames = margin;

    std::uniform_int_distribution<std::uint64_t> jitter(0, margin / 2);
    std::uint64_t frame = margin + jitter(rng);
    for (std::size_t i = 0; i < spec.step_count(); ++i) {
        const auto& alts = spec.steps()[i].alternatives;
        std::uniform_int_distribution<std::size_t> pick(0, alts.size() - 1);
        scenario.schedule.push_back({i, alts[pick(rng)], frame});
        frame += margin + jitter(rng);
    }
    scenario.total_frames = scenario.schedule.back().start_frame + margin;
    scenario.validate();
    return scenario;
}

/// Run one generated stream through a fresh session and return the verdict.
inline Verdict run_scenario(const Scenario& scenario,
                            const NoiseModel& noise,
                            std::uint64_t seed,
                            const ClassThresholds& thresholds,
                            std::vector<Alert>* alerts_out = nullptr) {
    Session session(scenario.spec, scenario.mode, thresholds);
    for (const FrameBatch& batch : generate(scenario, noise, seed)) {
        std::vector<Alert> alerts = session.feed(batch);
        if (alerts_out)
            alerts_out->insert(alerts_out->end(), alerts.begin(), alerts.end());
    }
    Verdict v = session.finish(FinishReason::EndOfStream);
    if (alerts_out)
        alerts_out->insert(alerts_out->end(), session.finish_alerts().begin(),
                           session.finish_alerts().end());
    return v;
}

/// One row of a threshold-tuning sweep: how often the verdict matched the
/// scenario's ground truth at this noise point, and how quickly steps were
/// recognized. Latency counts frames inclusively, from the scheduled frame
/// through the StepCompleted frame, so a th_frequency=5 gate at hit_rate 1
/// reports exactly 5.
struct SweepRow {
    std::size_t noise_index = 0;
    std::size_t runs = 0;
    double correct_fraction = 0.0;
    double mean_latency_frames = 0.0;
};

inline std::vector<SweepRow> sweep(const Scenario& scenario,
                                   const std::vector<NoiseModel>& noise_grid,
                                   const std::vector<std::uint64_t>& seeds,
                                   const ClassThresholds& thresholds) {
    if (noise_grid.empty() || seeds.empty())
        throw InvalidScenarioError("sweep needs a nonempty noise grid and seed list");

    std::vector<SweepRow> rows;
    for (std::size_t ni = 0; ni < noise_grid.size(); ++ni) {
        SweepRow row;
        row.noise_index = ni;
        std::uint64_t latency_sum = 0, latency_n = 0;
        std::size_t correct = 0;
        for (std::uint64_t seed : seeds) {
            std::vector<Alert> alerts;
            Verdict v = run_scenario(scenario, noise_grid[ni], seed, thresholds, &alerts);
            const bool want_compliant = scenario.intended_compliant();
            const bool got_compliant = v.outcome == Outcome::Compliant;
            if (want_compliant == got_compliant) ++correct;

            const auto schedule = scenario.effective_schedule();
            for (const Alert& a : alerts) {
                if (a.kind != AlertKind::StepCompleted) continue;
                for (const ScheduleEntry& e : schedule) {
                    if (e.step_index == *a.step_index && a.frame_index >= e.start_frame) {
                        latency_sum += a.frame_index - e.start_frame + 1;
                        ++latency_n;
                        break;
                    }
                }
            }
            ++row.runs;
        }
        row.correct_fraction = static_cast<double>(correct) / static_cast<double>(row.runs);
        row.mean_latency_frames =
            latency_n ? static_cast<double>(latency_sum) / static_cast<double>(latency_n) : 0.0;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace ppeseq
