#pragma once

#include <algorithm>
#include <bitset>
#include <stdexcept>
#include <string>
#include <vector>

#include "ppeseq/types.hpp"

namespace ppeseq {

enum class Mode : std::uint8_t { Donning, Doffing };

inline std::string_view render_mode(Mode m) {
    return m == Mode::Donning ? "donning" : "doffing";
}

inline Mode parse_mode(std::string_view s) {
    if (s == "donning") return Mode::Donning;
    if (s == "doffing") return Mode::Doffing;
    throw std::runtime_error("unknown mode: \"" + std::string(s) + "\" (expected donning or doffing)");
}

struct InvalidSpecError : std::runtime_error {
    explicit InvalidSpecError(const std::string& why)
        : std::runtime_error("invalid sequence spec: " + why) {}
};

/// One protocol step: any class in `alternatives` completes it.
struct StepSpec {
    std::vector<PpeClass> alternatives;
    std::string label;

    friend bool operator==(const StepSpec&, const StepSpec&) = default;
};

/// Ordered protocol checklist. Steps are disjoint: no class may appear in
/// two steps, otherwise completion would be ambiguous.
class SequenceSpec {
  public:
    SequenceSpec(Mode mode, std::vector<StepSpec> steps)
        : mode_(mode), steps_(std::move(steps)) {
        if (steps_.empty()) throw InvalidSpecError("no steps");
        std::bitset<kClassCount> seen;
        for (const auto& step : steps_) {
            if (step.alternatives.empty())
                throw InvalidSpecError("step \"" + step.label + "\" has no classes");
            for (PpeClass c : step.alternatives) {
                if (seen.test(class_index(c)))
                    throw InvalidSpecError("class " + std::string(render_class(c)) +
                                           " appears in more than one step");
                seen.set(class_index(c));
            }
        }
    }

    Mode mode() const { return mode_; }
    const std::vector<StepSpec>& steps() const { return steps_; }
    std::size_t step_count() const { return steps_.size(); }

    /// Step index owning `c`, or npos when the spec does not reference it.
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::size_t step_of(PpeClass c) const {
        for (std::size_t i = 0; i < steps_.size(); ++i) {
            const auto& alts = steps_[i].alternatives;
            if (std::find(alts.begin(), alts.end(), c) != alts.end()) return i;
        }
        return npos;
    }

    friend bool operator==(const SequenceSpec&, const SequenceSpec&) = default;

  private:
    Mode mode_;
    std::vector<StepSpec> steps_;
};

/// Built-in WHO-aligned checklists. Donning: coverall, mask, goggles or
/// face shield, gloves. Doffing (unfastening-ties strategy): gloves,
/// goggles or face shield, coverall, mask. Note doffing is not simply
/// donning reversed: coverall and mask swap relative order.
inline SequenceSpec default_sequence(Mode mode) {
    if (mode == Mode::Donning) {
        return SequenceSpec(mode, {
            {{PpeClass::Coverall}, "Coverall"},
            {{PpeClass::Mask}, "Mask"},
            {{PpeClass::Goggles, PpeClass::FaceShield}, "Goggles/Face Shield"},
            {{PpeClass::Gloves}, "Gloves"},
        });
    }
    return SequenceSpec(mode, {
        {{PpeClass::Gloves}, "Gloves"},
        {{PpeClass::Goggles, PpeClass::FaceShield}, "Goggles/Face Shield"},
        {{PpeClass::Coverall}, "Coverall"},
        {{PpeClass::Mask}, "Mask"},
    });
}

}  // namespace ppeseq
