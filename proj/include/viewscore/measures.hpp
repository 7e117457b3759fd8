#pragma once

#include <array>
#include <optional>
#include <string>

namespace viewscore {

// Fixed measure identity: index order is the registry order used everywhere
// (reports, CSV columns, tie-breaking).
enum class MeasureId : int {
    CR = 0, // edge crossings
    ST,     // stress
    CAR,    // crossing angular resolution
    AR,     // bounding box area
    ASP,    // aspect ratio
    CON,    // node concentration
    NO,     // node orthogonality
    GR,     // Gabriel ratio
    ANGR,   // angular resolution
    EO,     // edge orthogonality
    ELD,    // edge length deviation
    ESR,    // edge reflective symmetry
    ESO,    // edge rotational symmetry
    EST,    // edge translational symmetry
    NNO,    // node-node overlap count
    ENO,    // edge-node overlap count
    NEO,    // node-edge overlap count
    NNOA,   // node-node overlap area
    ENOA,   // edge-node overlap area
    NEOA,   // node-edge overlap area
    ISO,    // isometric viewpoint deviation
};

inline constexpr int kMeasureCount = 21;
inline constexpr const char* kRegistryVersion = "measures-v1";

inline constexpr std::array<const char*, kMeasureCount> kMeasureNames = {
    "CR",  "ST",  "CAR",  "AR",   "ASP",  "CON",  "NO",  "GR",  "ANGR", "EO", "ELD",
    "ESR", "ESO", "EST",  "NNO",  "ENO",  "NEO",  "NNOA", "ENOA", "NEOA", "ISO"};

enum class MeasurePolarity { LowerBetter, HigherBetter };

inline constexpr std::array<MeasurePolarity, kMeasureCount> kMeasurePolarity = {
    MeasurePolarity::LowerBetter,  // CR
    MeasurePolarity::LowerBetter,  // ST
    MeasurePolarity::HigherBetter, // CAR
    MeasurePolarity::HigherBetter, // AR
    MeasurePolarity::HigherBetter, // ASP
    MeasurePolarity::LowerBetter,  // CON
    MeasurePolarity::HigherBetter, // NO
    MeasurePolarity::HigherBetter, // GR
    MeasurePolarity::HigherBetter, // ANGR
    MeasurePolarity::HigherBetter, // EO
    MeasurePolarity::LowerBetter,  // ELD
    MeasurePolarity::HigherBetter, // ESR
    MeasurePolarity::HigherBetter, // ESO
    MeasurePolarity::HigherBetter, // EST
    MeasurePolarity::LowerBetter,  // NNO
    MeasurePolarity::LowerBetter,  // ENO
    MeasurePolarity::LowerBetter,  // NEO
    MeasurePolarity::LowerBetter,  // NNOA
    MeasurePolarity::LowerBetter,  // ENOA
    MeasurePolarity::LowerBetter,  // NEOA
    MeasurePolarity::HigherBetter, // ISO
};

inline const char* measure_name(MeasureId id) { return kMeasureNames[static_cast<int>(id)]; }
inline MeasurePolarity measure_polarity(MeasureId id) {
    return kMeasurePolarity[static_cast<int>(id)];
}

inline std::optional<MeasureId> measure_from_string(const std::string& s) {
    for (int i = 0; i < kMeasureCount; ++i)
        if (s == kMeasureNames[i]) return static_cast<MeasureId>(i);
    return std::nullopt;
}

struct RawMeasure {
    MeasureId id;
    double value;

    MeasurePolarity polarity() const { return measure_polarity(id); }
};

} // namespace viewscore
