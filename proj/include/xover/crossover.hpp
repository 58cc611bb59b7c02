// Crossover functions: the ratio of satellite-network to fibre latency as a
// function of the central angle between two surface points, and the angle /
// surface distance at which that ratio falls to one.
#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "xover/geo.hpp"

namespace xover {

/// Placement of the ingress/egress satellites relative to the overhead
/// positions above the two end points.
enum class Scenario {
    kOverhead = 1,     ///< both satellites directly overhead (elevation 90)
    kOutward = 2,      ///< both displaced away from each other
    kInward = 3,       ///< both displaced towards each other
    kSameDirection = 4 ///< both displaced along the direction of motion
};

inline constexpr std::array<Scenario, 4> kAllScenarios = {Scenario::kOverhead, Scenario::kOutward,
                                                          Scenario::kInward, Scenario::kSameDirection};

inline int scenario_number(Scenario s) { return static_cast<int>(s); }

inline Scenario scenario_from_number(int n) {
    if (n < 1 || n > 4) throw std::invalid_argument("scenario must be 1..4, got " + std::to_string(n));
    return static_cast<Scenario>(n);
}

inline constexpr double kDefaultMinElevationDeg = 25.0;

struct CrossoverQuery {
    double altitude_km = 550.0;
    double refractive_index = 1.5;
    /// Ignored (forced to 90) for the overhead scenario.
    double elevation_deg = kDefaultMinElevationDeg;
    Scenario scenario = Scenario::kOverhead;
    EarthModel earth{};

    double effective_elevation_deg() const {
        return scenario == Scenario::kOverhead ? 90.0 : elevation_deg;
    }
    double gs_range_km() const { return slant_range(effective_elevation_deg(), altitude_km, earth); }

    void validate() const {
        earth.validate();
        if (!(refractive_index >= 1.0)) throw std::invalid_argument("refractive index must be >= 1");
        if (!(altitude_km > 0.0)) throw std::invalid_argument("altitude must be > 0");
        if (!(elevation_deg >= 0.0 && elevation_deg <= 90.0))
            throw std::invalid_argument("elevation must lie in [0, 90]");
    }
};

struct CrossoverResult {
    double theta_crossover_deg = 0.0;
    double distance_crossover_km = 0.0;
    double gs_range_km = 0.0;
};

/// How the two cosine offsets of the per-slot variant are combined.
enum class OffsetCombination {
    kSum,            ///< r1 + r2 + chord + off1 + off2
    kRootSumSquare,  ///< r1 + r2 + chord + sqrt(off1^2 + off2^2)
};

struct PerSlotCrossoverQuery {
    CrossoverQuery base{.scenario = Scenario::kOutward};
    double ingress_elevation_deg = kDefaultMinElevationDeg;
    double egress_elevation_deg = kDefaultMinElevationDeg;
    /// Extra fibre length as a fraction of the great-circle distance.
    double zigzag_delta = 0.0;
    OffsetCombination combination = OffsetCombination::kSum;

    void validate() const {
        base.validate();
        for (double e : {ingress_elevation_deg, egress_elevation_deg})
            if (!(e >= 0.0 && e <= 90.0)) throw std::invalid_argument("elevation must lie in [0, 90]");
        if (!(zigzag_delta >= 0.0)) throw std::invalid_argument("zig-zag delta must be >= 0");
    }
};

struct CrossoverTableRow {
    double altitude_km = 0.0;
    double refractive_index = 0.0;
    /// Ground-station range at the table elevation (scenarios 2-4).
    double gs_range_km = 0.0;
    /// Indexed by scenario_number(s) - 1; empty where no crossover exists.
    std::array<std::optional<CrossoverResult>, 4> scenarios{};
    std::optional<double> average_distance_km;

    const std::optional<CrossoverResult>& at(Scenario s) const { return scenarios[scenario_number(s) - 1]; }
};

/// End-to-end satellite path length for two surface points `theta_deg` apart.
inline double owsn_distance(double theta_deg, const CrossoverQuery& q) {
    const double h = q.altitude_km;
    const double chord = chord_length(theta_deg, h, q.earth);
    if (q.scenario == Scenario::kOverhead) return 2.0 * h + chord;

    const double r_gs = q.gs_range_km();
    const double offset = cosine_offset(h, r_gs, 90.0 - q.elevation_deg);
    switch (q.scenario) {
        case Scenario::kOutward: return 2.0 * r_gs + chord + 2.0 * offset;
        case Scenario::kInward: return 2.0 * r_gs + chord - 2.0 * offset;
        case Scenario::kSameDirection: return 2.0 * r_gs + chord;
        case Scenario::kOverhead: break;
    }
    return 2.0 * h + chord;
}

/// Satellite latency divided by fibre latency; below one the satellite path wins.
inline double crossover_function(double theta_deg, const CrossoverQuery& q) {
    if (!(theta_deg > 0.0)) throw std::domain_error("crossover function undefined at theta <= 0");
    return owsn_distance(theta_deg, q) / (arc_length(theta_deg, q.earth) * q.refractive_index);
}

inline double per_slot_owsn_distance(double theta_deg, const PerSlotCrossoverQuery& q) {
    const double h = q.base.altitude_km;
    const EarthModel& earth = q.base.earth;
    const double r1 = slant_range(q.ingress_elevation_deg, h, earth);
    const double r2 = slant_range(q.egress_elevation_deg, h, earth);
    const double off1 = cosine_offset(h, r1, 90.0 - q.ingress_elevation_deg);
    const double off2 = cosine_offset(h, r2, 90.0 - q.egress_elevation_deg);
    const double offsets = q.combination == OffsetCombination::kSum ? off1 + off2
                                                                      : std::sqrt(off1 * off1 + off2 * off2);
    return r1 + r2 + chord_length(theta_deg, h, earth) + offsets;
}

/// Outward-displacement crossover function evaluated with the actual ingress
/// and egress elevations of a time slot, against a fibre route lengthened by
/// the zig-zag fraction.
inline double per_slot_crossover_function(double theta_deg, const PerSlotCrossoverQuery& q) {
    if (!(theta_deg > 0.0)) throw std::domain_error("crossover function undefined at theta <= 0");
    const double fibre = arc_length(theta_deg, q.base.earth) * (1.0 + q.zigzag_delta);
    return per_slot_owsn_distance(theta_deg, q) / (fibre * q.base.refractive_index);
}

inline constexpr double kThetaLowerBracketDeg = 1e-6;
inline constexpr double kThetaUpperBracketDeg = 360.0;
inline constexpr double kThetaToleranceDeg = 1e-7;

/// Bisection for the crossing of a decreasing function through `level` on
/// [lo, hi]. Requires f(lo) > level >= f(hi).
template <class F>
double bisect_decreasing(F&& f, double lo, double hi, double level, double tolerance) {
    while (hi - lo > tolerance) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) > level)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

namespace detail {

template <class F>
std::optional<CrossoverResult> solve_ratio_root(F&& ratio, const EarthModel& earth, double gs_range_km) {
    if (ratio(kThetaUpperBracketDeg) > 1.0) return std::nullopt;
    if (!(ratio(kThetaLowerBracketDeg) > 1.0))
        throw std::domain_error("crossover function does not exceed 1 at the lower bracket");
    const double theta =
        bisect_decreasing(ratio, kThetaLowerBracketDeg, kThetaUpperBracketDeg, 1.0, kThetaToleranceDeg);
    return CrossoverResult{theta, arc_length(theta, earth), gs_range_km};
}

}  // namespace detail

/// Crossover angle and distance; empty when the satellite network never wins
/// within a full revolution.
inline std::optional<CrossoverResult> solve_crossover(const CrossoverQuery& q) {
    q.validate();
    return detail::solve_ratio_root([&](double t) { return crossover_function(t, q); }, q.earth,
                                    q.gs_range_km());
}

inline std::optional<CrossoverResult> solve_per_slot_crossover(const PerSlotCrossoverQuery& q) {
    q.validate();
    return detail::solve_ratio_root([&](double t) { return per_slot_crossover_function(t, q); },
                                    q.base.earth,
                                    slant_range(q.ingress_elevation_deg, q.base.altitude_km, q.base.earth));
}

/// All four scenarios for one (h, i) pair; scenarios 2-4 use `elevation_deg`.
inline CrossoverTableRow average_crossover(double altitude_km, double refractive_index, const EarthModel& earth,
                                           double elevation_deg = kDefaultMinElevationDeg) {
    CrossoverTableRow row;
    row.altitude_km = altitude_km;
    row.refractive_index = refractive_index;
    row.gs_range_km = slant_range(elevation_deg, altitude_km, earth);
    double sum = 0.0;
    bool complete = true;
    for (Scenario s : kAllScenarios) {
        CrossoverQuery q{altitude_km, refractive_index, elevation_deg, s, earth};
        auto& cell = row.scenarios[scenario_number(s) - 1];
        cell = solve_crossover(q);
        if (cell)
            sum += cell->distance_crossover_km;
        else
            complete = false;
    }
    if (complete) row.average_distance_km = sum / 4.0;
    return row;
}

/// One row per (h, i) pair, h-major.
inline std::vector<CrossoverTableRow> emit_crossover_tables(std::span<const double> altitudes_km,
                                                            std::span<const double> refractive_indices,
                                                            const EarthModel& earth,
                                                            double elevation_deg = kDefaultMinElevationDeg) {
    if (altitudes_km.empty()) throw std::invalid_argument("altitude list is empty");
    if (refractive_indices.empty()) throw std::invalid_argument("refractive index list is empty");
    std::vector<CrossoverTableRow> rows;
    rows.reserve(altitudes_km.size() * refractive_indices.size());
    for (double h : altitudes_km)
        for (double i : refractive_indices) rows.push_back(average_crossover(h, i, earth, elevation_deg));
    return rows;
}

}  // namespace xover
