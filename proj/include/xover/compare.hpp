// Fibre latency model, fibre-vs-satellite comparison reports and the
// crossover decision rule.
#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "xover/catalog.hpp"
#include "xover/constellation.hpp"
#include "xover/crossover.hpp"
#include "xover/geo.hpp"
#include "xover/linkgraph.hpp"

namespace xover {

struct OftnConfig {
    std::string name;
    double refractive_index = 1.4675;
    double delta_zigzag = 0.0;

    void validate() const {
        if (!(refractive_index >= 1.0)) throw std::invalid_argument(name + ": refractive_index must be >= 1");
        if (!(delta_zigzag >= 0.0)) throw std::invalid_argument(name + ": delta_zigzag must be >= 0");
    }
    bool operator==(const OftnConfig&) const = default;
};

/// Slack allowed between configured ranges and their geometric values, so the
/// whole-kilometre figures quoted for each network validate.
inline constexpr double kRangeRoundingSlackKm = 1.0;

struct OwsnConfig {
    std::string name;
    double altitude_km = 550.0;
    double lisl_range_km = 0.0;
    double gs_range_km = 0.0;
    double min_elevation_deg = kDefaultMinElevationDeg;

    /// Config with both ranges at their geometric maxima for `altitude_km`.
    static OwsnConfig derived(std::string name, double altitude_km, const EarthModel& earth,
                              double min_elevation_deg = kDefaultMinElevationDeg) {
        return {std::move(name), altitude_km, max_lisl_range(altitude_km, earth),
                slant_range(min_elevation_deg, altitude_km, earth), min_elevation_deg};
    }

    void validate(const EarthModel& earth) const {
        if (!(altitude_km > earth.grazing_altitude_km))
            throw std::invalid_argument(name + ": altitude_km must exceed the grazing altitude");
        if (!(min_elevation_deg >= 0.0 && min_elevation_deg <= 90.0))
            throw std::invalid_argument(name + ": min_elevation_deg must lie in [0, 90]");
        if (!(lisl_range_km > 0.0)) throw std::invalid_argument(name + ": lisl_range_km must be > 0");
        if (lisl_range_km > max_lisl_range(altitude_km, earth) + kRangeRoundingSlackKm)
            throw std::invalid_argument(name + ": lisl_range_km exceeds the line-of-sight maximum " +
                                        std::to_string(max_lisl_range(altitude_km, earth)) + " km");
        const double expected_gs = slant_range(min_elevation_deg, altitude_km, earth);
        if (std::abs(gs_range_km - expected_gs) > kRangeRoundingSlackKm)
            throw std::invalid_argument(name + ": gs_range_km " + std::to_string(gs_range_km) +
                                        " does not match the slant range " + std::to_string(expected_gs) +
                                        " km at the minimum elevation");
    }
    bool operator==(const OwsnConfig&) const = default;
};

struct ConnectionScenario {
    std::string name;
    std::string city_a;
    std::string city_b;
    /// Replaces the catalog great-circle distance when set.
    std::optional<double> terrestrial_distance_km;

    double resolved_distance_km(const CityCatalog& catalog, const EarthModel& earth) const {
        const double d = terrestrial_distance_km ? *terrestrial_distance_km
                                                 : catalog.surface_distance_km(city_a, city_b, earth);
        if (!(d > 0.0)) throw std::invalid_argument(name + ": terrestrial distance must be > 0");
        return d;
    }
    bool operator==(const ConnectionScenario&) const = default;
};

/// One-way fibre latency over a great-circle route lengthened by the zig-zag fraction, ms.
inline double oftn_latency(double distance_km, const OftnConfig& cfg, const EarthModel& earth) {
    if (!(distance_km >= 0.0)) throw std::invalid_argument("distance must be >= 0");
    return distance_km * (1.0 + cfg.delta_zigzag) * cfg.refractive_index / earth.c_km_per_s() * 1000.0;
}

/// Positive when the satellite network is faster.
inline double improvement_percent(double oftn_ms, double owsn_ms) { return (oftn_ms - owsn_ms) / oftn_ms * 100.0; }

/// Paper-style rounding: ms to two decimals.
inline double round_ms(double ms) { return std::round(ms * 100.0) / 100.0; }

enum class Verdict { kPreferOwsn, kPreferOftn };

inline const char* to_string(Verdict v) { return v == Verdict::kPreferOwsn ? "prefer-owsn" : "prefer-oftn"; }

struct CrossoverVerdict {
    Verdict verdict = Verdict::kPreferOftn;
    double average_crossover_km = 0.0;
};

/// Satellite preferred only when the surface distance strictly exceeds the
/// four-scenario average crossover distance. Empty when some scenario has no
/// crossover.
inline std::optional<CrossoverVerdict> crossover_verdict(double terrestrial_distance_km, double altitude_km,
                                                         double refractive_index, const EarthModel& earth,
                                                         double elevation_deg = kDefaultMinElevationDeg) {
    const auto row = average_crossover(altitude_km, refractive_index, earth, elevation_deg);
    if (!row.average_distance_km) return std::nullopt;
    const double avg = *row.average_distance_km;
    return CrossoverVerdict{terrestrial_distance_km > avg ? Verdict::kPreferOwsn : Verdict::kPreferOftn, avg};
}

struct LatencyCell {
    std::string network;
    std::optional<double> latency_ms;
    std::string error;
    /// Satellite cells only.
    std::optional<SlotSeries> series;
};

struct ConnectionRow {
    std::string connection;
    double terrestrial_distance_km = 0.0;
    std::vector<LatencyCell> oftn;
    std::vector<LatencyCell> owsn;
};

struct Improvement {
    std::string connection;
    std::string owsn;
    std::string oftn;
    double percent = 0.0;
};

struct VerdictNote {
    std::string connection;
    std::string owsn;
    std::string oftn;
    std::optional<CrossoverVerdict> analytic;
    /// True when the simulated latencies agree with the analytic verdict.
    std::optional<bool> simulation_agrees;
};

struct ComparisonReport {
    std::vector<ConnectionRow> rows;
    std::vector<Improvement> improvements;
    std::vector<VerdictNote> verdicts;
    int failed_cells = 0;

    const ConnectionRow* row(const std::string& connection) const {
        for (const auto& r : rows)
            if (r.connection == connection) return &r;
        return nullptr;
    }
    std::optional<double> latency(const std::string& connection, const std::string& network) const {
        const ConnectionRow* r = row(connection);
        if (!r) return std::nullopt;
        for (const auto* cells : {&r->oftn, &r->owsn})
            for (const auto& c : *cells)
                if (c.network == network) return c.latency_ms;
        return std::nullopt;
    }
};

/// Shared constellation shape and slot loop parameters; the per-network
/// altitude and ranges come from each OwsnConfig.
struct ComparisonSettings {
    WalkerConfig constellation{};
    EarthModel earth{};
    double duration_s = 3600.0;
    double dt_s = 1.0;
    unsigned threads = 0;
};

inline SimulationSettings simulation_settings_for(const OwsnConfig& owsn, const ComparisonSettings& s) {
    SimulationSettings sim;
    sim.constellation = s.constellation;
    sim.constellation.altitude_km = owsn.altitude_km;
    sim.lisl_range_km = owsn.lisl_range_km;
    sim.earth = s.earth;
    sim.duration_s = s.duration_s;
    sim.dt_s = s.dt_s;
    sim.threads = s.threads;
    return sim;
}

inline GroundStation station_for(const std::string& city, const CityCatalog& catalog, const OwsnConfig& owsn) {
    return {city, catalog.at(city), owsn.gs_range_km, owsn.min_elevation_deg};
}

using ConnectionSimulator =
    std::function<SlotSeries(const OwsnConfig&, const GroundStation&, const GroundStation&, const ComparisonSettings&)>;

inline SlotSeries default_simulator(const OwsnConfig& owsn, const GroundStation& a, const GroundStation& b,
                                    const ComparisonSettings& s) {
    return simulate_connection(simulation_settings_for(owsn, s), a, b);
}

/// Fills every connection x network cell. A failing satellite cell is
/// recorded with its error and the rest of the report is still produced.
inline ComparisonReport run_comparison(const std::vector<ConnectionScenario>& scenarios,
                                       const std::vector<OftnConfig>& oftns, const std::vector<OwsnConfig>& owsns,
                                       const ComparisonSettings& settings, const CityCatalog& catalog,
                                       const ConnectionSimulator& simulator = default_simulator) {
    for (const auto& o : oftns) o.validate();
    for (const auto& o : owsns) o.validate(settings.earth);

    ComparisonReport report;
    for (const auto& sc : scenarios) {
        ConnectionRow row;
        row.connection = sc.name;
        row.terrestrial_distance_km = sc.resolved_distance_km(catalog, settings.earth);
        for (const auto& f : oftns)
            row.oftn.push_back({f.name, oftn_latency(row.terrestrial_distance_km, f, settings.earth), {}, {}});
        for (const auto& w : owsns) {
            LatencyCell cell{w.name, std::nullopt, {}, std::nullopt};
            try {
                auto series = simulator(w, station_for(sc.city_a, catalog, w), station_for(sc.city_b, catalog, w),
                                        settings);
                if (series.reachable_count() == 0)
                    cell.error = "no slot had a route";
                else
                    cell.latency_ms = series.mean_latency_ms;
                cell.series = std::move(series);
            } catch (const std::exception& e) {
                cell.error = e.what();
            }
            if (!cell.latency_ms) ++report.failed_cells;
            row.owsn.push_back(std::move(cell));
        }

        for (std::size_t w = 0; w < owsns.size(); ++w) {
            for (std::size_t f = 0; f < oftns.size(); ++f) {
                const auto& owsn_cell = row.owsn[w];
                const double oftn_ms = *row.oftn[f].latency_ms;
                if (owsn_cell.latency_ms)
                    report.improvements.push_back(
                        {sc.name, owsns[w].name, oftns[f].name, improvement_percent(oftn_ms, *owsn_cell.latency_ms)});

                VerdictNote note{sc.name, owsns[w].name, oftns[f].name, std::nullopt, std::nullopt};
                note.analytic = crossover_verdict(row.terrestrial_distance_km,
                                                  owsns[w].altitude_km, oftns[f].refractive_index, settings.earth,
                                                  owsns[w].min_elevation_deg);
                if (note.analytic && owsn_cell.latency_ms) {
                    const bool owsn_wins = *owsn_cell.latency_ms < oftn_ms;
                    note.simulation_agrees = owsn_wins == (note.analytic->verdict == Verdict::kPreferOwsn);
                }
                report.verdicts.push_back(std::move(note));
            }
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

}  // namespace xover
