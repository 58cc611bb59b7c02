// Walker-delta constellation generation, circular two-body propagation into
// an Earth-fixed frame, and ground stations.
#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "xover/geo.hpp"

namespace xover {

struct WalkerConfig {
    int num_planes = 24;
    int sats_per_plane = 66;
    double inclination_deg = 53.0;
    double altitude_km = 550.0;
    int phasing_factor = 0;
    double raan_span_deg = 360.0;
    double epoch_offset_s = 0.0;

    int total_satellites() const { return num_planes * sats_per_plane; }

    void validate() const {
        if (num_planes <= 0) throw std::invalid_argument("num_planes must be > 0");
        if (sats_per_plane <= 0) throw std::invalid_argument("sats_per_plane must be > 0");
        if (!(inclination_deg > 0.0 && inclination_deg < 180.0))
            throw std::invalid_argument("inclination_deg must lie in (0, 180)");
        if (!(altitude_km > 0.0)) throw std::invalid_argument("altitude_km must be > 0");
        if (phasing_factor < 0 || phasing_factor >= num_planes)
            throw std::invalid_argument("phasing_factor must lie in [0, num_planes)");
        if (!(raan_span_deg > 0.0 && raan_span_deg <= 360.0))
            throw std::invalid_argument("raan_span_deg must lie in (0, 360]");
        if (!std::isfinite(epoch_offset_s)) throw std::invalid_argument("epoch_offset_s must be finite");
    }

    bool operator==(const WalkerConfig&) const = default;
};

struct SatelliteId {
    int plane_index = 0;
    int slot_index = 0;

    std::string label() const { return "p" + std::to_string(plane_index) + "s" + std::to_string(slot_index); }
    bool operator==(const SatelliteId&) const = default;
};

struct OrbitalElements {
    SatelliteId id;
    double raan_deg = 0.0;
    /// Argument of latitude at epoch (true anomaly for a circular orbit).
    double anomaly_deg = 0.0;
};

struct SatelliteState {
    SatelliteId id;
    Cartesian3 position_ecef;
};

struct GroundStation {
    std::string name;
    GeodeticPoint location;
    double range_km = 0.0;
    double min_elevation_deg = 25.0;
};

/// Elements ordered plane-major, so satellite index = plane * sats_per_plane + slot.
inline std::vector<OrbitalElements> generate_walker(const WalkerConfig& cfg) {
    cfg.validate();
    const double raan_step = cfg.raan_span_deg / cfg.num_planes;
    const double slot_step = 360.0 / cfg.sats_per_plane;
    const double phase_step = 360.0 / cfg.total_satellites();
    std::vector<OrbitalElements> out;
    out.reserve(static_cast<std::size_t>(cfg.total_satellites()));
    for (int p = 0; p < cfg.num_planes; ++p) {
        for (int s = 0; s < cfg.sats_per_plane; ++s) {
            double anomaly = std::fmod(s * slot_step + p * cfg.phasing_factor * phase_step, 360.0);
            out.push_back({{p, s}, p * raan_step, anomaly});
        }
    }
    return out;
}

/// Circular orbital speed, km/s.
inline double orbital_velocity(double altitude_km, const EarthModel& earth) {
    if (!(altitude_km >= 0.0)) throw std::invalid_argument("altitude must be >= 0");
    const double radius_m = (earth.radius_km + altitude_km) * 1000.0;
    return std::sqrt(earth.gravitational_constant * earth.earth_mass_kg / radius_m) / 1000.0;
}

inline double orbital_period_s(double altitude_km, const EarthModel& earth) {
    return 2.0 * kPi * (earth.radius_km + altitude_km) / orbital_velocity(altitude_km, earth);
}

/// Inertial (Earth-centred, non-rotating) position at `t_s` after the epoch.
inline Cartesian3 propagate_inertial(const OrbitalElements& el, double t_s, const WalkerConfig& cfg,
                                     const EarthModel& earth) {
    const double radius = earth.radius_km + cfg.altitude_km;
    const double mean_motion = orbital_velocity(cfg.altitude_km, earth) / radius;  // rad/s
    const double u = deg_to_rad(el.anomaly_deg) + mean_motion * (t_s + cfg.epoch_offset_s);
    const double raan = deg_to_rad(el.raan_deg);
    const double inc = deg_to_rad(cfg.inclination_deg);
    const double cu = std::cos(u), su = std::sin(u);
    const double co = std::cos(raan), so = std::sin(raan);
    const double ci = std::cos(inc), si = std::sin(inc);
    return {radius * (co * cu - so * su * ci), radius * (so * cu + co * su * ci), radius * (su * si)};
}

/// Earth-fixed position: the inertial position rotated by the Earth's spin.
inline SatelliteState propagate(const OrbitalElements& el, double t_s, const WalkerConfig& cfg,
                                const EarthModel& earth) {
    const Cartesian3 eci = propagate_inertial(el, t_s, cfg, earth);
    const double gst = earth.rotation_rate_rad_per_s * (t_s + cfg.epoch_offset_s);
    const double c = std::cos(gst), s = std::sin(gst);
    return {el.id, {c * eci.x + s * eci.y, -s * eci.x + c * eci.y, eci.z}};
}

inline std::vector<SatelliteState> propagate_all(const std::vector<OrbitalElements>& elements, double t_s,
                                                 const WalkerConfig& cfg, const EarthModel& earth) {
    std::vector<SatelliteState> out;
    out.reserve(elements.size());
    for (const auto& el : elements) out.push_back(propagate(el, t_s, cfg, earth));
    return out;
}

inline std::vector<Cartesian3> station_positions(const std::vector<GroundStation>& stations,
                                                 const EarthModel& earth) {
    std::vector<Cartesian3> out;
    out.reserve(stations.size());
    for (const auto& gs : stations) out.push_back(geodetic_to_ecef(gs.location, earth));
    return out;
}

/// Station whose range matches the slant range at its minimum elevation.
inline GroundStation make_station(std::string name, GeodeticPoint location, double altitude_km,
                                  double min_elevation_deg, const EarthModel& earth) {
    location.validate();
    return {std::move(name), location, slant_range(min_elevation_deg, altitude_km, earth), min_elevation_deg};
}

}  // namespace xover
