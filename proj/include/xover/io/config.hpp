// Experiment configuration files (JSON) and the station catalog format.
#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "xover/catalog.hpp"
#include "xover/compare.hpp"
#include "xover/constellation.hpp"
#include "xover/geo.hpp"

namespace xover::io {

using json = nlohmann::ordered_json;

/// Raised for malformed or inconsistent configuration; `field` is a JSON
/// pointer-style path to the offending value when one is known.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& message)
        : std::runtime_error(field.empty() ? message : field + ": " + message), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

struct ExperimentConfig {
    EarthModel earth{};
    WalkerConfig constellation{};
    CityCatalog catalog = default_catalog();
    std::vector<OftnConfig> oftns;
    std::vector<OwsnConfig> owsns;
    std::vector<ConnectionScenario> connections;
    double duration_s = 3600.0;
    double dt_s = 1.0;
    std::string output_format = "text";

    ComparisonSettings comparison_settings(unsigned threads = 0) const {
        return {constellation, earth, duration_s, dt_s, threads};
    }

    const OwsnConfig& owsn(const std::string& name) const {
        for (const auto& o : owsns)
            if (o.name == name) return o;
        throw ConfigError("owsns", "no satellite network named '" + name + "'");
    }

    const ConnectionScenario& connection(const std::string& name) const {
        for (const auto& c : connections)
            if (c.name == name) return c;
        throw ConfigError("connections", "no connection named '" + name + "'");
    }

    bool operator==(const ExperimentConfig&) const = default;
};

namespace detail {

class ObjectReader {
public:
    ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(path_, "expected an object");
    }

    template <class T>
    void get(const char* key, T& out) {
        seen_.insert(key);
        auto it = j_.find(key);
        if (it == j_.end()) return;
        try {
            out = it->template get<T>();
        } catch (const json::exception&) {
            throw ConfigError(path_ + "/" + key, "has the wrong type");
        }
    }

    template <class T>
    void get_optional(const char* key, std::optional<T>& out) {
        seen_.insert(key);
        auto it = j_.find(key);
        if (it == j_.end() || it->is_null()) return;
        try {
            out = it->template get<T>();
        } catch (const json::exception&) {
            throw ConfigError(path_ + "/" + key, "has the wrong type");
        }
    }

    template <class T>
    void require(const char* key, T& out) {
        if (!j_.contains(key)) throw ConfigError(path_ + "/" + key, "is required");
        get(key, out);
    }

    const json* child(const char* key) {
        seen_.insert(key);
        auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    void reject_unknown() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key())) throw ConfigError(path_ + "/" + it.key(), "unknown field");
    }

    const std::string& path() const { return path_; }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

template <class Fn>
void wrap_validation(const std::string& path, Fn&& fn) {
    try {
        fn();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(path, e.what());
    }
}

}  // namespace detail

inline CityCatalog catalog_from_json(const json& j, const std::string& path = "/catalog") {
    detail::ObjectReader root(j, path);
    CityCatalog catalog;
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string entry_path = path + "/" + it.key();
        detail::ObjectReader r(it.value(), entry_path);
        GeodeticPoint p;
        r.require("lat_deg", p.lat_deg);
        r.require("lon_deg", p.lon_deg);
        r.reject_unknown();
        detail::wrap_validation(entry_path, [&] { catalog.add(it.key(), p); });
    }
    return catalog;
}

inline json catalog_to_json(const CityCatalog& catalog) {
    json j = json::object();
    for (const auto& [name, p] : catalog.entries()) j[name] = {{"lat_deg", p.lat_deg}, {"lon_deg", p.lon_deg}};
    return j;
}

inline json parse_json_text(const std::string& text, const std::string& source) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("", source + ": " + e.what());
    }
}

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw ConfigError("", "cannot open " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline CityCatalog load_catalog(const std::filesystem::path& p) {
    return catalog_from_json(parse_json_text(read_file(p), p.string()), "");
}

/// Parse and validate. Relative catalog paths resolve against `base_dir`.
inline ExperimentConfig config_from_json(const json& j, const std::filesystem::path& base_dir = {}) {
    ExperimentConfig cfg;
    detail::ObjectReader root(j, "");

    if (const json* e = root.child("earth")) {
        detail::ObjectReader r(*e, "/earth");
        r.get("radius_km", cfg.earth.radius_km);
        r.get("grazing_altitude_km", cfg.earth.grazing_altitude_km);
        r.get("c_m_per_s", cfg.earth.c_m_per_s);
        r.get("gravitational_constant", cfg.earth.gravitational_constant);
        r.get("earth_mass_kg", cfg.earth.earth_mass_kg);
        r.get("rotation_rate_rad_per_s", cfg.earth.rotation_rate_rad_per_s);
        r.reject_unknown();
        detail::wrap_validation("/earth", [&] { cfg.earth.validate(); });
    }

    if (const json* c = root.child("constellation")) {
        detail::ObjectReader r(*c, "/constellation");
        r.get("num_planes", cfg.constellation.num_planes);
        r.get("sats_per_plane", cfg.constellation.sats_per_plane);
        r.get("inclination_deg", cfg.constellation.inclination_deg);
        r.get("altitude_km", cfg.constellation.altitude_km);
        r.get("phasing_factor", cfg.constellation.phasing_factor);
        r.get("raan_span_deg", cfg.constellation.raan_span_deg);
        r.get("epoch_offset_s", cfg.constellation.epoch_offset_s);
        r.reject_unknown();
        detail::wrap_validation("/constellation", [&] { cfg.constellation.validate(); });
    }

    if (const json* cat = root.child("catalog")) {
        if (cat->is_string()) {
            std::filesystem::path p = cat->get<std::string>();
            if (p.is_relative()) p = base_dir / p;
            try {
                cfg.catalog = load_catalog(p);
            } catch (const std::exception& e) {
                throw ConfigError("/catalog", e.what());
            }
        } else {
            cfg.catalog = catalog_from_json(*cat);
        }
    }

    if (const json* arr = root.child("oftns")) {
        if (!arr->is_array()) throw ConfigError("/oftns", "expected an array");
        for (std::size_t k = 0; k < arr->size(); ++k) {
            const std::string path = "/oftns/" + std::to_string(k);
            detail::ObjectReader r((*arr)[k], path);
            OftnConfig o;
            r.require("name", o.name);
            r.require("refractive_index", o.refractive_index);
            r.get("delta_zigzag", o.delta_zigzag);
            r.reject_unknown();
            detail::wrap_validation(path, [&] { o.validate(); });
            cfg.oftns.push_back(o);
        }
    }

    if (const json* arr = root.child("owsns")) {
        if (!arr->is_array()) throw ConfigError("/owsns", "expected an array");
        for (std::size_t k = 0; k < arr->size(); ++k) {
            const std::string path = "/owsns/" + std::to_string(k);
            detail::ObjectReader r((*arr)[k], path);
            std::string name;
            double altitude = 0.0;
            double min_elev = kDefaultMinElevationDeg;
            std::optional<double> lisl, gs;
            r.require("name", name);
            r.require("altitude_km", altitude);
            r.get("min_elevation_deg", min_elev);
            r.get_optional("lisl_range_km", lisl);
            r.get_optional("gs_range_km", gs);
            r.reject_unknown();
            detail::wrap_validation(path, [&] {
                OwsnConfig o = OwsnConfig::derived(name, altitude, cfg.earth, min_elev);
                if (lisl) o.lisl_range_km = *lisl;
                if (gs) o.gs_range_km = *gs;
                o.validate(cfg.earth);
                cfg.owsns.push_back(o);
            });
        }
    }

    if (const json* arr = root.child("connections")) {
        if (!arr->is_array()) throw ConfigError("/connections", "expected an array");
        for (std::size_t k = 0; k < arr->size(); ++k) {
            const std::string path = "/connections/" + std::to_string(k);
            detail::ObjectReader r((*arr)[k], path);
            ConnectionScenario c;
            r.require("name", c.name);
            r.require("city_a", c.city_a);
            r.require("city_b", c.city_b);
            r.get_optional("terrestrial_distance_km", c.terrestrial_distance_km);
            r.reject_unknown();
            for (const auto* city : {&c.city_a, &c.city_b})
                if (!cfg.catalog.contains(*city))
                    throw ConfigError(path, "city '" + *city + "' is not in the catalog");
            detail::wrap_validation(path, [&] { (void)c.resolved_distance_km(cfg.catalog, cfg.earth); });
            cfg.connections.push_back(c);
        }
    }

    root.get("duration_s", cfg.duration_s);
    root.get("dt_s", cfg.dt_s);
    root.get("output_format", cfg.output_format);
    root.reject_unknown();

    if (!(cfg.duration_s > 0.0)) throw ConfigError("/duration_s", "must be > 0");
    if (!(cfg.dt_s > 0.0)) throw ConfigError("/dt_s", "must be > 0");
    detail::wrap_validation("/duration_s", [&] {
        SimulationSettings s;
        s.duration_s = cfg.duration_s;
        s.dt_s = cfg.dt_s;
        (void)s.slot_count();
    });
    if (cfg.output_format != "text" && cfg.output_format != "csv" && cfg.output_format != "json")
        throw ConfigError("/output_format", "must be one of text, csv, json");
    return cfg;
}

/// Self-contained form: the catalog is written inline and every derived
/// range is explicit, so parsing the result reproduces `cfg` exactly.
inline json config_to_json(const ExperimentConfig& cfg) {
    json j;
    const EarthModel& e = cfg.earth;
    j["earth"] = {{"radius_km", e.radius_km},
                  {"grazing_altitude_km", e.grazing_altitude_km},
                  {"c_m_per_s", e.c_m_per_s},
                  {"gravitational_constant", e.gravitational_constant},
                  {"earth_mass_kg", e.earth_mass_kg},
                  {"rotation_rate_rad_per_s", e.rotation_rate_rad_per_s}};
    const WalkerConfig& w = cfg.constellation;
    j["constellation"] = {{"num_planes", w.num_planes},       {"sats_per_plane", w.sats_per_plane},
                          {"inclination_deg", w.inclination_deg}, {"altitude_km", w.altitude_km},
                          {"phasing_factor", w.phasing_factor}, {"raan_span_deg", w.raan_span_deg},
                          {"epoch_offset_s", w.epoch_offset_s}};
    j["catalog"] = catalog_to_json(cfg.catalog);
    j["oftns"] = json::array();
    for (const auto& o : cfg.oftns)
        j["oftns"].push_back({{"name", o.name}, {"refractive_index", o.refractive_index}, {"delta_zigzag", o.delta_zigzag}});
    j["owsns"] = json::array();
    for (const auto& o : cfg.owsns)
        j["owsns"].push_back({{"name", o.name},
                              {"altitude_km", o.altitude_km},
                              {"lisl_range_km", o.lisl_range_km},
                              {"gs_range_km", o.gs_range_km},
                              {"min_elevation_deg", o.min_elevation_deg}});
    j["connections"] = json::array();
    for (const auto& c : cfg.connections) {
        json cj = {{"name", c.name}, {"city_a", c.city_a}, {"city_b", c.city_b}};
        if (c.terrestrial_distance_km) cj["terrestrial_distance_km"] = *c.terrestrial_distance_km;
        j["connections"].push_back(cj);
    }
    j["duration_s"] = cfg.duration_s;
    j["dt_s"] = cfg.dt_s;
    j["output_format"] = cfg.output_format;
    return j;
}

inline ExperimentConfig load_config(const std::filesystem::path& p) {
    const json j = parse_json_text(read_file(p), p.string());
    return config_from_json(j, p.parent_path());
}

/// Deterministic epoch offset in [0, 86400) s drawn from `seed`.
inline double epoch_from_seed(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return std::uniform_real_distribution<double>(0.0, 86400.0)(rng);
}

/// The reference experiment: three fibre networks, three shells of the
/// 24 x 66 constellation, three exchange-to-exchange connections.
inline ExperimentConfig reference_experiment() {
    ExperimentConfig cfg;
    cfg.oftns = {{"OFTN1", 1.1, 0.0}, {"OFTN2", 1.3, 0.0}, {"OFTN3", 1.4675, 0.0}};
    cfg.owsns = {{"OWSN1", 300.0, 3400.0, 649.0, 25.0},
                 {"OWSN2", 550.0, 5016.0, 1123.0, 25.0},
                 {"OWSN3", 1100.0, 7540.0, 2049.0, 25.0}};
    cfg.connections = {{"New York-Dublin", "NYSE", "Euronext Dublin", 5121.0},
                       {"Sao Paulo-London", "B3", "LSE", 9514.0},
                       {"Toronto-Sydney", "TSX", "ASX", 15585.0}};
    return cfg;
}

}  // namespace xover::io
