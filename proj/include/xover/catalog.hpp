// Named surface locations (stock-exchange ground stations).
#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "xover/geo.hpp"

namespace xover {

class CityCatalog {
public:
    CityCatalog() = default;

    void add(const std::string& name, GeodeticPoint p) {
        if (name.empty()) throw std::invalid_argument("catalog entry with empty name");
        p.validate();
        if (!entries_.emplace(name, p).second) throw std::invalid_argument("duplicate catalog entry: " + name);
    }

    bool contains(const std::string& name) const { return entries_.count(name) != 0; }

    const GeodeticPoint& at(const std::string& name) const {
        auto it = entries_.find(name);
        if (it == entries_.end()) throw std::out_of_range("unknown catalog entry: " + name);
        return it->second;
    }

    const std::map<std::string, GeodeticPoint>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }

    /// Great-circle surface distance between two entries, km.
    double surface_distance_km(const std::string& a, const std::string& b, const EarthModel& earth) const {
        return arc_length(central_angle(at(a), at(b)), earth);
    }

    bool operator==(const CityCatalog&) const = default;

private:
    std::map<std::string, GeodeticPoint> entries_;
};

/// Exchange buildings of the six cities in the reference study.
inline CityCatalog default_catalog() {
    CityCatalog c;
    c.add("NYSE", {40.7069, -74.0113});
    c.add("Euronext Dublin", {53.3454, -6.2644});
    c.add("B3", {-23.5455, -46.6339});
    c.add("LSE", {51.5150, -0.0990});
    c.add("TSX", {43.6486, -79.3832});
    c.add("ASX", {-33.8642, 151.2089});
    return c;
}

struct ReferenceDistance {
    std::string city_a;
    std::string city_b;
    double distance_km;
};

/// Published exchange-to-exchange surface distances the bundled catalog must reproduce.
inline const std::vector<ReferenceDistance>& reference_distances() {
    static const std::vector<ReferenceDistance> refs = {
        {"NYSE", "Euronext Dublin", 5121.0},
        {"B3", "LSE", 9514.0},
        {"TSX", "ASX", 15585.0},
    };
    return refs;
}

/// Throws when any reference pair present in `catalog` deviates by more than
/// `relative_tolerance`.
inline void validate_reference_distances(const CityCatalog& catalog, const EarthModel& earth,
                                         double relative_tolerance = 0.01) {
    for (const auto& ref : reference_distances()) {
        if (!catalog.contains(ref.city_a) || !catalog.contains(ref.city_b)) continue;
        const double d = catalog.surface_distance_km(ref.city_a, ref.city_b, earth);
        if (std::abs(d - ref.distance_km) > relative_tolerance * ref.distance_km)
            throw std::invalid_argument("catalog distance " + ref.city_a + " - " + ref.city_b + " = " +
                                        std::to_string(d) + " km deviates from " +
                                        std::to_string(ref.distance_km) + " km");
    }
}

}  // namespace xover
