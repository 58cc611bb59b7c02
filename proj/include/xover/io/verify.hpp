// Regression check of computed tables against transcribed reference values
// (data/fixtures/*.csv).
#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "xover/compare.hpp"
#include "xover/crossover.hpp"
#include "xover/geo.hpp"
#include "xover/io/render.hpp"

namespace xover::io {

using CsvRecord = std::map<std::string, std::string>;

/// Header-keyed rows of a plain CSV file (no quoted fields).
inline std::vector<CsvRecord> read_csv_records(const std::filesystem::path& p) {
    std::ifstream in(p);
    if (!in) throw std::runtime_error("cannot open " + p.string());
    const auto split = [](const std::string& line) {
        std::vector<std::string> out;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) out.push_back(field);
        if (!line.empty() && line.back() == ',') out.emplace_back();
        return out;
    };
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(p.string() + ": empty file");
    const auto header = split(line);
    std::vector<CsvRecord> rows;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split(line);
        if (fields.size() != header.size())
            throw std::runtime_error(p.string() + ":" + std::to_string(line_no) + ": expected " +
                                     std::to_string(header.size()) + " fields, got " + std::to_string(fields.size()));
        CsvRecord r;
        for (std::size_t k = 0; k < header.size(); ++k) r[header[k]] = fields[k];
        rows.push_back(std::move(r));
    }
    return rows;
}

inline double field_number(const CsvRecord& r, const std::string& key) {
    auto it = r.find(key);
    if (it == r.end()) throw std::runtime_error("missing column " + key);
    try {
        return std::stod(it->second);
    } catch (const std::exception&) {
        throw std::runtime_error("column " + key + ": not a number: '" + it->second + "'");
    }
}

struct VerifyTolerances {
    double theta_deg = 0.001;
    double km = 1.0;
    double ms = 0.01;
};

struct VerifyCheck {
    std::string table;
    std::string row;
    std::string field;
    double expected = 0.0;
    double actual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    /// Set when the printed value could not be used as-is.
    std::string note;
};

struct VerifyReport {
    std::vector<VerifyCheck> checks;

    int failures() const {
        int n = 0;
        for (const auto& c : checks) n += !c.pass;
        return n;
    }
    bool ok() const { return failures() == 0; }
};

inline const std::vector<std::string>& verify_table_names() {
    static const std::vector<std::string> names = {"table1", "table2", "table3", "table4", "table5"};
    return names;
}

namespace detail {

inline std::string row_key(double h, double i) {
    std::ostringstream ss;
    ss << "h=" << h << " i=" << i;
    return ss.str();
}

inline void add_check(VerifyReport& rep, std::string table, std::string row, std::string field, double expected,
                      double actual, double tol, std::string note = {}) {
    rep.checks.push_back({std::move(table), std::move(row), std::move(field), expected, actual, tol,
                          std::abs(expected - actual) <= tol + 1e-9, std::move(note)});
}

/// A known misprint: while the fixture still holds `printed`, the cell is
/// checked against `corrected` instead.
struct Erratum {
    double printed = 0.0;
    double corrected = 0.0;
    std::string reason;
};

using ErrataKey = std::tuple<std::string, double, double, std::string>;  // table, h, i, field
using Errata = std::map<ErrataKey, Erratum>;

inline Errata read_errata(const std::filesystem::path& p) {
    Errata out;
    if (!std::filesystem::exists(p)) return out;
    for (const auto& r : read_csv_records(p))
        out[{r.at("table"), field_number(r, "h_km"), field_number(r, "i"), r.at("field")}] = {
            field_number(r, "printed"), field_number(r, "corrected"), r.at("reason")};
    return out;
}

/// Compares a printed distance, substituting the erratum when it applies.
inline void check_distance(VerifyReport& rep, const Errata& errata, const std::string& table, double h, double i,
                           const std::string& field, double printed, double computed, double tol) {
    auto it = errata.find({table, h, i, field});
    if (it != errata.end() && it->second.printed == printed) {
        const auto& e = it->second;
        add_check(rep, table, row_key(h, i), field, e.corrected, computed, tol,
                  "erratum: printed " + fmt_km(e.printed) + ", " + e.reason);
        return;
    }
    add_check(rep, table, row_key(h, i), field, printed, computed, tol);
}

inline void check_scenario_cell(VerifyReport& rep, const Errata& errata, const std::string& table, double h,
                                double i, const std::string& prefix, double printed_theta, double printed_d,
                                const std::optional<CrossoverResult>& computed, const VerifyTolerances& tol) {
    if (!computed) {
        rep.checks.push_back({table, row_key(h, i), prefix + "theta_deg", printed_theta, NAN, tol.theta_deg, false,
                              "no crossover computed"});
        return;
    }
    // Compared at the printed precision: 4 decimals for angles, whole km.
    add_check(rep, table, row_key(h, i), prefix + "theta_deg", printed_theta,
              std::round(computed->theta_crossover_deg * 1e4) / 1e4, tol.theta_deg);
    check_distance(rep, errata, table, h, i, prefix + "d_km", printed_d, std::round(computed->distance_crossover_km),
                   tol.km);
}

}  // namespace detail

/// Runs every table in `only` (all when empty) against the fixtures in `dir`.
inline VerifyReport verify_tables(const std::filesystem::path& dir, const std::set<std::string>& only = {},
                                  const VerifyTolerances& tol = {}, const EarthModel& earth = {}) {
    for (const auto& t : only)
        if (std::find(verify_table_names().begin(), verify_table_names().end(), t) == verify_table_names().end())
            throw std::invalid_argument("unknown table '" + t + "'");
    const auto wanted = [&](const std::string& t) { return only.empty() || only.count(t); };
    VerifyReport rep;

    std::map<std::pair<double, double>, CrossoverTableRow> computed;
    const auto row_for = [&](double h, double i) -> const CrossoverTableRow& {
        auto it = computed.find({h, i});
        if (it == computed.end()) it = computed.emplace(std::pair{h, i}, average_crossover(h, i, earth)).first;
        return it->second;
    };

    const auto errata = detail::read_errata(dir / "errata.csv");

    if (wanted("table1")) {
        for (const auto& r : read_csv_records(dir / "table1.csv")) {
            const double h = field_number(r, "h_km"), i = field_number(r, "i");
            detail::check_scenario_cell(rep, errata, "table1", h, i, "s1_", field_number(r, "theta_deg"),
                                        field_number(r, "d_km"), row_for(h, i).at(Scenario::kOverhead), tol);
        }
    }
    if (wanted("table2")) {
        for (const auto& r : read_csv_records(dir / "table2.csv")) {
            const double h = field_number(r, "h_km"), i = field_number(r, "i");
            for (Scenario s : {Scenario::kOutward, Scenario::kInward, Scenario::kSameDirection}) {
                const std::string p = "s" + std::to_string(scenario_number(s)) + "_";
                detail::check_scenario_cell(rep, errata, "table2", h, i, p, field_number(r, p + "theta_deg"),
                                            field_number(r, p + "d_km"), row_for(h, i).at(s), tol);
            }
        }
    }
    if (wanted("table3")) {
        for (const auto& r : read_csv_records(dir / "table3.csv")) {
            const double h = field_number(r, "h_km"), i = field_number(r, "i");
            const double printed = field_number(r, "avg_d_km");
            const auto& row = row_for(h, i);
            if (!row.average_distance_km) {
                rep.checks.push_back(
                    {"table3", detail::row_key(h, i), "avg_d_km", printed, NAN, tol.km, false, "no crossover computed"});
                continue;
            }
            detail::check_distance(rep, errata, "table3", h, i, "avg_d_km", printed,
                                   std::round(*row.average_distance_km), tol.km);
        }
    }

    if (wanted("table4")) {
        for (const auto& r : read_csv_records(dir / "table4.csv")) {
            const double h = field_number(r, "h_km");
            const std::string key = r.at("network") + " h=" + r.at("h_km");
            detail::add_check(rep, "table4", key, "lisl_range_km", field_number(r, "lisl_range_km"),
                              std::round(max_lisl_range(h, earth)), tol.km);
            detail::add_check(rep, "table4", key, "gs_range_km", field_number(r, "gs_range_km"),
                              std::round(slant_range(kDefaultMinElevationDeg, h, earth)), tol.km);
        }
    }

    if (wanted("table5")) {
        for (const auto& r : read_csv_records(dir / "table5_oftn.csv")) {
            const OftnConfig cfg{r.at("network"), field_number(r, "i"), 0.0};
            const double ms = oftn_latency(field_number(r, "distance_km"), cfg, earth);
            detail::add_check(rep, "table5", r.at("connection") + " " + cfg.name, "latency_ms",
                              field_number(r, "latency_ms"), round_ms(ms), tol.ms);
        }
    }
    return rep;
}

}  // namespace xover::io
