// Text / CSV / JSON renderers for crossover tables, slot series and
// comparison reports.
#pragma once

#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "xover/compare.hpp"
#include "xover/crossover.hpp"
#include "xover/linkgraph.hpp"

namespace xover::io {

enum class Format { kText, kCsv, kJson };

inline Format parse_format(const std::string& s) {
    if (s == "text") return Format::kText;
    if (s == "csv") return Format::kCsv;
    if (s == "json") return Format::kJson;
    throw std::invalid_argument("unknown format '" + s + "' (expected text, csv or json)");
}

/// Marker printed where a scenario has no crossover.
inline constexpr const char* kNoCrossover = "—";

inline std::string fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    std::string s = buf;
    if (s[0] == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
    return s;
}

inline std::string fmt_theta(double deg) { return fixed(deg, 4); }
inline std::string fmt_km(double km) { return fixed(km, 0); }
inline std::string fmt_ms(double ms) { return fixed(ms, 2); }

/// Shortest form of `i` that still round-trips (1.1, 1.4675).
inline std::string fmt_index(double i) {
    for (int d = 1; d <= 10; ++d) {
        std::string s = fixed(i, d);
        if (std::stod(s) == i) return s;
    }
    return fixed(i, 10);
}

namespace detail {

inline void write_aligned(std::ostream& os, const std::vector<std::vector<std::string>>& rows) {
    if (rows.empty()) return;
    std::vector<std::size_t> width(rows.front().size(), 0);
    // Column widths in code points so the multi-byte dash aligns.
    const auto cps = [](const std::string& s) {
        std::size_t n = 0;
        for (unsigned char c : s) n += (c & 0xC0) != 0x80;
        return n;
    };
    for (const auto& r : rows)
        for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], cps(r[c]));
    for (const auto& r : rows) {
        for (std::size_t c = 0; c < r.size(); ++c) {
            if (c) os << "  ";
            os << std::string(width[c] - cps(r[c]), ' ') << r[c];
        }
        os << '\n';
    }
}

inline void write_csv(std::ostream& os, const std::vector<std::vector<std::string>>& rows) {
    for (const auto& r : rows) {
        for (std::size_t c = 0; c < r.size(); ++c) {
            if (c) os << ',';
            const std::string& f = r[c];
            if (f.find_first_of(",\"\n") != std::string::npos) {
                os << '"';
                for (char ch : f) os << (ch == '"' ? "\"\"" : std::string(1, ch));
                os << '"';
            } else {
                os << f;
            }
        }
        os << '\n';
    }
}

inline void write_table(std::ostream& os, const std::vector<std::vector<std::string>>& rows, Format f) {
    if (f == Format::kCsv)
        write_csv(os, rows);
    else
        write_aligned(os, rows);
}

inline nlohmann::ordered_json optional_number(const std::optional<double>& v) {
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

}  // namespace detail

/// One row per (h, i). With `only` set, a single scenario's columns are shown
/// and its own ground-station range is reported.
inline void render_crossover_rows(std::ostream& os, const std::vector<CrossoverTableRow>& rows, Format f,
                                  std::optional<Scenario> only = std::nullopt, const EarthModel& earth = {},
                                  double elevation_deg = kDefaultMinElevationDeg) {
    if (f == Format::kJson) {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& r : rows) {
            nlohmann::ordered_json j;
            j["h_km"] = r.altitude_km;
            j["i"] = r.refractive_index;
            j["gs_range_km"] = r.gs_range_km;
            nlohmann::ordered_json sc = nlohmann::ordered_json::object();
            for (Scenario s : kAllScenarios) {
                if (only && s != *only) continue;
                const auto& cell = r.at(s);
                const std::string key = "s" + std::to_string(scenario_number(s));
                if (cell)
                    sc[key] = {{"theta_deg", cell->theta_crossover_deg},
                               {"d_km", cell->distance_crossover_km},
                               {"gs_range_km", cell->gs_range_km}};
                else
                    sc[key] = nullptr;
            }
            j["scenarios"] = sc;
            if (!only) j["avg_d_km"] = detail::optional_number(r.average_distance_km);
            arr.push_back(j);
        }
        os << arr.dump(2) << '\n';
        return;
    }

    std::vector<std::vector<std::string>> table;
    if (only) {
        table.push_back({"h_km", "i", "gs_range_km", "theta_deg", "d_km"});
        for (const auto& r : rows) {
            const CrossoverQuery q{r.altitude_km, r.refractive_index, elevation_deg, *only, earth};
            const auto& cell = r.at(*only);
            table.push_back({fmt_km(r.altitude_km), fmt_index(r.refractive_index), fmt_km(q.gs_range_km()),
                             cell ? fmt_theta(cell->theta_crossover_deg) : kNoCrossover,
                             cell ? fmt_km(cell->distance_crossover_km) : kNoCrossover});
        }
    } else {
        std::vector<std::string> header = {"h_km", "i", "gs_range_km"};
        for (Scenario s : kAllScenarios) {
            const std::string p = "s" + std::to_string(scenario_number(s));
            header.push_back(p + "_theta_deg");
            header.push_back(p + "_d_km");
        }
        header.push_back("avg_d_km");
        table.push_back(header);
        for (const auto& r : rows) {
            std::vector<std::string> line = {fmt_km(r.altitude_km), fmt_index(r.refractive_index),
                                             fmt_km(r.gs_range_km)};
            for (Scenario s : kAllScenarios) {
                const auto& cell = r.at(s);
                line.push_back(cell ? fmt_theta(cell->theta_crossover_deg) : kNoCrossover);
                line.push_back(cell ? fmt_km(cell->distance_crossover_km) : kNoCrossover);
            }
            line.push_back(r.average_distance_km ? fmt_km(*r.average_distance_km) : kNoCrossover);
            table.push_back(std::move(line));
        }
    }
    detail::write_table(os, table, f);
}

/// `labels[k]` names graph node k: the two stations first, then satellites
/// in plane-major order.
inline std::string join_path(const std::vector<int>& nodes, const std::vector<std::string>& labels) {
    std::string out;
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        if (k) out += ';';
        out += labels.at(static_cast<std::size_t>(nodes[k]));
    }
    return out;
}

/// slot,latency_ms,length_km,lisl_count,path. Unreachable slots leave the
/// measurement fields empty.
inline void render_slots_csv(std::ostream& os, const SlotSeries& series, const std::vector<std::string>& labels,
                             bool emit_paths) {
    std::vector<std::vector<std::string>> table;
    table.push_back({"slot", "latency_ms", "length_km", "lisl_count", "path"});
    for (const auto& rec : series.slots) {
        std::vector<std::string> line = {std::to_string(rec.slot_index)};
        if (rec.path) {
            line.push_back(fmt_ms(rec.path->total_latency_ms));
            line.push_back(fmt_km(rec.path->total_length_km));
            line.push_back(std::to_string(rec.path->lisl_count));
            line.push_back(emit_paths ? join_path(rec.path->nodes, labels) : "");
        } else {
            line.insert(line.end(), {"", "", "", ""});
        }
        table.push_back(std::move(line));
    }
    detail::write_csv(os, table);
}

inline nlohmann::ordered_json summary_json(const SlotSeries& series, const std::string& connection,
                                           const std::string& network) {
    nlohmann::ordered_json j;
    j["connection"] = connection;
    j["network"] = network;
    const bool any = series.reachable_count() > 0;
    j["mean_latency_ms"] = any ? nlohmann::ordered_json(round_ms(series.mean_latency_ms)) : nullptr;
    j["mean_length_km"] = any ? nlohmann::ordered_json(std::round(series.mean_length_km)) : nullptr;
    j["slot_count"] = series.slot_count();
    j["unreachable_count"] = series.unreachable_count;
    nlohmann::ordered_json hist = nlohmann::ordered_json::object();
    for (const auto& [lisls, count] : series.lisl_histogram) hist[std::to_string(lisls)] = count;
    j["lisl_histogram"] = hist;
    return j;
}

inline std::string cell_text(const LatencyCell& c) { return c.latency_ms ? fmt_ms(*c.latency_ms) : "error"; }

inline void render_comparison(std::ostream& os, const ComparisonReport& report, Format f) {
    if (f == Format::kJson) {
        nlohmann::ordered_json j;
        j["rows"] = nlohmann::ordered_json::array();
        for (const auto& r : report.rows) {
            nlohmann::ordered_json rj;
            rj["connection"] = r.connection;
            rj["terrestrial_distance_km"] = r.terrestrial_distance_km;
            for (const auto* cells : {&r.oftn, &r.owsn}) {
                const char* key = cells == &r.oftn ? "oftn" : "owsn";
                rj[key] = nlohmann::ordered_json::object();
                for (const auto& c : *cells) {
                    nlohmann::ordered_json cj;
                    cj["latency_ms"] = detail::optional_number(c.latency_ms ? std::optional(round_ms(*c.latency_ms))
                                                                            : std::nullopt);
                    if (!c.error.empty()) cj["error"] = c.error;
                    if (c.series) {
                        cj["unreachable_count"] = c.series->unreachable_count;
                        nlohmann::ordered_json hist = nlohmann::ordered_json::object();
                        for (const auto& [k, v] : c.series->lisl_histogram) hist[std::to_string(k)] = v;
                        cj["lisl_histogram"] = hist;
                    }
                    rj[key][c.network] = cj;
                }
            }
            j["rows"].push_back(rj);
        }
        j["improvements"] = nlohmann::ordered_json::array();
        for (const auto& im : report.improvements)
            j["improvements"].push_back({{"connection", im.connection},
                                         {"owsn", im.owsn},
                                         {"oftn", im.oftn},
                                         {"percent", std::round(im.percent * 100.0) / 100.0}});
        j["verdicts"] = nlohmann::ordered_json::array();
        for (const auto& v : report.verdicts) {
            nlohmann::ordered_json vj = {{"connection", v.connection}, {"owsn", v.owsn}, {"oftn", v.oftn}};
            vj["verdict"] = v.analytic ? nlohmann::ordered_json(to_string(v.analytic->verdict)) : nullptr;
            vj["average_crossover_km"] =
                v.analytic ? nlohmann::ordered_json(std::round(v.analytic->average_crossover_km)) : nullptr;
            vj["simulation_agrees"] = v.simulation_agrees ? nlohmann::ordered_json(*v.simulation_agrees) : nullptr;
            j["verdicts"].push_back(vj);
        }
        j["failed_cells"] = report.failed_cells;
        os << j.dump(2) << '\n';
        return;
    }

    // Latency matrix, then one improvement column per (OWSN, OFTN) pair.
    std::vector<std::vector<std::string>> table;
    std::vector<std::string> header = {"connection", "distance_km"};
    if (!report.rows.empty()) {
        for (const auto& c : report.rows.front().oftn) header.push_back(c.network + "_ms");
        for (const auto& c : report.rows.front().owsn) header.push_back(c.network + "_ms");
        for (const auto& w : report.rows.front().owsn)
            for (const auto& o : report.rows.front().oftn) header.push_back(w.network + "_vs_" + o.network + "_pct");
    }
    table.push_back(header);
    for (const auto& r : report.rows) {
        std::vector<std::string> line = {r.connection, fmt_km(r.terrestrial_distance_km)};
        for (const auto& c : r.oftn) line.push_back(cell_text(c));
        for (const auto& c : r.owsn) line.push_back(cell_text(c));
        for (const auto& w : r.owsn)
            for (const auto& o : r.oftn)
                line.push_back(w.latency_ms ? fixed(improvement_percent(*o.latency_ms, *w.latency_ms), 2) : "error");
        table.push_back(std::move(line));
    }
    detail::write_table(os, table, f);

    if (f == Format::kText) {
        bool any_error = false;
        for (const auto& r : report.rows)
            for (const auto& c : r.owsn)
                if (!c.latency_ms) {
                    if (!any_error) os << "\nfailed cells:\n";
                    any_error = true;
                    os << "  " << r.connection << " / " << c.network << ": " << c.error << '\n';
                }
        if (report.verdicts.empty()) return;
        os << "\ncrossover verdicts (surface distance vs average crossover distance):\n";
        std::vector<std::vector<std::string>> vt;
        vt.push_back({"connection", "owsn", "oftn", "avg_crossover_km", "verdict", "simulation"});
        for (const auto& v : report.verdicts)
            vt.push_back({v.connection, v.owsn, v.oftn,
                          v.analytic ? fmt_km(v.analytic->average_crossover_km) : kNoCrossover,
                          v.analytic ? to_string(v.analytic->verdict) : kNoCrossover,
                          v.simulation_agrees ? (*v.simulation_agrees ? "agrees" : "disagrees") : "n/a"});
        detail::write_aligned(os, vt);
    }
}

}  // namespace xover::io
