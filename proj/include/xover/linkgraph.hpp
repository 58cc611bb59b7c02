// Per-slot link discovery, latency-weighted routing, and the slot loop.
#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include "xover/constellation.hpp"
#include "xover/geo.hpp"

namespace xover {

struct LinkEdge {
    int to = 0;
    double length_km = 0.0;
    double latency_s = 0.0;
};

/// Undirected link graph. Nodes [0, num_stations) are ground stations, the
/// rest are satellites in the order they were supplied.
class LinkGraph {
public:
    struct Node {
        std::string label;
        Cartesian3 position;
        bool is_station = false;
        /// Range limit of a station node, km; unused for satellites.
        double station_range_km = 0.0;
    };

    LinkGraph() = default;

    LinkGraph(std::vector<Node> nodes, std::vector<std::pair<int, int>> links, double c_km_per_s)
        : nodes_(std::move(nodes)) {
        std::vector<int> degree(nodes_.size() + 1, 0);
        for (auto [u, v] : links) {
            if (u == v) throw std::invalid_argument("self-link on node " + std::to_string(u));
            ++degree[u];
            ++degree[v];
        }
        offsets_.assign(nodes_.size() + 1, 0);
        for (std::size_t i = 0; i < nodes_.size(); ++i) offsets_[i + 1] = offsets_[i] + degree[i];
        edges_.resize(offsets_.back());
        std::vector<int> fill(offsets_.begin(), offsets_.end() - 1);
        for (auto [u, v] : links) {
            const double len = distance(nodes_[u].position, nodes_[v].position);
            const double lat = len / c_km_per_s;
            edges_[fill[u]++] = {v, len, lat};
            edges_[fill[v]++] = {u, len, lat};
        }
        const auto by_target = [](const LinkEdge& a, const LinkEdge& b) { return a.to < b.to; };
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            auto first = edges_.begin() + offsets_[i], last = edges_.begin() + offsets_[i + 1];
            if (!std::is_sorted(first, last, by_target)) std::sort(first, last, by_target);
        }
        num_stations_ = static_cast<int>(std::count_if(nodes_.begin(), nodes_.end(),
                                                       [](const Node& n) { return n.is_station; }));
    }

    int node_count() const { return static_cast<int>(nodes_.size()); }
    int station_count() const { return num_stations_; }
    std::size_t edge_count() const { return edges_.size() / 2; }
    const Node& node(int i) const { return nodes_.at(i); }

    std::span<const LinkEdge> neighbors(int i) const {
        return {edges_.data() + offsets_[i], edges_.data() + offsets_[i + 1]};
    }

    std::optional<LinkEdge> edge(int u, int v) const {
        auto adj = neighbors(u);
        auto it = std::lower_bound(adj.begin(), adj.end(), v, [](const LinkEdge& e, int x) { return e.to < x; });
        if (it == adj.end() || it->to != v) return std::nullopt;
        return *it;
    }

private:
    std::vector<Node> nodes_;
    std::vector<int> offsets_;
    std::vector<LinkEdge> edges_;
    int num_stations_ = 0;
};

enum class LinkDiscovery { kSpatialGrid, kBruteForce };

namespace detail {

inline bool lisl_allowed(const Cartesian3& a, const Cartesian3& b, double range_sq, const EarthModel& earth) {
    return distance_squared(a, b) <= range_sq && clears_grazing_shell(a, b, earth);
}

inline std::vector<std::pair<int, int>> satellite_pairs_brute(std::span<const Cartesian3> pos, double range_km,
                                                              const EarthModel& earth) {
    std::vector<std::pair<int, int>> out;
    const double range_sq = range_km * range_km;
    for (int i = 0; i < static_cast<int>(pos.size()); ++i)
        for (int j = i + 1; j < static_cast<int>(pos.size()); ++j)
            if (lisl_allowed(pos[i], pos[j], range_sq, earth)) out.emplace_back(i, j);
    return out;
}

/// Uniform 3-D bucket grid with cell edge equal to the link range, so every
/// candidate partner of a satellite lies in its own or an adjacent cell.
inline std::vector<std::pair<int, int>> satellite_pairs_grid(std::span<const Cartesian3> pos, double range_km,
                                                             const EarthModel& earth) {
    const auto cell_of = [range_km](double v) { return static_cast<std::int64_t>(std::floor(v / range_km)); };
    const auto key = [](std::int64_t x, std::int64_t y, std::int64_t z) {
        constexpr std::int64_t kBias = 1 << 20;
        return ((x + kBias) << 42) | ((y + kBias) << 21) | (z + kBias);
    };
    std::unordered_map<std::int64_t, std::vector<int>> buckets;
    for (int i = 0; i < static_cast<int>(pos.size()); ++i)
        buckets[key(cell_of(pos[i].x), cell_of(pos[i].y), cell_of(pos[i].z))].push_back(i);

    std::vector<std::pair<int, int>> out;
    std::vector<int> candidates;
    const double range_sq = range_km * range_km;
    for (int i = 0; i < static_cast<int>(pos.size()); ++i) {
        candidates.clear();
        const std::int64_t cx = cell_of(pos[i].x), cy = cell_of(pos[i].y), cz = cell_of(pos[i].z);
        for (std::int64_t dx = -1; dx <= 1; ++dx)
            for (std::int64_t dy = -1; dy <= 1; ++dy)
                for (std::int64_t dz = -1; dz <= 1; ++dz) {
                    auto it = buckets.find(key(cx + dx, cy + dy, cz + dz));
                    if (it == buckets.end()) continue;
                    for (int j : it->second)
                        if (j > i) candidates.push_back(j);
                }
        std::sort(candidates.begin(), candidates.end());
        for (int j : candidates)
            if (lisl_allowed(pos[i], pos[j], range_sq, earth)) out.emplace_back(i, j);
    }
    return out;
}

/// Grid pruning pays off only when the shell spans several cells per axis.
inline bool grid_worthwhile(std::span<const Cartesian3> pos, double range_km) {
    double max_radius = 0.0;
    for (const auto& p : pos) max_radius = std::max(max_radius, p.norm());
    return 2.0 * max_radius / range_km > 8.0;
}

}  // namespace detail

/// Link graph for one time slot. Satellite pairs link when within
/// `lisl_range_km` and clear of the grazing shell; a station links to every
/// satellite within its range.
inline LinkGraph build_graph(std::span<const SatelliteState> sats, std::span<const GroundStation> stations,
                             double lisl_range_km, const EarthModel& earth,
                             LinkDiscovery discovery = LinkDiscovery::kSpatialGrid) {
    if (sats.empty()) throw std::invalid_argument("build_graph: empty constellation");
    if (stations.empty()) throw std::invalid_argument("build_graph: no ground stations");
    if (!(lisl_range_km > 0.0)) throw std::invalid_argument("build_graph: LISL range must be > 0");

    std::vector<LinkGraph::Node> nodes;
    nodes.reserve(stations.size() + sats.size());
    for (const auto& gs : stations) {
        if (!(gs.range_km > 0.0)) throw std::invalid_argument("build_graph: station range must be > 0");
        nodes.push_back({gs.name, geodetic_to_ecef(gs.location, earth), true, gs.range_km});
    }
    std::vector<Cartesian3> sat_pos;
    sat_pos.reserve(sats.size());
    for (const auto& s : sats) {
        nodes.push_back({s.id.label(), s.position_ecef, false, 0.0});
        sat_pos.push_back(s.position_ecef);
    }

    const int offset = static_cast<int>(stations.size());
    std::vector<std::pair<int, int>> links;
    for (int g = 0; g < offset; ++g) {
        const double r2 = stations[g].range_km * stations[g].range_km;
        for (int s = 0; s < static_cast<int>(sat_pos.size()); ++s)
            if (distance_squared(nodes[g].position, sat_pos[s]) <= r2) links.emplace_back(g, offset + s);
    }
    const bool use_grid =
        discovery == LinkDiscovery::kSpatialGrid && detail::grid_worthwhile(sat_pos, lisl_range_km);
    auto sat_links = use_grid ? detail::satellite_pairs_grid(sat_pos, lisl_range_km, earth)
                              : detail::satellite_pairs_brute(sat_pos, lisl_range_km, earth);
    for (auto [a, b] : sat_links) links.emplace_back(offset + a, offset + b);
    return LinkGraph(std::move(nodes), std::move(links), earth.c_km_per_s());
}

struct PathResult {
    std::vector<int> nodes;
    double total_length_km = 0.0;
    double total_latency_ms = 0.0;
    int lisl_count = 0;
    int slot_index = 0;
};

/// Minimum-latency route between two station nodes, or empty when the
/// stations are disconnected. Among equal-latency routes the
/// lexicographically smallest node sequence wins.
inline std::optional<PathResult> shortest_path(const LinkGraph& graph, int src, int dst) {
    const int n = graph.node_count();
    if (src < 0 || src >= n || dst < 0 || dst >= n) throw std::out_of_range("shortest_path: node out of range");
    if (src == dst) throw std::invalid_argument("shortest_path: source and destination must differ");
    if (!graph.node(src).is_station || !graph.node(dst).is_station)
        throw std::invalid_argument("shortest_path: endpoints must be ground stations");

    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(n, kInf);
    std::vector<int> pred(n, -1);
    std::vector<char> done(n, 0);

    const auto path_to = [&](int v) {
        std::vector<int> p;
        for (; v != -1; v = pred[v]) p.push_back(v);
        std::reverse(p.begin(), p.end());
        return p;
    };

    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[src] = 0.0;
    heap.emplace(0.0, src);
    while (!heap.empty()) {
        auto [d, u] = heap.top();
        heap.pop();
        if (done[u]) continue;
        done[u] = 1;
        if (u == dst) break;
        // Ground stations only terminate routes; they do not relay.
        if (u != src && graph.node(u).is_station) continue;
        for (const LinkEdge& e : graph.neighbors(u)) {
            if (done[e.to]) continue;
            const double nd = d + e.latency_s;
            if (nd < dist[e.to]) {
                dist[e.to] = nd;
                pred[e.to] = u;
                heap.emplace(nd, e.to);
            } else if (nd == dist[e.to] && pred[e.to] != u) {
                auto candidate = path_to(u);
                candidate.push_back(e.to);
                if (std::lexicographical_compare(candidate.begin(), candidate.end(), path_to(e.to).begin(),
                                                 path_to(e.to).end()))
                    pred[e.to] = u;
            }
        }
    }
    if (dist[dst] == kInf) return std::nullopt;

    PathResult out;
    out.nodes = path_to(dst);
    for (std::size_t k = 0; k + 1 < out.nodes.size(); ++k) {
        const auto e = graph.edge(out.nodes[k], out.nodes[k + 1]);
        out.total_length_km += e->length_km;
        out.total_latency_ms += e->latency_s * 1000.0;
    }
    const int satellites = static_cast<int>(out.nodes.size()) - 2;
    out.lisl_count = std::max(satellites - 1, 0);
    return out;
}

struct SlotRecord {
    int slot_index = 0;
    std::optional<PathResult> path;  ///< empty when unreachable
};

struct SlotSeries {
    std::vector<SlotRecord> slots;
    double mean_latency_ms = 0.0;
    double mean_length_km = 0.0;
    int unreachable_count = 0;
    /// LISL count -> number of reachable slots.
    std::map<int, int> lisl_histogram;

    int slot_count() const { return static_cast<int>(slots.size()); }
    int reachable_count() const { return slot_count() - unreachable_count; }
};

struct SimulationSettings {
    WalkerConfig constellation{};
    double lisl_range_km = 5016.0;
    EarthModel earth{};
    double duration_s = 3600.0;
    double dt_s = 1.0;
    /// Worker threads for the slot loop; 0 picks the hardware concurrency.
    unsigned threads = 0;

    int slot_count() const {
        if (!(dt_s > 0.0) || !(duration_s > 0.0)) throw std::invalid_argument("duration and dt must be > 0");
        const double n = duration_s / dt_s;
        const double rounded = std::round(n);
        if (std::abs(n - rounded) > 1e-9 * std::max(1.0, n) || rounded < 1.0)
            throw std::invalid_argument("duration must be a positive multiple of dt");
        return static_cast<int>(rounded);
    }
};

/// Route one station pair at a single instant.
inline std::optional<PathResult> route_at(const std::vector<OrbitalElements>& elements, double t_s,
                                          const GroundStation& a, const GroundStation& b,
                                          const SimulationSettings& settings) {
    const auto sats = propagate_all(elements, t_s, settings.constellation, settings.earth);
    const GroundStation pair[2] = {a, b};
    const LinkGraph graph = build_graph(sats, pair, settings.lisl_range_km, settings.earth);
    return shortest_path(graph, 0, 1);
}

inline void summarize(SlotSeries& series) {
    double latency_sum = 0.0, length_sum = 0.0;
    series.unreachable_count = 0;
    series.lisl_histogram.clear();
    for (const auto& rec : series.slots) {
        if (!rec.path) {
            ++series.unreachable_count;
            continue;
        }
        latency_sum += rec.path->total_latency_ms;
        length_sum += rec.path->total_length_km;
        ++series.lisl_histogram[rec.path->lisl_count];
    }
    const int reachable = series.reachable_count();
    series.mean_latency_ms = reachable > 0 ? latency_sum / reachable : std::numeric_limits<double>::quiet_NaN();
    series.mean_length_km = reachable > 0 ? length_sum / reachable : std::numeric_limits<double>::quiet_NaN();
}

/// Propagate, link and route every slot; unreachable slots are counted and
/// left out of the means.
inline SlotSeries simulate_connection(const SimulationSettings& settings, const GroundStation& a,
                                      const GroundStation& b) {
    settings.constellation.validate();
    settings.earth.validate();
    const int n = settings.slot_count();
    const auto elements = generate_walker(settings.constellation);

    SlotSeries series;
    series.slots.resize(n);
    std::atomic<int> next{0};
    std::mutex error_mutex;
    std::exception_ptr error;
    const auto worker = [&] {
        try {
            for (int k = next++; k < n; k = next++) {
                auto path = route_at(elements, k * settings.dt_s, a, b, settings);
                if (path) path->slot_index = k;
                series.slots[k] = {k, std::move(path)};
            }
        } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
            next = n;
        }
    };
    unsigned threads = settings.threads ? settings.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(n));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    if (error) std::rethrow_exception(error);
    summarize(series);
    return series;
}

}  // namespace xover
