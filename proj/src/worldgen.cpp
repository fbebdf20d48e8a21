#include "arena/worldgen.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "arena/rng.hpp"

namespace arena {
namespace {

using json = nlohmann::ordered_json;

constexpr std::uint64_t kStreamTerrain = 1;
constexpr std::uint64_t kStreamSpawn = 2;
constexpr std::uint64_t kStreamNpc = 3;

// Cells closer than this to the border stay grass so every map has room for
// the 16 border spawn clusters.
constexpr int kSpawnRingDepth = 2;

std::vector<Coord> interior_cells(const GameMap& map) {
    std::vector<Coord> cells;
    const int s = map.size();
    cells.reserve(static_cast<std::size_t>(s - 6) * (s - 6));
    for (int r = kSpawnRingDepth + 1; r < s - kSpawnRingDepth - 1; ++r) {
        for (int c = kSpawnRingDepth + 1; c < s - kSpawnRingDepth - 1; ++c) {
            cells.push_back({r, c});
        }
    }
    return cells;
}

class Placer {
  public:
    Placer(GameMap& map, std::vector<Coord> domain, Rng& rng)
        : map_(map), domain_(std::move(domain)), rng_(rng),
          used_(map.size() * map.size(), 0) {}

    // Claims n free domain cells one by one at random positions.
    std::vector<Coord> scatter(TerrainKind kind, int n) {
        std::vector<Coord> picked;
        std::vector<Coord> free = free_cells();
        rng_.shuffle(free);
        for (int i = 0; i < n && i < static_cast<int>(free.size()); ++i) {
            claim(free[i], kind);
            picked.push_back(free[i]);
        }
        return picked;
    }

    // Claims n cells as connected blobs grown by random walk.
    std::vector<Coord> blobs(TerrainKind kind, int n) {
        std::vector<Coord> picked;
        while (static_cast<int>(picked.size()) < n) {
            std::vector<Coord> free = free_cells();
            if (free.empty()) break;
            Coord seed = free[rng_.index(free.size())];
            const int want = std::min<int>(n - static_cast<int>(picked.size()),
                                           static_cast<int>(rng_.uniform(8, 24)));
            claim(seed, kind);
            picked.push_back(seed);
            std::vector<Coord> frontier = {seed};
            int grown = 1;
            while (grown < want && !frontier.empty()) {
                const std::size_t fi = rng_.index(frontier.size());
                std::vector<Coord> open;
                for (Direction d : kCardinalDirections) {
                    const Coord q = step(frontier[fi], d);
                    if (is_free(q)) open.push_back(q);
                }
                if (open.empty()) {
                    frontier[fi] = frontier.back();
                    frontier.pop_back();
                    continue;
                }
                const Coord q = open[rng_.index(open.size())];
                claim(q, kind);
                picked.push_back(q);
                frontier.push_back(q);
                ++grown;
            }
        }
        return picked;
    }

    int free_count() const {
        int n = 0;
        for (Coord p : domain_) {
            if (!used_[p.r * map_.size() + p.c]) ++n;
        }
        return n;
    }

  private:
    std::vector<Coord> free_cells() const {
        std::vector<Coord> free;
        free.reserve(domain_.size());
        for (Coord p : domain_) {
            if (!used_[p.r * map_.size() + p.c]) free.push_back(p);
        }
        return free;
    }

    bool is_free(Coord p) const {
        if (p.r <= kSpawnRingDepth || p.c <= kSpawnRingDepth ||
            p.r >= map_.size() - kSpawnRingDepth - 1 ||
            p.c >= map_.size() - kSpawnRingDepth - 1) {
            return false;
        }
        return !used_[p.r * map_.size() + p.c];
    }

    void claim(Coord p, TerrainKind kind) {
        used_[p.r * map_.size() + p.c] = 1;
        map_.at(p).kind = kind;
    }

    GameMap& map_;
    std::vector<Coord> domain_;
    Rng& rng_;
    std::vector<std::uint8_t> used_;
};

}  // namespace

std::array<int, kTerrainKindCount> GameMap::histogram() const {
    std::array<int, kTerrainKindCount> h{};
    for (const Tile& t : tiles_) ++h[static_cast<int>(t.kind)];
    return h;
}

int map_quota(const MapGenConfig& cfg, TerrainKind kind) {
    if (kind == TerrainKind::Grass) return 0;
    const int s = cfg.size;
    const int domain = (s - 2 * (kSpawnRingDepth + 1)) * (s - 2 * (kSpawnRingDepth + 1));
    const double ratio = cfg.ratio(kind);
    if (ratio <= 0.0) return 0;
    return std::max(1, static_cast<int>(std::lround(ratio * domain)));
}

GameMap generate_map(const MapGenConfig& cfg) {
    cfg.validate();
    const int s = cfg.size;
    GameMap map(s, TerrainKind::Grass);

    for (int i = 0; i < s; ++i) {
        map.at({0, i}).kind = TerrainKind::Lava;
        map.at({s - 1, i}).kind = TerrainKind::Lava;
        map.at({i, 0}).kind = TerrainKind::Lava;
        map.at({i, s - 1}).kind = TerrainKind::Lava;
    }

    Rng rng(derive_seed(cfg.seed, kStreamTerrain));
    Placer placer(map, interior_cells(map), rng);

    const int water_quota = map_quota(cfg, TerrainKind::Water);
    const int fish_quota = map_quota(cfg, TerrainKind::Fish);
    const int total_quota = water_quota + fish_quota + map_quota(cfg, TerrainKind::Stone) +
                            map_quota(cfg, TerrainKind::Lava) +
                            map_quota(cfg, TerrainKind::Forest) +
                            map_quota(cfg, TerrainKind::Ore) +
                            map_quota(cfg, TerrainKind::Tree) +
                            map_quota(cfg, TerrainKind::Crystal) +
                            map_quota(cfg, TerrainKind::Herb);
    if (total_quota > placer.free_count()) {
        throw WorldgenError("terrain quotas exceed the generatable interior");
    }

    placer.blobs(TerrainKind::Stone, map_quota(cfg, TerrainKind::Stone));
    placer.scatter(TerrainKind::Lava, map_quota(cfg, TerrainKind::Lava));
    const std::vector<Coord> lake = placer.blobs(TerrainKind::Water, water_quota + fish_quota);

    // Fish tiles are carved out of lake cells, preferring shore cells an agent
    // can stand next to.
    std::vector<Coord> shore;
    std::vector<Coord> deep;
    for (Coord p : lake) {
        bool reachable = false;
        for (Direction d : kCardinalDirections) {
            const Coord q = step(p, d);
            if (map.in_bounds(q) && terrain_passable(map.kind(q))) {
                reachable = true;
                break;
            }
        }
        (reachable ? shore : deep).push_back(p);
    }
    rng.shuffle(shore);
    rng.shuffle(deep);
    shore.insert(shore.end(), deep.begin(), deep.end());
    for (int i = 0; i < fish_quota && i < static_cast<int>(shore.size()); ++i) {
        map.at(shore[i]).kind = TerrainKind::Fish;
    }

    placer.scatter(TerrainKind::Forest, map_quota(cfg, TerrainKind::Forest));
    placer.scatter(TerrainKind::Ore, map_quota(cfg, TerrainKind::Ore));
    placer.scatter(TerrainKind::Tree, map_quota(cfg, TerrainKind::Tree));
    placer.scatter(TerrainKind::Crystal, map_quota(cfg, TerrainKind::Crystal));
    placer.scatter(TerrainKind::Herb, map_quota(cfg, TerrainKind::Herb));

    return map;
}

TerrainKind tile_transition(TerrainKind kind) {
    const auto target = terrain_degrades_to(kind);
    if (!target) {
        throw WorldgenError("terrain is not harvestable: " +
                            std::string(kTerrainNames[static_cast<int>(kind)]));
    }
    return *target;
}

namespace {

// Inner border ring (distance 1) in clockwise walk order.
std::vector<Coord> ring_walk(int s) {
    std::vector<Coord> ring;
    for (int c = 1; c <= s - 2; ++c) ring.push_back({1, c});
    for (int r = 2; r <= s - 2; ++r) ring.push_back({r, s - 2});
    for (int c = s - 3; c >= 1; --c) ring.push_back({s - 2, c});
    for (int r = s - 3; r >= 2; --r) ring.push_back({r, 1});
    return ring;
}

}  // namespace

SpawnPlan spawn_positions(std::uint64_t seed, const GameMap& map) {
    const int s = map.size();
    std::vector<Coord> spawnable;
    for (int r = 0; r < s; ++r) {
        for (int c = 0; c < s; ++c) {
            const Coord p{r, c};
            const int bd = map.border_distance(p);
            if (bd >= 1 && bd <= kSpawnRingDepth && map.passable(p)) {
                spawnable.push_back(p);
            }
        }
    }
    if (static_cast<int>(spawnable.size()) < kAgentCount) {
        throw WorldgenError("insufficient spawnable tiles near the border");
    }

    Rng rng(derive_seed(seed, kStreamSpawn));
    const std::vector<Coord> ring = ring_walk(s);

    // Terrain holes can smear a cluster along the ring, so a given rotation
    // may violate the 8-tile separation guarantee; rotate and retry until one
    // fits. Deterministic: the offsets come from the seeded stream.
    std::vector<std::array<Coord, kTeamSize>> clusters;
    bool separated = false;
    for (int attempt = 0; attempt < 64 && !separated; ++attempt) {
        const std::size_t offset = rng.index(ring.size());
        clusters.clear();
        std::vector<std::uint8_t> claimed(spawnable.size(), 0);
        for (int t = 0; t < kTeamCount; ++t) {
            const Coord anchor = ring[(offset + t * ring.size() / kTeamCount) % ring.size()];
            std::vector<std::size_t> order(spawnable.size());
            for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
            std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                const int da = chebyshev(spawnable[a], anchor);
                const int db = chebyshev(spawnable[b], anchor);
                if (da != db) return da < db;
                if (spawnable[a].r != spawnable[b].r) return spawnable[a].r < spawnable[b].r;
                return spawnable[a].c < spawnable[b].c;
            });
            std::array<Coord, kTeamSize> cluster{};
            int got = 0;
            for (std::size_t i : order) {
                if (claimed[i]) continue;
                claimed[i] = 1;
                cluster[got++] = spawnable[i];
                if (got == kTeamSize) break;
            }
            if (got < kTeamSize) {
                throw WorldgenError("insufficient spawnable tiles near the border");
            }
            clusters.push_back(cluster);
        }

        separated = true;
        for (int a = 0; separated && a < kTeamCount; ++a) {
            for (int b = a + 1; separated && b < kTeamCount; ++b) {
                for (Coord pa : clusters[a]) {
                    for (Coord pb : clusters[b]) {
                        if (chebyshev(pa, pb) < 8) {
                            separated = false;
                            break;
                        }
                    }
                    if (!separated) break;
                }
            }
        }
    }
    if (!separated) {
        throw WorldgenError("spawn clusters closer than 8 tiles");
    }

    const std::vector<std::size_t> perm = rng.permutation(kTeamCount);
    SpawnPlan plan;
    for (int t = 0; t < kTeamCount; ++t) plan.team_slots[t] = clusters[perm[t]];
    return plan;
}

int npc_level_for(const GameMap& map, Coord pos) {
    const int d_max = map.max_center_distance();
    const int d = map.center_distance(pos);
    const int level = 1 + 9 * (d_max - d) / d_max;
    return std::clamp(level, 1, 10);
}

std::vector<NpcSpawn> npc_placement(std::uint64_t seed, const GameMap& map, int count) {
    std::vector<Coord> domain;
    for (int r = 0; r < map.size(); ++r) {
        for (int c = 0; c < map.size(); ++c) {
            const Coord p{r, c};
            if (map.border_distance(p) > kSpawnRingDepth && map.passable(p)) {
                domain.push_back(p);
            }
        }
    }
    Rng rng(derive_seed(seed, kStreamNpc));
    rng.shuffle(domain);

    const int n = std::min<int>(std::max(count, 0), static_cast<int>(domain.size()));
    std::vector<NpcSpawn> npcs;
    npcs.reserve(n);
    for (int i = 0; i < n; ++i) {
        NpcSpawn npc;
        npc.pos = domain[i];
        npc.type = static_cast<NpcType>(i % 3);
        npc.level = npc_level_for(map, npc.pos);
        npcs.push_back(npc);
    }
    return npcs;
}

std::string map_to_json(const GameMap& map, std::uint64_t seed) {
    json runs = json::array();
    const auto& tiles = map.tiles();
    std::size_t i = 0;
    while (i < tiles.size()) {
        std::size_t j = i;
        while (j < tiles.size() && tiles[j].kind == tiles[i].kind) ++j;
        runs.push_back({static_cast<int>(tiles[i].kind), j - i});
        i = j;
    }
    json out;
    out["version"] = 1;
    out["size"] = map.size();
    out["seed"] = seed;
    out["tiles"] = std::move(runs);
    return out.dump();
}

GameMap map_from_json(const std::string& text) {
    const json in = json::parse(text);
    if (in.at("version").get<int>() != 1) {
        throw WorldgenError("unsupported map snapshot version");
    }
    const int s = in.at("size").get<int>();
    GameMap map(s, TerrainKind::Grass);
    std::size_t pos = 0;
    for (const auto& run : in.at("tiles")) {
        const int kind = run.at(0).get<int>();
        const std::size_t len = run.at(1).get<std::size_t>();
        if (kind < 0 || kind >= kTerrainKindCount ||
            pos + len > map.tiles().size()) {
            throw WorldgenError("corrupt map snapshot");
        }
        for (std::size_t k = 0; k < len; ++k) {
            map.tiles()[pos++].kind = static_cast<TerrainKind>(kind);
        }
    }
    if (pos != map.tiles().size()) throw WorldgenError("corrupt map snapshot");
    return map;
}

}  // namespace arena
