#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdlib>

namespace arena {

// Row/column tile coordinate. Row 0 is the top edge.
struct Coord {
    int r = 0;
    int c = 0;

    friend bool operator==(const Coord&, const Coord&) = default;
};

inline int chebyshev(Coord a, Coord b) {
    return std::max(std::abs(a.r - b.r), std::abs(a.c - b.c));
}

inline int manhattan(Coord a, Coord b) {
    return std::abs(a.r - b.r) + std::abs(a.c - b.c);
}

enum class Direction : std::uint8_t { North, South, East, West, Stay };

inline constexpr std::array<Direction, 4> kCardinalDirections = {
    Direction::North, Direction::South, Direction::East, Direction::West};

inline Coord step(Coord from, Direction d) {
    switch (d) {
        case Direction::North: return {from.r - 1, from.c};
        case Direction::South: return {from.r + 1, from.c};
        case Direction::East: return {from.r, from.c + 1};
        case Direction::West: return {from.r, from.c - 1};
        case Direction::Stay: return from;
    }
    return from;
}

inline const char* direction_name(Direction d) {
    switch (d) {
        case Direction::North: return "N";
        case Direction::South: return "S";
        case Direction::East: return "E";
        case Direction::West: return "W";
        case Direction::Stay: return "X";
    }
    return "X";
}

// Inclusive axis-aligned rectangle of tiles.
struct Rect {
    int lo_r = 0;
    int lo_c = 0;
    int hi_r = 0;
    int hi_c = 0;

    friend bool operator==(const Rect&, const Rect&) = default;

    bool contains(Coord p) const {
        return p.r >= lo_r && p.r <= hi_r && p.c >= lo_c && p.c <= hi_c;
    }

    bool contains(const Rect& other) const {
        return other.lo_r >= lo_r && other.hi_r <= hi_r && other.lo_c >= lo_c &&
               other.hi_c <= hi_c;
    }

    // Chebyshev distance from p to the nearest tile of the rectangle; 0 inside.
    int distance(Coord p) const {
        int dr = std::max({lo_r - p.r, p.r - hi_r, 0});
        int dc = std::max({lo_c - p.c, p.c - hi_c, 0});
        return std::max(dr, dc);
    }

    // Nearest point of the rectangle to p (p itself when inside).
    Coord clamp(Coord p) const {
        return {std::clamp(p.r, lo_r, hi_r), std::clamp(p.c, lo_c, hi_c)};
    }
};

}  // namespace arena
