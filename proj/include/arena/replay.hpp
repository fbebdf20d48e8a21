#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "arena/config.hpp"
#include "arena/engine.hpp"
#include "arena/events.hpp"
#include "arena/scoring.hpp"

namespace arena {

inline constexpr int kReplayFormatVersion = 1;

// Line-delimited JSON on disk: a header line, one line per tick
// ({"t":N,"events":[...]}), and a footer carrying the final-state hash, the
// match score, and an FNV-1a checksum of every byte above it.
struct ReplayHeader {
    int format_version = kReplayFormatVersion;
    std::uint64_t seed = 0;
    SimConfig cfg;
    std::array<std::string, kTeamCount> policies{};
    int horizon = 0;  // mirrors cfg.horizon for quick inspection
};

struct ReplayTick {
    int tick = 0;
    std::vector<Event> events;
};

struct Replay {
    ReplayHeader header;
    std::vector<ReplayTick> ticks;
    std::uint64_t state_hash = 0;
    MatchScore score{};

    std::vector<Event> flat_events() const;
};

// Snapshots a finished match. Throws if the sim is not terminal.
Replay make_replay(const Sim& sim, std::uint64_t seed,
                   const std::array<std::string, kTeamCount>& policies);

// Stable byte encoding; equal replays serialize to equal bytes.
std::string replay_to_string(const Replay& replay);
Replay replay_from_string(const std::string& text);

void write_replay(const Replay& replay, const std::string& path);
Replay read_replay(const std::string& path);

// Rebuilds the match score from Death/Survive events alone, for auditing a
// replay against its recorded footer.
std::array<TeamOutcome, kTeamCount> outcomes_from_events(const std::vector<Event>& events,
                                                         const SimConfig& cfg);
MatchScore score_from_events(const std::vector<Event>& events, const SimConfig& cfg);

}  // namespace arena
