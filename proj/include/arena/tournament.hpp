#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "arena/config.hpp"
#include "arena/policies.hpp"
#include "arena/rating.hpp"
#include "arena/scoring.hpp"

namespace arena {

struct MatchSpec {
    std::string match_id;
    std::uint64_t seed = 0;
    SimConfig cfg;
    std::array<std::string, kTeamCount> slots{};  // policy ids, pre-shuffle
    std::uint64_t slot_permutation_seed = 0;
};

// Per-match team shuffle: team t is played by slots[perm[t]].
std::array<int, kTeamCount> slot_permutation(const MatchSpec& spec);
std::array<std::string, kTeamCount> assigned_slots(const MatchSpec& spec);

struct MatchRecord {
    std::string match_id;
    MatchSpec spec;
    bool error = false;        // policy failed to load; never rated
    std::string error_text;
    MatchScore score{};
    std::string replay_path;   // empty when the replay was not persisted
    std::uint64_t state_hash = 0;
    std::int64_t duration_ms = 0;
};

// Maps a policy id to a fresh policy instance. The default resolver is
// make_policy, so builtin names and ext: commands are their own ids.
using PolicyResolver = std::function<std::unique_ptr<TeamPolicy>(const std::string&)>;
const PolicyResolver& builtin_resolver();

// Simulates the spec to termination. A non-empty replay_dir persists the
// replay as <match_id>.jsonl inside it. Policy-load failures come back as
// error records instead of throwing.
MatchRecord run_match(const MatchSpec& spec, const std::string& replay_dir = "",
                      const PolicyResolver& resolve = builtin_resolver());

// One result-store line: compact JSON whose "crc" field checksums the rest
// of the line. Round-trips exactly; record_from_line throws on damage.
std::string record_to_line(const MatchRecord& record);
MatchRecord record_from_line(const std::string& line);

// The 15 built-in opponents for a PvE stage (1 or 2).
std::vector<std::string> stage_builtins(int stage);

struct PveReport {
    std::string candidate;
    int stage = 1;
    std::vector<MatchRecord> records;
    std::vector<int> ranks;  // candidate's rank per round
    double ratio = 0.0;
    bool stage2_eligible = false;
};

// Appendix-style screening: `rounds` matches against the stage's built-in
// set, candidate slot shuffled per match; eligibility at ratio >= gate.
PveReport pve_eval(const std::string& candidate, int stage, int rounds, std::uint64_t seed,
                   const SimConfig& cfg, double gate = 0.4, const std::string& replay_dir = "",
                   const PolicyResolver& resolve = builtin_resolver());

struct Submission {
    std::string id;
    std::string policy;  // resolver spec
};

// Schedules matches until every submission holds at least per_submission
// slot appearances: the least-seen submission is focal, opponents drawn
// uniformly from the rest (with replacement only when the pool is short).
std::vector<MatchSpec> pvp_schedule(const std::vector<Submission>& pool, int per_submission,
                                    std::uint64_t seed, const SimConfig& cfg,
                                    const std::string& id_prefix = "m");

enum class Cadence { Daily, Weekly };

struct CampaignConfig {
    int pve_rounds = 10;
    double stage_gate = 0.4;
    int daily_matches = 100;    // per-submission appearances
    int weekly_matches = 1000;
    int parallelism = 1;
    bool deterministic_order = true;  // rate in schedule order, not completion order
    bool write_replays = false;       // keep replays under store_dir/replays
    std::string store_dir;
    SimConfig match_cfg;
};

struct LeaderboardRow {
    std::string submission;
    Rating rating;
    int matches = 0;

    double conservative() const { return leaderboard_score(rating); }
};

// Runs (or resumes) one campaign over the pool. The record store is
// records.jsonl in store_dir: append-only, one checksummed line per match,
// a torn final line from a crash is dropped, any other damage refuses the
// run. Matches already in the store are never re-run or re-rated. Ratings
// are rebuilt from the store on every run (ratings.jsonl and
// leaderboard.csv are derived artifacts), so resuming cannot double-rate.
std::vector<LeaderboardRow> run_campaign(const CampaignConfig& cfg, Cadence cadence,
                                         const std::vector<Submission>& pool,
                                         std::uint64_t seed,
                                         const PolicyResolver& resolve = builtin_resolver());

}  // namespace arena
