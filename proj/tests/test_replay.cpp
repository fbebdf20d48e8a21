#include <doctest.h>

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "arena/engine.hpp"
#include "arena/policies.hpp"
#include "arena/replay.hpp"
#include "arena/rng.hpp"
#include "arena/scoring.hpp"

using namespace arena;

namespace {

SimConfig small_cfg() {
    SimConfig cfg;
    cfg.map.size = 64;
    cfg.map.npc_count = 24;
    cfg.horizon = 260;
    return cfg;
}

std::uint64_t policy_seed(std::uint64_t match_seed, int team, int tick) {
    return derive_seed(derive_seed(match_seed, 100 + team), tick);
}

struct Match {
    std::unique_ptr<Sim> sim;
    std::array<std::string, kTeamCount> names;
    std::uint64_t seed;
};

Match run_match(const SimConfig& cfg, std::uint64_t seed, int max_ticks) {
    static const std::vector<std::string> specs = {"mixture", "combat",   "reckless",
                                                   "stay",    "ruthless", "coward"};
    Match m;
    m.sim = std::make_unique<Sim>(cfg, seed);
    m.seed = seed;
    std::vector<std::unique_ptr<TeamPolicy>> pols;
    for (int t = 0; t < kTeamCount; ++t) {
        pols.push_back(make_policy(specs[t % specs.size()]));
        pols.back()->set_config(cfg);
        m.names[t] = pols.back()->name();
    }
    for (int i = 0; i < max_ticks && !m.sim->terminal(); ++i) {
        MatchActions actions{};
        const int tick = m.sim->world().tick;
        for (int t = 0; t < kTeamCount; ++t) {
            actions[t] = pols[t]->act(m.sim->obs(t), policy_seed(seed, t, tick));
        }
        m.sim->step(actions);
    }
    return m;
}

// One finished match shared across cases.
const Match& sample_match() {
    static const Match m = run_match(small_cfg(), 424243, 400);
    return m;
}

const Replay& sample_replay() {
    static const Replay r =
        make_replay(*sample_match().sim, sample_match().seed, sample_match().names);
    return r;
}

const std::string& sample_bytes() {
    static const std::string bytes = replay_to_string(sample_replay());
    return bytes;
}

std::string load_error(const std::string& bytes) {
    try {
        replay_from_string(bytes);
    } catch (const std::exception& e) {
        return e.what();
    }
    return "";
}

bool same_score(const MatchScore& a, const MatchScore& b) {
    for (int t = 0; t < kTeamCount; ++t) {
        const TeamScore& x = a.teams[t];
        const TeamScore& y = b.teams[t];
        if (x.defeat_units != y.defeat_units || x.survival_units != y.survival_units ||
            x.total_units != y.total_units || x.rank != y.rank) {
            return false;
        }
    }
    return true;
}

}  // namespace

TEST_SUITE("replay") {

TEST_CASE("event codec round-trips every field and omits defaults") {
    Replay r;
    r.header.seed = 7;
    r.header.policies.fill("stay");
    r.header.horizon = r.header.cfg.horizon;
    ReplayTick t0;
    t0.tick = 0;
    t0.events.push_back({});  // all defaults: just {"k":"mv"}
    Event full{.kind = EventKind::Loot,
               .tick = 2,
               .actor = 5,
               .target = 130,
               .pos = {2, 9},
               .value = 4,
               .item = ItemKind::Sword,
               .item_level = 3,
               .quantity = 1,
               .style = AttackStyle::Range,
               .aux = 1};
    ReplayTick t2;
    t2.tick = 2;
    t2.events.push_back(full);
    r.ticks = {t0, ReplayTick{1, {}}, t2};

    const std::string bytes = replay_to_string(r);
    CHECK(bytes.find(R"({"k":"mv"})") != std::string::npos);
    CHECK(bytes.find(R"("i":"sword","il":3)") != std::string::npos);

    const Replay back = replay_from_string(bytes);
    REQUIRE(back.ticks.size() == 3);
    CHECK(back.ticks[0].events.at(0) == Event{});
    CHECK(back.ticks[1].tick == 1);
    CHECK(back.ticks[1].events.empty());
    CHECK(back.ticks[2].events.at(0) == full);
    CHECK(back.header.seed == 7);
    CHECK(back.header.policies[15] == "stay");
}

TEST_CASE("replay of a full match round-trips byte-for-byte") {
    const Replay& r = sample_replay();
    REQUIRE(sample_match().sim->terminal());
    CHECK(int(r.ticks.size()) == sample_match().sim->world().tick);

    const Replay back = replay_from_string(sample_bytes());
    CHECK(back.header.seed == r.header.seed);
    CHECK(back.header.horizon == 260);
    CHECK(back.header.cfg.serialize() == r.header.cfg.serialize());
    CHECK(back.header.policies == r.header.policies);
    CHECK(back.state_hash == r.state_hash);
    CHECK(same_score(back.score, r.score));
    REQUIRE(back.ticks.size() == r.ticks.size());
    CHECK(back.flat_events() == r.flat_events());

    CHECK(replay_to_string(back) == sample_bytes());
}

TEST_CASE("identical runs serialize to identical bytes") {
    SimConfig cfg = small_cfg();
    cfg.horizon = 120;
    const Match a = run_match(cfg, 99, 200);
    const Match b = run_match(cfg, 99, 200);
    const std::string bytes_a = replay_to_string(make_replay(*a.sim, a.seed, a.names));
    const std::string bytes_b = replay_to_string(make_replay(*b.sim, b.seed, b.names));
    CHECK(bytes_a == bytes_b);

    const Match c = run_match(cfg, 100, 200);
    CHECK(replay_to_string(make_replay(*c.sim, c.seed, c.names)) != bytes_a);
}

TEST_CASE("stored score matches live scoring and event reconstruction") {
    const Match& m = sample_match();
    const Replay& r = sample_replay();

    CHECK(same_score(r.score, match_score(m.sim->world(), m.sim->cfg())));
    CHECK(same_score(r.score, score_from_events(r.flat_events(), r.header.cfg)));

    const auto live = team_outcomes(m.sim->world(), m.sim->cfg());
    const auto rebuilt = outcomes_from_events(r.flat_events(), r.header.cfg);
    for (int t = 0; t < kTeamCount; ++t) {
        CHECK(rebuilt[t].team_id == live[t].team_id);
        CHECK(rebuilt[t].defeat_credits == live[t].defeat_credits);
        CHECK(rebuilt[t].death_tick == live[t].death_tick);
        CHECK(rebuilt[t].survivors_at_end == live[t].survivors_at_end);
        CHECK(rebuilt[t].level_sum == live[t].level_sum);
    }
}

TEST_CASE("tampered or truncated files are rejected") {
    const std::string& bytes = sample_bytes();

    SUBCASE("version bump") {
        std::string bad = bytes;
        const std::string tag = "\"format_version\":1";
        bad.replace(bad.find(tag), tag.size(), "\"format_version\":2");
        CHECK(load_error(bad).find("format_version") != std::string::npos);
    }
    SUBCASE("missing footer") {
        std::string bad = bytes;
        bad.resize(bad.rfind('\n', bad.size() - 2) + 1);
        CHECK(load_error(bad).find("footer") != std::string::npos);
    }
    SUBCASE("trailing bytes cut mid-line") {
        std::string bad = bytes.substr(0, bytes.size() - 3);
        CHECK(load_error(bad).find("unterminated") != std::string::npos);
    }
    SUBCASE("flipped byte in the body") {
        std::string bad = bytes;
        const std::size_t at = bad.find("\"events\":[") + 12;
        bad[at] = bad[at] == 'k' ? 'q' : 'k';
        CHECK(load_error(bad).find("checksum") != std::string::npos);
    }
    SUBCASE("removed tick line") {
        std::string bad = bytes;
        const std::size_t first = bad.find('\n') + 1;
        const std::size_t second = bad.find('\n', first) + 1;
        bad.erase(first, second - first);
        CHECK(load_error(bad).find("checksum") != std::string::npos);
    }
    SUBCASE("out-of-order ticks survive checksumming but fail validation") {
        Replay shuffled = sample_replay();
        REQUIRE(shuffled.ticks.size() > 7);
        std::swap(shuffled.ticks[5], shuffled.ticks[6]);
        CHECK(load_error(replay_to_string(shuffled)).find("out of order") != std::string::npos);
    }
    SUBCASE("empty input") {
        CHECK(load_error("").find("footer") != std::string::npos);
    }
}

TEST_CASE("write_replay and read_replay round-trip through a file") {
    namespace fs = std::filesystem;
    const fs::path path = fs::temp_directory_path() / "arena_replay_roundtrip.jsonl";
    write_replay(sample_replay(), path.string());
    const Replay back = read_replay(path.string());
    CHECK(back.flat_events() == sample_replay().flat_events());
    CHECK(back.state_hash == sample_replay().state_hash);
    fs::remove(path);

    CHECK_THROWS(read_replay((fs::temp_directory_path() / "no_such_replay.jsonl").string()));
}

TEST_CASE("make_replay refuses an unfinished match") {
    SimConfig cfg = small_cfg();
    Sim sim(cfg, 1);
    CHECK_THROWS(make_replay(sim, 1, sample_match().names));
}

TEST_CASE("final tick carries the survivor snapshot") {
    const Replay& r = sample_replay();
    const auto outcomes = team_outcomes(sample_match().sim->world(), small_cfg());
    int survivors = 0;
    for (const TeamOutcome& o : outcomes) survivors += o.survivors_at_end;
    int snapshot = 0;
    for (const Event& e : r.ticks.back().events) {
        if (e.kind == EventKind::Survive) ++snapshot;
    }
    CHECK(snapshot == survivors);
    CHECK(survivors > 0);
}

}  // TEST_SUITE
