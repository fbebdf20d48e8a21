#include "arena/replay.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string_view>

#include <json.hpp>

#include "arena/hash.hpp"
#include "arena/items.hpp"

namespace arena {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& what) {
    throw std::runtime_error("replay: " + what);
}

EventKind kind_from_tag(std::string_view tag) {
    for (int k = 0; k < kEventKindCount; ++k) {
        if (kEventTags[k] == tag) return static_cast<EventKind>(k);
    }
    fail("unknown event tag '" + std::string(tag) + "'");
}

ItemKind item_from_name(std::string_view name) {
    for (int k = 0; k < kItemKindCount; ++k) {
        if (kItemNames[k] == name) return static_cast<ItemKind>(k);
    }
    fail("unknown item '" + std::string(name) + "'");
}

// Fields at their defaults are omitted; `i`/`il` travel together and are
// present exactly when an item is attached (item_level != 0).
Json event_to_json(const Event& e) {
    Json out;
    out["k"] = kEventTags[static_cast<int>(e.kind)];
    if (e.actor != -1) out["a"] = e.actor;
    if (e.target != -1) out["g"] = e.target;
    if (e.pos != Coord{}) out["p"] = Json::array({e.pos.r, e.pos.c});
    if (e.value != 0) out["v"] = e.value;
    if (e.item_level != 0) {
        out["i"] = kItemNames[static_cast<int>(e.item)];
        out["il"] = e.item_level;
    }
    if (e.quantity != 0) out["q"] = e.quantity;
    if (e.style != AttackStyle::Melee) out["s"] = static_cast<int>(e.style);
    if (e.aux != 0) out["x"] = e.aux;
    return out;
}

Event event_from_json(const Json& j, int tick) {
    if (!j.is_object() || !j.contains("k") || !j["k"].is_string()) fail("malformed event");
    Event e;
    e.kind = kind_from_tag(j["k"].get<std::string>());
    e.tick = tick;
    if (j.contains("a")) e.actor = j["a"].get<int>();
    if (j.contains("g")) e.target = j["g"].get<int>();
    if (j.contains("p")) {
        const Json& p = j["p"];
        if (!p.is_array() || p.size() != 2) fail("malformed event position");
        e.pos = {p[0].get<int>(), p[1].get<int>()};
    }
    if (j.contains("v")) e.value = j["v"].get<std::int64_t>();
    if (j.contains("i") != j.contains("il")) fail("item without level");
    if (j.contains("i")) {
        e.item = item_from_name(j["i"].get<std::string>());
        e.item_level = j["il"].get<int>();
    }
    if (j.contains("q")) e.quantity = j["q"].get<int>();
    if (j.contains("s")) {
        const int s = j["s"].get<int>();
        if (s < 0 || s > 2) fail("bad attack style");
        e.style = static_cast<AttackStyle>(s);
    }
    if (j.contains("x")) e.aux = j["x"].get<int>();
    return e;
}

Json parse_line(const std::string& line, const char* what) {
    Json j = Json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) fail(std::string("malformed ") + what + " line");
    return j;
}

}  // namespace

std::vector<Event> Replay::flat_events() const {
    std::vector<Event> out;
    for (const ReplayTick& t : ticks) {
        for (Event e : t.events) {
            e.tick = t.tick;  // the owning line is authoritative, as on disk
            out.push_back(e);
        }
    }
    return out;
}

Replay make_replay(const Sim& sim, std::uint64_t seed,
                   const std::array<std::string, kTeamCount>& policies) {
    if (!sim.terminal()) fail("match still running");
    Replay r;
    r.header.seed = seed;
    r.header.cfg = sim.cfg();
    r.header.policies = policies;
    r.header.horizon = sim.cfg().horizon;
    // world().tick is one past the last executed tick once terminal.
    const int last_tick = sim.world().tick - 1;
    for (int t = 0; t <= last_tick; ++t) {
        auto [begin, end] = sim.tick_events(t);
        ReplayTick rt;
        rt.tick = t;
        rt.events.assign(sim.events().begin() + begin, sim.events().begin() + end);
        r.ticks.push_back(std::move(rt));
    }
    r.state_hash = sim.state_hash();
    r.score = match_score(sim.world(), sim.cfg());
    return r;
}

std::string replay_to_string(const Replay& replay) {
    std::string out;
    {
        Json header;
        header["format_version"] = replay.header.format_version;
        header["seed"] = replay.header.seed;
        header["cfg"] = replay.header.cfg.serialize();
        header["policies"] = replay.header.policies;
        header["horizon"] = replay.header.horizon;
        out += header.dump();
        out += '\n';
    }
    for (const ReplayTick& t : replay.ticks) {
        Json line;
        line["t"] = t.tick;
        Json events = Json::array();
        for (const Event& e : t.events) events.push_back(event_to_json(e));
        line["events"] = std::move(events);
        out += line.dump();
        out += '\n';
    }
    Json footer;
    footer["state_hash"] = replay.state_hash;
    Json score = Json::array();
    for (const TeamScore& s : replay.score.teams) {
        score.push_back(Json::array({s.defeat_units, s.survival_units, s.total_units, s.rank}));
    }
    footer["score"] = std::move(score);
    footer["checksum"] = fnv64(out);
    out += footer.dump();
    out += '\n';
    return out;
}

Replay replay_from_string(const std::string& text) {
    std::vector<std::string> lines;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string::npos) fail("truncated file: unterminated line");
        lines.push_back(text.substr(pos, nl - pos));
        pos = nl + 1;
    }
    if (lines.size() < 2) fail("truncated file: missing footer");

    Replay r;
    {
        Json header = parse_line(lines.front(), "header");
        if (!header.contains("format_version")) fail("missing format_version");
        r.header.format_version = header["format_version"].get<int>();
        if (r.header.format_version != kReplayFormatVersion) {
            fail("unsupported format_version " + std::to_string(r.header.format_version));
        }
        r.header.seed = header["seed"].get<std::uint64_t>();
        r.header.cfg = SimConfig::parse(header["cfg"].get<std::string>());
        const Json& pols = header["policies"];
        if (!pols.is_array() || pols.size() != kTeamCount) fail("bad policies list");
        for (int i = 0; i < kTeamCount; ++i) r.header.policies[i] = pols[i].get<std::string>();
        r.header.horizon = header["horizon"].get<int>();
    }

    Json footer = parse_line(lines.back(), "footer");
    if (!footer.contains("checksum") || !footer.contains("state_hash") ||
        !footer.contains("score")) {
        fail("truncated file: missing footer");
    }
    const std::size_t body_len = text.size() - lines.back().size() - 1;
    if (fnv64(std::string_view(text).substr(0, body_len)) !=
        footer["checksum"].get<std::uint64_t>()) {
        fail("checksum mismatch");
    }
    r.state_hash = footer["state_hash"].get<std::uint64_t>();
    const Json& score = footer["score"];
    if (!score.is_array() || score.size() != kTeamCount) fail("bad score table");
    for (int i = 0; i < kTeamCount; ++i) {
        const Json& row = score[i];
        if (!row.is_array() || row.size() != 4) fail("bad score row");
        TeamScore& s = r.score.teams[i];
        s.team_id = i;
        s.defeat_units = row[0].get<std::int64_t>();
        s.survival_units = row[1].get<std::int64_t>();
        s.total_units = row[2].get<std::int64_t>();
        s.rank = row[3].get<int>();
    }

    int prev_tick = -1;
    for (std::size_t i = 1; i + 1 < lines.size(); ++i) {
        Json j = parse_line(lines[i], "tick");
        ReplayTick t;
        t.tick = j["t"].get<int>();
        if (t.tick <= prev_tick) fail("tick lines out of order");
        prev_tick = t.tick;
        const Json& events = j["events"];
        if (!events.is_array()) fail("malformed tick line");
        for (const Json& ej : events) t.events.push_back(event_from_json(ej, t.tick));
        r.ticks.push_back(std::move(t));
    }
    return r;
}

void write_replay(const Replay& replay, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail("cannot open " + path + " for writing");
    const std::string text = replay_to_string(replay);
    out.write(text.data(), std::streamsize(text.size()));
    if (!out) fail("write failed: " + path);
}

Replay read_replay(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return replay_from_string(buf.str());
}

std::array<TeamOutcome, kTeamCount> outcomes_from_events(const std::vector<Event>& events,
                                                         const SimConfig& cfg) {
    std::array<TeamOutcome, kTeamCount> outcomes;
    for (int t = 0; t < kTeamCount; ++t) outcomes[t].team_id = t;
    for (const Event& e : events) {
        if (e.kind == EventKind::Death && e.actor >= 0 && e.actor < kAgentCount) {
            TeamOutcome& o = outcomes[e.actor / kTeamSize];
            o.death_tick = std::max(o.death_tick, e.tick);
            o.level_sum += e.quantity;
            if (e.aux == static_cast<int>(DeathCause::Slain) && e.target >= 0 &&
                e.target < kAgentCount) {
                outcomes[e.target / kTeamSize].defeat_credits += 1;
            }
        } else if (e.kind == EventKind::Survive && e.actor >= 0 && e.actor < kAgentCount) {
            TeamOutcome& o = outcomes[e.actor / kTeamSize];
            o.survivors_at_end += 1;
            o.level_sum += e.aux;
        }
    }
    for (TeamOutcome& o : outcomes) {
        if (o.survivors_at_end > 0) o.death_tick = cfg.horizon + 1;
    }
    return outcomes;
}

MatchScore score_from_events(const std::vector<Event>& events, const SimConfig& cfg) {
    return match_score_from_outcomes(outcomes_from_events(events, cfg));
}

}  // namespace arena
