#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "arena/actions.hpp"
#include "arena/config.hpp"
#include "arena/observation.hpp"

namespace arena {

// A team controller: one observation in, eight agents' actions out.
// Policies self-mask -- everything they return must pass the engine's
// action validation for the observation they were shown. The two races a
// team cannot see coming (a target incapacitated by an earlier attacker,
// a listing taken by a lower-id buyer the same tick) are the engine's to
// resolve; everything else is the policy's job to avoid.
class TeamPolicy {
  public:
    virtual ~TeamPolicy() = default;
    virtual std::string name() const = 0;
    virtual bool deterministic() const { return true; }
    virtual TeamActions act(const TeamObservation& obs, std::uint64_t seed) = 0;

    // Match config the policy reasons with (level gates, bar thresholds).
    void set_config(const SimConfig& cfg) { cfg_ = cfg; }
    const SimConfig& config() const { return cfg_; }

  protected:
    SimConfig cfg_{};
};

// Built-ins: "mixture", "combat", "reckless", "ruthless", "coward", "stay".
// "ext:<command>" runs an external controller over the line protocol.
// Throws std::invalid_argument for anything else.
std::unique_ptr<TeamPolicy> make_policy(const std::string& spec);

// Drops every sub-action the engine would mask, judged from the observation
// alone. Built-ins run it as a safety net; external replies always pass
// through it. Also de-duplicates buy orders within the team so teammates
// never race each other for one listing.
void legalize(const SimConfig& cfg, const TeamObservation& obs, TeamActions& actions);

// Decodes one reply line of the external protocol. Malformed input yields
// all-Stay rather than an error; the engine treats silence and nonsense the
// same way.
TeamActions actions_from_json(const std::string& line);

}  // namespace arena
