#pragma once

#include <optional>
#include <string>
#include <vector>

#include "banditlb/policies.hpp"
#include "banditlb/runner.hpp"

namespace banditlb::config {

// Raised on malformed config text; the message names the offending key.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EnvSection {
    std::string family; // clipped_gaussian | bernoulli | bernoulli_mixture
    int arms = 0;
    std::vector<long> t_grid;
    std::optional<double> delta;
    std::string mode = "theorem1"; // theorem1 | theorem2 | gap
    std::optional<double> premise_constant;
    std::optional<double> gap;
    std::optional<double> alpha;
    std::optional<double> epsilon; // unset = per-horizon default
    std::string target = "all";    // all | 0 | 1..K
};

struct PolicySection {
    policies::Kind kind = policies::Kind::uniform;
    std::optional<double> delta;
    std::optional<double> eta;
    std::optional<double> gamma;
    std::optional<double> beta;
};

struct RunConfig {
    std::uint64_t master_seed = runner::kDefaultMasterSeed;
    int replications = 1;
    int workers = 0;
    std::string out_dir;
    long max_total_rounds = runner::kDefaultRoundBudget;
    bool tail_auto = true;
    std::optional<double> tail_threshold;
    std::optional<double> ball_alpha;
    BallKind ball_kind = BallKind::small_loss;
    std::vector<EnvSection> envs;
    std::vector<PolicySection> policies;
};

RunConfig parse_config_text(const std::string& text);
RunConfig load_config_file(const std::string& path);

// Serialization that parses back to a semantically identical config, used for
// the round-trip guarantee on cell identifiers.
std::string canonical_config(const RunConfig& config);

// Expands environment grids and target sweeps into concrete cells.
// Every policy section is crossed with every environment instance.
runner::ExperimentPlan build_plan(const RunConfig& config);

// Environment instances for one section at one horizon (target sweep applied).
std::vector<runner::EnvSpec> expand_env_section(const EnvSection& section, long rounds);

// Family label without horizon-dependent values, for scaling-fit output.
std::string section_label(const EnvSection& section);

} // namespace banditlb::config
