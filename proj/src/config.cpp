#include "banditlb/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "banditlb/csv.hpp"
#include "banditlb/errors.hpp"

namespace banditlb::config {

namespace {

std::string trim(const std::string& text) {
    std::size_t begin = 0;
    std::size_t end = text.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
    return text.substr(begin, end - begin);
}

double parse_real(const std::string& value, const std::string& key) {
    try {
        std::size_t used = 0;
        const double parsed = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return parsed;
    } catch (const std::exception&) {
        throw ConfigError("invalid real value for key '" + key + "': " + value);
    }
}

long parse_long(const std::string& value, const std::string& key) {
    try {
        std::size_t used = 0;
        const long parsed = std::stol(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return parsed;
    } catch (const std::exception&) {
        throw ConfigError("invalid integer value for key '" + key + "': " + value);
    }
}

std::uint64_t parse_u64(const std::string& value, const std::string& key) {
    try {
        std::size_t used = 0;
        const std::uint64_t parsed = std::stoull(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return parsed;
    } catch (const std::exception&) {
        throw ConfigError("invalid seed value for key '" + key + "': " + value);
    }
}

std::vector<long> parse_long_list(const std::string& value, const std::string& key) {
    std::vector<long> out;
    std::stringstream stream(value);
    std::string item;
    while (std::getline(stream, item, ',')) {
        item = trim(item);
        if (item.empty()) throw ConfigError("empty entry in list for key '" + key + "'");
        out.push_back(parse_long(item, key));
    }
    if (out.empty()) throw ConfigError("empty list for key '" + key + "'");
    return out;
}

void apply_run_key(RunConfig& config, const std::string& key, const std::string& value) {
    if (key == "seed") {
        config.master_seed = parse_u64(value, key);
    } else if (key == "replications") {
        config.replications = static_cast<int>(parse_long(value, key));
    } else if (key == "workers") {
        config.workers = static_cast<int>(parse_long(value, key));
    } else if (key == "out") {
        config.out_dir = value;
    } else if (key == "max_total_rounds") {
        config.max_total_rounds = parse_long(value, key);
    } else {
        throw ConfigError("unknown key '" + key + "' in [run] section");
    }
}

void apply_stats_key(RunConfig& config, const std::string& key, const std::string& value) {
    if (key == "tail_threshold") {
        if (value == "auto") {
            config.tail_auto = true;
            config.tail_threshold.reset();
        } else if (value == "none") {
            config.tail_auto = false;
            config.tail_threshold.reset();
        } else {
            config.tail_auto = false;
            config.tail_threshold = parse_real(value, key);
        }
    } else if (key == "ball_alpha") {
        config.ball_alpha = parse_real(value, key);
    } else if (key == "ball_kind") {
        if (value == "small_loss") {
            config.ball_kind = BallKind::small_loss;
        } else if (value == "small_variation") {
            config.ball_kind = BallKind::small_variation;
        } else {
            throw ConfigError("invalid value for key 'ball_kind': " + value);
        }
    } else {
        throw ConfigError("unknown key '" + key + "' in [stats] section");
    }
}

void apply_env_key(EnvSection& env, const std::string& key, const std::string& value) {
    if (key == "family") {
        env.family = value;
    } else if (key == "K") {
        env.arms = static_cast<int>(parse_long(value, key));
    } else if (key == "T") {
        env.t_grid = parse_long_list(value, key);
    } else if (key == "delta") {
        env.delta = parse_real(value, key);
    } else if (key == "mode") {
        env.mode = value;
    } else if (key == "C") {
        env.premise_constant = parse_real(value, key);
    } else if (key == "gap") {
        env.gap = parse_real(value, key);
    } else if (key == "alpha") {
        env.alpha = parse_real(value, key);
    } else if (key == "epsilon") {
        if (value != "auto") env.epsilon = parse_real(value, key);
    } else if (key == "target_arm") {
        env.target = value;
    } else {
        throw ConfigError("unknown key '" + key + "' in [env] section");
    }
}

void apply_policy_key(PolicySection& policy, const std::string& key,
                      const std::string& value) {
    if (key == "kind") {
        const auto kind = policies::kind_from_string(value);
        if (!kind) throw ConfigError("unknown policy kind: " + value);
        policy.kind = *kind;
    } else if (key == "delta") {
        policy.delta = parse_real(value, key);
    } else if (key == "eta") {
        policy.eta = parse_real(value, key);
    } else if (key == "gamma") {
        policy.gamma = parse_real(value, key);
    } else if (key == "beta") {
        policy.beta = parse_real(value, key);
    } else {
        throw ConfigError("unknown key '" + key + "' in [policy] section");
    }
}

} // namespace

RunConfig parse_config_text(const std::string& text) {
    RunConfig config;
    std::string section;
    std::stringstream stream(text);
    std::string raw_line;
    int line_number = 0;
    while (std::getline(stream, raw_line)) {
        ++line_number;
        std::string line = raw_line;
        const std::size_t comment = line.find('#');
        if (comment != std::string::npos) line.erase(comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError("malformed section header at line " +
                                  std::to_string(line_number));
            }
            section = trim(line.substr(1, line.size() - 2));
            if (section == "env") {
                config.envs.emplace_back();
            } else if (section == "policy") {
                config.policies.emplace_back();
            } else if (section != "run" && section != "stats") {
                throw ConfigError("unknown section [" + section + "]");
            }
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("expected key=value at line " + std::to_string(line_number) +
                              ": " + line);
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("empty key at line " + std::to_string(line_number));
        if (value.empty()) {
            throw ConfigError("empty value for key '" + key + "' at line " +
                              std::to_string(line_number));
        }
        if (section == "run") {
            apply_run_key(config, key, value);
        } else if (section == "stats") {
            apply_stats_key(config, key, value);
        } else if (section == "env") {
            apply_env_key(config.envs.back(), key, value);
        } else if (section == "policy") {
            apply_policy_key(config.policies.back(), key, value);
        } else {
            throw ConfigError("key '" + key + "' appears before any section header");
        }
    }
    return config;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

std::string canonical_config(const RunConfig& config) {
    std::string out;
    out += "[run]\n";
    out += "seed = " + std::to_string(config.master_seed) + "\n";
    out += "replications = " + std::to_string(config.replications) + "\n";
    out += "workers = " + std::to_string(config.workers) + "\n";
    if (!config.out_dir.empty()) out += "out = " + config.out_dir + "\n";
    out += "max_total_rounds = " + std::to_string(config.max_total_rounds) + "\n";

    out += "[stats]\n";
    if (config.tail_auto) {
        out += "tail_threshold = auto\n";
    } else if (config.tail_threshold) {
        out += "tail_threshold = " + csv::format_real(*config.tail_threshold) + "\n";
    } else {
        out += "tail_threshold = none\n";
    }
    if (config.ball_alpha) {
        out += "ball_alpha = " + csv::format_real(*config.ball_alpha) + "\n";
        out += std::string("ball_kind = ") +
               (config.ball_kind == BallKind::small_loss ? "small_loss" : "small_variation") +
               "\n";
    }

    for (const auto& env : config.envs) {
        out += "[env]\n";
        out += "family = " + env.family + "\n";
        out += "K = " + std::to_string(env.arms) + "\n";
        std::string grid;
        for (long t : env.t_grid) {
            if (!grid.empty()) grid += ",";
            grid += std::to_string(t);
        }
        out += "T = " + grid + "\n";
        if (env.delta) out += "delta = " + csv::format_real(*env.delta) + "\n";
        if (env.family == "clipped_gaussian") out += "mode = " + env.mode + "\n";
        if (env.premise_constant) out += "C = " + csv::format_real(*env.premise_constant) + "\n";
        if (env.gap) out += "gap = " + csv::format_real(*env.gap) + "\n";
        if (env.alpha) out += "alpha = " + csv::format_real(*env.alpha) + "\n";
        out += "epsilon = " + (env.epsilon ? csv::format_real(*env.epsilon) : "auto") + "\n";
        out += "target_arm = " + env.target + "\n";
    }

    for (const auto& policy : config.policies) {
        out += "[policy]\n";
        out += std::string("kind = ") + policies::kind_name(policy.kind) + "\n";
        if (policy.delta) out += "delta = " + csv::format_real(*policy.delta) + "\n";
        if (policy.eta) out += "eta = " + csv::format_real(*policy.eta) + "\n";
        if (policy.gamma) out += "gamma = " + csv::format_real(*policy.gamma) + "\n";
        if (policy.beta) out += "beta = " + csv::format_real(*policy.beta) + "\n";
    }
    return out;
}

std::string section_label(const EnvSection& section) {
    std::string out = "K=" + std::to_string(section.arms);
    if (section.delta) out += ";delta=" + csv::format_real(*section.delta);
    if (section.family == "clipped_gaussian") out += ";mode=" + section.mode;
    if (section.premise_constant) out += ";C=" + csv::format_real(*section.premise_constant);
    if (section.gap) out += ";gap=" + csv::format_real(*section.gap);
    if (section.alpha) out += ";alpha=" + csv::format_real(*section.alpha);
    if (section.epsilon) out += ";epsilon=" + csv::format_real(*section.epsilon);
    return out;
}

namespace {

std::vector<int> expand_targets(const EnvSection& section, bool allow_null) {
    // Returns user-facing labels: 0 for the null measure, 1..K otherwise.
    if (section.target == "all") {
        std::vector<int> targets(static_cast<std::size_t>(section.arms));
        for (int j = 0; j < section.arms; ++j) targets[static_cast<std::size_t>(j)] = j + 1;
        return targets;
    }
    long value = 0;
    try {
        std::size_t used = 0;
        value = std::stol(section.target, &used);
        if (used != section.target.size()) throw std::invalid_argument(section.target);
    } catch (const std::exception&) {
        throw ConfigError("invalid value for key 'target_arm': " + section.target);
    }
    if (value == 0) {
        if (!allow_null) {
            throw ConfigError("target_arm = 0 (null measure) is only valid for bernoulli");
        }
        return {0};
    }
    if (value < 1 || value > section.arms) {
        throw ConfigError("target_arm out of range 1..K: " + section.target);
    }
    return {static_cast<int>(value)};
}

} // namespace

std::vector<runner::EnvSpec> expand_env_section(const EnvSection& section, long rounds) {
    std::vector<runner::EnvSpec> out;
    if (section.family.empty()) throw ConfigError("missing required key 'family' in [env]");
    if (section.arms < 2) throw ConfigError("missing or invalid key 'K' in [env]");
    if (rounds < 1) throw ConfigError("missing or invalid key 'T' in [env]");

    if (section.family == "clipped_gaussian") {
        if (!section.delta) throw ConfigError("clipped_gaussian requires key 'delta'");
        for (int target : expand_targets(section, false)) {
            const int arm = target - 1;
            if (section.mode == "theorem1") {
                out.emplace_back(envs::ClippedGaussianSpec::theorem1(section.arms, rounds,
                                                                     *section.delta, arm));
            } else if (section.mode == "theorem2") {
                if (!section.premise_constant) {
                    throw ConfigError("theorem2 mode requires key 'C'");
                }
                out.emplace_back(envs::ClippedGaussianSpec::theorem2(
                    section.arms, rounds, *section.delta, *section.premise_constant, arm));
            } else if (section.mode == "gap") {
                if (!section.gap) throw ConfigError("gap mode requires key 'gap'");
                out.emplace_back(envs::ClippedGaussianSpec::with_gap(
                    section.arms, rounds, *section.delta, *section.gap, arm));
            } else {
                throw ConfigError("unknown clipped_gaussian mode: " + section.mode);
            }
        }
        return out;
    }

    if (section.family == "bernoulli" || section.family == "bernoulli_mixture") {
        if (!section.alpha) throw ConfigError(section.family + " requires key 'alpha'");
        const double eps = section.epsilon.value_or(envs::BernoulliFamilySpec::default_epsilon(
            section.arms, rounds, *section.alpha));
        if (section.family == "bernoulli_mixture") {
            out.emplace_back(runner::MixtureSpec{envs::BernoulliFamilySpec::with_epsilon(
                section.arms, rounds, *section.alpha, eps, 0)});
            return out;
        }
        for (int target : expand_targets(section, true)) {
            const std::optional<int> arm =
                target == 0 ? std::nullopt : std::optional<int>(target - 1);
            out.emplace_back(envs::BernoulliFamilySpec::with_epsilon(
                section.arms, rounds, *section.alpha, eps, arm));
        }
        return out;
    }

    throw ConfigError("unknown value for key 'family': " + section.family);
}

runner::ExperimentPlan build_plan(const RunConfig& config) {
    if (config.envs.empty()) throw ConfigError("missing required section [env]");
    if (config.policies.empty()) throw ConfigError("missing required section [policy]");
    runner::ExperimentPlan plan;
    plan.replications = config.replications;
    plan.master_seed = config.master_seed;
    plan.workers = config.workers;
    plan.max_total_rounds = config.max_total_rounds;
    plan.ball_alpha = config.ball_alpha;
    plan.ball_kind = config.ball_kind;
    if (!config.tail_auto && config.tail_threshold) {
        plan.tail_threshold = config.tail_threshold;
    } else if (!config.tail_auto) {
        plan.tail_threshold = std::numeric_limits<double>::quiet_NaN();
    }

    for (const auto& section : config.envs) {
        if (section.t_grid.empty()) throw ConfigError("missing required key 'T' in [env]");
        for (long rounds : section.t_grid) {
            for (auto& env : expand_env_section(section, rounds)) {
                for (const auto& policy_section : config.policies) {
                    policies::PolicyConfig policy;
                    policy.kind = policy_section.kind;
                    policy.delta = policy_section.delta;
                    policy.learning_rate = policy_section.eta;
                    policy.exploration = policy_section.gamma;
                    policy.bonus = policy_section.beta;
                    policy.arms = runner::env_arms(env);
                    policy.horizon = runner::env_rounds(env);
                    try {
                        policy.validate();
                    } catch (const ArgumentError& error) {
                        throw ConfigError(std::string("invalid [policy] section: ") +
                                          error.what());
                    }
                    plan.cells.push_back({env, policy});
                }
            }
        }
    }
    return plan;
}

} // namespace banditlb::config
