#include "banditlb/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "banditlb/csv.hpp"
#include "banditlb/errors.hpp"
#include "banditlb/runner.hpp"

namespace banditlb::cli {

namespace {

std::string join_path(const std::string& dir, const char* file) {
    return (std::filesystem::path(dir) / file).string();
}

} // namespace

std::string resolve_out_dir(const std::optional<std::string>& flag,
                            const std::string& config_value) {
    if (flag && !flag->empty()) return *flag;
    if (const char* env = std::getenv("BANDITLB_OUT"); env != nullptr && env[0] != '\0') {
        return env;
    }
    if (!config_value.empty()) return config_value;
    return ".";
}

int cmd_simulate(const config::RunConfig& config, const std::string& out_dir) {
    const runner::ExperimentPlan plan = config::build_plan(config);
    const runner::RegretStats stats = runner::run_plan(plan);
    const std::string path = join_path(out_dir, "regret.csv");
    csv::write_file_atomic(path, csv::render_regret_csv(stats));
    std::cout << "wrote " << path << " (" << stats.cells.size() << " rows, seed "
              << stats.master_seed << ")\n";
    return kExitOk;
}

int cmd_bounds(const bounds::BoundQuery& query, const std::string& out_dir) {
    const bounds::HypothesisReport report = bounds::validate_hypotheses(query);
    const double value = bounds::evaluate_bound(query, /*override_hypotheses=*/true);

    std::string params = "K=" + std::to_string(query.arms) +
                         ";T=" + std::to_string(query.rounds);
    if (query.delta) params += ";delta=" + csv::format_real(*query.delta);
    if (query.alpha) params += ";alpha=" + csv::format_real(*query.alpha);
    if (query.premise_constant) params += ";C=" + csv::format_real(*query.premise_constant);
    if (query.rho) params += ";rho=" + csv::format_real(*query.rho);
    if (query.scale) params += ";c=" + csv::format_real(*query.scale);
    if (query.best_cumulative) {
        params += ";L_star=" + csv::format_real(*query.best_cumulative);
    }
    if (query.quadratic_variation) {
        params += ";Q_T=" + csv::format_real(*query.quadratic_variation);
    }

    std::string content = "bound,params,value,hypotheses_ok,violated_conditions\n";
    content += std::string(bounds::bound_name(query.kind)) + "," + params + "," +
               csv::format_real(value) + "," + (report.ok ? "true" : "false") + "," +
               report.violated() + "\n";
    const std::string path = join_path(out_dir, "bounds.csv");
    csv::write_file_atomic(path, content);
    std::cout << bounds::bound_name(query.kind) << " = " << csv::format_real(value) << "\n";
    if (!report.ok) {
        std::cout << "hypotheses violated: " << report.violated() << "\n";
    }
    std::cout << "wrote " << path << "\n";
    return kExitOk;
}

int cmd_verify(const std::string& suite, const verify::SuiteOptions& options,
               const std::string& out_dir) {
    std::vector<verify::SuiteResult> results;
    if (suite == "all") {
        for (const auto& name : verify::suite_names()) {
            results.push_back(verify::run_suite(name, options));
        }
    } else {
        results.push_back(verify::run_suite(suite, options));
    }

    bool all_passed = true;
    for (const auto& result : results) {
        for (const auto& check : result.checks) {
            all_passed = all_passed && check.passed;
            std::cout << (check.passed ? "[pass] " : "[FAIL] ") << result.suite << "/"
                      << check.name << ": " << check.detail << "\n";
        }
    }
    const std::string path = join_path(out_dir, "verify.csv");
    csv::write_file_atomic(path, csv::render_verify_csv(results));
    std::cout << "wrote " << path << "\n";
    return all_passed ? kExitOk : kExitCheckFailed;
}

int cmd_scaling(const config::RunConfig& config, const std::string& out_dir) {
    if (config.envs.empty()) throw config::ConfigError("missing required section [env]");
    if (config.policies.empty()) throw config::ConfigError("missing required section [policy]");

    runner::RegretStats all_rows;
    all_rows.master_seed = config.master_seed;
    std::string fits = "env_family,env_params,target_arm,policy,points,exponent,intercept,"
                       "residual_rms,seed\n";

    for (const auto& section : config.envs) {
        if (section.t_grid.size() < 4) {
            throw config::ConfigError(
                "scaling requires at least 4 horizons in the [env] T grid");
        }
        const std::size_t instances = config::expand_env_section(section, section.t_grid[0]).size();
        for (std::size_t g = 0; g < instances; ++g) {
            for (const auto& policy_section : config.policies) {
                runner::ExperimentPlan plan;
                plan.replications = config.replications;
                plan.master_seed = config.master_seed;
                plan.workers = config.workers;
                plan.max_total_rounds = config.max_total_rounds;
                for (long rounds : section.t_grid) {
                    auto envs_at_t = config::expand_env_section(section, rounds);
                    policies::PolicyConfig policy;
                    policy.kind = policy_section.kind;
                    policy.delta = policy_section.delta;
                    policy.learning_rate = policy_section.eta;
                    policy.exploration = policy_section.gamma;
                    policy.bonus = policy_section.beta;
                    policy.arms = runner::env_arms(envs_at_t[g]);
                    policy.horizon = rounds;
                    plan.cells.push_back({envs_at_t[g], policy});
                }
                const runner::RegretStats stats = runner::run_plan(plan);
                std::vector<double> means;
                means.reserve(stats.cells.size());
                for (const auto& cell : stats.cells) {
                    means.push_back(cell.mean_regret);
                    all_rows.cells.push_back(cell);
                }
                const auto fit = runner::fit_power_law(section.t_grid, means);
                const auto& first = stats.cells.front();
                fits += first.env_family + "," + config::section_label(section) + "," +
                        first.target_label + "," + first.policy + "," +
                        std::to_string(section.t_grid.size()) + "," +
                        csv::format_real(fit.exponent) + "," +
                        csv::format_real(fit.intercept) + "," +
                        csv::format_real(fit.residual_rms) + "," +
                        std::to_string(config.master_seed) + "\n";
                std::cout << first.env_family << " " << config::section_label(section)
                          << " target=" << first.target_label << " " << first.policy
                          << ": exponent " << csv::format_real(fit.exponent) << "\n";
            }
        }
    }

    const std::string regret_path = join_path(out_dir, "regret.csv");
    csv::write_file_atomic(regret_path, csv::render_regret_csv(all_rows));
    const std::string fit_path = join_path(out_dir, "scaling.csv");
    csv::write_file_atomic(fit_path, fits);
    std::cout << "wrote " << regret_path << " and " << fit_path << "\n";
    return kExitOk;
}

int run(int argc, char** argv) {
    CLI::App app{"Adversarial bandit lower-bound testbed"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::string> out_flag;
    std::optional<std::uint64_t> seed_flag;
    std::optional<int> workers_flag;

    auto add_common = [&](CLI::App* cmd, bool with_config) {
        if (with_config) {
            cmd->add_option("--config", config_path, "config file (key=value sections)")
                ->required();
        }
        cmd->add_option("--seed", seed_flag, "master seed (default 123456789)");
        cmd->add_option("--workers", workers_flag, "worker threads (default: hardware)");
        cmd->add_option("--out", out_flag, "output directory");
    };

    CLI::App* simulate = app.add_subcommand("simulate", "run a Monte Carlo experiment plan");
    add_common(simulate, true);

    CLI::App* scaling = app.add_subcommand("scaling", "fit log-log regret growth on a T grid");
    add_common(scaling, true);

    CLI::App* verify_cmd = app.add_subcommand("verify", "run a named verification suite");
    std::string suite;
    std::optional<int> replications_flag;
    verify_cmd
        ->add_option("--suite", suite,
                     "inequalities|oracle|constructions|tails|lower_bounds|scaling|"
                     "determinism|all")
        ->required();
    verify_cmd->add_option("--replications", replications_flag,
                           "override Monte Carlo replications (scaling suite)");
    add_common(verify_cmd, false);

    CLI::App* bounds_cmd =
        app.add_subcommand("bounds", "evaluate a closed-form bound (natural logs)");
    std::string bound_name;
    bounds::BoundQuery query;
    std::optional<double> opt_delta, opt_alpha, opt_c, opt_rho, opt_scale, opt_lstar, opt_qt;
    bounds_cmd->add_option("--bound", bound_name, "bound identifier")->required();
    bounds_cmd->add_option("--K", query.arms, "number of arms")->required();
    bounds_cmd->add_option("--T", query.rounds, "number of rounds")->required();
    bounds_cmd->add_option("--delta", opt_delta, "confidence parameter");
    bounds_cmd->add_option("--alpha", opt_alpha, "ball radius parameter");
    bounds_cmd->add_option("--C", opt_c, "uniform mean-regret premise constant");
    bounds_cmd->add_option("--rho", opt_rho, "within-round range width");
    bounds_cmd->add_option("--c", opt_scale, "universal constant for upper curves (default 1)");
    bounds_cmd->add_option("--L-star", opt_lstar, "best cumulative loss");
    bounds_cmd->add_option("--Q-T", opt_qt, "quadratic variation");
    bounds_cmd->add_option("--out", out_flag, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& help) {
        return app.exit(help);
    } catch (const CLI::ParseError& error) {
        app.exit(error);
        return kExitConfig;
    }

    try {
        if (bounds_cmd->parsed()) {
            const auto kind = bounds::bound_from_string(bound_name);
            if (!kind) {
                std::cerr << "unknown bound name: " << bound_name << "\n";
                return kExitConfig;
            }
            query.kind = *kind;
            query.delta = opt_delta;
            query.alpha = opt_alpha;
            query.premise_constant = opt_c;
            query.rho = opt_rho;
            query.scale = opt_scale;
            query.best_cumulative = opt_lstar;
            query.quadratic_variation = opt_qt;
            return cmd_bounds(query, resolve_out_dir(out_flag, ""));
        }
        if (verify_cmd->parsed()) {
            verify::SuiteOptions options;
            if (seed_flag) options.master_seed = *seed_flag;
            if (workers_flag) options.workers = *workers_flag;
            options.replications = replications_flag;
            return cmd_verify(suite, options, resolve_out_dir(out_flag, ""));
        }
        config::RunConfig config = config::load_config_file(config_path);
        if (seed_flag) config.master_seed = *seed_flag;
        if (workers_flag) config.workers = *workers_flag;
        const std::string out_dir = resolve_out_dir(out_flag, config.out_dir);
        if (simulate->parsed()) return cmd_simulate(config, out_dir);
        return cmd_scaling(config, out_dir);
    } catch (const CapacityError& error) {
        std::cerr << "capacity error: " << error.what() << "\n";
        return kExitCapacity;
    } catch (const config::ConfigError& error) {
        std::cerr << "config error: " << error.what() << "\n";
        return kExitConfig;
    } catch (const bounds::HypothesisError& error) {
        std::cerr << "hypothesis error: " << error.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& error) {
        std::cerr << "error: " << error.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << "\n";
        return kExitConfig;
    }
}

} // namespace banditlb::cli
