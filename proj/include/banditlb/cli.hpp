#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "banditlb/bounds.hpp"
#include "banditlb/config.hpp"
#include "banditlb/verify.hpp"

namespace banditlb::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitCapacity = 3;

// Output directory precedence: --out flag, then the BANDITLB_OUT environment
// variable, then the config's [run] out key, then the working directory.
std::string resolve_out_dir(const std::optional<std::string>& flag,
                            const std::string& config_value);

int cmd_simulate(const config::RunConfig& config, const std::string& out_dir);

int cmd_bounds(const bounds::BoundQuery& query, const std::string& out_dir);

int cmd_verify(const std::string& suite, const verify::SuiteOptions& options,
               const std::string& out_dir);

int cmd_scaling(const config::RunConfig& config, const std::string& out_dir);

// Full argv entry point; maps every error class onto the exit codes above.
int run(int argc, char** argv);

} // namespace banditlb::cli
