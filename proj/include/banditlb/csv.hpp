#pragma once

#include <string>
#include <vector>

namespace banditlb {
namespace runner {
struct RegretStats;
}
namespace verify {
struct SuiteResult;
}

namespace csv {

// 17 significant digits: round-trip exact for doubles, '.' decimal point.
std::string format_real(double value);

// Writes via a temporary file in the same directory followed by a rename, so
// a partial file is never observable at the target path.
void write_file_atomic(const std::string& path, const std::string& content);

// regret.csv schema:
// env_family,env_params,target_arm,policy,T,replications,mean_regret,stderr,
// q50,q90,q_delta,tail_threshold,tail_freq,seed
std::string render_regret_csv(const runner::RegretStats& stats);

// verify.csv schema: suite,check,passed,detail
std::string render_verify_csv(const std::vector<verify::SuiteResult>& suites);

} // namespace csv
} // namespace banditlb
