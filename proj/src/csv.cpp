#include "banditlb/csv.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <system_error>

#include "banditlb/errors.hpp"
#include "banditlb/runner.hpp"
#include "banditlb/verify.hpp"

namespace banditlb::csv {

std::string format_real(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(target.parent_path(), ec);
    }
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw StructuralError("write_file_atomic: cannot open " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw StructuralError("write_file_atomic: failed writing " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw StructuralError("write_file_atomic: rename failed for " + path);
    }
}

std::string render_regret_csv(const runner::RegretStats& stats) {
    std::string out =
        "env_family,env_params,target_arm,policy,T,replications,mean_regret,stderr,"
        "q50,q90,q_delta,tail_threshold,tail_freq,seed\n";
    for (const auto& cell : stats.cells) {
        out += cell.env_family + "," + cell.env_params + "," + cell.target_label + "," +
               cell.policy + "," + std::to_string(cell.rounds) + "," +
               std::to_string(cell.replications) + "," + format_real(cell.mean_regret) + "," +
               format_real(cell.std_error) + "," + format_real(cell.q50) + "," +
               format_real(cell.q90) + "," + format_real(cell.q_delta) + "," +
               format_real(cell.tail_threshold) + "," + format_real(cell.tail_frequency) +
               "," + std::to_string(stats.master_seed) + "\n";
    }
    return out;
}

std::string render_verify_csv(const std::vector<verify::SuiteResult>& suites) {
    std::string out = "suite,check,passed,detail\n";
    for (const auto& suite : suites) {
        for (const auto& check : suite.checks) {
            out += suite.suite + "," + check.name + "," +
                   (check.passed ? "true" : "false") + "," + check.detail + "\n";
        }
    }
    return out;
}

} // namespace banditlb::csv
