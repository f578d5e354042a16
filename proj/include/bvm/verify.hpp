#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bvm {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string details;
};

// Property suites shared by the CLI `verify` subcommand and the test binaries.
std::vector<CheckResult> verify_linalg(std::uint64_t seed);
std::vector<CheckResult> verify_derivs(std::uint64_t seed);
std::vector<CheckResult> verify_bounds(std::uint64_t seed);
std::vector<CheckResult> verify_oracles(std::uint64_t seed);
std::vector<CheckResult> verify_all(std::uint64_t seed);

std::string format_verify_report(const std::vector<CheckResult>& checks);
bool all_pass(const std::vector<CheckResult>& checks);

}  // namespace bvm
