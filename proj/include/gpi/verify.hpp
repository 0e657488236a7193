#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace gpi {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

struct VerifyOptions {
    std::string filter;  // substring of the check name; empty runs everything
    /// KL-ball maximizer under test. Defaults to kl_max_value.
    std::function<double(std::span<const double>, std::span<const double>, double)> kl_max;
};

/// Check names in run order.
std::vector<std::string> verify_check_names();

/// Runs the oracle battery. A check that throws is reported as failed.
std::vector<CheckResult> verify_suite(const VerifyOptions& options = {});

}  // namespace gpi
