#pragma once

#include <string>
#include <vector>

namespace rept {

struct CheckResult {
    std::string name;
    bool pass = false;
    double value = 0.0;   // worst-case measurement for this check
    std::string where;    // location of the worst case, human readable
};

struct ValidationReport {
    std::vector<CheckResult> checks;

    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
    const CheckResult* find(const std::string& name) const {
        for (const auto& c : checks)
            if (c.name == name) return &c;
        return nullptr;
    }
};

}  // namespace rept
