// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

namespace breuil {

/// One named pass/fail entry; `witness` explains a failure (or records a
/// value worth reporting even on success).
struct Check {
    std::string name;
    bool pass = false;
    std::string witness;
};

struct Report {
    std::vector<Check> checks;

    void add(const std::string& name, bool pass, const std::string& witness = "") {
        checks.push_back({name, pass, witness});
    }
    void merge(const Report& other) {
        checks.insert(checks.end(), other.checks.begin(), other.checks.end());
    }
    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
    std::size_t fail_count() const {
        std::size_t n = 0;
        for (const auto& c : checks)
            if (!c.pass) ++n;
        return n;
    }
};

} // namespace breuil
