#pragma once

// The acceptance suite: twelve numbered checks shared by the `verify` command and
// the acceptance test binary.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cubicvs/record.hpp"

namespace cubicvs {

class TableCache;

struct CriterionInfo {
    int id;
    std::string name;
    std::string summary;
};

const std::vector<CriterionInfo>& acceptance_criteria();
// Look up by number ("3") or name ("congruence-vanishing").
const CriterionInfo* find_criterion(const std::string& key);

struct AcceptanceContext {
    const TableCache* cache = nullptr;
    std::uint64_t seed = 20240601;
    std::function<void(const std::string&)> progress;
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    Json data = Json::object();  // deterministic measurements, no timings
    double seconds = 0.0;
};

CriterionResult run_criterion(int id, const AcceptanceContext& ctx);

// One human-readable line: "[PASS] 3 congruence-vanishing: ... (1.2 s)".
std::string summary_line(const CriterionResult& r);
ResultRecord to_record(const CriterionResult& r, bool timing);

}  // namespace cubicvs
