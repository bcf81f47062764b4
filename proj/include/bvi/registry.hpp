#pragma once

#include <string>
#include <vector>

#include "bvi/problems.hpp"

namespace bvi {

/// Problems keyed by id. Lookup of an unknown id throws ConfigError("unknown problem: ...").
const ProblemSpec& find_problem(const std::string& id);
bool has_problem(const std::string& id);
std::vector<std::string> problem_ids();
const std::vector<ProblemSpec>& all_problems();

}  // namespace bvi
