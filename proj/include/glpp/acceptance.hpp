#ifndef GLPP_ACCEPTANCE_HPP
#define GLPP_ACCEPTANCE_HPP

#include <string>
#include <vector>

namespace glpp {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

// the "desk" suite: criteria 1..10; `only` restricts to one id (0 = all)
std::vector<CriterionResult> run_acceptance_suite(const std::string& suite, int only = 0);

std::string format_acceptance_table(const std::vector<CriterionResult>& results);

}  // namespace glpp

#endif
