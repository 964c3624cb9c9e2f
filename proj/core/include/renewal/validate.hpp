#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace renewal {

struct ValidationCheck {
    std::string suite;
    std::string name;
    bool pass = false;
    double value = 0;
    double reference = 0;
    double tolerance = 0;
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    std::uint64_t seed = 0;

    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

// suite: one of lattice | continuous | ruin | bivariate | all
ValidationReport run_validation(const std::string& suite, std::uint64_t seed);

void print_validation_table(const ValidationReport& report, std::ostream& os);
std::string validation_report_json(const ValidationReport& report);

} // namespace renewal
