#pragma once

#include <string>

namespace tilelab {

enum class CheckStatus { Holds, NotApplicable, Violated };

// Outcome of a property check: precondition failures are kept apart from violations.
struct CheckResult {
    CheckStatus status = CheckStatus::Holds;
    std::string detail;

    bool holds() const { return status == CheckStatus::Holds; }
    bool applicable() const { return status != CheckStatus::NotApplicable; }
    bool violated() const { return status == CheckStatus::Violated; }

    static CheckResult ok(std::string d = {}) { return {CheckStatus::Holds, std::move(d)}; }
    static CheckResult not_applicable(std::string d) { return {CheckStatus::NotApplicable, std::move(d)}; }
    static CheckResult violation(std::string d) { return {CheckStatus::Violated, std::move(d)}; }
};

inline const char* to_string(CheckStatus s)
{
    switch (s) {
    case CheckStatus::Holds:
        return "holds";
    case CheckStatus::NotApplicable:
        return "not_applicable";
    case CheckStatus::Violated:
        return "violated";
    }
    return "?";
}

} // namespace tilelab
