#include "appforge/model/trace.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace appforge::model {

std::vector<ContractRef> contracts_of(const std::vector<ArchElement>& add) {
    std::vector<ContractRef> out;
    for (const auto& element : add) {
        for (const auto& contract : element.contracts) {
            out.push_back({element.module_id, contract});
        }
    }
    return out;
}

std::vector<ContractRef> contracts_of(const CodePlan& plan) {
    std::vector<ContractRef> out;
    for (const auto& step : plan.steps) {
        for (const auto& contract : step.contracts) {
            out.push_back({step.module_id, contract});
        }
    }
    return out;
}

namespace {

bool mentions(const RequirementItem& requirement, const std::string& needle) {
    if (needle.empty()) {
        return false;
    }
    if (requirement.text.find(needle) != std::string::npos) {
        return true;
    }
    for (const auto& constraint : requirement.constraints) {
        if (constraint.find(needle) != std::string::npos) {
            return true;
        }
    }
    return false;
}

}  // namespace

std::vector<RequirementMapping> map_requirement(const RequirementItem& requirement,
                                                const std::vector<ArchElement>& add,
                                                const std::vector<ContractRef>& contracts) {
    std::vector<RequirementMapping> out;
    for (const auto& ref : contracts) {
        if (mentions(requirement, method_name(ref.contract.signature))) {
            out.push_back({requirement.id, ref.module_id, ref.contract.signature});
        }
    }
    if (!out.empty()) {
        return out;
    }

    std::set<std::string> mentioned_modules;
    for (const auto& element : add) {
        if (element.responsibilities.find(requirement.id) != std::string::npos) {
            mentioned_modules.insert(element.module_id);
        }
    }
    for (const auto& ref : contracts) {
        if (mentioned_modules.count(ref.module_id) > 0) {
            out.push_back({requirement.id, ref.module_id, ref.contract.signature});
        }
    }
    return out;
}

std::vector<std::string> tokenize(const std::vector<std::string>& values) {
    std::set<std::string> tokens;
    for (const auto& value : values) {
        std::string current;
        for (char c : value) {
            if (std::isalnum(static_cast<unsigned char>(c)) != 0) {
                current.push_back(
                    static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
            } else if (!current.empty()) {
                tokens.insert(current);
                current.clear();
            }
        }
        if (!current.empty()) {
            tokens.insert(current);
        }
    }
    return {tokens.begin(), tokens.end()};
}

}  // namespace appforge::model
