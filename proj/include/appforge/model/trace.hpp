#pragma once

#include <string>
#include <vector>

#include "appforge/model/types.hpp"

namespace appforge::model {

struct ContractRef {
    std::string module_id;
    MethodContract contract;
};

/// Contract universe of an architecture document.
std::vector<ContractRef> contracts_of(const std::vector<ArchElement>& add);

/// Contract universe of a code plan.
std::vector<ContractRef> contracts_of(const CodePlan& plan);

struct RequirementMapping {
    std::string requirement_id;
    std::string module_id;
    std::string method_signature;
};

/// Deterministic requirement-to-contract mapping:
///  1. contracts whose method name occurs in the requirement text or
///     constraints win, and the mapping is exactly those contracts;
///  2. otherwise every contract of each element whose responsibilities
///     mention the requirement id;
///  3. otherwise the requirement is unmapped (empty result).
std::vector<RequirementMapping> map_requirement(const RequirementItem& requirement,
                                                const std::vector<ArchElement>& add,
                                                const std::vector<ContractRef>& contracts);

/// Lowercase alphanumeric tokens of a string list, deduplicated.
std::vector<std::string> tokenize(const std::vector<std::string>& values);

}  // namespace appforge::model
