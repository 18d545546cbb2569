#pragma once

#include <set>
#include <vector>

#include "appforge/kb/store.hpp"
#include "appforge/model/trace.hpp"
#include "appforge/toolchain/toolchain.hpp"

namespace appforge::ta {

using model::ArchElement;
using model::CodePlan;
using model::MethodContract;
using model::RequirementItem;
using model::RequirementMapping;
using model::SourceUnit;
using model::TestCase;
using model::TestReport;
using model::TraceabilityMatrix;

struct TestPlan {
    std::string framework;
    std::vector<RequirementMapping> mappings;
    std::vector<std::string> untestable;  // "<requirement>: <reason>"
    std::vector<std::string> scope_notes;
};

json to_json(const TestPlan& plan);
TestPlan test_plan_from_json(const json& j);

/// Maps every functional requirement onto plan contracts (or lists it as
/// untestable with a reason) and picks the test framework as the top
/// Testing Tools hit for the architecture's tech constraints. In strict
/// mode an unmappable functional requirement raises
/// UnmappableRequirementError instead of being listed.
TestPlan generate_test_plan(const std::vector<RequirementItem>& srs,
                            const std::vector<ArchElement>& add, const CodePlan& plan,
                            const std::vector<SourceUnit>& units, const kb::Store& store,
                            bool strict = false);

/// Derives the full deterministic case set for one contract under one
/// requirement mapping:
///   1 positive (numeric params at the range midpoint)
/// + 1 negative per invalid input class
/// + 2 boundary cases per numeric limit value (at the limit: valid;
///   one step outside: invalid)
/// + 1 exception case per exception condition
/// + 1 property case iff the contract is nondeterministic.
std::vector<TestCase> derive_test_cases(const MethodContract& contract,
                                        const RequirementMapping& mapping);

/// Cases for every mapping in the test plan, in mapping order.
std::vector<TestCase> derive_all_cases(const TestPlan& test_plan, const CodePlan& plan);

/// Requirement -> method -> cases matrix over the derived case set.
TraceabilityMatrix build_matrix(const std::vector<TestCase>& cases);

/// Exactly the case ids whose trace row matches a changed requirement or
/// changed signature. Idempotent and monotone in both change sets.
std::set<std::string> regenerate_affected(const TraceabilityMatrix& matrix,
                                          const std::set<std::string>& changed_requirements,
                                          const std::set<std::string>& changed_signatures);

/// Marks the affected cases regenerated and re-derives them from the
/// current plan contracts; untouched cases are preserved.
std::vector<TestCase> apply_regeneration(const std::vector<TestCase>& cases,
                                         const std::set<std::string>& affected,
                                         const TestPlan& test_plan, const CodePlan& plan);

/// Executes cases through the toolchain and folds the raw results into a
/// structured report: coverage over the planned contracts, one defect per
/// failed case with severity mapped from the category (exception and
/// boundary failures are blockers, repeats of still-open defects minor).
/// Case statuses are updated in place.
TestReport execute_and_report(std::vector<TestCase>& cases,
                              const std::vector<SourceUnit>& units, const CodePlan& plan,
                              toolchain::Toolchain& toolchain, int ordinal,
                              const std::set<std::string>& open_defects = {});

/// Deterministic defect id for a failed case.
std::string defect_id_for(const std::string& case_id);

}  // namespace appforge::ta
