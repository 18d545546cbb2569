#pragma once

#include <stdexcept>
#include <string>

namespace appforge {

/// Base class for all engine errors. `kind()` is a stable machine-readable
/// tag used by the CLI when mapping failures to exit codes and messages.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind)) {}

    const std::string& kind() const { return kind_; }

private:
    std::string kind_;
};

#define APPFORGE_ERROR(Name, tag)                                   \
    class Name : public Error {                                     \
    public:                                                         \
        explicit Name(const std::string& message)                   \
            : Error(tag, message) {}                                \
    }

APPFORGE_ERROR(SchemaError, "schema");
APPFORGE_ERROR(CycleError, "cycle");
APPFORGE_ERROR(VersionError, "version");
APPFORGE_ERROR(PillarError, "pillar");
APPFORGE_ERROR(NoFixtureError, "no-fixture");
APPFORGE_ERROR(TransportError, "transport");
APPFORGE_ERROR(PlanValidationError, "plan-validation");
APPFORGE_ERROR(NoChangeError, "no-change");
APPFORGE_ERROR(DependencyNotReadyError, "dependency-not-ready");
APPFORGE_ERROR(ToolchainUnavailableError, "toolchain-unavailable");
APPFORGE_ERROR(BudgetExhausted, "budget-exhausted");
APPFORGE_ERROR(RangeError, "range");
APPFORGE_ERROR(UnmappableRequirementError, "unmappable-requirement");
APPFORGE_ERROR(NotEmptyError, "not-empty");
APPFORGE_ERROR(ConflictError, "conflict");
APPFORGE_ERROR(NotFoundError, "not-found");
APPFORGE_ERROR(LockError, "lock");
APPFORGE_ERROR(ScenarioSchemaError, "scenario-schema");
APPFORGE_ERROR(FixtureGapError, "fixture-gap");
APPFORGE_ERROR(UnknownRunError, "unknown-run");
APPFORGE_ERROR(UnresolvedItemError, "unresolved-item");

#undef APPFORGE_ERROR

}  // namespace appforge
