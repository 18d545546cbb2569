#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "appforge/model/types.hpp"

namespace appforge::toolchain {

struct LaunchOutcome {
    bool ok = true;
    std::string unit_path;  // failing unit, when known
    std::string detail;
};

struct RawCaseResult {
    bool passed = true;
    json actual;
};

using RawResults = std::map<std::string, RawCaseResult>;

/// Compile / launch-check / test-run adapter. The stub implementation
/// interprets structured unit bodies; the command implementation shells
/// out to configured build tools.
class Toolchain {
public:
    virtual ~Toolchain() = default;

    /// Unit-scope compile. References resolve against the unit's own
    /// declarations plus those of `compiled` units.
    virtual model::CompilationLog compile_unit(const model::SourceUnit& unit,
                                               const std::vector<model::SourceUnit>& compiled,
                                               int ordinal) = 0;

    /// Whole-workspace compile; references resolve against every unit.
    virtual model::CompilationLog compile_all(const std::vector<model::SourceUnit>& units,
                                              int ordinal) = 0;

    virtual LaunchOutcome launch_check(const std::vector<model::SourceUnit>& units) = 0;

    virtual RawResults run_tests(const std::vector<model::TestCase>& cases,
                                 const std::vector<model::SourceUnit>& units) = 0;
};

/// Deterministic interpreter over StubBody content:
///  - compile: one error per compile-kind marker, one per unresolved
///    reference in scope;
///  - launch: fails while any init-kind marker remains;
///  - tests: a case fails iff a logic-kind marker targets its traced
///    method and the marker detail names the case's category.
class StubToolchain : public Toolchain {
public:
    model::CompilationLog compile_unit(const model::SourceUnit& unit,
                                       const std::vector<model::SourceUnit>& compiled,
                                       int ordinal) override;
    model::CompilationLog compile_all(const std::vector<model::SourceUnit>& units,
                                      int ordinal) override;
    LaunchOutcome launch_check(const std::vector<model::SourceUnit>& units) override;
    RawResults run_tests(const std::vector<model::TestCase>& cases,
                         const std::vector<model::SourceUnit>& units) override;
};

/// Configuration for the external-command toolchain; loaded from a JSON
/// file {compile_cmd, launch_cmd, test_cmd, diag_pattern, timeout_seconds}.
struct CommandConfig {
    std::string compile_cmd;
    std::string launch_cmd;
    std::string test_cmd;
    /// Regex with capture groups (path, line, severity, message).
    std::string diag_pattern = R"(^([^:]+):(\d+):(error|warning):(.*)$)";
    int timeout_seconds = 60;

    static CommandConfig load_file(const std::string& path);
};

struct CommandResult {
    int exit_code = 0;
    bool timed_out = false;
    std::string output;
};

/// Runs `command` under /bin/sh in `workdir` with a hard timeout.
CommandResult run_command(const std::string& command, const std::string& workdir,
                          int timeout_seconds);

/// Shells out to the configured commands inside a workspace directory and
/// parses diagnostics with the configured line pattern. Unparseable lines
/// are preserved as message-only warnings. Test output is matched against
/// `PASS <case-id>` / `FAIL <case-id> [actual...]` lines.
class CommandToolchain : public Toolchain {
public:
    CommandToolchain(CommandConfig config, std::string workdir)
        : config_(std::move(config)), workdir_(std::move(workdir)) {}

    model::CompilationLog compile_unit(const model::SourceUnit& unit,
                                       const std::vector<model::SourceUnit>& compiled,
                                       int ordinal) override;
    model::CompilationLog compile_all(const std::vector<model::SourceUnit>& units,
                                      int ordinal) override;
    LaunchOutcome launch_check(const std::vector<model::SourceUnit>& units) override;
    RawResults run_tests(const std::vector<model::TestCase>& cases,
                         const std::vector<model::SourceUnit>& units) override;

private:
    model::CompilationLog run_compile(const std::string& command, const std::string& scope,
                                      int ordinal);

    CommandConfig config_;
    std::string workdir_;
};

}  // namespace appforge::toolchain
