#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <regex>
#include <sstream>

#include "appforge/toolchain/toolchain.hpp"

#include "appforge/model/serialize.hpp"

namespace appforge::toolchain {

using model::CompilationLog;
using model::Diagnostic;

CommandConfig CommandConfig::load_file(const std::string& path) {
    json j = load_json_file(path);
    expect_fields(j, "toolchain config",
                  {"compile_cmd", "launch_cmd", "test_cmd"},
                  {"diag_pattern", "timeout_seconds"});
    CommandConfig config;
    config.compile_cmd = require_string(j, "toolchain config", "compile_cmd");
    config.launch_cmd = require_string(j, "toolchain config", "launch_cmd");
    config.test_cmd = require_string(j, "toolchain config", "test_cmd");
    if (j.contains("diag_pattern")) {
        config.diag_pattern = j.at("diag_pattern").get<std::string>();
    }
    if (j.contains("timeout_seconds")) {
        config.timeout_seconds = j.at("timeout_seconds").get<int>();
    }
    return config;
}

CommandResult run_command(const std::string& command, const std::string& workdir,
                          int timeout_seconds) {
    int pipe_fds[2];
    if (pipe(pipe_fds) != 0) {
        throw ToolchainUnavailableError("pipe failed: " + std::string(strerror(errno)));
    }

    pid_t pid = fork();
    if (pid < 0) {
        close(pipe_fds[0]);
        close(pipe_fds[1]);
        throw ToolchainUnavailableError("fork failed: " + std::string(strerror(errno)));
    }
    if (pid == 0) {
        close(pipe_fds[0]);
        dup2(pipe_fds[1], STDOUT_FILENO);
        dup2(pipe_fds[1], STDERR_FILENO);
        close(pipe_fds[1]);
        if (!workdir.empty() && chdir(workdir.c_str()) != 0) {
            _exit(127);
        }
        execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
        _exit(127);
    }

    close(pipe_fds[1]);
    fcntl(pipe_fds[0], F_SETFL, O_NONBLOCK);

    CommandResult result;
    std::string output;
    const int deadline_ms = timeout_seconds * 1000;
    int elapsed_ms = 0;
    bool exited = false;
    int status = 0;

    while (true) {
        struct pollfd pfd{pipe_fds[0], POLLIN, 0};
        int ready = poll(&pfd, 1, 50);
        if (ready > 0) {
            char buffer[4096];
            ssize_t n;
            while ((n = read(pipe_fds[0], buffer, sizeof(buffer))) > 0) {
                output.append(buffer, static_cast<size_t>(n));
            }
            if (n == 0) {  // writer closed
                waitpid(pid, &status, 0);
                exited = true;
                break;
            }
        }
        pid_t done = waitpid(pid, &status, WNOHANG);
        if (done == pid) {
            char buffer[4096];
            ssize_t n;
            while ((n = read(pipe_fds[0], buffer, sizeof(buffer))) > 0) {
                output.append(buffer, static_cast<size_t>(n));
            }
            exited = true;
            break;
        }
        elapsed_ms += 50;
        if (elapsed_ms >= deadline_ms) {
            kill(pid, SIGKILL);
            waitpid(pid, &status, 0);
            result.timed_out = true;
            break;
        }
    }
    close(pipe_fds[0]);

    result.output = std::move(output);
    if (exited && WIFEXITED(status)) {
        result.exit_code = WEXITSTATUS(status);
    } else if (!result.timed_out) {
        result.exit_code = -1;
    }
    return result;
}

CompilationLog CommandToolchain::run_compile(const std::string& command,
                                             const std::string& scope, int ordinal) {
    CommandResult result = run_command(command, workdir_, config_.timeout_seconds);
    if (result.timed_out) {
        throw ToolchainUnavailableError("command timed out: " + command);
    }
    if (result.exit_code == 126 || result.exit_code == 127) {
        throw ToolchainUnavailableError("command not found or not runnable: " + command);
    }

    std::regex pattern(config_.diag_pattern);
    std::vector<Diagnostic> diagnostics;
    std::istringstream lines(result.output);
    std::string line;
    while (std::getline(lines, line)) {
        if (line.empty()) {
            continue;
        }
        std::smatch m;
        Diagnostic d;
        if (std::regex_match(line, m, pattern) && m.size() >= 5) {
            d.path = m[1].str();
            d.line = std::atoi(m[2].str().c_str());
            d.severity = m[3].str() == "error" ? model::DiagSeverity::Error
                                               : model::DiagSeverity::Warning;
            d.error_type = m[3].str();
            d.message = m[4].str();
        } else {
            // Preserved as a message-only diagnostic.
            d.severity = model::DiagSeverity::Warning;
            d.error_type = "unparsed";
            d.path = "";
            d.line = 0;
            d.message = line;
        }
        diagnostics.push_back(std::move(d));
    }

    bool has_error = std::any_of(diagnostics.begin(), diagnostics.end(), [](const Diagnostic& d) {
        return d.severity == model::DiagSeverity::Error;
    });
    if (result.exit_code != 0 && !has_error) {
        Diagnostic d;
        d.severity = model::DiagSeverity::Error;
        d.error_type = "exit-status";
        d.path = "";
        d.line = 0;
        d.message = "command exited with status " + std::to_string(result.exit_code);
        diagnostics.push_back(std::move(d));
    }

    CompilationLog log;
    log.scope = scope;
    log.diagnostics = std::move(diagnostics);
    log.outcome = log.has_errors() ? model::BuildOutcome::Failure : model::BuildOutcome::Success;
    log.ordinal = ordinal;
    return log;
}

namespace {

std::string substitute(std::string templ, const std::string& key, const std::string& value) {
    std::string token = "{" + key + "}";
    size_t pos;
    while ((pos = templ.find(token)) != std::string::npos) {
        templ.replace(pos, token.size(), value);
    }
    return templ;
}

}  // namespace

CompilationLog CommandToolchain::compile_unit(const model::SourceUnit& unit,
                                              const std::vector<model::SourceUnit>&,
                                              int ordinal) {
    return run_compile(substitute(config_.compile_cmd, "path", unit.path), unit.path, ordinal);
}

CompilationLog CommandToolchain::compile_all(const std::vector<model::SourceUnit>&,
                                             int ordinal) {
    return run_compile(substitute(config_.compile_cmd, "path", "."), "integration", ordinal);
}

LaunchOutcome CommandToolchain::launch_check(const std::vector<model::SourceUnit>&) {
    CommandResult result = run_command(config_.launch_cmd, workdir_, config_.timeout_seconds);
    if (result.timed_out) {
        throw ToolchainUnavailableError("launch command timed out: " + config_.launch_cmd);
    }
    if (result.exit_code == 126 || result.exit_code == 127) {
        throw ToolchainUnavailableError("launch command not found: " + config_.launch_cmd);
    }
    LaunchOutcome outcome;
    outcome.ok = result.exit_code == 0;
    if (!outcome.ok) {
        std::istringstream lines(result.output);
        std::string first;
        std::getline(lines, first);
        outcome.detail = first.empty() ? "exit status " + std::to_string(result.exit_code)
                                       : first;
    }
    return outcome;
}

RawResults CommandToolchain::run_tests(const std::vector<model::TestCase>& cases,
                                       const std::vector<model::SourceUnit>&) {
    CommandResult result = run_command(config_.test_cmd, workdir_, config_.timeout_seconds);
    if (result.timed_out) {
        throw ToolchainUnavailableError("test command timed out: " + config_.test_cmd);
    }
    if (result.exit_code == 126 || result.exit_code == 127) {
        throw ToolchainUnavailableError("test command not found: " + config_.test_cmd);
    }

    std::map<std::string, RawCaseResult> parsed;
    std::istringstream lines(result.output);
    std::string line;
    while (std::getline(lines, line)) {
        std::istringstream fields(line);
        std::string verdict, case_id;
        fields >> verdict >> case_id;
        if (case_id.empty() || (verdict != "PASS" && verdict != "FAIL")) {
            continue;
        }
        RawCaseResult r;
        r.passed = verdict == "PASS";
        std::string rest;
        std::getline(fields, rest);
        if (!rest.empty() && rest.front() == ' ') {
            rest.erase(rest.begin());
        }
        r.actual = rest;
        parsed[case_id] = std::move(r);
    }

    RawResults results;
    for (const auto& test_case : cases) {
        auto it = parsed.find(test_case.id);
        if (it != parsed.end()) {
            results[test_case.id] = it->second;
        } else {
            RawCaseResult fallback;
            fallback.passed = result.exit_code == 0;
            fallback.actual = fallback.passed ? json(model::to_json(test_case.oracle))
                                              : json("no result reported");
            results[test_case.id] = std::move(fallback);
        }
    }
    return results;
}

}  // namespace appforge::toolchain
