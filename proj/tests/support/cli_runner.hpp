#pragma once

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <fstream>
#include <string>

namespace qlex::test {

struct CliResult {
    int exit_code;
    std::string output;  // stdout only
};

// Runs the built CLI with the given argument string, stderr discarded.
inline CliResult run_cli(const std::string& args) {
    const std::string cmd = std::string(QLEX_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return {-1, {}};
    std::string out;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0) out.append(buf, got);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

// Writes content to a per-process temp file and returns its path.
inline std::string write_temp(const std::string& stem, const std::string& content) {
    const std::string path = "/tmp/qlex_" + std::to_string(getpid()) + "_" + stem;
    std::ofstream f(path);
    f << content;
    return path;
}

}  // namespace qlex::test
