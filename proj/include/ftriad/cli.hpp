#ifndef FTRIAD_CLI_HPP
#define FTRIAD_CLI_HPP

namespace ftriad {

// Runs one CLI invocation (argv[0] is the program name) writing results to
// stdout.  Returns the process exit code: 0 on success, 1 on domain errors
// (machine-readable JSON on stdout), 2 on usage errors (JSON + help on
// stderr).
int run_cli(int argc, const char* const* argv);

}  // namespace ftriad

#endif  // FTRIAD_CLI_HPP
