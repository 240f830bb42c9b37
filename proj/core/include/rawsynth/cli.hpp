#ifndef RAWSYNTH_CLI_HPP
#define RAWSYNTH_CLI_HPP

#include <string>
#include <vector>

namespace rawsynth::cli {

/// Dispatches a full command line (without argv[0]). Returns the process
/// exit status: 0 success, 1 runtime error, 2 configuration/usage error.
/// Every command records a manifest next to its outputs; manifests carry no
/// output paths or timestamps, so reruns are byte-comparable.
int run(const std::vector<std::string>& args);

extern const char* kVersion;

}  // namespace rawsynth::cli

#endif  // RAWSYNTH_CLI_HPP
