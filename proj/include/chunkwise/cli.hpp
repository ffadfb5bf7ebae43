#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace chunkwise {

/// Entry point behind the `chunkwise` executable. `args` excludes the
/// program name. Returns 0 on success, 1 when a check fails or a goal is
/// not found within bounds, 2 on usage and parse errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Data files compiled into the binary, by file name (fractions.cp,
/// dagger.proof, full_addition.proof, explosion.proof). Commands that take
/// a file fall back to these when no such file exists on disk.
const std::map<std::string, std::string>& bundled_files();

}  // namespace chunkwise
