#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qshape {

// Runs one CLI invocation; args excludes the program name. Writes the
// result document (or error document) to out. Returns the process exit
// code: 0 success, 1 domain error, 2 usage error (message on err).
int cli_dispatch(const std::vector<std::string>& args, std::ostream& out,
                 std::ostream& err);

} // namespace qshape
