#ifndef NCRW_TOOLS_APP_HPP
#define NCRW_TOOLS_APP_HPP

#include <ostream>

namespace ncrw::cli {

/// Parse argv and run one subcommand. Returns 0 on success, 1 when a
/// numerical routine fails to converge (or selftest fails), 2 on usage errors.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ncrw::cli

#endif  // NCRW_TOOLS_APP_HPP
