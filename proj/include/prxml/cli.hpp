#pragma once

namespace prxml {

// Entry point of the prxml command-line tool. Returns the process exit code:
// 0 for success (and "yes" answers), 1 for "no" answers and failed checks,
// 2 for usage or input errors.
int run_cli(int argc, char** argv);

}  // namespace prxml
