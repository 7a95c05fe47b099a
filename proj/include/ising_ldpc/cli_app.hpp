#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace CLI {
class App;
}

namespace ildpc {

// Runs one command line (without argv[0]). Returns the process exit code:
// 0 success, 2 usage/parse, 3 I/O, 4 internal invariant violation. Decode
// failure is data, not an error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Parser surface for reflection-style tests: every option of every
// subcommand must carry a description and appear in --help.
struct CliSurface {
  struct Option {
    std::string subcommand;
    std::string name;
    std::string description;
  };
  std::vector<Option> options;
};

CliSurface cli_surface();

}  // namespace ildpc
