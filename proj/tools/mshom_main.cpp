#include <iostream>
#include <string>
#include <vector>

#include "mshom/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  if (!args.empty() && (args[0] == "--help" || args[0] == "-h")) {
    std::cout << "mshom " << mshom::kVersion
              << " - multiscale averaging toolkit for a diffusion-reaction system\n"
                 "usage: mshom <subcommand> <config-file>\n"
                 "subcommands:\n"
                 "  validate     check the standing assumptions of the configured instance\n"
                 "  cell         solve the periodic cell problems and write the effective tensor\n"
                 "  fine         integrate the coupled fast-slow system (first epsilon)\n"
                 "  averaged     integrate the deterministic limit equation\n"
                 "  converge     epsilon-convergence study of fine vs averaged\n"
                 "  mixing       semigroup gap decay of the fast process\n"
                 "  khasminskii  block-averaging scaling of the ergodic estimate\n"
                 "  corrector    oscillating-test-function weak-form residual\n";
    return 0;
  }
  return mshom::run_cli(args, std::cout, std::cerr);
}
