#include <string>
#include <vector>

#include "swb/cli/commands.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return swb::cli::run(std::move(args));
}
