#include <string>
#include <vector>

#include "alleezone/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return alleezone::cli::run(args);
}
