#include <iostream>

#include "kgsim/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return kg::cli::run(args, std::cout, std::cerr);
}
