#include <iostream>
#include <vector>

#include "probound/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return probound::cli::run(args, std::cout, std::cerr);
}
