#include <iostream>
#include <string>
#include <vector>

#include "qmeas/cli.hpp"

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv + 1, argv + argc);
    return qmeas::run_cli(args, std::cout, std::cerr);
}
