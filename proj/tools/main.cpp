#include "edgereconf/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return edgereconf::run_cli(argc, argv, std::cout, std::cerr);
}
