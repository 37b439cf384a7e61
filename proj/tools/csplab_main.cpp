#include <iostream>

#include "csplab/cli.hpp"

int main(int argc, char** argv) {
    return csplab::cli::main_entry(argc, argv, std::cout, std::cerr);
}
