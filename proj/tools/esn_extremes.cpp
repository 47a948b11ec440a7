#include <iostream>

#include "cli/commands.hpp"

int main(int argc, char** argv) {
    std::ios::sync_with_stdio(false);
    return esn::cli::main_entry(argc, argv, std::cout, std::cerr);
}
