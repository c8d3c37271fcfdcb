#include <iostream>

#include "monospde_cli/runner.hpp"

int main(int argc, char** argv) {
    return monospde::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
