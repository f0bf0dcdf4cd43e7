#include <iostream>

#include "lancaster/cli.hpp"

int main(int argc, char** argv) {
    return lancaster::cli::run(argc, argv, std::cout, std::cerr);
}
