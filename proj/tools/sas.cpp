#include "sas/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return sas::run_cli(argc, argv, std::cout, std::cerr);
}
