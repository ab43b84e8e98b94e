#include <iostream>
#include <vector>

#include "wulffmc/cli.hpp"

int main(int argc, char** argv) {
    return wulffmc::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
