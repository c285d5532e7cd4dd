#include <iostream>

#include "mqr/harness.hpp"

int main(int argc, char** argv) {
    return mqr::dispatch(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
