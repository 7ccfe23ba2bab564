#include <iostream>

#include "qosc/cli.hpp"

int main(int argc, char** argv) {
    return qosc::pricer_main(argc, argv, std::cout, std::cerr);
}
