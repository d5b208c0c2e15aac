#include <iostream>

#include "reachck/front.hpp"

int main(int argc, char** argv) { return reachck::run_cli(argc, argv, std::cout, std::cerr); }
