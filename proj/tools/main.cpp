#include <iostream>

#include "lame/app/cli.hpp"

int main(int argc, char** argv) { return lame::app::run_cli(argc, argv, std::cout, std::cerr); }
