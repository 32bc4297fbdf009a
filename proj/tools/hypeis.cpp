#include <iostream>

#include "hypeis/cli.hpp"

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return hypeis::run_cli(args, std::cout, std::cerr);
}
