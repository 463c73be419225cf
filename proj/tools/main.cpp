#include <iostream>
#include <string>
#include <vector>

#include "mixloci/cli.hpp"

int main(int argc, char** argv)
{
    const std::vector<std::string> args(argv, argv + argc);
    return mixloci::cli::run(args, std::cout, std::cerr);
}
