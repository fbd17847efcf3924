#include <iostream>
#include <string>
#include <vector>

#include "corrgeo/cli.hpp"

int main(int argc, char** argv)
{
    const std::vector<std::string> args(argv + 1, argv + argc);
    const corrgeo::cli::RunResult r = corrgeo::cli::run(args);
    std::cout << r.output;
    if (!r.diagnostic.empty()) std::cerr << r.diagnostic << '\n';
    return r.exit_code;
}
