#include <string>
#include <vector>

#include "antvessel/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return antvessel::cli::run(args);
}
