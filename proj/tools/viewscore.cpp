#include <string>
#include <vector>

#include "viewscore/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return viewscore::cli::run_command(args);
}
