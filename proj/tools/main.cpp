#include <string>
#include <vector>

#include "adbn/cli.hpp"

int main(int argc, char** argv) {
    return adbn::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}
