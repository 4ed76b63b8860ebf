#include <string>
#include <vector>

#include "fbmg/cli.hpp"

int main(int argc, char** argv) { return fbmg::cli::run(std::vector<std::string>(argv, argv + argc)); }
