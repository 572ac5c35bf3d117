// mwassoc: command-line front end. See README.md for the config keys.
#include "cli/commands.hpp"

#include <iostream>

int main(int argc, char** argv) { return mwassoc::cli::run(argc, argv, std::cout, std::cerr); }
