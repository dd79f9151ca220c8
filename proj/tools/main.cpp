#include <iostream>

#include "pixcrypt/cli.hpp"

int main(int argc, char** argv) { return pixcrypt::cli::run(argc, argv, std::cout, std::cerr); }
