#include <iostream>

#include "robin/cli.hpp"

int main(int argc, char** argv) { return robin::cli::dispatch(argc, argv, std::cout, std::cerr); }
