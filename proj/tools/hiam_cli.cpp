/// @file hiam_cli.cpp
/// @brief Executable entry point for the hiam command-line tool.

#include <hiam/cli.hpp>

int main(int argc, char** argv) { return hiam::run_cli(argc, argv); }
