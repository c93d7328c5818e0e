#include <ensbox/cli.hpp>

#include <iostream>

int main(int argc, char** argv) { return ensbox::cli::run(argc, argv, std::cout, std::cerr); }
