#include <iostream>

#include "app.hpp"

int main(int argc, char** argv) { return ncrw::cli::run(argc, argv, std::cout, std::cerr); }
