#include <iostream>

#include "pgw_app/cli.hpp"

int main(int argc, char** argv) { return pgw::app::run_cli(argc, argv, std::cout, std::cerr); }
