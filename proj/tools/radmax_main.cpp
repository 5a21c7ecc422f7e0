#include <iostream>

#include "radmax/cli_app.hpp"

int main(int argc, char** argv) {
  return radmax::cli::run(argc, argv, std::cout, std::cerr);
}
